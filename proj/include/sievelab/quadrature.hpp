#pragma once

// Adaptive 7/15-point Gauss-Kronrod quadrature, generic over the scalar type so
// the same rule runs in double for bulk work and in an extended-precision type
// (long double, boost::multiprecision) when absolute accuracy matters.

#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <type_traits>

namespace sievelab {

template <class Real>
Real real_constant(const char* digits) {
  if constexpr (std::is_floating_point_v<Real>) {
    return static_cast<Real>(std::strtold(digits, nullptr));
  } else {
    return Real(digits);
  }
}

template <class Real>
struct QuadratureOptions {
  Real abs_tol = Real(0);
  Real rel_tol = Real(64) * std::numeric_limits<Real>::epsilon();
  int max_depth = 48;
};

template <class Real>
struct QuadratureResult {
  Real value = Real(0);
  Real error = Real(0);  // sum of |K15 - G7| over accepted panels
  long evaluations = 0;
};

namespace detail {

template <class Real>
struct KronrodRule {
  std::array<Real, 8> nodes;
  std::array<Real, 8> kronrod_weights;
  std::array<Real, 4> gauss_weights;  // for nodes[1], nodes[3], nodes[5], nodes[7]

  static const KronrodRule& get() {
    static const KronrodRule rule{
        {real_constant<Real>("0.991455371120812639206854697526329"),
         real_constant<Real>("0.949107912342758524526189684047851"),
         real_constant<Real>("0.864864423359769072789712788640926"),
         real_constant<Real>("0.741531185599394439863864773280788"),
         real_constant<Real>("0.586087235467691130294144845693013"),
         real_constant<Real>("0.405845151377397166906606412076961"),
         real_constant<Real>("0.207784955007898467600689403773245"), Real(0)},
        {real_constant<Real>("0.022935322010529224963732008058970"),
         real_constant<Real>("0.063092092629978553290700663189204"),
         real_constant<Real>("0.104790010322250183839876322541518"),
         real_constant<Real>("0.140653259715525918745189590510238"),
         real_constant<Real>("0.169004726639267902826583426598550"),
         real_constant<Real>("0.190350578064785409913256402421014"),
         real_constant<Real>("0.204432940075298892414161999234649"),
         real_constant<Real>("0.209482141084727828012999174891714")},
        {real_constant<Real>("0.129484966168869693270611432679082"),
         real_constant<Real>("0.279705391489276667901467771423780"),
         real_constant<Real>("0.381830050505118944950369775488975"),
         real_constant<Real>("0.417959183673469387755102040816327")}};
    return rule;
  }
};

template <class Real, class F>
void gk15_panel(F& f, Real a, Real b, Real& kronrod, Real& gauss) {
  const auto& rule = KronrodRule<Real>::get();
  const Real center = (a + b) / 2;
  const Real half = (b - a) / 2;
  const Real fc = f(center);
  kronrod = rule.kronrod_weights[7] * fc;
  gauss = rule.gauss_weights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const Real dx = half * rule.nodes[i];
    const Real sum = f(center - dx) + f(center + dx);
    kronrod += rule.kronrod_weights[i] * sum;
    if (i % 2 == 1) gauss += rule.gauss_weights[i / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
}

template <class Real, class F>
void adapt(F& f, Real a, Real b, Real whole, Real tol, int depth, int max_depth,
           QuadratureResult<Real>& out) {
  using std::abs;
  const Real mid = (a + b) / 2;
  Real kl, gl, kr, gr;
  gk15_panel(f, a, mid, kl, gl);
  gk15_panel(f, mid, b, kr, gr);
  out.evaluations += 30;
  const Real refined = kl + kr;
  const Real err = abs(kl - gl) + abs(kr - gr);
  if (err <= tol || depth >= max_depth || abs(refined - whole) == Real(0)) {
    out.value += refined;
    out.error += err;
    return;
  }
  adapt(f, a, mid, kl, tol / 2, depth + 1, max_depth, out);
  adapt(f, mid, b, kr, tol / 2, depth + 1, max_depth, out);
}

}  // namespace detail

// Integral of f over [a, b]. Panels are bisected until the Kronrod/Gauss
// difference drops below max(abs_tol, rel_tol * |estimate|).
template <class Real, class F>
QuadratureResult<Real> integrate(F&& f, Real a, Real b,
                                 const QuadratureOptions<Real>& options = {}) {
  using std::abs;
  QuadratureResult<Real> out;
  if (a == b) return out;
  Real k, g;
  detail::gk15_panel(f, a, b, k, g);
  out.evaluations = 15;
  Real tol = options.rel_tol * abs(k);
  if (options.abs_tol > tol) tol = options.abs_tol;
  if (abs(k - g) <= tol) {
    out.value = k;
    out.error = abs(k - g);
    return out;
  }
  detail::adapt(f, a, b, k, tol, 1, options.max_depth, out);
  return out;
}

}  // namespace sievelab
