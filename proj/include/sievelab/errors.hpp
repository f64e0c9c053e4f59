#pragma once

#include <stdexcept>
#include <string>

namespace sievelab {

// Precondition on a mathematical argument was violated (k out of range,
// x outside the covered intervals, Maier window too wide, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A configured budget (window length, term cap, table size) or 64-bit range
// would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sievelab
