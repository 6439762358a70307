#pragma once

#include <stdexcept>
#include <string>

namespace ifbf {

// Incompatible dimensions in a vector or operator expression.
class dimension_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// NaN/Inf where the algebra admits only finite values.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated parameter condition (inertia caps, margin, step interval).
class parameter_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Schedule violation detected mid-run; carries the offending iteration index.
class schedule_error : public parameter_error {
 public:
  schedule_error(long index, const std::string& what)
      : parameter_error(what), index_(index) {}

  long index() const noexcept { return index_; }

 private:
  long index_;
};

// Malformed or inconsistent run configuration.
class config_error : public parameter_error {
 public:
  using parameter_error::parameter_error;
};

}  // namespace ifbf
