#pragma once

#include <stdexcept>
#include <string>

namespace gridcover {

/// Parameter outside its documented domain (d < 1, epsilon <= 0, ...).
class invalid_params : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Cell count k^d exceeds the 2^63 budget of checked 64-bit arithmetic.
/// Closed-form bounds can still be discussed in log space (d*ln k);
/// simulation is refused.
class overflow_error : public std::range_error {
  public:
    using std::range_error::range_error;
};

/// Requested discretization is coarser than the target function demands.
class lipschitz_mismatch : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Target function returned NaN or infinity during certification.
class evaluation_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Report destination could not be written.
class io_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace gridcover
