// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace hyvar {

/// Malformed or inconsistent user input (unsorted times, bad parameters, parse failures).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A time or index outside the admissible range.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A requested time is not among the sampled times of a path. Paths are never interpolated.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A precondition on the mathematical setting is violated (e.g. a limit formula that needs rho == 0).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hyvar
