// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace wpt {

/// Input outside the domain where a closed form is defined (e.g. path-loss
/// exponent <= 2, Lambert argument below -1/e).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A configuration object violates one of its invariants.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A threshold search ran past its cap without the condition becoming true.
class UnsatisfiableThreshold : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A channel estimate has a zero column, so no beam can be formed.
class DegenerateEstimate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Something that the mathematics says cannot happen did happen.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace wpt
