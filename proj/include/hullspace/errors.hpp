#pragma once

#include <stdexcept>
#include <string>

namespace hullspace {

/// Bad dimensions, indices or parameters passed by the caller.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input point set spans less than a full-dimensional simplex.
class DegenerateInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation lost all significance (zero normal, failed pivot).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The reference centroid lies on the facet plane, so outward is undefined.
class AmbiguousOrientation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ray parity stayed degenerate after every perturbation retry.
class ClassificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hullspace
