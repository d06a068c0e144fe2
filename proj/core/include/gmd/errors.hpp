#pragma once

#include <stdexcept>
#include <string>

namespace gmd {

// Bad caller input: shapes, ranges, malformed files, schema violations.
// The CLI maps this to exit code 2.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Well-formed input on which the numerics cannot proceed: non-PD matrices,
// condition numbers past the rejection threshold, divergent integrals,
// optimizer breakdown. The CLI maps this to exit code 3.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gmd
