#pragma once

#include <stdexcept>
#include <string>

namespace algbundle {

// Malformed or mis-shaped input: wrong dimensions, non-finite entries,
// out-of-domain base points, unparseable documents.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Well-formed input that violates an operation's mathematical precondition,
// e.g. a non-associative tensor handed to z2_dimension.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace algbundle
