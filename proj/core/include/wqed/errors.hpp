// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wqed {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A system configuration violates one or more invariants. All violations
/// are collected so the caller can report them together.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

/// Base for failures of a numerical algorithm (as opposed to bad input).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class BlockStructureError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Eigenvector pairs with vanishing left/right overlap (exceptional point vicinity).
class NearDefectiveError : public NumericalError {
 public:
  NearDefectiveError(const std::string& what, double min_overlap)
      : NumericalError(what), min_overlap_(min_overlap) {}
  double min_overlap() const noexcept { return min_overlap_; }

 private:
  double min_overlap_;
};

class DegenerateSteadyStateError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StepSizeUnderflowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DivisionUnderflowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularResolventError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace wqed
