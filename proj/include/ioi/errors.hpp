#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ioi {

/// Base of every error raised by the inference engines.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

/// An argument lies outside the domain of the operation (p outside (0,1),
/// non-finite input, count < 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "DomainError"; }
};

/// An object violates its structural invariants (invalid density, length
/// mismatch, non-monotone pivot, overlapping regions, ...).
class StructuralError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "StructuralError"; }
};

/// The justifying analogy for a method was not accepted, so the method may
/// not be applied.
class AnalogyRejected : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "AnalogyRejected"; }
};

/// Every posterior weight of a grid update underflowed.
class DegenerateUpdate : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "DegenerateUpdate"; }
};

/// Conditioning on a region that carries (numerically) no mass.
class EmptyRegion : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "EmptyRegion"; }
};

/// A conditional kernel vanished on a whole grid line, so the ratio of the
/// two conditionals is undefined there.
class UndefinedRatio : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "UndefinedRatio"; }
};

/// A Gibbs chain could not continue.
class ChainAborted : public Error {
 public:
  ChainAborted(const std::string& what, std::size_t iteration)
      : Error(what), iteration_(iteration) {}
  const char* kind() const noexcept override { return "ChainAborted"; }
  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

/// Malformed configuration or input file.
class ValidationError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "ValidationError"; }
};

}  // namespace ioi
