#pragma once

#include <stdexcept>
#include <string>

namespace qlens {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Im(1/rho) <= 0: the Gaussian is not square integrable.
class NonNormalizableState : public Error {
 public:
  using Error::Error;
};

/// Grid, config or sweep description that cannot be run as given.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// A perturbative guard was violated; `ratio()` is the offending
/// dimensionless number.
class ValidityDomainError : public Error {
 public:
  ValidityDomainError(const std::string& what, double ratio)
      : Error(what), ratio_(ratio) {}
  double ratio() const noexcept { return ratio_; }

 private:
  double ratio_;
};

class PoleError : public Error {
 public:
  using Error::Error;
};

class NumericalDifferentiationError : public Error {
 public:
  using Error::Error;
};

class OscillationResolutionError : public Error {
 public:
  OscillationResolutionError(const std::string& what, double phase_step)
      : Error(what), phase_step_(phase_step) {}
  double phase_step() const noexcept { return phase_step_; }

 private:
  double phase_step_;
};

class PlanningError : public Error {
 public:
  using Error::Error;
};

class BoundaryContaminationError : public Error {
 public:
  BoundaryContaminationError(const std::string& what, double edge_mass)
      : Error(what), edge_mass_(edge_mass) {}
  double edge_mass() const noexcept { return edge_mass_; }

 private:
  double edge_mass_;
};

class NoTrajectoryError : public Error {
 public:
  using Error::Error;
};

[[noreturn]] void throw_invalid(const std::string& what);

}  // namespace qlens
