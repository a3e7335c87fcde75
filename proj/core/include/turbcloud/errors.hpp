/// @file errors.hpp
/// @brief Error taxonomy shared by every module; the CLI maps categories
///        to process exit codes.
#pragma once

#include <stdexcept>
#include <string>

namespace turbcloud {

enum class ErrorCategory {
  config,            // bad key, type mismatch, missing required key
  invalid_parameter, // precondition violated on a numeric argument
  invalid_input,     // malformed data passed to an operation
  normalization,     // spectrum energy budget inconsistent with Eq. targets
  unsupported,       // dimension or configuration outside the operation's scope
  size,              // input exceeds a documented hard cap
  coupling_order,    // fictive step requested without a matching noise draw
  stability,         // CFL or step-size limit violated
  positivity,        // a density went negative beyond roundoff
  fit_failure,       // optimizer could not bracket / converge
  insufficient_data, // too few samples or too short a trajectory
};

class Error : public std::runtime_error {
public:
  Error(ErrorCategory cat, const std::string& msg)
      : std::runtime_error(msg), category_(cat) {}
  ErrorCategory category() const { return category_; }

private:
  ErrorCategory category_;
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& msg) : Error(ErrorCategory::config, msg) {}
};

class InvalidParameter : public Error {
public:
  explicit InvalidParameter(const std::string& msg)
      : Error(ErrorCategory::invalid_parameter, msg) {}
};

class InvalidInput : public Error {
public:
  explicit InvalidInput(const std::string& msg)
      : Error(ErrorCategory::invalid_input, msg) {}
};

/// Raised when a requested cumulative-energy target exceeds the total
/// spectral energy; carries both numbers so the caller can see how far
/// off the (u0, epsilon, eta) choice is.
class SpectrumNormalizationError : public Error {
public:
  SpectrumNormalizationError(double total_energy, double target,
                             const std::string& msg)
      : Error(ErrorCategory::normalization, msg),
        total_energy_(total_energy), target_(target) {}
  double total_energy() const { return total_energy_; }
  double target() const { return target_; }

private:
  double total_energy_;
  double target_;
};

class UnsupportedDimension : public Error {
public:
  explicit UnsupportedDimension(const std::string& msg)
      : Error(ErrorCategory::unsupported, msg) {}
};

class UnsupportedConfiguration : public Error {
public:
  explicit UnsupportedConfiguration(const std::string& msg)
      : Error(ErrorCategory::unsupported, msg) {}
};

class SizeError : public Error {
public:
  explicit SizeError(const std::string& msg) : Error(ErrorCategory::size, msg) {}
};

class CouplingOrderError : public Error {
public:
  explicit CouplingOrderError(const std::string& msg)
      : Error(ErrorCategory::coupling_order, msg) {}
};

/// Carries the largest stable step so the caller can retry.
class StabilityError : public Error {
public:
  StabilityError(double admissible_dt, const std::string& msg)
      : Error(ErrorCategory::stability, msg), admissible_dt_(admissible_dt) {}
  double admissible_dt() const { return admissible_dt_; }

private:
  double admissible_dt_;
};

class PositivityError : public Error {
public:
  explicit PositivityError(const std::string& msg)
      : Error(ErrorCategory::positivity, msg) {}
};

class FitFailure : public Error {
public:
  explicit FitFailure(const std::string& msg)
      : Error(ErrorCategory::fit_failure, msg) {}
};

class InsufficientData : public Error {
public:
  explicit InsufficientData(const std::string& msg)
      : Error(ErrorCategory::insufficient_data, msg) {}
};

} // namespace turbcloud
