#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qbat {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A value that must be finite came out as NaN or Inf.
class NumericError : public Error {
 public:
  using Error::Error;
};

class HermiticityError : public Error {
 public:
  HermiticityError(const std::string& what, double defect) : Error(what), defect_(defect) {}
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

/// Jacobi sweeps exhausted before the off-diagonal mass dropped below threshold.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual, int sweeps)
      : Error(what), residual_(residual), sweeps_(sweeps) {}
  double residual() const noexcept { return residual_; }
  int sweeps() const noexcept { return sweeps_; }

 private:
  double residual_;
  int sweeps_;
};

/// Spectral function applied to an eigenvalue outside its domain.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, double eigenvalue) : Error(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

/// Matrix is not a valid density matrix (trace or positivity breach).
class StateError : public Error {
 public:
  using Error::Error;
};

class RankDeficientError : public Error {
 public:
  RankDeficientError(const std::string& what, double smallest)
      : Error(what), smallest_(smallest) {}
  double smallest_eigenvalue() const noexcept { return smallest_; }

 private:
  double smallest_;
};

/// Two evaluations of the same quantity disagree beyond tolerance.
class ConsistencyError : public Error {
 public:
  ConsistencyError(const std::string& what, double lhs, double rhs)
      : Error(what), lhs_(lhs), rhs_(rhs) {}
  double lhs() const noexcept { return lhs_; }
  double rhs() const noexcept { return rhs_; }

 private:
  double lhs_;
  double rhs_;
};

class ScenarioError : public Error {
 public:
  using Error::Error;
};

/// Configuration schema violation; `path()` is a JSON path such as `channels[0].rate`.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace qbat
