#pragma once

#include <stdexcept>
#include <string>

namespace parablock {

/// Base for every error raised by the library. The category maps onto the
/// CLI exit codes.
class Error : public std::runtime_error {
 public:
  enum class Category { Invalid, Config, Solver, Convergence };

  Error(Category category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  Category category() const noexcept { return category_; }

 private:
  Category category_;
};

/// Bad dimensions, mismatched spaces, out-of-range indices.
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(Category::Invalid, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(Category::Config, what) {}
};

/// Linear solve or integrator failure.
class SolverError : public Error {
 public:
  explicit SolverError(const std::string& what) : Error(Category::Solver, what) {}
};

/// The Liouvillian kernel is not one-dimensional, or the solve residual is too
/// large to trust.
class DegenerateSteadyState : public SolverError {
 public:
  DegenerateSteadyState(const std::string& what, double residual)
      : SolverError(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// g2 requested for a state with zero occupation.
class UndefinedCorrelation : public Error {
 public:
  explicit UndefinedCorrelation(const std::string& what) : Error(Category::Invalid, what) {}
};

class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what) : Error(Category::Convergence, what) {}
};

}  // namespace parablock
