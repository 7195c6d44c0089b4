#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "parablock/integrator.hpp"
#include "parablock/lindblad.hpp"

namespace parablock {

/// Hermitian term scaled by a real time envelope, e.g. a pulsed drive
/// F(t) (a^dag + a).
struct DriveTerm {
  Operator op;
  std::function<double(double)> envelope;
};

/// H(t) = H_static + sum_k envelope_k(t) op_k.
struct TimeDependentHamiltonian {
  Operator static_part;
  std::vector<DriveTerm> drives;
};

/// L(t) = L_static + sum_k f_k(t) K_k where K_k is the commutator
/// superoperator of drive k. Immutable after construction.
class Generator {
 public:
  explicit Generator(Liouvillian constant);
  Generator(const TimeDependentHamiltonian& h, const std::vector<DecayChannel>& channels);

  const Liouvillian& static_part() const noexcept { return static_; }
  const FockSpace& space() const noexcept { return static_.space(); }
  bool time_dependent() const noexcept { return !terms_.empty(); }

  void apply(double t, const Vector& x, Vector& out) const;

 private:
  Liouvillian static_;
  std::vector<std::pair<std::function<double(double)>, SparseMatrix>> terms_;
};

/// A quantity recorded along a trajectory: <op>, or g2 = <op^dag op^dag op op> / <op^dag op>^2.
struct Observable {
  enum class Kind { Expectation, G2 };
  std::string name;
  Operator op;
  Kind kind = Kind::Expectation;
};

/// Missing entries are undefined g2 cells (zero occupation).
using Series = std::vector<std::optional<double>>;

struct TimeTrace {
  std::vector<double> times;
  std::vector<std::pair<std::string, Series>> columns;

  const Series& column(const std::string& name) const;
};

struct Evolution {
  TimeTrace trace;
  DensityMatrix final_state;
  double max_trace_drift = 0.0;
  IntegratorStats stats;
};

/// Integrates d rho / dt = L(t) rho from `rho0` at t_grid.front(), sampling the
/// observables at every grid time. The state is renormalized at sample times
/// when |Tr - 1| exceeds the drift tolerance; the largest drift seen is
/// reported.
Evolution evolve(const DensityMatrix& rho0, const Generator& generator,
                 std::span<const double> t_grid, const std::vector<Observable>& observables,
                 const IntegratorOptions& opt = {});

/// <a^dag a^dag a a> / <a^dag a>^2. Throws UndefinedCorrelation when the
/// occupation is not positive.
double g2_equal_time(const DensityMatrix& rho, const Operator& a);

/// Quantum-regression g2(tau) = Tr[a^dag a e^{L tau}(a rho a^dag)] / <a^dag a>^2.
std::vector<std::pair<double, double>> g2_two_time(const DensityMatrix& rho_ss, const Operator& a,
                                                   const Liouvillian& l,
                                                   std::span<const double> tau_grid,
                                                   const IntegratorOptions& opt = {});

/// Checks that grid values are strictly increasing; throws InvalidArgument.
void require_increasing(std::span<const double> grid, const char* what);

}  // namespace parablock
