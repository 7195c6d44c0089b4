#include "parablock/dynamics.hpp"

#include <cmath>
#include <limits>

#include "parablock/errors.hpp"

namespace parablock {

namespace {

// Row vector r with r . vec(rho) = Tr(op rho) under column stacking.
Vector expectation_functional(const Operator& op) {
  // Tr(A rho) = sum_ij A_ji rho_ij = vec(A^T) . vec(rho)
  return vectorize(op.matrix().transpose());
}

Complex contract(const Vector& functional, const Vector& x) {
  return (functional.array() * x.array()).sum();
}

}  // namespace

void require_increasing(std::span<const double> grid, const char* what) {
  if (grid.empty()) throw InvalidArgument(std::string(what) + " is empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw InvalidArgument(std::string(what) + " must be strictly increasing");
}

const Series& TimeTrace::column(const std::string& name) const {
  for (const auto& [n, s] : columns)
    if (n == name) return s;
  throw InvalidArgument("time trace has no column '" + name + "'");
}

Generator::Generator(Liouvillian constant) : static_(std::move(constant)) {}

Generator::Generator(const TimeDependentHamiltonian& h, const std::vector<DecayChannel>& channels)
    : static_(build_liouvillian(h.static_part, channels)) {
  for (const auto& d : h.drives) {
    if (!(d.op.space() == h.static_part.space()))
      throw InvalidArgument("drive term lives on a different space");
    if (!d.op.is_hermitian(kTolerances.hermiticity))
      throw InvalidArgument("drive term is not Hermitian");
    terms_.emplace_back(d.envelope, commutator_superoperator(d.op));
  }
}

void Generator::apply(double t, const Vector& x, Vector& out) const {
  out.noalias() = static_.matrix() * x;
  for (const auto& [f, k] : terms_) {
    const double s = f(t);
    if (s != 0.0) out.noalias() += s * (k * x);
  }
}

Evolution evolve(const DensityMatrix& rho0, const Generator& generator,
                 std::span<const double> t_grid, const std::vector<Observable>& observables,
                 const IntegratorOptions& opt) {
  if (!(rho0.space() == generator.space())) throw InvalidArgument("evolve: space mismatch");
  require_increasing(t_grid, "time grid");
  const int d = rho0.space().total_dim();

  struct Probe {
    Vector first;   // <op^dag op> for G2, <op> otherwise
    Vector second;  // <op^dag op^dag op op>
    Observable::Kind kind;
  };
  std::vector<Probe> probes;
  Evolution result{{}, rho0, 0.0, {}};
  for (const auto& ob : observables) {
    if (!(ob.op.space() == rho0.space())) throw InvalidArgument("observable space mismatch");
    if (ob.kind == Observable::Kind::G2) {
      const Operator ad = ob.op.dagger();
      probes.push_back({expectation_functional(ad * ob.op),
                        expectation_functional(ad * ad * ob.op * ob.op), ob.kind});
    } else {
      probes.push_back({expectation_functional(ob.op), Vector{}, ob.kind});
    }
    result.trace.columns.emplace_back(ob.name, Series{});
  }
  const Vector tr = trace_functional(d);

  Vector state = vectorize(rho0.matrix());
  auto rhs = [&](double t, const Vector& x, Vector& dx) { generator.apply(t, x, dx); };
  auto sample = [&](double t, Vector& x) {
    const Complex trace = contract(tr, x);
    const double drift = std::abs(trace - Complex{1.0});
    result.max_trace_drift = std::max(result.max_trace_drift, drift);
    if (drift > kTolerances.trace_drift) x /= trace;
    result.trace.times.push_back(t);
    for (std::size_t k = 0; k < probes.size(); ++k) {
      auto& col = result.trace.columns[k].second;
      const double v1 = contract(probes[k].first, x).real();
      if (probes[k].kind == Observable::Kind::Expectation) {
        col.emplace_back(v1);
      } else if (v1 > 0.0) {
        col.emplace_back(contract(probes[k].second, x).real() / (v1 * v1));
      } else {
        col.emplace_back(std::nullopt);
      }
    }
    state = x;
  };
  result.stats = integrate_dopri5(rhs, t_grid.front(), vectorize(rho0.matrix()), t_grid, sample, opt);
  result.final_state = DensityMatrix(rho0.space(), unvectorize(state, d));
  return result;
}

double g2_equal_time(const DensityMatrix& rho, const Operator& a) {
  const Operator ad = a.dagger();
  const double n = expectation(rho, ad * a).real();
  if (!(n > 0.0)) throw UndefinedCorrelation("g2 undefined: mode occupation is zero");
  return expectation(rho, ad * ad * a * a).real() / (n * n);
}

std::vector<std::pair<double, double>> g2_two_time(const DensityMatrix& rho_ss, const Operator& a,
                                                   const Liouvillian& l,
                                                   std::span<const double> tau_grid,
                                                   const IntegratorOptions& opt) {
  if (!(rho_ss.space() == l.space()) || !(a.space() == l.space()))
    throw InvalidArgument("g2_two_time: space mismatch");
  require_increasing(tau_grid, "tau grid");
  if (tau_grid.front() < 0.0) throw InvalidArgument("tau grid must start at >= 0");

  const Operator ad = a.dagger();
  const double n = expectation(rho_ss, ad * a).real();
  if (!(n > 0.0)) throw UndefinedCorrelation("g2 undefined: mode occupation is zero");
  const Vector probe = expectation_functional(ad * a);

  const Matrix conditioned = a.matrix() * rho_ss.matrix() * ad.matrix();
  std::vector<std::pair<double, double>> out;
  out.reserve(tau_grid.size());
  const SparseMatrix& lm = l.matrix();
  integrate_dopri5([&](double, const Vector& x, Vector& dx) { dx.noalias() = lm * x; }, 0.0,
                   vectorize(conditioned), tau_grid,
                   [&](double tau, const Vector& x) {
                     out.emplace_back(tau, contract(probe, x).real() / (n * n));
                   },
                   opt);
  return out;
}

}  // namespace parablock
