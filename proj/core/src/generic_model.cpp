#include "parablock/generic_model.hpp"

#include <cmath>

#include "parablock/dynamics.hpp"
#include "parablock/errors.hpp"

namespace parablock::generic {

void ModelParams::validate() const {
  if (!(kappa1 > 0.0 && kappa2 > 0.0 && kappa3 > 0.0))
    throw InvalidArgument("decay rates kappa_i must be > 0");
  if (!(P1 >= 0.0) || !(F2 >= 0.0)) throw InvalidArgument("pump amplitudes must be >= 0");
  if (!std::isfinite(alpha0)) throw InvalidArgument("alpha0 must be finite");
}

double mean_field_occupation(double P1, double Delta1, double kappa1) {
  if (!(kappa1 > 0.0)) throw InvalidArgument("kappa1 must be > 0");
  return P1 * P1 / (Delta1 * Delta1 + 0.25 * kappa1 * kappa1);
}

ReducedParams reduce(const ModelParams& p) {
  p.validate();
  ReducedParams rp;
  rp.Delta1 = p.E1 - p.E_P1;
  rp.Delta2 = p.E2 - p.E_F2;
  rp.Delta3 = p.E3 + p.E_P1 - 2.0 * p.E_F2;
  rp.n1 = mean_field_occupation(p.P1, rp.Delta1, p.kappa1);
  rp.alpha = p.alpha0 * std::sqrt(rp.n1);
  rp.F2 = p.F2;
  rp.kappa2 = p.kappa2;
  rp.kappa3 = p.kappa3;
  return rp;
}

AmplitudeTrajectory mean_field_dynamics(const ModelParams& p, std::span<const double> t_grid) {
  p.validate();
  require_increasing(t_grid, "time grid");
  const double d1 = p.E1 - p.E_P1;
  const double d2 = p.E2 - p.E_F2;
  const double d3 = p.E3 + p.E_P1 - 2.0 * p.E_F2;
  const Complex i{0.0, 1.0};
  const Complex z1 = d1 - 0.5 * i * p.kappa1;
  const Complex z2 = d2 - 0.5 * i * p.kappa2;
  const Complex z3 = d3 - 0.5 * i * p.kappa3;
  const double g = p.alpha0;

  auto rhs = [&](double, const Vector& y, Vector& dy) {
    const Complex a1 = y(0), a2 = y(1), a3 = y(2);
    dy(0) = -i * (z1 * a1 + g * std::conj(a3) * a2 * a2 + p.P1);
    dy(1) = -i * (z2 * a2 + 2.0 * g * std::conj(a2) * a1 * a3 + p.F2);
    dy(2) = -i * (z3 * a3 + g * std::conj(a1) * a2 * a2);
  };

  AmplitudeTrajectory out;
  IntegratorOptions opt;
  // Amplitudes reach sqrt(n1) ~ 1e2; relative control dominates.
  opt.atol = 1e-12;
  integrate_dopri5(rhs, t_grid.front(), Vector::Zero(3), t_grid,
                   [&](double t, const Vector& y) {
                     out.times.push_back(t);
                     out.a1.push_back(y(0));
                     out.a2.push_back(y(1));
                     out.a3.push_back(y(2));
                   },
                   opt);
  return out;
}

Operator build_reduced_hamiltonian(const ReducedParams& rp, const FockSpace& space) {
  if (space.mode_count() != 2)
    throw InvalidArgument("reduced Hamiltonian needs a two-mode space (mode 2, mode 3)");
  const Operator a2 = embed(annihilation(space.mode_dim(0)), 0, space);
  const Operator a3 = embed(annihilation(space.mode_dim(1)), 1, space);
  const Operator a2d = a2.dagger();
  const Operator a3d = a3.dagger();

  Operator h = Complex{rp.Delta2} * (a2d * a2) + Complex{rp.Delta3} * (a3d * a3);
  h += Complex{rp.alpha} * (a2d * a2d * a3 + a3d * a2 * a2);
  h += Complex{rp.F2} * (a2d + a2);
  return h;
}

std::vector<DecayChannel> reduced_channels(const ReducedParams& rp, const FockSpace& space) {
  if (space.mode_count() != 2) throw InvalidArgument("reduced model needs a two-mode space");
  return {{embed(annihilation(space.mode_dim(0)), 0, space), rp.kappa2},
          {embed(annihilation(space.mode_dim(1)), 1, space), rp.kappa3}};
}

double analytic_g2(double alpha, double kappa) {
  if (!(kappa > 0.0)) throw InvalidArgument("kappa must be > 0");
  const double x2 = (alpha / kappa) * (alpha / kappa);
  return 1.0 / (1.0 + 8.0 * x2 + 16.0 * x2 * x2);
}

SteadyObservables solve_steady(const ReducedParams& rp, int dim2, int dim3) {
  const FockSpace space({dim2, dim3});
  const Liouvillian l =
      build_liouvillian(build_reduced_hamiltonian(rp, space), reduced_channels(rp, space));
  SteadyState ss = steady_state(l);
  const Operator a2 = embed(annihilation(dim2), 0, space);
  const Operator a3 = embed(annihilation(dim3), 1, space);
  const double n2 = expectation(ss.rho, a2.dagger() * a2).real();
  const double n3 = expectation(ss.rho, a3.dagger() * a3).real();
  std::optional<double> g2;
  if (n2 > 0.0) g2 = g2_equal_time(ss.rho, a2);
  return {n2, n3, g2, ss.residual, std::move(ss.rho)};
}

}  // namespace parablock::generic
