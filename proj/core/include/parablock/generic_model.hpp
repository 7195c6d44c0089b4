#pragma once

#include <optional>
#include <span>
#include <vector>

#include "parablock/lindblad.hpp"

namespace parablock::generic {

/// Three parametrically coupled modes, all quantities in units of a reference
/// decay rate kappa (hbar = 1).
struct ModelParams {
  double E1 = 0.0, E2 = 0.0, E3 = 0.0;  ///< mode energies
  double E_P1 = 0.0;                    ///< strong pump energy (mode 1)
  double E_F2 = 0.0;                    ///< weak pump energy (mode 2)
  double alpha0 = 0.0;                  ///< bare parametric constant
  double P1 = 0.0;                      ///< strong pump amplitude
  double F2 = 0.0;                      ///< weak pump amplitude
  double kappa1 = 1.0, kappa2 = 1.0, kappa3 = 1.0;

  void validate() const;
};

/// Two-mode problem left after replacing mode 1 by its mean field.
struct ReducedParams {
  double Delta2 = 0.0;  ///< E2 - E_F2
  double Delta3 = 0.0;  ///< E3 + E_P1 - 2 E_F2
  double alpha = 0.0;   ///< alpha0 * sqrt(n1)
  double F2 = 0.0;
  double kappa2 = 1.0, kappa3 = 1.0;
  // Kept for provenance.
  double Delta1 = 0.0;  ///< E1 - E_P1
  double n1 = 0.0;
};

/// n1 = P1^2 / (Delta1^2 + (kappa1/2)^2).
double mean_field_occupation(double P1, double Delta1, double kappa1);

/// Mean-field elimination of mode 1. The constant energy shift from its
/// macroscopic occupation is dropped.
ReducedParams reduce(const ModelParams& p);

/// Classical amplitudes <a_i>(t) from factorizing the Heisenberg equations of
/// the rotating-frame Hamiltonian
///   H = sum_i D_i a_i^+ a_i + alpha0 (a2^+ a2^+ a1 a3 + h.c.) + F2 (a2^+ + a2) + P1 (a1^+ + a1)
/// with damping -kappa_i/2. i da_i/dt = dH/da_i^* - i kappa_i/2 a_i gives
///   i a1' = (D1 - i k1/2) a1 + alpha0 a3^* a2^2 + P1
///   i a2' = (D2 - i k2/2) a2 + 2 alpha0 a2^* a1 a3 + F2
///   i a3' = (D3 - i k3/2) a3 + alpha0 a1^* a2^2
struct AmplitudeTrajectory {
  std::vector<double> times;
  std::vector<Complex> a1, a2, a3;
};

/// Starts from vacuum at t_grid.front().
AmplitudeTrajectory mean_field_dynamics(const ModelParams& p, std::span<const double> t_grid);

/// H' = sum_{i=2,3} Delta_i a_i^+ a_i + alpha (a2^+ a2^+ a3 + a3^+ a2 a2) + F2 (a2^+ + a2)
/// on a two-mode space ordered (mode 2, mode 3).
Operator build_reduced_hamiltonian(const ReducedParams& rp, const FockSpace& space);

/// Decay of modes 2 and 3.
std::vector<DecayChannel> reduced_channels(const ReducedParams& rp, const FockSpace& space);

/// Weak-pump trial-wavefunction result g2(0) = 1 / (1 + 8 x^2 + 16 x^4), x = alpha / kappa.
double analytic_g2(double alpha, double kappa);

struct SteadyObservables {
  double N2 = 0.0;
  double N3 = 0.0;
  std::optional<double> g2;  ///< empty when N2 == 0
  double residual = 0.0;
  DensityMatrix rho;
};

/// Steady state of the reduced model with the given per-mode dimensions.
SteadyObservables solve_steady(const ReducedParams& rp, int dim2, int dim3);

}  // namespace parablock::generic
