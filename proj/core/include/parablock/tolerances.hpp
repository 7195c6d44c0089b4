#pragma once

namespace parablock {

/// Numerical thresholds shared by the solvers and the test suites.
struct Tolerances {
  double hermiticity = 1e-10;     ///< max |X - X^dagger| elementwise
  double trace = 1e-9;            ///< |Tr rho - 1|
  double min_eigenvalue = -1e-8;  ///< smallest admissible eigenvalue of rho
  double steady_residual = 1e-9;  ///< ||L vec(rho_ss)||_inf
  double rtol = 1e-8;             ///< integrator relative tolerance
  double atol = 1e-10;            ///< integrator absolute tolerance
  double trace_drift = 1e-8;      ///< renormalize when |Tr - 1| exceeds this
  double convergence = 1e-4;      ///< relative change allowed between truncations
};

inline constexpr Tolerances kTolerances{};

}  // namespace parablock
