#pragma once

#include <vector>

#include <Eigen/SparseCore>

#include "parablock/fock.hpp"
#include "parablock/tolerances.hpp"

namespace parablock {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// Jump operator with its rate. Rates are angular frequencies in the same
/// units as the Hamiltonian handed to build_liouvillian (hbar = 1).
struct DecayChannel {
  Operator op;
  double rate;
};

/// Column-stacked vectorization: vec(rho)[i + j * d] = rho(i, j).
Vector vectorize(const Matrix& rho);
Matrix unvectorize(const Vector& v, int dim);

/// Row vector t with t . vec(rho) = Tr(rho).
Vector trace_functional(int dim);

/// Superoperator of rho' = -i[H, rho] + sum_k rate_k D[A_k] rho.
class Liouvillian {
 public:
  Liouvillian(FockSpace space, SparseMatrix matrix);

  const FockSpace& space() const noexcept { return space_; }
  const SparseMatrix& matrix() const noexcept { return matrix_; }
  int dim() const noexcept { return space_.total_dim(); }

  /// L(rho) as a matrix.
  Matrix apply(const Matrix& rho) const;

 private:
  FockSpace space_;
  SparseMatrix matrix_;
};

/// -i(I (x) H - H^T (x) I): the coherent part alone, for time-dependent drive
/// terms.
SparseMatrix commutator_superoperator(const Operator& h);

/// Rate-free dissipator A* (x) A - 1/2 I (x) A^dag A - 1/2 (A^dag A)^T (x) I.
SparseMatrix dissipator_superoperator(const Operator& a);

/// Throws InvalidArgument when H is not Hermitian within
/// `kTolerances.hermiticity`, when spaces differ, or when a rate is negative.
Liouvillian build_liouvillian(const Operator& hamiltonian, const std::vector<DecayChannel>& channels);

struct SteadyState {
  DensityMatrix rho;
  double residual;        ///< ||L vec(rho)||_inf before Hermitization
  bool used_fallback;     ///< inverse iteration instead of the bordered solve
};

/// Solves L vec(rho) = 0 with Tr rho = 1 by replacing the first row of L
/// with the trace functional. Falls back to shifted inverse iteration when the
/// direct solve is singular. Throws DegenerateSteadyState when the kernel is
/// not one-dimensional or the residual exceeds `tol.steady_residual`.
SteadyState steady_state(const Liouvillian& l, const Tolerances& tol = kTolerances);

}  // namespace parablock
