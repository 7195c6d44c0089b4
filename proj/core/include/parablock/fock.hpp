#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace parablock {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Truncated product space of bosonic modes.
///
/// Basis states |n_0 n_1 ...> are ordered lexicographically with mode 0
/// varying slowest, i.e. the Kronecker order A_0 (x) A_1 (x) ...
class FockSpace {
 public:
  /// `mode_dims[k]` is n_max + 1 for mode k; each must be >= 2.
  explicit FockSpace(std::vector<int> mode_dims);

  static FockSpace single(int dim) { return FockSpace({dim}); }

  int mode_count() const noexcept { return static_cast<int>(dims_.size()); }
  int mode_dim(int mode) const;
  int total_dim() const noexcept { return total_; }
  std::span<const int> mode_dims() const noexcept { return dims_; }

  /// Flat basis index of an occupation pattern.
  int index(std::span<const int> occupations) const;
  std::vector<int> occupations(int index) const;

  bool operator==(const FockSpace&) const = default;

 private:
  std::vector<int> dims_;
  int total_ = 1;
};

/// Linear operator on a FockSpace. Storage is dense.
class Operator {
 public:
  Operator(FockSpace space, Matrix matrix);

  static Operator zero(const FockSpace& space);
  static Operator identity(const FockSpace& space);

  const FockSpace& space() const noexcept { return space_; }
  const Matrix& matrix() const noexcept { return matrix_; }
  Complex operator()(int row, int col) const { return matrix_(row, col); }

  Operator dagger() const;
  bool is_hermitian(double tol) const;
  /// Max elementwise |X - X^dagger|.
  double hermiticity_error() const;

  Operator& operator+=(const Operator& rhs);
  Operator& operator-=(const Operator& rhs);
  Operator& operator*=(Complex s);

  friend Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
  friend Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }
  friend Operator operator*(Operator op, Complex s) { return op *= s; }
  friend Operator operator*(Complex s, Operator op) { return op *= s; }
  friend Operator operator*(const Operator& lhs, const Operator& rhs);

 private:
  FockSpace space_;
  Matrix matrix_;
};

/// Single-mode ladder operator: M[n-1, n] = sqrt(n).
Operator annihilation(int dim);
Operator creation(int dim);
Operator number(int dim);

/// I (x) ... (x) op (x) ... (x) I with `op` at `mode`.
Operator embed(const Operator& op, int mode, const FockSpace& space);

/// Commutator [a, b].
Operator commutator(const Operator& a, const Operator& b);

/// Density matrix; invariants are checked by validate(), not on construction,
/// since solver intermediates may violate them transiently.
class DensityMatrix {
 public:
  DensityMatrix(FockSpace space, Matrix matrix);

  /// |n...><n...| for the given occupations.
  static DensityMatrix fock_state(const FockSpace& space, std::span<const int> occupations);
  static DensityMatrix vacuum(const FockSpace& space);
  /// |psi><psi| / <psi|psi>.
  static DensityMatrix pure(const FockSpace& space, const Vector& psi);

  const FockSpace& space() const noexcept { return space_; }
  const Matrix& matrix() const noexcept { return matrix_; }
  Complex operator()(int row, int col) const { return matrix_(row, col); }

  Complex trace() const { return matrix_.trace(); }
  double hermiticity_error() const;
  double min_eigenvalue() const;

  /// Throws InvalidArgument naming the first violated invariant.
  void validate(double herm_tol, double trace_tol, double min_eig) const;

 private:
  FockSpace space_;
  Matrix matrix_;
};

/// Tr(op * rho).
Complex expectation(const DensityMatrix& rho, const Operator& op);

/// Coherent state amplitudes sum_n e^{-|z|^2/2} z^n / sqrt(n!) truncated to
/// `dim` levels and renormalized.
Vector coherent_amplitudes(int dim, Complex z);

}  // namespace parablock
