#include "parablock/fock.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "parablock/errors.hpp"

namespace parablock {

FockSpace::FockSpace(std::vector<int> mode_dims) : dims_(std::move(mode_dims)) {
  if (dims_.empty()) throw InvalidArgument("FockSpace needs at least one mode");
  for (int d : dims_) {
    if (d < 2) throw InvalidArgument("mode dimension must be >= 2, got " + std::to_string(d));
    total_ *= d;
  }
}

int FockSpace::mode_dim(int mode) const {
  if (mode < 0 || mode >= mode_count())
    throw InvalidArgument("mode index " + std::to_string(mode) + " out of range");
  return dims_[static_cast<std::size_t>(mode)];
}

int FockSpace::index(std::span<const int> occupations) const {
  if (static_cast<int>(occupations.size()) != mode_count())
    throw InvalidArgument("occupation pattern has wrong length");
  int idx = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (occupations[k] < 0 || occupations[k] >= dims_[k])
      throw InvalidArgument("occupation outside truncation");
    idx = idx * dims_[k] + occupations[k];
  }
  return idx;
}

std::vector<int> FockSpace::occupations(int index) const {
  if (index < 0 || index >= total_) throw InvalidArgument("basis index out of range");
  std::vector<int> occ(dims_.size());
  for (std::size_t k = dims_.size(); k-- > 0;) {
    occ[k] = index % dims_[k];
    index /= dims_[k];
  }
  return occ;
}

Operator::Operator(FockSpace space, Matrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
  const int n = space_.total_dim();
  if (matrix_.rows() != n || matrix_.cols() != n)
    throw InvalidArgument("operator shape does not match space dimension");
}

Operator Operator::zero(const FockSpace& space) {
  return {space, Matrix::Zero(space.total_dim(), space.total_dim())};
}

Operator Operator::identity(const FockSpace& space) {
  return {space, Matrix::Identity(space.total_dim(), space.total_dim())};
}

Operator Operator::dagger() const { return {space_, matrix_.adjoint()}; }

double Operator::hermiticity_error() const {
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
}

bool Operator::is_hermitian(double tol) const { return hermiticity_error() <= tol; }

Operator& Operator::operator+=(const Operator& rhs) {
  if (!(space_ == rhs.space_)) throw InvalidArgument("operator space mismatch");
  matrix_ += rhs.matrix_;
  return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
  if (!(space_ == rhs.space_)) throw InvalidArgument("operator space mismatch");
  matrix_ -= rhs.matrix_;
  return *this;
}

Operator& Operator::operator*=(Complex s) {
  matrix_ *= s;
  return *this;
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
  if (!(lhs.space_ == rhs.space_)) throw InvalidArgument("operator space mismatch");
  return {lhs.space_, lhs.matrix_ * rhs.matrix_};
}

Operator annihilation(int dim) {
  FockSpace space = FockSpace::single(dim);
  Matrix m = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
  return {space, m};
}

Operator creation(int dim) { return annihilation(dim).dagger(); }

Operator number(int dim) {
  FockSpace space = FockSpace::single(dim);
  Matrix m = Matrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) m(n, n) = static_cast<double>(n);
  return {space, m};
}

Operator embed(const Operator& op, int mode, const FockSpace& space) {
  const int d = space.mode_dim(mode);
  if (op.space().mode_count() != 1 || op.space().total_dim() != d)
    throw InvalidArgument("embedded operator dimension does not match mode " +
                          std::to_string(mode));
  // Slow-first ordering: left block covers modes before `mode`, right block after.
  int left = 1;
  int right = 1;
  for (int k = 0; k < mode; ++k) left *= space.mode_dim(k);
  for (int k = mode + 1; k < space.mode_count(); ++k) right *= space.mode_dim(k);

  Matrix out = Matrix::Zero(space.total_dim(), space.total_dim());
  const Matrix& m = op.matrix();
  for (int l = 0; l < left; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        if (m(i, j) == Complex{}) continue;
        for (int r = 0; r < right; ++r)
          out((l * d + i) * right + r, (l * d + j) * right + r) = m(i, j);
      }
  return {space, std::move(out)};
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

DensityMatrix::DensityMatrix(FockSpace space, Matrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
  const int n = space_.total_dim();
  if (matrix_.rows() != n || matrix_.cols() != n)
    throw InvalidArgument("density matrix shape does not match space dimension");
}

DensityMatrix DensityMatrix::fock_state(const FockSpace& space, std::span<const int> occupations) {
  Matrix m = Matrix::Zero(space.total_dim(), space.total_dim());
  const int i = space.index(occupations);
  m(i, i) = 1.0;
  return {space, std::move(m)};
}

DensityMatrix DensityMatrix::vacuum(const FockSpace& space) {
  std::vector<int> zeros(static_cast<std::size_t>(space.mode_count()), 0);
  return fock_state(space, zeros);
}

DensityMatrix DensityMatrix::pure(const FockSpace& space, const Vector& psi) {
  if (psi.size() != space.total_dim()) throw InvalidArgument("state vector has wrong length");
  const double norm2 = psi.squaredNorm();
  if (norm2 == 0.0) throw InvalidArgument("zero state vector");
  return {space, psi * psi.adjoint() / norm2};
}

double DensityMatrix::hermiticity_error() const {
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const Matrix herm = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void DensityMatrix::validate(double herm_tol, double trace_tol, double min_eig) const {
  const double herm = hermiticity_error();
  if (herm > herm_tol)
    throw InvalidArgument("density matrix not Hermitian: error " + std::to_string(herm));
  const double tr_err = std::abs(trace() - Complex{1.0});
  if (tr_err > trace_tol)
    throw InvalidArgument("density matrix trace off by " + std::to_string(tr_err));
  const double lam = min_eigenvalue();
  if (lam < min_eig)
    throw InvalidArgument("density matrix has eigenvalue " + std::to_string(lam));
}

Complex expectation(const DensityMatrix& rho, const Operator& op) {
  if (!(rho.space() == op.space())) throw InvalidArgument("expectation: space mismatch");
  // Tr(A rho) = sum_ij A_ij rho_ji
  return (op.matrix().cwiseProduct(rho.matrix().transpose())).sum();
}

Vector coherent_amplitudes(int dim, Complex z) {
  Vector psi(dim);
  Complex term = std::exp(-0.5 * std::norm(z));
  for (int n = 0; n < dim; ++n) {
    psi(n) = term;
    term *= z / std::sqrt(static_cast<double>(n + 1));
  }
  return psi / psi.norm();
}

}  // namespace parablock
