#pragma once

// Test-only reference computations. Nothing here touches the Kronecker
// assembly or the sparse solvers under test.

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "parablock/fock.hpp"

namespace oracle {

using parablock::Complex;
using parablock::Matrix;
using parablock::Vector;

/// Lindblad right-hand side evaluated directly on a matrix.
inline Matrix lindblad_rhs(const Matrix& h, const std::vector<std::pair<Matrix, double>>& jumps,
                           const Matrix& rho) {
  const Complex i{0.0, 1.0};
  Matrix out = -i * (h * rho - rho * h);
  for (const auto& [a, rate] : jumps) {
    const Matrix ada = a.adjoint() * a;
    out += rate * (a * rho * a.adjoint() - 0.5 * (ada * rho + rho * ada));
  }
  return out;
}

/// Dense superoperator assembled column by column from lindblad_rhs applied
/// to the basis matrices |i><j| (column-stacked).
inline Matrix dense_liouvillian(const Matrix& h,
                                const std::vector<std::pair<Matrix, double>>& jumps) {
  const auto d = h.rows();
  Matrix l(d * d, d * d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) {
      Matrix e = Matrix::Zero(d, d);
      e(i, j) = 1.0;
      const Matrix col = lindblad_rhs(h, jumps, e);
      l.col(i + j * d) = Eigen::Map<const Vector>(col.data(), d * d);
    }
  return l;
}

/// Steady state from a full eigendecomposition: the eigenvector with the
/// eigenvalue of smallest modulus, normalized to unit trace.
inline Matrix eigen_steady_state(const Matrix& l, int d) {
  Eigen::ComplexEigenSolver<Matrix> es(l);
  Eigen::Index k = 0;
  es.eigenvalues().cwiseAbs().minCoeff(&k);
  Vector v = es.eigenvectors().col(k);
  Matrix rho = Eigen::Map<const Matrix>(v.data(), d, d);
  rho /= rho.trace();
  return 0.5 * (rho + rho.adjoint());
}

/// Random Hermitian matrix with unit trace and (generically) full rank.
inline Matrix random_density(int d, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Matrix x(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = Complex{g(rng), g(rng)};
  Matrix rho = x * x.adjoint();
  return rho / rho.trace();
}

inline Matrix random_matrix(int d, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Matrix x(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = Complex{g(rng), g(rng)};
  return x;
}

inline Matrix random_hermitian(int d, std::mt19937& rng) {
  Matrix x = random_matrix(d, rng);
  return 0.5 * (x + x.adjoint());
}

/// Dense Kronecker product, written out independently of the library.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Matrix exponential by scaling and squaring with a Taylor series; used to
/// propagate small dense generators exactly.
inline Matrix expm(const Matrix& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int s = std::max(0, static_cast<int>(std::ceil(std::log2(std::max(norm, 1e-300)))) + 1);
  const Matrix scaled = a / std::pow(2.0, s);
  Matrix term = Matrix::Identity(a.rows(), a.cols());
  Matrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

}  // namespace oracle
