#include "parablock/lindblad.hpp"

#include <cmath>
#include <string>

#include <Eigen/SparseLU>

#include "parablock/errors.hpp"

namespace parablock {

namespace {

using Triplet = Eigen::Triplet<Complex>;

// Appends scale * (A (x) B) to `out`, skipping zeros of the dense factors.
void kron_into(const Matrix& a, const Matrix& b, Complex scale, std::vector<Triplet>& out) {
  const auto rb = b.rows();
  const auto cb = b.cols();
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (Eigen::Index k = 0; k < rb; ++k)
        for (Eigen::Index l = 0; l < cb; ++l) {
          const Complex bkl = b(k, l);
          if (bkl == Complex{}) continue;
          out.emplace_back(static_cast<int>(i * rb + k), static_cast<int>(j * cb + l),
                           scale * aij * bkl);
        }
    }
}

SparseMatrix from_triplets(int n, const std::vector<Triplet>& t) {
  SparseMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  m.prune(Complex{});
  m.makeCompressed();
  return m;
}

void append_commutator(const Matrix& h, Complex scale, std::vector<Triplet>& t) {
  const Matrix id = Matrix::Identity(h.rows(), h.cols());
  // vec(H rho) = (I (x) H) vec(rho); vec(rho H) = (H^T (x) I) vec(rho)
  kron_into(id, h, Complex{0.0, -1.0} * scale, t);
  kron_into(h.transpose(), id, Complex{0.0, 1.0} * scale, t);
}

void append_dissipator(const Matrix& a, double rate, std::vector<Triplet>& t) {
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  const Matrix ada = a.adjoint() * a;
  kron_into(a.conjugate(), a, rate, t);
  kron_into(id, ada, -0.5 * rate, t);
  kron_into(ada.transpose(), id, -0.5 * rate, t);
}

double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// Max-abs entry of a sparse matrix; used to scale the inverse-iteration shift.
double max_abs(const SparseMatrix& m) {
  double best = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) best = std::max(best, std::abs(it.value()));
  return best;
}

struct KernelEstimate {
  Vector x;
  bool ok;
};

KernelEstimate inverse_iteration(const SparseMatrix& l, const Vector& start, double shift) {
  const auto n = l.rows();
  SparseMatrix id(n, n);
  id.setIdentity();
  SparseMatrix shifted = l - Complex{shift} * id;
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(shifted);
  if (lu.info() != Eigen::Success) return {start, false};
  Vector x = start / start.norm();
  for (int iter = 0; iter < 60; ++iter) {
    Vector y = lu.solve(x);
    if (lu.info() != Eigen::Success || !y.allFinite()) return {x, false};
    y /= y.norm();
    // Fix the global phase so successive iterates are comparable.
    Eigen::Index piv = 0;
    y.cwiseAbs().maxCoeff(&piv);
    y *= std::abs(y(piv)) / y(piv);
    const double change = (y - x).norm();
    x = std::move(y);
    if (change < 1e-14) break;
  }
  return {x, true};
}

Vector normalized_by_trace(const Vector& x, int dim) {
  const Complex tr = trace_functional(dim).dot(x);  // dot conjugates lhs; functional is real
  return x / tr;
}

}  // namespace

Vector vectorize(const Matrix& rho) { return Eigen::Map<const Vector>(rho.data(), rho.size()); }

Matrix unvectorize(const Vector& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim)
    throw InvalidArgument("unvectorize: length is not dim^2");
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

Vector trace_functional(int dim) {
  Vector t = Vector::Zero(static_cast<Eigen::Index>(dim) * dim);
  for (int i = 0; i < dim; ++i) t(i * (dim + 1)) = 1.0;
  return t;
}

Liouvillian::Liouvillian(FockSpace space, SparseMatrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
  const int n = space_.total_dim() * space_.total_dim();
  if (matrix_.rows() != n || matrix_.cols() != n)
    throw InvalidArgument("Liouvillian shape does not match space");
}

Matrix Liouvillian::apply(const Matrix& rho) const {
  return unvectorize(matrix_ * vectorize(rho), dim());
}

SparseMatrix commutator_superoperator(const Operator& h) {
  std::vector<Triplet> t;
  append_commutator(h.matrix(), 1.0, t);
  const int n = h.space().total_dim();
  return from_triplets(n * n, t);
}

SparseMatrix dissipator_superoperator(const Operator& a) {
  std::vector<Triplet> t;
  append_dissipator(a.matrix(), 1.0, t);
  const int n = a.space().total_dim();
  return from_triplets(n * n, t);
}

Liouvillian build_liouvillian(const Operator& hamiltonian,
                              const std::vector<DecayChannel>& channels) {
  const double herm = hamiltonian.hermiticity_error();
  if (herm > kTolerances.hermiticity)
    throw InvalidArgument("Hamiltonian is not Hermitian (error " + std::to_string(herm) + ")");

  std::vector<Triplet> t;
  append_commutator(hamiltonian.matrix(), 1.0, t);
  for (const auto& ch : channels) {
    if (!(ch.op.space() == hamiltonian.space()))
      throw InvalidArgument("decay channel lives on a different space");
    if (!(ch.rate >= 0.0)) throw InvalidArgument("decay rate must be >= 0");
    if (ch.rate == 0.0) continue;
    append_dissipator(ch.op.matrix(), ch.rate, t);
  }
  const int n = hamiltonian.space().total_dim();
  return {hamiltonian.space(), from_triplets(n * n, t)};
}

SteadyState steady_state(const Liouvillian& l, const Tolerances& tol) {
  const int d = l.dim();
  const int n = d * d;
  const SparseMatrix& lm = l.matrix();

  // Bordered system: row 0 (the d rho_00 / dt equation) becomes Tr rho = 1.
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(lm.nonZeros()) + static_cast<std::size_t>(d));
  for (int k = 0; k < lm.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(lm, k); it; ++it)
      if (it.row() != 0) t.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int i = 0; i < d; ++i) t.emplace_back(0, i * (d + 1), 1.0);
  SparseMatrix bordered(n, n);
  bordered.setFromTriplets(t.begin(), t.end());
  bordered.makeCompressed();

  Vector rhs = Vector::Zero(n);
  rhs(0) = 1.0;

  Vector x;
  bool fallback = false;
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(bordered);
  if (lu.info() == Eigen::Success) {
    x = lu.solve(rhs);
    if (lu.info() == Eigen::Success && x.allFinite()) {
      // One step of iterative refinement.
      Vector r = rhs - bordered * x;
      x += lu.solve(r);
    }
  }
  if (x.size() != n || !x.allFinite() || inf_norm(lm * normalized_by_trace(x, d)) > tol.steady_residual) {
    fallback = true;
    const double shift = 1e-7 * std::max(max_abs(lm), 1.0);
    // Two unrelated starting vectors; a one-dimensional kernel sends both to
    // the same ray.
    Vector s1 = trace_functional(d);
    Vector s2(n);
    for (int i = 0; i < n; ++i)
      s2(i) = Complex{std::cos(1.0 + 0.7 * i), std::sin(0.3 + 1.3 * i)};
    KernelEstimate k1 = inverse_iteration(lm, s1, shift);
    KernelEstimate k2 = inverse_iteration(lm, s2, shift);
    if (!k1.ok || !k2.ok)
      throw DegenerateSteadyState("steady state: shifted inverse iteration failed", NAN);
    const Complex tr1 = trace_functional(d).dot(k1.x);
    const Complex tr2 = trace_functional(d).dot(k2.x);
    if (std::abs(tr1) < 1e-12 || std::abs(tr2) < 1e-12)
      throw DegenerateSteadyState("steady state: kernel vector is traceless", inf_norm(lm * k1.x));
    Vector x1 = k1.x / tr1;
    Vector x2 = k2.x / tr2;
    const double spread = inf_norm(x1 - x2);
    if (spread > 1e-6)
      throw DegenerateSteadyState("steady state: kernel of L is not one-dimensional (spread " +
                                      std::to_string(spread) + ")",
                                  inf_norm(lm * x1));
    x = std::move(x1);
  }

  x = normalized_by_trace(x, d);
  const double residual = inf_norm(lm * x);
  if (!(residual <= tol.steady_residual))
    throw DegenerateSteadyState("steady state residual " + std::to_string(residual) +
                                    " exceeds tolerance",
                                residual);

  Matrix rho = unvectorize(x, d);
  rho = 0.5 * (rho + rho.adjoint());
  return {DensityMatrix(l.space(), std::move(rho)), residual, fallback};
}

}  // namespace parablock
