#include "parablock/dipolariton.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "parablock/errors.hpp"

namespace parablock::dipolariton {

void Params::validate() const {
  if (!(Omega > 0.0) || !(J > 0.0)) throw InvalidArgument("Omega and J must be > 0");
  if (!(Gamma_C > 0.0) || !(Gamma_X > 0.0)) throw InvalidArgument("Gamma_C and Gamma_X must be > 0");
  if (!(F2 >= 0.0)) throw InvalidArgument("F2 must be >= 0");
}

Eigen::Matrix3d linear_hamiltonian(const Params& p) {
  Eigen::Matrix3d h;
  h << p.E_C, p.Omega, 0.0,
       p.Omega, p.E_DX, -p.J,
       0.0, -p.J, p.E_IX;
  return h;
}

HopfieldDecomposition diagonalize_linear(const Params& p) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(linear_hamiltonian(p));
  HopfieldDecomposition hd;
  hd.V = es.eigenvectors().transpose();  // rows = eigenvectors, ascending energy
  for (int j = 0; j < 3; ++j) {
    hd.energies[static_cast<std::size_t>(j)] = es.eigenvalues()(j);
    Eigen::Index k = 0;
    hd.V.row(j).cwiseAbs().maxCoeff(&k);
    if (hd.V(j, k) < 0.0) hd.V.row(j) *= -1.0;
  }
  return hd;
}

EffectiveConstants effective_constants(const HopfieldDecomposition& hd, const Params& p) {
  // V(j, k): dipolariton j (0 lower, 1 middle, 2 upper) on bare mode k
  // (0 photon, 1 direct exciton, 2 indirect exciton).
  const auto& V = hd.V;
  const double v12 = V(0, 1), v13 = V(0, 2);
  const double v22 = V(1, 1), v23 = V(1, 2);
  const double v32 = V(2, 1), v33 = V(2, 2);
  const double aD = p.alpha_D, aI = p.alpha_I, aDI = p.alpha_DI;
  auto sq = [](double x) { return x * x; };

  EffectiveConstants ec;
  ec.c1 = 4 * aD * sq(v12) * sq(v22) + 4 * aI * sq(v13) * sq(v23) + aDI * sq(v12 * v23 + v22 * v13);
  ec.c2 = 4 * aD * sq(v12) * sq(v32) + 4 * aI * sq(v13) * sq(v33) + aDI * sq(v12 * v33 + v32 * v13);
  // Same-branch Kerr: alpha b^+b^+bb contributes alpha V^4 (one ordering only).
  ec.c3 = aD * sq(sq(v22)) + aI * sq(sq(v23)) + aDI * sq(v22) * sq(v23);
  ec.c4 = aD * sq(sq(v32)) + aI * sq(sq(v33)) + aDI * sq(v32) * sq(v33);
  ec.c5 = 4 * aD * sq(v22) * sq(v32) + 4 * aI * sq(v23) * sq(v33) + aDI * sq(v22 * v33 + v32 * v23);
  ec.c6 = 2 * aD * sq(v22) * v12 * v32 + 2 * aI * sq(v23) * v13 * v33 +
          aDI * v22 * v23 * (v12 * v33 + v32 * v13);

  auto branch_decay = [&](int j) {
    return sq(V(j, 0)) * p.Gamma_C + (sq(V(j, 1)) + sq(V(j, 2))) * p.Gamma_X;
  };
  ec.Gamma2 = branch_decay(1);
  ec.Gamma3 = branch_decay(2);

  const auto& E = hd.energies;
  ec.Delta1 = E[0] - p.E_P1;
  ec.Delta2 = E[1] - p.E_F2;
  ec.Delta3 = E[2] + p.E_P1 - 2.0 * p.E_F2;
  return ec;
}

EffectiveConstants with_published_values(EffectiveConstants derived, Complex psi1) {
  const double n1 = std::norm(psi1);
  if (!(n1 > 0.0)) throw InvalidArgument("published c6 needs a nonzero psi1");
  derived.c3 = 0.0143;
  derived.c4 = 0.0035;
  derived.c5 = -0.0027;
  derived.c6 = -1.7256 / n1;
  derived.Gamma2 = 0.0072;
  derived.Gamma3 = 0.0207;
  return derived;
}

Params with_detunings(Params p, const HopfieldDecomposition& hd, double Delta1, double Delta2) {
  p.E_P1 = hd.energies[0] - Delta1;
  p.E_F2 = hd.energies[1] - Delta2;
  return p;
}

double parametric_offset(const HopfieldDecomposition& hd) {
  return hd.energies[2] + hd.energies[0] - 2.0 * hd.energies[1];
}

Operator build_effective_hamiltonian(const EffectiveConstants& ec, Complex psi1, double F2,
                                     const FockSpace& space) {
  if (space.mode_count() != 2)
    throw InvalidArgument("effective Hamiltonian needs a two-mode space (middle, upper)");
  const Operator a2 = embed(annihilation(space.mode_dim(0)), 0, space);
  const Operator a3 = embed(annihilation(space.mode_dim(1)), 1, space);
  const Operator a2d = a2.dagger();
  const Operator a3d = a3.dagger();
  const double n1 = std::norm(psi1);

  Operator h = Complex{ec.Delta2 + ec.c1 * n1} * (a2d * a2);
  h += Complex{ec.Delta3 + ec.c2 * n1} * (a3d * a3);
  h += Complex{ec.c3} * (a2d * a2d * a2 * a2);
  h += Complex{ec.c4} * (a3d * a3d * a3 * a3);
  h += Complex{ec.c5} * (a2d * a3d * a2 * a3);
  h += (ec.c6 * psi1) * (a2d * a2d * a3);
  h += (ec.c6 * std::conj(psi1)) * (a2 * a2 * a3d);
  h += Complex{F2} * (a2d + a2);
  return h;
}

Operator single_mode_blockade_reference(const EffectiveConstants& ec, double F2,
                                        const FockSpace& space) {
  if (space.mode_count() != 1) throw InvalidArgument("blockade reference needs a one-mode space");
  const Operator a = annihilation(space.mode_dim(0));
  const Operator ad = a.dagger();
  return Complex{ec.c3} * (ad * ad * a * a) + Complex{F2} * (ad + a);
}

std::vector<DecayChannel> rate_channels(const EffectiveConstants& ec, const FockSpace& space) {
  std::vector<DecayChannel> out;
  out.push_back({embed(annihilation(space.mode_dim(0)), 0, space), units::mev_to_rate(ec.Gamma2)});
  if (space.mode_count() > 1)
    out.push_back({embed(annihilation(space.mode_dim(1)), 1, space), units::mev_to_rate(ec.Gamma3)});
  return out;
}

Operator to_rate_units(const Operator& h_mev) {
  return h_mev * Complex{1.0 / units::kHbarMeVps};
}

}  // namespace parablock::dipolariton
