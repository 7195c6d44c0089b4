#pragma once

#include <array>
#include <optional>

#include "parablock/lindblad.hpp"
#include "parablock/units.hpp"

namespace parablock::dipolariton {

/// Cavity photon / direct exciton / indirect exciton system. Energies in meV.
/// Defaults are the published sample in the gauge E_IX = 0.
struct Params {
  double E_C = -9.0;
  double E_DX = 9.0;
  double E_IX = 0.0;
  double Omega = 6.0;  ///< photon-direct exciton coupling
  double J = 3.0;      ///< direct-indirect tunneling
  double alpha_D = 0.004;
  double alpha_I = 0.016;
  double alpha_DI = 0.008;
  double Gamma_C = units::lifetime_to_mev(2.5);
  double Gamma_X = units::lifetime_to_mev(500.0);
  Complex psi1{50.0, 0.0};  ///< lower-branch mean-field amplitude
  double E_P1 = 0.0;        ///< strong pump energy
  double E_F2 = 0.0;        ///< weak pump energy
  double F2 = 0.0;          ///< weak pump amplitude

  void validate() const;
};

/// Eigenmodes of the linear Hamiltonian. Row j of V holds the
/// (photon, direct, indirect) weights of dipolariton j; energies ascending.
struct HopfieldDecomposition {
  std::array<double, 3> energies{};
  Eigen::Matrix3d V;
};

/// Bare-basis matrix [[E_C, Omega, 0], [Omega, E_DX, -J], [0, -J, E_IX]].
Eigen::Matrix3d linear_hamiltonian(const Params& p);

/// Each eigenvector's largest-magnitude entry is made positive.
HopfieldDecomposition diagonalize_linear(const Params& p);

struct EffectiveConstants {
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0, c5 = 0.0, c6 = 0.0;
  double Gamma2 = 0.0, Gamma3 = 0.0;
  double Delta1 = 0.0, Delta2 = 0.0, Delta3 = 0.0;
};

/// Interaction constants of the middle/upper branches obtained by expanding
/// the exciton-exciton terms in dipolariton operators, plus the branch decay
/// rates Gamma_j = V_j1^2 Gamma_C + (V_j2^2 + V_j3^2) Gamma_X and the
/// rotating-frame detunings.
EffectiveConstants effective_constants(const HopfieldDecomposition& hd, const Params& p);

/// Reported values for the default sample, used to override the derived
/// c3..c6 and Gamma_2,3 (c1, c2 and the detunings are kept from `derived`).
EffectiveConstants with_published_values(EffectiveConstants derived, Complex psi1);

/// Sets E_P1 and E_F2 so that the detunings take the given values.
Params with_detunings(Params p, const HopfieldDecomposition& hd, double Delta1, double Delta2);

/// E3 + E1 - 2 E2: the offset in Delta3 = offset - Delta1 + 2 Delta2.
double parametric_offset(const HopfieldDecomposition& hd);

/// H_eff on a two-mode space (middle, upper), energies in meV:
///   sum_j Delta_j A_j^+ A_j + (c1 n2 + c2 n3)|psi1|^2 + c3 A2^+A2^+A2A2 + c4 A3^+A3^+A3A3
///   + c5 A2^+A3^+A2A3 + c6 (A2^+A2^+A3 psi1 + A2A2A3^+ psi1^*) + F2 (A2^+ + A2)
Operator build_effective_hamiltonian(const EffectiveConstants& ec, Complex psi1, double F2,
                                     const FockSpace& space);

/// Conventional single-mode blockade H = c3 A2^+A2^+A2A2 + F2 (A2^+ + A2)
/// on a one-mode space (psi1 = 0, Delta2 = 0).
Operator single_mode_blockade_reference(const EffectiveConstants& ec, double F2,
                                        const FockSpace& space);

/// Decay channels (Gamma_j / hbar) for the middle and, when present, upper branch.
std::vector<DecayChannel> rate_channels(const EffectiveConstants& ec, const FockSpace& space);

/// Divides every matrix element by hbar: meV operator -> 1/ps generator.
Operator to_rate_units(const Operator& h_mev);

}  // namespace parablock::dipolariton
