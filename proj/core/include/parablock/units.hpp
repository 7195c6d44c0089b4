#pragma once

namespace parablock::units {

/// Reduced Planck constant in meV * ps.
inline constexpr double kHbarMeVps = 0.6582119569;

/// Energy (meV) to angular rate (1/ps). The only place physical runs cross
/// from energies to rates.
constexpr double mev_to_rate(double energy_mev) { return energy_mev / kHbarMeVps; }

/// Decay energy Gamma = hbar / lifetime.
constexpr double lifetime_to_mev(double lifetime_ps) { return kHbarMeVps / lifetime_ps; }

}  // namespace parablock::units
