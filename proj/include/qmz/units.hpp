#pragma once

#include <numbers>

namespace qmz::units {

// Natural units: c = 1 and rho_1d = 1/(2*pi). The first emitter's decay rate
// sets the time unit (gamma_1 = 1 in all defaults). Two identities follow and
// are asserted once at startup:
//   1/(2*pi*rho_1d*c) == 1   (detection-integral prefactor)
//   beta(gamma)^2 == gamma/2 (emitted-field amplitude vs decay rate)
inline constexpr double kC = 1.0;
inline constexpr double kRho1d = 1.0 / (2.0 * std::numbers::pi);

// 1/(2*pi*rho_1d*c), kept as a function so the identity is computed, not assumed.
double detection_prefactor();

// Emitter-waveguide coupling g = sqrt(gamma/(4*pi*rho_1d)) = sqrt(gamma/2).
double coupling_g(double gamma);

// Emitted-field amplitude beta = sqrt(pi*rho_1d*gamma) = sqrt(gamma/2).
double emission_beta(double gamma);

// Exponential-pulse amplitude at the front, N/sqrt(2*pi*rho_1d*c) = sqrt(linewidth).
double pulse_front_amplitude(double linewidth);

// True when both unit identities hold to machine precision.
bool identities_hold();

}  // namespace qmz::units
