#pragma once

#include <complex>

#include "qmz/core.hpp"

namespace qmz {

// Two-emitter interferometer parameter set. Emitter 1 sees the incoming
// pulse; emitter 2 sees the reflected/transmitted pair with channels swapped.
struct QmzParams {
    double gamma1 = 1.0;
    double gamma2 = 1.0;
    double delta1 = 0.0;
    double delta2 = 0.0;
    double linewidth = 1.0;

    EmitterParams emitter1() const { return {gamma1, delta1}; }
    EmitterParams emitter2() const { return {gamma2, delta2}; }
    PulseParams pulse() const { return {linewidth}; }
};
void validate(const QmzParams& p);

// Closed-form reflection probability of a rising-exponential pulse on a
// single emitter. Algebraically this is
//   p_b = gamma*(gamma + linewidth) / ((gamma + linewidth)^2 + 4*delta^2),
// regular for all valid parameters: the monochromatic limit is the
// Lorentzian gamma^2/(gamma^2 + 4*delta^2), and at linewidth = gamma,
// delta = 0 it gives exactly 1/2. The transmitted complement is 1 - p_b.
Probability p1_reflect(const EmitterParams& emitter, const PulseParams& pulse);

// Overlap coefficients entering the closed-form stage-2 probability. B is
// the emitter-1 emission coefficient; K1, K2 collect the emitter-2 response
// to the direct and emitter-1-scattered parts; lambda_sum and mu are the
// diagonal and interference pieces, p2_a = (lambda_sum + 2*Re(mu))/2.
//
// Three denominators vanish on measure-zero parameter sets: linewidth =
// gamma1 with delta1 = 0 (B), linewidth = gamma2 with delta2 = 0 (K1), and
// gamma2 = gamma1 with delta2 = delta1 (K2; this one holds for identical
// emitters at common detuning). The poles are removable in the full
// probability but not in the individual constants, so near them this
// returns values at a detuning-offset point a distance ~1e-3*gamma1 away,
// keeping every field finite.
struct CascadeConstants {
    Complex b_const;
    Complex k1;
    Complex k2;
    double lambda_sum = 0.0;
    Complex mu;
    bool regularized = false;  // true when evaluated at the offset point
};
CascadeConstants cascade_constants(const QmzParams& p);

// Closed-form probability of detecting the photon in channel a after both
// stages. Near the removable poles the value is recovered by a Richardson
// average of detuning-offset evaluations (see CascadeConstants); the result
// is clamped into [0, 1] when within 1e-9 of the boundary, clamped with a
// stderr diagnostic up to 1e-6, and an InternalError beyond that.
Probability p2_transmit(const QmzParams& p);

}  // namespace qmz
