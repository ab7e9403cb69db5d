#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qmz/errors.hpp"

namespace qmz {

using Complex = std::complex<double>;

// Samples per shortest rate scale required of any grid an operation accepts.
inline constexpr double kSamplesPerScale = 50.0;
// t_final >= kLongTimeFactor * (1/gamma + 1/linewidth) leaves the emitter
// with residual population below 1e-6.
inline constexpr double kLongTimeFactor = 12.0;
// Residual excited population accepted at readout time.
inline constexpr double kReadoutPopulationTol = 1e-6;

struct EmitterParams {
    double gamma = 1.0;  // spontaneous decay rate into the guided modes
    double delta = 0.0;  // laser detuning omega_L - omega_0
};
void validate(const EmitterParams& e);

struct PulseParams {
    double linewidth = 1.0;  // decay rate of the rising-exponential envelope
};
void validate(const PulseParams& p);

// Probability with an explicit tolerance-checked constructor.
struct Probability {
    double value = 0.0;
};
// Validates v in [-tol, 1+tol] and clamps the overshoot into [0, 1].
Probability make_probability(double v, double tol);

// Uniform 1-D grid with the emitter at z = 0 and readout at t_final.
// Space and time run in lockstep (dt = dz, c = 1). Samples sit at
// half-integer multiples of dz, z_i = (i - n_neg + 1/2)*dz, so z = 0, the
// pulse front and the emission wavefront all fall between samples: free
// propagation is an exact integer index shift and the trapezoid rule stays
// second-order accurate across the field discontinuities.
struct Grid {
    double dz = 0.0;
    std::int64_t n_neg = 0;   // samples left of z = 0
    std::int64_t n_pos = 0;   // samples right of z = 0
    std::int64_t n_time = 0;  // time steps, t_final = n_time*dt

    std::int64_t n_points() const { return n_neg + n_pos; }
    double dt() const { return dz; }
    double t_final() const { return static_cast<double>(n_time) * dz; }
    double z_at(std::int64_t i) const {
        return (static_cast<double>(i - n_neg) + 0.5) * dz;
    }
    double z_min() const { return z_at(0); }
    double z_max() const { return z_at(n_points() - 1); }

    bool operator==(const Grid&) const = default;

    static Grid aligned(double dz, std::int64_t n_neg, std::int64_t n_pos,
                        std::int64_t n_time);
    // Snaps the requested window onto an aligned grid (coverage may grow by
    // up to one sample per edge, t_final rounds up to a whole step).
    static Grid covering(double z_min, double z_max, double dz, double t_final);
};

struct GridOptions {
    double resolution_factor = 1.0;  // multiplies the 50 samples-per-scale default
    double tfinal_factor = 1.0;      // multiplies the long-time factor 12
};

// Grid resolving every rate scale of the given emitters and pulse, spanning
// [-t_final, t_final] with t_final = 12*F*(1/gamma_1 + 1/linewidth).
Grid auto_grid(const std::vector<EmitterParams>& emitters, const PulseParams& pulse,
               const GridOptions& opts = {});

// Single-channel field envelope in the frame rotating at the carrier.
struct Envelope {
    Grid grid;
    std::vector<Complex> amps;  // one sample per grid point
};

Envelope zero_envelope(const Grid& grid);

// Detection probability 1/(2*pi*rho_1d*c) * integral |amps|^2 dz by the
// composite trapezoid rule.
double detection_probability(const Envelope& env);

// Rising exponential Theta(-z)*exp((linewidth/2)*z), normalized so that
// detection_probability on this grid is exactly 1; the front amplitude is
// sqrt(linewidth) up to O(dz^2) quadrature and tail-truncation corrections.
Envelope make_exponential_pulse(const PulseParams& pulse, const Grid& grid);

// Throws ResolutionError unless dz resolves 1/rate with kSamplesPerScale.
void require_resolves(const Grid& grid, double rate, const char* what);

}  // namespace qmz
