#include "qmz/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qmz/units.hpp"

namespace qmz {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw InvalidInput(std::string(name) + " must be finite");
}

void require_positive(double v, const char* name) {
    require_finite(v, name);
    if (v <= 0.0) {
        std::ostringstream os;
        os << name << " must be > 0 (got " << v << ")";
        throw InvalidInput(os.str());
    }
}

// Keeps accidental parameter typos from requesting terabyte grids.
constexpr std::int64_t kMaxGridPoints = std::int64_t(1) << 31;

}  // namespace

void validate(const EmitterParams& e) {
    require_positive(e.gamma, "gamma");
    require_finite(e.delta, "delta");
}

void validate(const PulseParams& p) { require_positive(p.linewidth, "linewidth"); }

Probability make_probability(double v, double tol) {
    if (!std::isfinite(v)) throw InternalError("probability is non-finite");
    if (v < -tol || v > 1.0 + tol) {
        std::ostringstream os;
        os << "probability " << v << " outside [0,1] beyond tolerance " << tol;
        throw InternalError(os.str());
    }
    return Probability{std::clamp(v, 0.0, 1.0)};
}

Grid Grid::aligned(double dz, std::int64_t n_neg, std::int64_t n_pos,
                   std::int64_t n_time) {
    require_positive(dz, "dz");
    if (n_neg < 2 || n_pos < 2)
        throw InvalidInput("grid needs at least two samples on each side of z = 0");
    if (n_time < 1) throw InvalidInput("grid needs at least one time step");
    if (n_neg + n_pos > kMaxGridPoints)
        throw ResourceLimit("grid exceeds the sample-count cap");
    return Grid{dz, n_neg, n_pos, n_time};
}

Grid Grid::covering(double z_min, double z_max, double dz, double t_final) {
    require_positive(dz, "dz");
    require_positive(t_final, "t_final");
    require_finite(z_min, "z_min");
    require_finite(z_max, "z_max");
    if (!(z_min < 0.0 && 0.0 < z_max))
        throw InvalidInput("grid window must satisfy z_min < 0 < z_max");
    const auto n_neg = std::max<std::int64_t>(
        2, static_cast<std::int64_t>(std::ceil(0.5 - z_min / dz)));
    const auto n_pos = std::max<std::int64_t>(
        2, static_cast<std::int64_t>(std::ceil(0.5 + z_max / dz)));
    const auto n_time = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(t_final / dz - 1e-9)));
    return aligned(dz, n_neg, n_pos, n_time);
}

Grid auto_grid(const std::vector<EmitterParams>& emitters, const PulseParams& pulse,
               const GridOptions& opts) {
    if (emitters.empty()) throw InvalidInput("auto_grid needs at least one emitter");
    for (const auto& e : emitters) validate(e);
    validate(pulse);
    require_positive(opts.resolution_factor, "resolution_factor");
    require_positive(opts.tfinal_factor, "tfinal_factor");
    if (opts.resolution_factor < 1.0)
        throw InvalidInput("resolution_factor must be >= 1 (grids may only be refined)");

    double shortest = 1.0 / pulse.linewidth;
    for (const auto& e : emitters) {
        shortest = std::min(shortest, 1.0 / e.gamma);
        shortest = std::min(shortest, 1.0 / std::max(std::abs(e.delta), e.gamma));
    }
    const double dz = shortest / (kSamplesPerScale * opts.resolution_factor);
    const double t_final = kLongTimeFactor * opts.tfinal_factor *
                           (1.0 / emitters.front().gamma + 1.0 / pulse.linewidth);
    const auto n_time = static_cast<std::int64_t>(std::ceil(t_final / dz - 1e-9));
    if (2 * n_time > kMaxGridPoints)
        throw ResourceLimit("auto grid exceeds the sample-count cap");
    return Grid::aligned(dz, n_time, n_time, n_time);
}

Envelope zero_envelope(const Grid& grid) {
    return Envelope{grid, std::vector<Complex>(static_cast<size_t>(grid.n_points()))};
}

// Cell sum on the half-offset grid: each sample owns [z - dz/2, z + dz/2],
// so wavefront steps sit on cell boundaries and carry no first-order error.
double detection_probability(const Envelope& env) {
    const auto n = static_cast<size_t>(env.grid.n_points());
    if (env.amps.size() != n)
        throw InvalidInput("envelope sample count does not match its grid");
    if (n < 2) throw InvalidInput("envelope has fewer than two samples");
    double sum = 0.0;
    for (const auto& a : env.amps) sum += std::norm(a);
    const double p = units::detection_prefactor() * env.grid.dz * sum;
    if (!std::isfinite(p)) throw InvalidInput("envelope contains non-finite amplitudes");
    return p;
}

Envelope make_exponential_pulse(const PulseParams& pulse, const Grid& grid) {
    validate(pulse);
    require_resolves(grid, pulse.linewidth, "pulse linewidth");
    Envelope env = zero_envelope(grid);
    const double front = units::pulse_front_amplitude(pulse.linewidth);
    for (std::int64_t i = 0; i < grid.n_neg; ++i)
        env.amps[static_cast<size_t>(i)] =
            front * std::exp(0.5 * pulse.linewidth * grid.z_at(i) / units::kC);
    const double norm = detection_probability(env);
    if (!(norm > 0.0)) throw InternalError("exponential pulse has zero on-grid norm");
    const double scale = 1.0 / std::sqrt(norm);
    for (std::int64_t i = 0; i < grid.n_neg; ++i) env.amps[static_cast<size_t>(i)] *= scale;
    return env;
}

void require_resolves(const Grid& grid, double rate, const char* what) {
    require_positive(rate, what);
    const double needed = 1.0 / (rate * kSamplesPerScale);
    if (grid.dz > needed * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "grid dz = " << grid.dz << " too coarse for " << what << " = " << rate
           << " (needs dz <= " << needed << ", " << kSamplesPerScale
           << " samples per scale)";
        throw ResolutionError(os.str());
    }
}

}  // namespace qmz
