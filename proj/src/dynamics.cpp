#include "qmz/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <utility>

#include "qmz/errors.hpp"
#include "qmz/units.hpp"

namespace qmz {

namespace {

constexpr double kInputNormTol = 1e-4;  // grid-limited norm slack on inputs
constexpr double kRemapLossTol = 1e-6;  // probability allowed to fall off the stage-2 grid
constexpr double kSeriesSwitch = 1e-2;  // |lambda*h| below which the weights use a series

Complex sample_or_zero(const Envelope& env, std::int64_t i) {
    return (i >= 0 && i < static_cast<std::int64_t>(env.amps.size()))
               ? env.amps[static_cast<size_t>(i)]
               : Complex{};
}

// One-step propagator psi(t+h) = decay*psi(t) - g*(w0*d(t) + w1*d(t+h)):
// exact decay exp(-lambda*h) and exact integral of the linear interpolant
// of the drive d. The closed forms lose digits for small |lambda*h|, where
// a short series takes over.
struct StepWeights {
    Complex decay, w0, w1;
};

StepWeights step_weights(Complex lambda, double h) {
    const Complex x = lambda * h;
    StepWeights w;
    w.decay = std::exp(-x);
    if (std::abs(x) < kSeriesSwitch) {
        w.w0 = h * (0.5 - x / 3.0 + x * x / 8.0 - x * x * x / 30.0);
        w.w1 = h * (0.5 - x / 6.0 + x * x / 24.0 - x * x * x / 120.0);
    } else {
        const Complex i0 = (1.0 - w.decay) / lambda;
        const Complex i1 = h * i0 - (1.0 - w.decay * (1.0 + x)) / (lambda * lambda);
        w.w1 = i1 / h;
        w.w0 = i0 - w.w1;
    }
    return w;
}

// Drive seen by the emitter: channel a arrives from z = -t, channel b from
// z = +t, both exact grid samples at the staggered instants. The endpoints
// fall between samples: t = 0 extrapolates one-sidedly from the field's
// support side, t = t_final averages the two straddling samples.
struct DriveSampler {
    const Envelope& in_a;
    const Envelope& in_b;
    std::int64_t n_neg;

    Complex at_staggered(std::int64_t k) const {
        return sample_or_zero(in_a, n_neg - 1 - k) + sample_or_zero(in_b, n_neg + k);
    }
    Complex at_start() const {
        return 1.5 * sample_or_zero(in_a, n_neg - 1) - 0.5 * sample_or_zero(in_a, n_neg - 2) +
               1.5 * sample_or_zero(in_b, n_neg) - 0.5 * sample_or_zero(in_b, n_neg + 1);
    }
    Complex at_end(std::int64_t n_time) const {
        return 0.5 * (sample_or_zero(in_a, n_neg - 1 - n_time) +
                      sample_or_zero(in_a, n_neg - n_time) +
                      sample_or_zero(in_b, n_neg + n_time - 1) +
                      sample_or_zero(in_b, n_neg + n_time));
    }
};

void require_on_grid(const Envelope& env, const Grid& grid, const char* name) {
    if (!(env.grid == grid)) {
        std::ostringstream os;
        os << name << " does not live on the scattering grid";
        throw InvalidInput(os.str());
    }
}

void require_resolves_emitter(const Grid& grid, const EmitterParams& emitter) {
    require_resolves(grid, emitter.gamma, "emitter gamma");
    if (emitter.delta != 0.0)
        require_resolves(grid, std::abs(emitter.delta), "emitter detuning");
}

double max_population(const EmitterTrajectory& tr) {
    double m = 0.0;
    for (const Complex& p : tr.psi) m = std::max(m, std::norm(p));
    return m;
}

}  // namespace

EmitterTrajectory excitation_amplitude(const Envelope& in_a, const Envelope& in_b,
                                       const EmitterParams& emitter, Complex psi0,
                                       const Grid& grid) {
    validate(emitter);
    require_on_grid(in_a, grid, "in_a");
    require_on_grid(in_b, grid, "in_b");
    if (!(std::abs(psi0) <= 1.0))
        throw InvalidInput("initial excited-state amplitude must have |psi0| <= 1");
    require_resolves_emitter(grid, emitter);

    const double h = grid.dt();
    const Complex lambda{emitter.gamma / 2.0, -emitter.delta};
    const double g = units::coupling_g(emitter.gamma);
    const std::int64_t n_t = grid.n_time;

    const DriveSampler drive{in_a, in_b, grid.n_neg};
    const StepWeights half = step_weights(lambda, h / 2.0);
    const StepWeights full = step_weights(lambda, h);

    EmitterTrajectory tr;
    tr.times.reserve(static_cast<size_t>(n_t) + 2);
    tr.psi.reserve(static_cast<size_t>(n_t) + 2);
    tr.times.push_back(0.0);
    tr.psi.push_back(psi0);

    Complex psi = psi0;
    Complex d_prev = drive.at_start();
    for (std::int64_t k = 0; k < n_t; ++k) {
        const StepWeights& w = (k == 0) ? half : full;
        const Complex d = drive.at_staggered(k);
        psi = w.decay * psi - g * (w.w0 * d_prev + w.w1 * d);
        d_prev = d;
        tr.times.push_back((static_cast<double>(k) + 0.5) * h);
        tr.psi.push_back(psi);
    }
    const Complex d_final = drive.at_end(n_t);
    psi = half.decay * psi - g * (half.w0 * d_prev + half.w1 * d_final);
    tr.times.push_back(grid.t_final());
    tr.psi.push_back(psi);
    return tr;
}

ScatterResult scatter_single(const Envelope& in_a, const Envelope& in_b,
                             const EmitterParams& emitter, const Grid& grid) {
    const double norm_in = detection_probability(in_a) + detection_probability(in_b);
    if (norm_in > 1.0 + kInputNormTol) {
        std::ostringstream os;
        os << "combined input norm " << norm_in << " exceeds 1 + " << kInputNormTol;
        throw InvalidInput(os.str());
    }

    EmitterTrajectory tr = excitation_amplitude(in_a, in_b, emitter, Complex{}, grid);
    if (max_population(tr) > 1.0 + 1e-6)
        throw InternalError("excited-state population exceeded 1; integration unstable");
    const double residual = std::norm(tr.end());
    if (residual > kReadoutPopulationTol) {
        std::ostringstream os;
        os << "emitter still holds population " << residual
           << " at t_final; extend the run time";
        throw PrematureReadout(os.str());
    }

    const double beta = units::emission_beta(emitter.gamma);
    const std::int64_t n = grid.n_points();
    const std::int64_t n_t = grid.n_time;
    Envelope out_a = zero_envelope(grid);
    Envelope out_b = zero_envelope(grid);
    for (std::int64_t i = 0; i < n; ++i) {
        const std::int64_t rel = i - grid.n_neg;
        Complex va = sample_or_zero(in_a, i - n_t);
        if (rel >= 0 && rel < n_t) va += beta * tr.at_staggered(n_t - 1 - rel);
        Complex vb = sample_or_zero(in_b, i + n_t);
        if (rel >= -n_t && rel < 0) vb += beta * tr.at_staggered(n_t + rel);
        out_a.amps[static_cast<size_t>(i)] = va;
        out_b.amps[static_cast<size_t>(i)] = vb;
    }

    const Probability p_a = make_probability(detection_probability(out_a), kInputNormTol);
    const Probability p_b = make_probability(detection_probability(out_b), kInputNormTol);
    return {std::move(out_a), std::move(out_b), std::move(tr), p_a, p_b};
}

QmzScatter scatter_qmz(const Envelope& in_a, const EmitterParams& emitter1,
                       const EmitterParams& emitter2, const Grid& grid) {
    validate(emitter2);
    require_resolves_emitter(grid, emitter2);

    ScatterResult stage1 = scatter_single(in_a, zero_envelope(grid), emitter1, grid);

    // Stage-2 window: long enough for the whole stage-1 packet train plus
    // the emitter-2 decay run-out.
    const double dz = grid.dz;
    const std::int64_t pad = static_cast<std::int64_t>(
        std::ceil(kLongTimeFactor / (emitter2.gamma * dz) - 1e-9));
    const std::int64_t n_t2 = grid.n_time + pad;
    const Grid grid2 = Grid::aligned(dz, n_t2, n_t2, n_t2);

    // Channel swap with reversal and shift: the b1 output front (earliest
    // emission) lands just left of z = 0 as the a2 input, the a1 output
    // front just right of z = 0 as the b2 input, zero path difference.
    const std::int64_t c_a = grid.n_neg + n_t2 - grid.n_time - 1;
    const std::int64_t c_b = grid.n_neg + n_t2 + grid.n_time - 1;
    const std::int64_t n2 = grid2.n_points();
    Envelope in_a2 = zero_envelope(grid2);
    Envelope in_b2 = zero_envelope(grid2);
    for (std::int64_t i2 = 0; i2 < n2; ++i2) {
        in_a2.amps[static_cast<size_t>(i2)] = sample_or_zero(stage1.out_b, c_a - i2);
        in_b2.amps[static_cast<size_t>(i2)] = sample_or_zero(stage1.out_a, c_b - i2);
    }

    double lost = 0.0;
    for (std::int64_t i1 = 0; i1 < grid.n_points(); ++i1) {
        if (c_a - i1 < 0 || c_a - i1 >= n2)
            lost += std::norm(stage1.out_b.amps[static_cast<size_t>(i1)]);
        if (c_b - i1 < 0 || c_b - i1 >= n2)
            lost += std::norm(stage1.out_a.amps[static_cast<size_t>(i1)]);
    }
    lost *= dz * units::detection_prefactor();
    if (lost > kRemapLossTol) {
        std::ostringstream os;
        os << "stage-1 output carries probability " << lost
           << " outside the stage-2 window";
        throw GridWindowError(os.str());
    }

    ScatterResult stage2 = scatter_single(in_a2, in_b2, emitter2, grid2);
    return {std::move(stage1), std::move(stage2)};
}

std::vector<double> norm_history(const Envelope& in_a, const Envelope& in_b,
                                 const EmitterParams& emitter, const Grid& grid) {
    const EmitterTrajectory tr = excitation_amplitude(in_a, in_b, emitter, Complex{}, grid);
    const double beta = units::emission_beta(emitter.gamma);
    const double weight = grid.dz * units::detection_prefactor();
    const std::int64_t n = grid.n_points();
    const std::int64_t n_neg = grid.n_neg;
    const std::int64_t n_pos = grid.n_pos;
    const std::int64_t n_t = grid.n_time;

    // Running plain sums of |field|^2 per channel. Advancing time by one
    // step shifts each field by one sample exactly, so only the samples
    // entering, leaving or gaining the newly emitted value change.
    double sum_a = 0.0, sum_b = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        sum_a += std::norm(in_a.amps[static_cast<size_t>(i)]);
        sum_b += std::norm(in_b.amps[static_cast<size_t>(i)]);
    }

    const auto emitted_a_last = [&](std::int64_t k) {  // channel a, rightmost sample
        Complex v = sample_or_zero(in_a, n - 1 - k);
        if (k >= n_pos && k - n_pos < n_t) v += beta * tr.at_staggered(k - n_pos);
        return v;
    };
    const auto emitted_b_first = [&](std::int64_t k) {  // channel b, leftmost sample
        Complex v = sample_or_zero(in_b, k);
        if (k >= n_neg && k - n_neg < n_t) v += beta * tr.at_staggered(k - n_neg);
        return v;
    };
    const auto population = [&](std::int64_t k) {
        if (k == 0) return std::norm(tr.start());
        if (k == n_t) return std::norm(tr.end());
        return std::norm(0.5 * (tr.at_staggered(k - 1) + tr.at_staggered(k)));
    };

    std::vector<double> total(static_cast<size_t>(n_t) + 1);
    const auto record = [&](std::int64_t k) {
        total[static_cast<size_t>(k)] = weight * (sum_a + sum_b) + population(k);
    };

    record(0);
    for (std::int64_t k = 0; k < n_t; ++k) {
        const Complex emitted = beta * tr.at_staggered(k);
        const Complex pre_a = sample_or_zero(in_a, n_neg - 1 - k);
        sum_a += std::norm(pre_a + emitted) - std::norm(pre_a) -
                 std::norm(emitted_a_last(k));
        const Complex pre_b = sample_or_zero(in_b, n_neg + k);
        sum_b += std::norm(pre_b + emitted) - std::norm(pre_b) -
                 std::norm(emitted_b_first(k));
        record(k + 1);
    }
    return total;
}

}  // namespace qmz
