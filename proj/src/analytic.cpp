#include "qmz/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <sstream>

#include "qmz/errors.hpp"

namespace qmz {

namespace {

// Long double throughout: near the removable poles the individual terms
// grow like 1/h^4 of the offset h while their sum stays O(1), so the
// cancellation eats up to ~13 digits and double would be marginal.
using LC = std::complex<long double>;

constexpr long double kFlagScale = 5e-3L;    // |s| below this * gamma1 flags a pole
constexpr long double kOffsetScale = 1e-3L;  // base stencil offset in units of gamma1

struct Denoms {
    LC s_b, s_k1, s_k2;
    long double min_abs() const {
        return std::min({std::abs(s_b), std::abs(s_k1), std::abs(s_k2)});
    }
};

Denoms denominators(long double g1, long double g2, long double d1,
                    long double d2, long double dw) {
    return {LC{(g1 - dw) / 2, -d1},
            LC{(g2 - dw) / 2, -d2},
            LC{(g2 - g1) / 2, -(d2 - d1)}};
}

struct RawConstants {
    LC b, k1, k2;
    long double lambda_sum = 0.0L;
    LC mu;
};

RawConstants eval_raw(long double g1, long double g2, long double d1,
                      long double d2, long double dw) {
    const Denoms s = denominators(g1, g2, d1, d2, dw);
    const LC b = -g1 * std::sqrt(dw / 2) / s.s_b;
    const LC k1 = -(g2 / 2) * (std::sqrt(2 * dw) + 2.0L * b) / s.s_k1;
    const LC k2 = g2 * b / s.s_k2;
    // Overlaps of the output with the input mode, emitter 1's emission mode
    // and emitter 2's emission mode.
    const LC f_in = b + k1;
    const LC f_1 = k2 - b;
    const LC f_2 = -k1 - k2;
    RawConstants r;
    r.b = b;
    r.k1 = k1;
    r.k2 = k2;
    r.lambda_sum =
        std::norm(f_in) / dw + std::norm(f_1) / g1 + std::norm(f_2) / g2;
    r.mu = std::conj(f_in) * f_1 / LC{(dw + g1) / 2, -d1} +
           std::conj(f_in) * f_2 / LC{(dw + g2) / 2, -d2} +
           std::conj(f_1) * f_2 / LC{(g1 + g2) / 2, -(d2 - d1)};
    return r;
}

long double p2_of(const RawConstants& r) {
    return (r.lambda_sum + 2 * r.mu.real()) / 2;
}

struct PoleFlags {
    int count = 0;
    long double max_abs = 0.0L;  // largest flagged |s|
};

PoleFlags flag_poles(const Denoms& s, long double g1) {
    PoleFlags f;
    const long double cut = kFlagScale * g1;
    for (long double a : {std::abs(s.s_b), std::abs(s.s_k1), std::abs(s.s_k2)}) {
        if (a < cut) {
            ++f.count;
            f.max_abs = std::max(f.max_abs, a);
        }
    }
    return f;
}

// Stencil offset: large enough to dominate the distance to the nearest
// flagged pole, larger still when several poles compound (their terms grow
// as a higher inverse power, so roundoff favours a bigger h).
long double stencil_offset(const PoleFlags& f, long double g1) {
    const long double base = kOffsetScale * g1 * (f.count >= 2 ? 4 : 1);
    return std::max(base, 4 * f.max_abs);
}

// The probability is smooth across the poles (they cancel between
// lambda_sum and mu), so its value at a flagged point is recovered from
// offset evaluations. Both detunings shift jointly, (delta1, delta2) ->
// (delta1 + t, delta2 + 2t), which moves all three denominators off their
// zeros at once. The symmetric +-t pair cancels odd orders in t and the
// two-scale Richardson step cancels t^2, leaving O(h^4) truncation. If an
// evaluation point itself lands too close to a pole, h grows and the
// stencil is retried (factor 1.9 so a retry cannot rehit the same pole).
template <typename F>
long double richardson_offset(F eval_ok, long double d1, long double d2,
                              long double h) {
    for (int attempt = 0; attempt < 40; ++attempt, h *= 1.9L) {
        long double avg[2] = {0.0L, 0.0L};
        bool clear = true;
        for (int ti = 0; ti < 2 && clear; ++ti) {
            const long double t = (ti == 0) ? h / 2 : h;
            for (int sign : {-1, 1}) {
                long double value = 0.0L;
                if (!eval_ok(d1 + sign * t, d2 + sign * 2 * t, h / 8, value)) {
                    clear = false;
                    break;
                }
                avg[ti] += value / 2;
            }
        }
        if (clear) return (4 * avg[0] - avg[1]) / 3;
    }
    throw InternalError("offset stencil kept landing on a vanishing denominator");
}

}  // namespace

void validate(const QmzParams& p) {
    validate(p.emitter1());
    validate(p.emitter2());
    validate(p.pulse());
}

Probability p1_reflect(const EmitterParams& emitter, const PulseParams& pulse) {
    validate(emitter);
    validate(pulse);
    const double gp = emitter.gamma + pulse.linewidth;
    const double r = 2 * emitter.delta / gp;
    return make_probability((emitter.gamma / gp) / (1 + r * r), 1e-12);
}

CascadeConstants cascade_constants(const QmzParams& p) {
    validate(p);
    const long double g1 = p.gamma1, g2 = p.gamma2;
    const long double dw = p.linewidth;
    long double d1 = p.delta1, d2 = p.delta2;

    CascadeConstants out;
    const PoleFlags f = flag_poles(denominators(g1, g2, d1, d2, dw), g1);
    if (f.count > 0) {
        long double h = stencil_offset(f, g1);
        int attempt = 0;
        while (denominators(g1, g2, d1 + h, d2 + 2 * h, dw).min_abs() < h / 8) {
            if (++attempt >= 40)
                throw InternalError("offset point kept landing on a vanishing denominator");
            h *= 1.9L;
        }
        d1 += h;
        d2 += 2 * h;
        out.regularized = true;
    }

    const RawConstants r = eval_raw(g1, g2, d1, d2, dw);
    out.b_const = static_cast<Complex>(r.b);
    out.k1 = static_cast<Complex>(r.k1);
    out.k2 = static_cast<Complex>(r.k2);
    out.lambda_sum = static_cast<double>(r.lambda_sum);
    out.mu = static_cast<Complex>(r.mu);
    return out;
}

Probability p2_transmit(const QmzParams& p) {
    validate(p);
    const long double g1 = p.gamma1, g2 = p.gamma2;
    const long double d1 = p.delta1, d2 = p.delta2;
    const long double dw = p.linewidth;

    const PoleFlags f = flag_poles(denominators(g1, g2, d1, d2, dw), g1);
    long double value;
    if (f.count == 0) {
        value = p2_of(eval_raw(g1, g2, d1, d2, dw));
    } else {
        auto eval_ok = [&](long double e1, long double e2, long double clearance,
                           long double& out) {
            if (denominators(g1, g2, e1, e2, dw).min_abs() < clearance) return false;
            out = p2_of(eval_raw(g1, g2, e1, e2, dw));
            return true;
        };
        value = richardson_offset(eval_ok, d1, d2, stencil_offset(f, g1));
    }

    const double v = static_cast<double>(value);
    if (!std::isfinite(v)) throw InternalError("p2 evaluation is non-finite");
    const double excess = std::max({0.0, -v, v - 1.0});
    if (excess > 1e-9) {
        if (excess > 1e-6) {
            std::ostringstream os;
            os << "p2 = " << v << " lies outside [0,1] by " << excess
               << ", beyond the internal tolerance 1e-6";
            throw InternalError(os.str());
        }
        std::fprintf(stderr, "qmz: clamping p2 overshoot of %.3e into [0,1]\n", excess);
    }
    return make_probability(v, 1e-6);
}

}  // namespace qmz
