#pragma once

#include <array>

#include "qmz/core.hpp"

namespace qmz {

// 2x2 monochromatic scattering matrix in the channel basis, row-major,
// acting on the column vector [a, b]^T.
struct TransferMatrix2 {
    std::array<Complex, 4> entries{};

    Complex at(int row, int col) const { return entries[2 * row + col]; }
    Complex& at(int row, int col) { return entries[2 * row + col]; }
};

// Dimensionless scattering strength lambda = gamma/(2*delta). Exact
// resonance (delta = 0) is a distinguished marker rather than an IEEE
// infinity; the matrix limit there is closed-form.
struct LambdaParam {
    double value = 0.0;
    bool at_resonance = false;

    static LambdaParam of(double value);
    static LambdaParam resonant() { return {0.0, true}; }
    // lambda for a physical emitter; maps delta = 0 (or a lambda that
    // overflows) to the resonant marker.
    static LambdaParam from_detuning(double gamma, double delta);
};

enum class Channel { a, b };

// Single-emitter matrix [[t, r], [r, t]] with t = 1/(1 - i*lambda),
// r = i*lambda/(1 - i*lambda); the resonant marker yields the limit
// [[0, -1], [-1, 0]] (full reflection with a sign flip).
TransferMatrix2 emitter_matrix(const LambdaParam& lambda);

// Two-emitter interferometer: M(lambda2) * swap * M(lambda1), where the
// channel swap routes each output of emitter 1 to the opposite input of
// emitter 2.
TransferMatrix2 qmz_matrix(const LambdaParam& lambda1, const LambdaParam& lambda2);

struct OutputProbabilities {
    Probability p_a;
    Probability p_b;
};

// Squared moduli of the matrix column selected by the input channel,
// normalized by the column norm. Requires m unitary within 1e-9 entrywise.
OutputProbabilities output_probabilities(const TransferMatrix2& m, Channel input);

}  // namespace qmz
