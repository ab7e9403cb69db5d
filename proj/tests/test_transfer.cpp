#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include "doctest.h"
#include "qmz/analytic.hpp"
#include "qmz/errors.hpp"
#include "qmz/transfer.hpp"

using namespace qmz;

namespace {

double entrywise_distance(const TransferMatrix2& m, const std::array<Complex, 4>& ref) {
    double worst = 0.0;
    for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(m.entries[k] - ref[k]));
    return worst;
}

const std::array<Complex, 4> kIdentity{Complex{1.0}, Complex{0.0}, Complex{0.0}, Complex{1.0}};
const std::array<Complex, 4> kMinusIdentity{Complex{-1.0}, Complex{0.0}, Complex{0.0},
                                            Complex{-1.0}};
const std::array<Complex, 4> kSwap{Complex{0.0}, Complex{1.0}, Complex{1.0}, Complex{0.0}};

double unitarity_defect(const TransferMatrix2& m) {
    double worst = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Complex gram = std::conj(m.at(0, i)) * m.at(0, j) +
                           std::conj(m.at(1, i)) * m.at(1, j);
            if (i == j) gram -= 1.0;
            worst = std::max(worst, std::abs(gram));
        }
    return worst;
}

}  // namespace

TEST_CASE("lambda construction validates and maps resonance to the marker") {
    CHECK(LambdaParam::of(2.5).value == 2.5);
    CHECK_FALSE(LambdaParam::of(2.5).at_resonance);
    CHECK_THROWS_AS(LambdaParam::of(std::numeric_limits<double>::infinity()), InvalidInput);
    CHECK(LambdaParam::resonant().at_resonance);

    const LambdaParam l = LambdaParam::from_detuning(1.0, 0.25);
    CHECK(l.value == 2.0);
    CHECK(LambdaParam::from_detuning(1.0, 0.0).at_resonance);
    CHECK(LambdaParam::from_detuning(1.0, 1e-320).at_resonance);  // overflow path
    CHECK_THROWS_AS(LambdaParam::from_detuning(-1.0, 0.5), InvalidInput);
}

TEST_CASE("single-emitter matrix hits the three benchmark points") {
    CHECK(entrywise_distance(emitter_matrix(LambdaParam::of(0.0)), kIdentity) == 0.0);

    const TransferMatrix2 balanced = emitter_matrix(LambdaParam::of(1.0));
    CHECK(std::abs(std::norm(balanced.at(0, 0)) - 0.5) <= 1e-15);
    CHECK(std::abs(std::norm(balanced.at(1, 0)) - 0.5) <= 1e-15);

    const TransferMatrix2 mirror = emitter_matrix(LambdaParam::resonant());
    CHECK(entrywise_distance(mirror, {Complex{0.0}, Complex{-1.0}, Complex{-1.0}, Complex{0.0}}) ==
          0.0);
}

TEST_CASE("emitter matrix is unitary for 200 random lambdas") {
    std::mt19937 rng(20240817u);
    std::uniform_real_distribution<double> lam(-50.0, 50.0);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k)
        worst = std::max(worst, unitarity_defect(emitter_matrix(LambdaParam::of(lam(rng)))));
    CHECK(worst <= 1e-12);
}

TEST_CASE("interferometer composition identities") {
    CHECK(entrywise_distance(qmz_matrix(LambdaParam::of(1.0), LambdaParam::of(1.0)),
                             kMinusIdentity) <= 1e-15);
    CHECK(entrywise_distance(qmz_matrix(LambdaParam::of(1.0), LambdaParam::of(-1.0)), kSwap) <=
          1e-15);
    CHECK(entrywise_distance(qmz_matrix(LambdaParam::of(0.0), LambdaParam::of(0.0)), kSwap) ==
          0.0);
    CHECK(entrywise_distance(qmz_matrix(LambdaParam::resonant(), LambdaParam::resonant()), kSwap) ==
          0.0);
}

TEST_CASE("output probabilities select the input column and stay normalized") {
    const OutputProbabilities loop =
        output_probabilities(qmz_matrix(LambdaParam::of(1.0), LambdaParam::of(1.0)), Channel::a);
    CHECK(std::abs(loop.p_a.value - 1.0) <= 1e-15);
    CHECK(std::abs(loop.p_b.value) <= 1e-15);

    const OutputProbabilities crossed =
        output_probabilities(qmz_matrix(LambdaParam::of(1.0), LambdaParam::of(-1.0)), Channel::a);
    CHECK(std::abs(crossed.p_a.value) <= 1e-15);
    CHECK(std::abs(crossed.p_b.value - 1.0) <= 1e-15);

    const OutputProbabilities half =
        output_probabilities(emitter_matrix(LambdaParam::of(1.0)), Channel::a);
    CHECK(std::abs(half.p_a.value - 0.5) <= 1e-15);
    CHECK(std::abs(half.p_b.value - 0.5) <= 1e-15);

    std::mt19937 rng(7u);
    std::uniform_real_distribution<double> lam(-50.0, 50.0);
    for (int k = 0; k < 50; ++k) {
        const TransferMatrix2 m =
            qmz_matrix(LambdaParam::of(lam(rng)), LambdaParam::of(lam(rng)));
        for (Channel in : {Channel::a, Channel::b}) {
            const OutputProbabilities p = output_probabilities(m, in);
            CHECK(std::abs(p.p_a.value + p.p_b.value - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("non-unitary matrices are rejected") {
    TransferMatrix2 stretched{{Complex{2.0}, Complex{0.0}, Complex{0.0}, Complex{1.0}}};
    CHECK_THROWS_AS(output_probabilities(stretched, Channel::a), InvalidInput);
}

TEST_CASE("matches the closed-form probabilities in the monochromatic regime") {
    // lambda_i = gamma_i/(2*delta_i) with a narrowband pulse; resonance is
    // excluded here (lambda diverges) and checked separately below.
    const double linewidth = 1e-6;
    double worst = 0.0;
    for (int i = -60; i <= 60; ++i) {
        if (i == 0) continue;
        const double d1 = 0.05 * i;
        for (int j = -60; j <= 60; j += 3) {
            if (j == 0) continue;
            const double d2 = 0.05 * j;
            const double closed = p2_transmit({1.0, 1.0, d1, d2, linewidth}).value;
            const double mono =
                output_probabilities(qmz_matrix(LambdaParam::from_detuning(1.0, d1),
                                                LambdaParam::from_detuning(1.0, d2)),
                                     Channel::a)
                    .p_a.value;
            worst = std::max(worst, std::abs(closed - mono));
        }
    }
    CHECK(worst <= 1e-3);

    // Resonant marker against the closed form at delta = 0.
    const double closed_res = p2_transmit({1.0, 1.0, 0.0, 0.0, linewidth}).value;
    const OutputProbabilities res = output_probabilities(
        qmz_matrix(LambdaParam::resonant(), LambdaParam::resonant()), Channel::a);
    CHECK(std::abs(closed_res - res.p_a.value) <= 1e-3);

    const double closed_mirror = p1_reflect({1.0, 0.0}, {linewidth}).value;
    const OutputProbabilities mirror =
        output_probabilities(emitter_matrix(LambdaParam::resonant()), Channel::a);
    CHECK(std::abs(closed_mirror - mirror.p_b.value) <= 1e-3);
}
