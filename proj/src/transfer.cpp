#include "qmz/transfer.hpp"

#include <cmath>
#include <sstream>

#include "qmz/errors.hpp"

namespace qmz {

namespace {

constexpr double kUnitarityTol = 1e-9;

TransferMatrix2 matmul(const TransferMatrix2& l, const TransferMatrix2& r) {
    TransferMatrix2 m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            m.at(i, j) = l.at(i, 0) * r.at(0, j) + l.at(i, 1) * r.at(1, j);
    return m;
}

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

LambdaParam LambdaParam::of(double value) {
    if (!std::isfinite(value))
        throw InvalidInput("lambda must be finite (use the resonant marker for delta = 0)");
    return {value, false};
}

LambdaParam LambdaParam::from_detuning(double gamma, double delta) {
    validate(EmitterParams{gamma, delta});
    if (delta == 0.0) return resonant();
    const double value = gamma / (2.0 * delta);
    if (!std::isfinite(value)) return resonant();
    return {value, false};
}

TransferMatrix2 emitter_matrix(const LambdaParam& lambda) {
    if (lambda.at_resonance) return {{Complex{0.0}, Complex{-1.0}, Complex{-1.0}, Complex{0.0}}};
    if (!std::isfinite(lambda.value)) throw InvalidInput("lambda must be finite");
    const Complex t = 1.0 / Complex{1.0, -lambda.value};
    const Complex r = Complex{0.0, lambda.value} * t;
    return {{t, r, r, t}};
}

TransferMatrix2 qmz_matrix(const LambdaParam& lambda1, const LambdaParam& lambda2) {
    const TransferMatrix2 swap{{Complex{0.0}, Complex{1.0}, Complex{1.0}, Complex{0.0}}};
    return matmul(emitter_matrix(lambda2), matmul(swap, emitter_matrix(lambda1)));
}

OutputProbabilities output_probabilities(const TransferMatrix2& m, Channel input) {
    const double defect = unitarity_defect(m);
    if (!(defect <= kUnitarityTol)) {
        std::ostringstream os;
        os << "matrix is not unitary: largest Gram defect " << defect
           << " exceeds " << kUnitarityTol;
        throw InvalidInput(os.str());
    }
    const int col = (input == Channel::a) ? 0 : 1;
    const double na = std::norm(m.at(0, col));
    const double nb = std::norm(m.at(1, col));
    const double sum = na + nb;
    return {make_probability(na / sum, 1e-12), make_probability(nb / sum, 1e-12)};
}

}  // namespace qmz
