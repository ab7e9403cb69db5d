#include "qmz/units.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <initializer_list>

namespace qmz::units {

double detection_prefactor() { return 1.0 / (2.0 * std::numbers::pi * kRho1d * kC); }

double coupling_g(double gamma) { return std::sqrt(gamma / (4.0 * std::numbers::pi * kRho1d)); }

double emission_beta(double gamma) { return std::sqrt(std::numbers::pi * kRho1d * gamma); }

double pulse_front_amplitude(double linewidth) {
    return std::sqrt(2.0 * std::numbers::pi * kRho1d * linewidth) /
           std::sqrt(2.0 * std::numbers::pi * kRho1d * kC);
}

bool identities_hold() {
    if (std::abs(detection_prefactor() - 1.0) > 1e-15) return false;
    for (double gamma : {0.25, 1.0, 3.0}) {
        const double beta = emission_beta(gamma);
        if (std::abs(beta * beta - gamma / 2.0) > 1e-15 * gamma) return false;
        const double g = coupling_g(gamma);
        if (std::abs(g * g - gamma / 2.0) > 1e-15 * gamma) return false;
    }
    return true;
}

namespace {
// Natural-unit identities checked once at startup.
const bool kIdentitiesChecked = [] {
    if (!identities_hold()) {
        std::fputs("qmz: natural-unit identities violated\n", stderr);
        std::abort();
    }
    return true;
}();
}  // namespace

}  // namespace qmz::units
