#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "qmz/errors.hpp"
#include "qmz/sweep.hpp"

using namespace qmz;

namespace {

SweepSpec small_analytic_spec() {
    SweepSpec s;
    s.method = Method::analytic;
    s.scan_variable = ScanVariable::delta_both;
    s.range = ScanRange{-2.0, 2.0, 9, Spacing::linear};
    s.fixed.linewidth = 0.001;
    s.stage = Stage::two;
    return s;
}

const SweepRow& row_at(const std::vector<SweepRow>& rows, double value) {
    for (const auto& r : rows)
        if (std::abs(r.scan_value - value) < 1e-12) return r;
    REQUIRE(false);
    return rows.front();
}

}  // namespace

TEST_CASE("sweep specs are validated") {
    SweepSpec s = small_analytic_spec();

    s.range.n_points = 1;
    CHECK_THROWS_AS(run_sweep(s), InvalidInput);

    s = small_analytic_spec();
    s.range.start = 2.0;
    s.range.stop = -2.0;
    CHECK_THROWS_AS(run_sweep(s), InvalidInput);

    s = small_analytic_spec();
    s.range = ScanRange{-1.0, 10.0, 5, Spacing::log};
    CHECK_THROWS_AS(run_sweep(s), InvalidInput);

    s = small_analytic_spec();
    s.scan_variable = ScanVariable::delta2;
    s.stage = Stage::one;
    CHECK_THROWS_AS(run_sweep(s), InvalidInput);

    s = small_analytic_spec();
    s.scan_variable = ScanVariable::linewidth;
    s.range = ScanRange{-0.5, 0.5, 3, Spacing::linear};
    CHECK_THROWS_AS(run_sweep(s), InvalidInput);  // hits linewidth <= 0
}

TEST_CASE("scan coordinates hit both endpoints with the requested spacing") {
    const std::vector<double> lin = scan_values(ScanRange{-3.0, 3.0, 121, Spacing::linear});
    REQUIRE(lin.size() == 121);
    CHECK(lin.front() == -3.0);
    CHECK(lin.back() == 3.0);
    CHECK(lin[70] == doctest::Approx(0.5).epsilon(1e-14));
    for (size_t i = 1; i < lin.size(); ++i)
        CHECK(lin[i] - lin[i - 1] == doctest::Approx(0.05).epsilon(1e-10));

    const std::vector<double> lg = scan_values(ScanRange{0.01, 10.0, 41, Spacing::log});
    REQUIRE(lg.size() == 41);
    CHECK(lg.front() == 0.01);
    CHECK(lg.back() == 10.0);
    CHECK(lg[20] == doctest::Approx(std::sqrt(0.1)).epsilon(1e-13));
    for (size_t i = 2; i < lg.size(); ++i)
        CHECK(lg[i] / lg[i - 1] ==
              doctest::Approx(lg[1] / lg[0]).epsilon(1e-10));
}

TEST_CASE("scan point substitution touches only the scanned field") {
    SweepSpec s = small_analytic_spec();
    s.fixed = QmzParams{1.5, 0.8, 0.1, -0.2, 0.3};

    s.scan_variable = ScanVariable::delta1;
    QmzParams q = at_scan_point(s, 7.0);
    CHECK(q.delta1 == 7.0);
    CHECK(q.delta2 == -0.2);
    CHECK(q.linewidth == 0.3);

    s.scan_variable = ScanVariable::delta2;
    q = at_scan_point(s, 7.0);
    CHECK(q.delta1 == 0.1);
    CHECK(q.delta2 == 7.0);

    s.scan_variable = ScanVariable::delta_both;
    q = at_scan_point(s, -1.0);
    CHECK(q.delta1 == -1.0);
    CHECK(q.delta2 == -1.0);

    s.scan_variable = ScanVariable::linewidth;
    q = at_scan_point(s, 2.5);
    CHECK(q.linewidth == 2.5);
    CHECK(q.gamma1 == 1.5);
    CHECK(q.gamma2 == 0.8);
}

TEST_CASE("narrowband interferometer sweep peaks where both paths balance") {
    FigurePreset preset = figure_preset("fig3");
    REQUIRE(preset.groups.size() == 1);
    SweepSpec spec = preset.groups.front().spec;
    spec.method = Method::analytic;  // keep the scan cheap
    const auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 121);
    for (size_t i = 1; i < rows.size(); ++i)
        CHECK(rows[i].scan_value > rows[i - 1].scan_value);

    const SweepRow& peak = row_at(rows, 0.5);
    CHECK(peak.analytic->p_a.value == doctest::Approx(1.0).epsilon(5e-3));
    const SweepRow& mirror_peak = row_at(rows, -0.5);
    CHECK(mirror_peak.analytic->p_a.value == doctest::Approx(1.0).epsilon(5e-3));
    CHECK(!peak.dynamics.has_value());
    CHECK(!peak.max_discrepancy.has_value());
}

TEST_CASE("opposite-detuning sweep routes the photon to opposite ports") {
    FigurePreset preset = figure_preset("fig4");
    SweepSpec spec = preset.groups.front().spec;
    spec.method = Method::analytic;
    const auto rows = run_sweep(spec);

    const SweepRow& left = row_at(rows, -0.5);
    CHECK(left.analytic->p_b.value == doctest::Approx(1.0).epsilon(5e-3));
    const SweepRow& right = row_at(rows, 0.5);
    CHECK(right.analytic->p_a.value == doctest::Approx(1.0).epsilon(5e-3));
}

TEST_CASE("opposite detunings keep the outputs separated at every linewidth") {
    FigurePreset preset = figure_preset("fig5");
    REQUIRE(preset.groups.size() == 3);
    CHECK(preset.groups[0].label == "black");
    CHECK(preset.groups[2].label == "blue");

    SweepSpec blue = preset.groups[2].spec;
    blue.method = Method::analytic;
    const auto rows = run_sweep(blue);
    REQUIRE(rows.size() == 41);
    double min_split = 1.0;
    for (const auto& r : rows)
        min_split = std::min(
            min_split, std::abs(r.analytic->p_a.value - r.analytic->p_b.value));
    CHECK(min_split > 0.1);
}

TEST_CASE("three-way comparison stays tight in the narrowband regime") {
    SweepSpec s;
    s.method = Method::all;
    s.scan_variable = ScanVariable::delta1;
    s.range = ScanRange{-2.0, 2.0, 5, Spacing::linear};
    s.fixed.linewidth = 0.001;
    s.stage = Stage::one;
    const auto rows = run_sweep(s);
    for (const auto& r : rows) {
        REQUIRE(r.analytic.has_value());
        REQUIRE(r.dynamics.has_value());
        REQUIRE(r.transfer.has_value());
        REQUIRE(r.max_discrepancy.has_value());
        CHECK(*r.max_discrepancy <= 5e-3);
        CHECK(std::abs(r.analytic->p_a.value - r.dynamics->p_a.value) <= 1e-3);
    }
}

TEST_CASE("two-stage comparison rows carry consistent dynamics probabilities") {
    SweepSpec s;
    s.method = Method::all;
    s.scan_variable = ScanVariable::linewidth;
    s.range = ScanRange{0.5, 2.0, 3, Spacing::log};
    s.fixed.delta1 = 0.5;
    s.fixed.delta2 = -0.5;
    s.stage = Stage::two;
    const auto rows = run_sweep(s);
    for (const auto& r : rows) {
        CHECK(std::abs(r.analytic->p_a.value - r.dynamics->p_a.value) <= 1e-3);
        CHECK(std::abs(r.dynamics->p_a.value + r.dynamics->p_b.value - 1.0) <=
              1e-3);
        // the monochromatic method ignores the linewidth, so at Delta ~ gamma
        // it must disagree with the pulsed ones
        CHECK(*r.max_discrepancy > 0.01);
    }
}

TEST_CASE("sweeps are deterministic") {
    SweepSpec s = small_analytic_spec();
    s.method = Method::all;
    s.scan_variable = ScanVariable::linewidth;
    s.range = ScanRange{0.8, 1.2, 2, Spacing::linear};
    const auto a = run_sweep(s);
    const auto b = run_sweep(s);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(std::memcmp(&a[i].scan_value, &b[i].scan_value, sizeof(double)) == 0);
        const auto same = [](const MethodPair& x, const MethodPair& y) {
            return std::memcmp(&x.p_a.value, &y.p_a.value, sizeof(double)) == 0 &&
                   std::memcmp(&x.p_b.value, &y.p_b.value, sizeof(double)) == 0;
        };
        CHECK(same(*a[i].analytic, *b[i].analytic));
        CHECK(same(*a[i].dynamics, *b[i].dynamics));
        CHECK(same(*a[i].transfer, *b[i].transfer));
        CHECK(std::memcmp(&*a[i].max_discrepancy, &*b[i].max_discrepancy,
                          sizeof(double)) == 0);
    }
}

TEST_CASE("grid budget violations name the offending scan point") {
    SweepSpec s;
    s.method = Method::dynamics;
    s.scan_variable = ScanVariable::linewidth;
    s.range = ScanRange{0.01, 10.0, 5, Spacing::log};
    s.stage = Stage::one;
    s.max_grid_points = 10'000;
    try {
        run_sweep(s);
        FAIL("expected a resource error");
    } catch (const ResourceLimit& e) {
        CHECK(std::string(e.what()).find("scan point 0") != std::string::npos);
    }
}

TEST_CASE("figure presets are enumerable and validated") {
    CHECK(figure_preset_names().size() == 5);
    for (const auto& name : figure_preset_names()) {
        const FigurePreset p = figure_preset(name);
        CHECK(p.name == name);
        REQUIRE(!p.groups.empty());
        for (const auto& g : p.groups) CHECK_NOTHROW(validate(g.spec));
    }
    CHECK(figure_preset("fig2b").groups.size() == 2);
    try {
        figure_preset("fig9");
        FAIL("expected a validation error");
    } catch (const InvalidInput& e) {
        CHECK(std::string(e.what()).find("fig5") != std::string::npos);
    }
}
