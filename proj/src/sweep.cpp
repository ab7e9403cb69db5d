#include "qmz/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmz/dynamics.hpp"
#include "qmz/errors.hpp"
#include "qmz/transfer.hpp"

namespace qmz {

namespace {

// Per-method tolerance on p_a + p_b = 1, checked on every row.
double sum_tolerance(Method m) {
    switch (m) {
        case Method::analytic: return 1e-9;
        case Method::transfer: return 1e-12;
        default: return 1e-3;
    }
}

std::string point_tag(int index, double value) {
    return "scan point " + std::to_string(index) + " (scan_value = " +
           std::to_string(value) + ")";
}

MethodPair checked_pair(Probability p_a, Probability p_b, Method m) {
    const double excess = std::abs(p_a.value + p_b.value - 1.0);
    if (excess > sum_tolerance(m))
        throw InternalError("p_a + p_b deviates from 1 by " +
                            std::to_string(excess));
    return MethodPair{p_a, p_b};
}

MethodPair eval_analytic(const QmzParams& q, Stage stage) {
    Probability p_a{}, p_b{};
    if (stage == Stage::one) {
        p_b = p1_reflect(q.emitter1(), q.pulse());
        p_a = make_probability(1.0 - p_b.value, 0.0);
    } else {
        p_a = p2_transmit(q);
        p_b = make_probability(1.0 - p_a.value, 0.0);
    }
    return checked_pair(p_a, p_b, Method::analytic);
}

MethodPair eval_transfer(const QmzParams& q, Stage stage) {
    const LambdaParam l1 = LambdaParam::from_detuning(q.gamma1, q.delta1);
    const TransferMatrix2 m =
        stage == Stage::one
            ? emitter_matrix(l1)
            : qmz_matrix(l1, LambdaParam::from_detuning(q.gamma2, q.delta2));
    const OutputProbabilities out = output_probabilities(m, Channel::a);
    return checked_pair(out.p_a, out.p_b, Method::transfer);
}

MethodPair eval_dynamics(const QmzParams& q, Stage stage,
                         const GridOptions& opts, std::int64_t max_grid_points) {
    std::vector<EmitterParams> emitters{q.emitter1()};
    if (stage == Stage::two) emitters.push_back(q.emitter2());
    const Grid grid = auto_grid(emitters, q.pulse(), opts);
    if (grid.n_points() > max_grid_points)
        throw ResourceLimit("grid of " + std::to_string(grid.n_points()) +
                            " samples exceeds the budget of " +
                            std::to_string(max_grid_points));
    const Envelope in = make_exponential_pulse(q.pulse(), grid);
    const ScatterResult r =
        stage == Stage::one
            ? scatter_single(in, zero_envelope(grid), q.emitter1(), grid)
            : scatter_qmz(in, q.emitter1(), q.emitter2(), grid).stage2;
    return checked_pair(r.p_a, r.p_b, Method::dynamics);
}

double pair_gap(const MethodPair& x, const MethodPair& y) {
    return std::max(std::abs(x.p_a.value - y.p_a.value),
                    std::abs(x.p_b.value - y.p_b.value));
}

SweepSpec preset_spec(Method method, ScanVariable var, ScanRange range,
                      QmzParams fixed, Stage stage) {
    SweepSpec s;
    s.method = method;
    s.scan_variable = var;
    s.range = range;
    s.fixed = fixed;
    s.stage = stage;
    return s;
}

}  // namespace

void validate(const SweepSpec& spec) {
    const ScanRange& r = spec.range;
    if (!std::isfinite(r.start) || !std::isfinite(r.stop))
        throw InvalidInput("scan range must be finite");
    if (r.n_points < 2) throw InvalidInput("scan range needs n_points >= 2");
    if (!(r.start < r.stop))
        throw InvalidInput("scan range start must be below stop");
    if (r.spacing == Spacing::log && !(r.start > 0.0))
        throw InvalidInput("log spacing requires a positive range");
    if (spec.scan_variable == ScanVariable::delta2 && spec.stage != Stage::two)
        throw InvalidInput("scanning delta2 requires a two-stage sweep");
    if (spec.max_grid_points < 2)
        throw InvalidInput("sweep grid budget must allow at least two samples");
}

std::vector<double> scan_values(const ScanRange& range) {
    std::vector<double> v(static_cast<size_t>(range.n_points));
    const double n1 = range.n_points - 1.0;
    for (int i = 0; i < range.n_points; ++i) {
        if (range.spacing == Spacing::linear)
            v[static_cast<size_t>(i)] =
                range.start + (range.stop - range.start) * (i / n1);
        else
            v[static_cast<size_t>(i)] =
                range.start * std::pow(range.stop / range.start, i / n1);
    }
    v.front() = range.start;
    v.back() = range.stop;
    return v;
}

QmzParams at_scan_point(const SweepSpec& spec, double value) {
    QmzParams q = spec.fixed;
    switch (spec.scan_variable) {
        case ScanVariable::delta1: q.delta1 = value; break;
        case ScanVariable::delta2: q.delta2 = value; break;
        case ScanVariable::delta_both: q.delta1 = q.delta2 = value; break;
        case ScanVariable::linewidth: q.linewidth = value; break;
    }
    return q;
}

SweepRow evaluate_point(const QmzParams& params, Stage stage, Method method,
                        const GridOptions& grid_options,
                        std::int64_t max_grid_points) {
    validate(params);
    SweepRow row;
    if (method == Method::analytic || method == Method::all)
        row.analytic = eval_analytic(params, stage);
    if (method == Method::transfer || method == Method::all)
        row.transfer = eval_transfer(params, stage);
    if (method == Method::dynamics || method == Method::all)
        row.dynamics = eval_dynamics(params, stage, grid_options, max_grid_points);
    if (method == Method::all) {
        double gap = pair_gap(*row.analytic, *row.dynamics);
        gap = std::max(gap, pair_gap(*row.analytic, *row.transfer));
        gap = std::max(gap, pair_gap(*row.dynamics, *row.transfer));
        row.max_discrepancy = gap;
    }
    return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    validate(spec);
    const std::vector<double> values = scan_values(spec.range);
    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (size_t i = 0; i < values.size(); ++i) {
        const std::string tag = point_tag(static_cast<int>(i), values[i]);
        const QmzParams q = at_scan_point(spec, values[i]);
        SweepRow row;
        try {
            row = evaluate_point(q, spec.stage, spec.method, spec.grid_options,
                                 spec.max_grid_points);
        } catch (const ResourceLimit& e) {
            throw ResourceLimit(std::string(e.what()) + " at " + tag);
        } catch (const InternalError& e) {
            throw InternalError(std::string(e.what()) + " at " + tag);
        }
        row.scan_value = values[i];
        rows.push_back(std::move(row));
    }
    return rows;
}

const std::vector<std::string>& figure_preset_names() {
    static const std::vector<std::string> names{"fig2a", "fig2b", "fig3",
                                                "fig4", "fig5"};
    return names;
}

FigurePreset figure_preset(const std::string& name) {
    const ScanRange detuning{-3.0, 3.0, 121, Spacing::linear};
    const ScanRange linewidth{0.01, 10.0, 41, Spacing::log};
    QmzParams q;  // gamma1 = gamma2 = 1, zero detunings

    if (name == "fig2a") {
        q.linewidth = 0.001;
        return FigurePreset{
            name, {{"mirror", preset_spec(Method::all, ScanVariable::delta1,
                                          detuning, q, Stage::one)}}};
    }
    if (name == "fig2b") {
        FigurePreset p{name, {}};
        p.groups.push_back({"resonant", preset_spec(Method::all,
                                                    ScanVariable::linewidth,
                                                    linewidth, q, Stage::one)});
        q.delta1 = 0.5;
        p.groups.push_back({"detuned", preset_spec(Method::all,
                                                   ScanVariable::linewidth,
                                                   linewidth, q, Stage::one)});
        return p;
    }
    if (name == "fig3") {
        q.linewidth = 0.001;
        return FigurePreset{
            name, {{"balanced", preset_spec(Method::all, ScanVariable::delta_both,
                                            detuning, q, Stage::two)}}};
    }
    if (name == "fig4") {
        q.linewidth = 0.001;
        q.delta1 = 0.5;
        return FigurePreset{
            name, {{"crossed", preset_spec(Method::all, ScanVariable::delta2,
                                           detuning, q, Stage::two)}}};
    }
    if (name == "fig5") {
        FigurePreset p{name, {}};
        const auto group = [&](const char* label, double d1, double d2) {
            QmzParams g;
            g.delta1 = d1;
            g.delta2 = d2;
            p.groups.push_back({label, preset_spec(Method::all,
                                                   ScanVariable::linewidth,
                                                   linewidth, g, Stage::two)});
        };
        group("black", 0.0, 0.0);
        group("red", 0.5, 0.5);
        group("blue", 0.5, -0.5);
        return p;
    }
    std::string known;
    for (const auto& n : figure_preset_names())
        known += (known.empty() ? "" : ", ") + n;
    throw InvalidInput("unknown figure preset '" + name + "' (known: " + known +
                       ")");
}

}  // namespace qmz
