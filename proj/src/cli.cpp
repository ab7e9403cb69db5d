#include "qmz/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "qmz/dynamics.hpp"
#include "qmz/errors.hpp"
#include "qmz/sweep.hpp"

namespace qmz {

namespace {

std::string version_line() { return std::string("qmz-sim v") + kVersion; }

// ---- output document model -------------------------------------------------

struct Cell {
    bool is_text = false;
    double num = 0.0;
    std::string text;
};

Cell ncell(double v) { return Cell{false, v, {}}; }
Cell tcell(std::string s) { return Cell{true, 0.0, std::move(s)}; }

using Meta = std::vector<std::pair<std::string, Cell>>;

struct Block {
    std::string label;  // group label; empty for single-block documents
    Meta meta;          // per-group fixed parameters
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Trajectory {
    std::vector<double> t;
    std::vector<double> psi_sq;
};

struct Document {
    Meta config;
    std::vector<Block> blocks;
    std::optional<Trajectory> trajectory;
};

// Shortest round-trip decimal, for CSV cells.
std::string csv_num(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// Fixed 17 significant digits, for canonical JSON.
std::string json_num(double v) {
    char buf[40];
    const auto res =
        std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string json_quote(const std::string& s) {
    std::string r = "\"";
    for (const char c : s) {
        if (c == '"' || c == '\\') (r += '\\') += c;
        else if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            r += buf;
        } else r += c;
    }
    return r + "\"";
}

std::string cell_csv(const Cell& c) { return c.is_text ? c.text : csv_num(c.num); }
std::string cell_json(const Cell& c) {
    return c.is_text ? json_quote(c.text) : json_num(c.num);
}

void write_csv(const Document& d, std::ostream& os) {
    os << "# " << version_line() << "\n";
    for (const auto& [k, v] : d.config) os << "# " << k << " = " << cell_csv(v) << "\n";
    bool first = true;
    for (const Block& b : d.blocks) {
        if (!first || !b.label.empty() || !b.meta.empty()) os << "\n";
        if (!b.label.empty()) os << "# group = " << b.label << "\n";
        for (const auto& [k, v] : b.meta) os << "# " << k << " = " << cell_csv(v) << "\n";
        for (size_t i = 0; i < b.columns.size(); ++i)
            os << (i ? "," : "") << b.columns[i];
        os << "\n";
        for (const auto& row : b.rows) {
            for (size_t i = 0; i < row.size(); ++i)
                os << (i ? "," : "") << cell_csv(row[i]);
            os << "\n";
        }
        first = false;
    }
    if (d.trajectory) {
        os << "\n# block = trajectory\nt,psi_sq\n";
        for (size_t i = 0; i < d.trajectory->t.size(); ++i)
            os << csv_num(d.trajectory->t[i]) << ","
               << csv_num(d.trajectory->psi_sq[i]) << "\n";
    }
}

void write_json(const Document& d, std::ostream& os) {
    const bool grouped = !d.blocks.empty() && !d.blocks.front().label.empty();
    os << "{\"config\":{";
    bool first = true;
    for (const auto& [k, v] : d.config) {
        os << (first ? "" : ",") << json_quote(k) << ":" << cell_json(v);
        first = false;
    }
    if (grouped) {
        os << (first ? "" : ",") << "\"groups\":[";
        for (size_t g = 0; g < d.blocks.size(); ++g) {
            const Block& b = d.blocks[g];
            os << (g ? "," : "") << "{\"label\":" << json_quote(b.label);
            for (const auto& [k, v] : b.meta) os << "," << json_quote(k) << ":" << cell_json(v);
            os << "}";
        }
        os << "]";
    }
    os << "},\"rows\":[";
    bool first_row = true;
    for (const Block& b : d.blocks) {
        for (const auto& row : b.rows) {
            os << (first_row ? "" : ",") << "{";
            bool f = true;
            if (grouped) {
                os << "\"group\":" << json_quote(b.label);
                f = false;
            }
            for (size_t i = 0; i < row.size(); ++i) {
                os << (f ? "" : ",") << json_quote(b.columns[i]) << ":"
                   << cell_json(row[i]);
                f = false;
            }
            os << "}";
            first_row = false;
        }
    }
    os << "]";
    if (d.trajectory) {
        os << ",\"trajectory\":{\"t\":[";
        for (size_t i = 0; i < d.trajectory->t.size(); ++i)
            os << (i ? "," : "") << json_num(d.trajectory->t[i]);
        os << "],\"psi_sq\":[";
        for (size_t i = 0; i < d.trajectory->psi_sq.size(); ++i)
            os << (i ? "," : "") << json_num(d.trajectory->psi_sq[i]);
        os << "]}";
    }
    os << ",\"provenance\":" << json_quote(version_line()) << "}\n";
}

void emit(const Document& d, const std::string& format, const std::string& path,
          std::ostream& fallback) {
    const auto write = [&](std::ostream& os) {
        format == "json" ? write_json(d, os) : write_csv(d, os);
    };
    if (path.empty()) {
        write(fallback);
        return;
    }
    std::ofstream file(path);
    if (!file) throw InvalidInput("cannot open output file '" + path + "'");
    write(file);
    if (!file.good()) throw InvalidInput("failed while writing '" + path + "'");
}

// ---- shared row assembly ----------------------------------------------------

const char* method_name(Method m) {
    switch (m) {
        case Method::analytic: return "analytic";
        case Method::dynamics: return "dynamics";
        case Method::transfer: return "transfer";
        default: return "all";
    }
}

const char* variable_name(ScanVariable v) {
    switch (v) {
        case ScanVariable::delta1: return "delta1";
        case ScanVariable::delta2: return "delta2";
        case ScanVariable::delta_both: return "delta_both";
        default: return "linewidth";
    }
}

void append_method_columns(std::vector<std::string>& cols, Method m) {
    const auto add = [&](const char* name) {
        cols.push_back(std::string("p_a_") + name);
        cols.push_back(std::string("p_b_") + name);
    };
    if (m == Method::analytic || m == Method::all) add("analytic");
    if (m == Method::dynamics || m == Method::all) add("dynamics");
    if (m == Method::transfer || m == Method::all) add("transfer");
    if (m == Method::all) cols.push_back("max_discrepancy");
}

void append_method_cells(std::vector<Cell>& row, const SweepRow& r) {
    const auto add = [&](const std::optional<MethodPair>& p) {
        if (!p) return;
        row.push_back(ncell(p->p_a.value));
        row.push_back(ncell(p->p_b.value));
    };
    add(r.analytic);
    add(r.dynamics);
    add(r.transfer);
    if (r.max_discrepancy) row.push_back(ncell(*r.max_discrepancy));
}

// ---- command state ----------------------------------------------------------

struct CliState {
    std::string format = "csv";
    std::string out_path;
    double resolution_factor = 1.0;
    double tfinal_factor = 1.0;

    GridOptions grid_options() const {
        GridOptions g;
        g.resolution_factor = resolution_factor;
        g.tfinal_factor = tfinal_factor;
        return g;
    }

    void check_globals() const {
        if (!(resolution_factor >= 1.0))
            throw InvalidInput("--resolution-factor must be >= 1");
        if (!(tfinal_factor > 0.0) || !std::isfinite(tfinal_factor))
            throw InvalidInput("--tfinal-factor must be > 0");
    }

    void add_grid_meta(Meta& meta) const {
        if (resolution_factor != 1.0)
            meta.emplace_back("resolution_factor", ncell(resolution_factor));
        if (tfinal_factor != 1.0)
            meta.emplace_back("tfinal_factor", ncell(tfinal_factor));
    }
};

struct SingleArgs {
    double gamma = 1.0;
    double delta = 0.0;
    double linewidth = 1.0;
    bool linewidth_set = false;
    Method method = Method::analytic;
    bool trajectory = false;
};

struct QmzArgs {
    QmzParams params;
    bool linewidth_set = false;
    Method method = Method::analytic;
};

struct SweepArgs {
    Method method = Method::analytic;
    ScanVariable scan = ScanVariable::delta1;
    double start = 0.0;
    double stop = 0.0;
    int points = 0;
    Spacing spacing = Spacing::linear;
    Stage stage = Stage::two;
    QmzParams fixed;
};

void warn_monochromatic(Method m, bool linewidth_set, std::ostream& err) {
    if (m == Method::transfer && linewidth_set)
        err << "warning: the transfer method is monochromatic; --linewidth is "
               "ignored\n";
}

Document run_single(const SingleArgs& a, const CliState& st, std::ostream& err) {
    warn_monochromatic(a.method, a.linewidth_set, err);
    QmzParams q;
    q.gamma1 = a.gamma;
    q.delta1 = a.delta;
    q.linewidth = a.linewidth;
    const SweepRow row = evaluate_point(q, Stage::one, a.method, st.grid_options());

    Document doc;
    doc.config.emplace_back("command", tcell("single"));
    doc.config.emplace_back("method", tcell(method_name(a.method)));
    doc.config.emplace_back("gamma", ncell(a.gamma));
    doc.config.emplace_back("delta", ncell(a.delta));
    if (a.method != Method::transfer)
        doc.config.emplace_back("linewidth", ncell(a.linewidth));
    st.add_grid_meta(doc.config);

    Block b;
    append_method_columns(b.columns, a.method);
    std::vector<Cell> cells;
    append_method_cells(cells, row);
    b.rows.push_back(std::move(cells));
    doc.blocks.push_back(std::move(b));

    if (a.trajectory) {
        if (a.method == Method::dynamics || a.method == Method::all) {
            const Grid grid =
                auto_grid({q.emitter1()}, q.pulse(), st.grid_options());
            const Envelope in = make_exponential_pulse(q.pulse(), grid);
            const ScatterResult r =
                scatter_single(in, zero_envelope(grid), q.emitter1(), grid);
            Trajectory tr;
            tr.t = r.trajectory.times;
            tr.psi_sq.reserve(r.trajectory.psi.size());
            for (const Complex& p : r.trajectory.psi)
                tr.psi_sq.push_back(std::norm(p));
            doc.trajectory = std::move(tr);
        } else {
            err << "warning: --trajectory requires the dynamics method; "
                   "ignored\n";
        }
    }
    return doc;
}

Document run_qmz(const QmzArgs& a, const CliState& st, std::ostream& err) {
    warn_monochromatic(a.method, a.linewidth_set, err);
    const SweepRow s1 =
        evaluate_point(a.params, Stage::one, a.method, st.grid_options());
    const SweepRow s2 =
        evaluate_point(a.params, Stage::two, a.method, st.grid_options());

    Document doc;
    doc.config.emplace_back("command", tcell("qmz"));
    doc.config.emplace_back("method", tcell(method_name(a.method)));
    doc.config.emplace_back("gamma1", ncell(a.params.gamma1));
    doc.config.emplace_back("gamma2", ncell(a.params.gamma2));
    doc.config.emplace_back("delta1", ncell(a.params.delta1));
    doc.config.emplace_back("delta2", ncell(a.params.delta2));
    if (a.method != Method::transfer)
        doc.config.emplace_back("linewidth", ncell(a.params.linewidth));
    st.add_grid_meta(doc.config);

    Block b;
    b.columns.push_back("stage");
    append_method_columns(b.columns, a.method);
    for (int stage = 1; stage <= 2; ++stage) {
        std::vector<Cell> cells{ncell(stage)};
        append_method_cells(cells, stage == 1 ? s1 : s2);
        b.rows.push_back(std::move(cells));
    }
    doc.blocks.push_back(std::move(b));
    return doc;
}

void add_sweep_config(Document& doc, const SweepSpec& spec) {
    doc.config.emplace_back("method", tcell(method_name(spec.method)));
    doc.config.emplace_back("scan_variable", tcell(variable_name(spec.scan_variable)));
    doc.config.emplace_back(
        "spacing", tcell(spec.range.spacing == Spacing::log ? "log" : "linear"));
    doc.config.emplace_back("stage",
                            tcell(spec.stage == Stage::one ? "one" : "two"));
    doc.config.emplace_back("start", ncell(spec.range.start));
    doc.config.emplace_back("stop", ncell(spec.range.stop));
    doc.config.emplace_back("n_points", ncell(spec.range.n_points));
}

Meta fixed_param_meta(const SweepSpec& spec) {
    const ScanVariable v = spec.scan_variable;
    Meta m;
    m.emplace_back("gamma1", ncell(spec.fixed.gamma1));
    if (spec.stage == Stage::two)
        m.emplace_back("gamma2", ncell(spec.fixed.gamma2));
    if (v != ScanVariable::delta1 && v != ScanVariable::delta_both)
        m.emplace_back("delta1", ncell(spec.fixed.delta1));
    if (spec.stage == Stage::two && v != ScanVariable::delta2 &&
        v != ScanVariable::delta_both)
        m.emplace_back("delta2", ncell(spec.fixed.delta2));
    if (v != ScanVariable::linewidth && spec.method != Method::transfer)
        m.emplace_back("linewidth", ncell(spec.fixed.linewidth));
    return m;
}

Block sweep_block(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
    Block b;
    b.columns.push_back("scan_value");
    append_method_columns(b.columns, spec.method);
    for (const SweepRow& r : rows) {
        std::vector<Cell> cells{ncell(r.scan_value)};
        append_method_cells(cells, r);
        b.rows.push_back(std::move(cells));
    }
    return b;
}

Document run_sweep_command(const SweepArgs& a, const CliState& st,
                           const char* command) {
    SweepSpec spec;
    spec.method = a.method;
    spec.scan_variable = a.scan;
    spec.range = ScanRange{a.start, a.stop, a.points, a.spacing};
    spec.fixed = a.fixed;
    spec.stage = a.stage;
    spec.grid_options = st.grid_options();

    Document doc;
    doc.config.emplace_back("command", tcell(command));
    add_sweep_config(doc, spec);
    for (auto& [k, v] : fixed_param_meta(spec)) doc.config.emplace_back(k, v);
    st.add_grid_meta(doc.config);
    doc.blocks.push_back(sweep_block(spec, run_sweep(spec)));
    return doc;
}

Document run_figure(const std::string& name, std::optional<Method> method,
                    const CliState& st) {
    FigurePreset preset = figure_preset(name);

    Document doc;
    doc.config.emplace_back("command", tcell("figure"));
    doc.config.emplace_back("preset", tcell(preset.name));
    SweepSpec& lead = preset.groups.front().spec;
    if (method)
        for (auto& g : preset.groups) g.spec.method = *method;
    add_sweep_config(doc, lead);
    st.add_grid_meta(doc.config);

    for (auto& g : preset.groups) {
        g.spec.grid_options = st.grid_options();
        Block b = sweep_block(g.spec, run_sweep(g.spec));
        b.label = g.label;
        b.meta = fixed_param_meta(g.spec);
        doc.blocks.push_back(std::move(b));
    }
    return doc;
}

// ---- argument wiring ---------------------------------------------------------

const std::map<std::string, Method>& method_map() {
    static const std::map<std::string, Method> m{
        {"analytic", Method::analytic},
        {"dynamics", Method::dynamics},
        {"transfer", Method::transfer},
        {"all", Method::all}};
    return m;
}

void add_sweep_options(CLI::App* cmd, SweepArgs& a, bool with_method) {
    if (with_method)
        cmd->add_option("--method", a.method, "evaluation method")
            ->transform(CLI::CheckedTransformer(method_map(), CLI::ignore_case));
    cmd->add_option("--scan", a.scan, "scanned variable")
        ->required()
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, ScanVariable>{
                {"delta1", ScanVariable::delta1},
                {"delta2", ScanVariable::delta2},
                {"delta_both", ScanVariable::delta_both},
                {"linewidth", ScanVariable::linewidth}},
            CLI::ignore_case));
    cmd->add_option("--start", a.start, "scan range start")->required();
    cmd->add_option("--stop", a.stop, "scan range stop")->required();
    cmd->add_option("--points", a.points, "number of scan points")->required();
    cmd->add_option("--spacing", a.spacing, "scan point spacing")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Spacing>{{"linear", Spacing::linear},
                                           {"log", Spacing::log}},
            CLI::ignore_case));
    cmd->add_option("--stage", a.stage, "one emitter or the full cascade")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Stage>{{"one", Stage::one}, {"two", Stage::two}},
            CLI::ignore_case));
    cmd->add_option("--gamma1", a.fixed.gamma1, "first emitter decay rate");
    cmd->add_option("--gamma2", a.fixed.gamma2, "second emitter decay rate");
    cmd->add_option("--delta1", a.fixed.delta1, "first emitter detuning");
    cmd->add_option("--delta2", a.fixed.delta2, "second emitter detuning");
    cmd->add_option("--linewidth", a.fixed.linewidth, "pulse linewidth");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"single-photon scattering on waveguide-coupled emitters"};
    app.name("qmz-sim");
    app.set_version_flag("--version", version_line());
    app.require_subcommand(1);

    CliState st;
    app.add_option("--format", st.format, "output format")
        ->transform(CLI::IsMember({"csv", "json"}, CLI::ignore_case))
        ->capture_default_str();
    app.add_option("--out", st.out_path, "write output to this file");
    app.add_option("--resolution-factor", st.resolution_factor,
                   "multiplies the default 50 samples per scale");
    app.add_option("--tfinal-factor", st.tfinal_factor,
                   "multiplies the default long-time factor 12");

    SingleArgs single_args;
    CLI::App* single = app.add_subcommand(
        "single", "one emitter, one incoming pulse on channel a");
    single->fallthrough();
    single->add_option("--gamma", single_args.gamma, "emitter decay rate");
    single->add_option("--delta", single_args.delta, "laser-emitter detuning");
    CLI::Option* single_lw =
        single->add_option("--linewidth", single_args.linewidth, "pulse linewidth");
    single->add_option("--method", single_args.method, "evaluation method")
        ->transform(CLI::CheckedTransformer(method_map(), CLI::ignore_case));
    single->add_flag("--trajectory", single_args.trajectory,
                     "also emit |psi(t)|^2 (dynamics only)");

    QmzArgs qmz_args;
    CLI::App* qmz = app.add_subcommand("qmz", "two-emitter interferometer");
    qmz->fallthrough();
    qmz->add_option("--gamma1", qmz_args.params.gamma1, "first emitter decay rate");
    qmz->add_option("--gamma2", qmz_args.params.gamma2, "second emitter decay rate");
    qmz->add_option("--delta1", qmz_args.params.delta1, "first emitter detuning");
    qmz->add_option("--delta2", qmz_args.params.delta2, "second emitter detuning");
    CLI::Option* qmz_lw =
        qmz->add_option("--linewidth", qmz_args.params.linewidth, "pulse linewidth");
    qmz->add_option("--method", qmz_args.method, "evaluation method")
        ->transform(CLI::CheckedTransformer(method_map(), CLI::ignore_case));

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep", "scan one parameter");
    sweep->fallthrough();
    add_sweep_options(sweep, sweep_args, true);

    SweepArgs compare_args;
    compare_args.method = Method::all;
    CLI::App* compare = app.add_subcommand(
        "compare", "three-way method comparison over a scan");
    compare->fallthrough();
    add_sweep_options(compare, compare_args, false);

    std::string figure_name;
    Method figure_method_value = Method::all;
    CLI::App* figure = app.add_subcommand("figure", "named preset sweeps");
    figure->fallthrough();
    figure->add_option("preset", figure_name, "preset name")->required();
    CLI::Option* figure_method_opt =
        figure->add_option("--method", figure_method_value,
                           "override the preset method")
            ->transform(CLI::CheckedTransformer(method_map(), CLI::ignore_case));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        st.check_globals();
        single_args.linewidth_set = single_lw->count() > 0;
        qmz_args.linewidth_set = qmz_lw->count() > 0;
        std::optional<Method> figure_method;
        if (figure_method_opt->count() > 0) figure_method = figure_method_value;

        Document doc;
        if (single->parsed()) doc = run_single(single_args, st, err);
        else if (qmz->parsed()) doc = run_qmz(qmz_args, st, err);
        else if (sweep->parsed()) doc = run_sweep_command(sweep_args, st, "sweep");
        else if (compare->parsed())
            doc = run_sweep_command(compare_args, st, "compare");
        else doc = run_figure(figure_name, figure_method, st);
        emit(doc, st.format, st.out_path, out);
        return 0;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const InternalError& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace qmz
