#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmz/analytic.hpp"
#include "qmz/core.hpp"

namespace qmz {

enum class Method { analytic, dynamics, transfer, all };
enum class ScanVariable { delta1, delta2, delta_both, linewidth };
enum class Spacing { linear, log };
enum class Stage { one, two };

struct ScanRange {
    double start = -3.0;
    double stop = 3.0;
    int n_points = 121;
    Spacing spacing = Spacing::linear;
};

struct SweepSpec {
    Method method = Method::analytic;
    ScanVariable scan_variable = ScanVariable::delta1;
    ScanRange range{};
    QmzParams fixed{};         // the scanned field is ignored
    Stage stage = Stage::two;
    GridOptions grid_options{};
    std::int64_t max_grid_points = std::int64_t(1) << 24;
};

void validate(const SweepSpec& spec);

// Scan coordinates in row order (ascending; log spacing is geometric).
std::vector<double> scan_values(const ScanRange& range);

// The fixed parameter set with the scanned field replaced by value.
QmzParams at_scan_point(const SweepSpec& spec, double value);

struct MethodPair {
    Probability p_a;
    Probability p_b;
};

struct SweepRow {
    double scan_value = 0.0;
    std::optional<MethodPair> analytic;
    std::optional<MethodPair> dynamics;
    std::optional<MethodPair> transfer;
    std::optional<double> max_discrepancy;  // set when method = all
};

// One parameter point, every requested method; scan_value is left at 0.
// max_discrepancy is filled for Method::all exactly as in run_sweep.
SweepRow evaluate_point(const QmzParams& params, Stage stage, Method method,
                        const GridOptions& grid_options = {},
                        std::int64_t max_grid_points = std::int64_t(1) << 24);

std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// Named parameter sets behind the standard plots. Multi-group presets hold
// one sweep per curve family (e.g. the three detuning configurations of the
// linewidth-robustness plot).
struct FigureGroup {
    std::string label;
    SweepSpec spec;
};

struct FigurePreset {
    std::string name;
    std::vector<FigureGroup> groups;
};

const std::vector<std::string>& figure_preset_names();
FigurePreset figure_preset(const std::string& name);

}  // namespace qmz
