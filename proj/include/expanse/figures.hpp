#pragma once

#include <iosfwd>
#include <string>
#include <vector>

// Parameter sweeps behind the `figure` command. Each figure fixes every
// parameter not on its axes to 1 and emits one column per curve; the curve
// sets are a documented default, overridable from the CLI, and recorded in
// the provenance line.

namespace expanse {

struct SweepConfig {
    std::string label;       ///< figure name, recorded in the provenance line
    std::string parameter;   ///< swept parameter: "sigma_rate", "epsilon", or "m"
    double min = 0.0;
    double max = 0.0;
    int count = 0;
    bool log_scale = false;
    std::string curve_parameter;  ///< empty for single-curve figures
    std::vector<double> curve_values;
    std::string quantity;    ///< e_ab, e_a_abar, e_a_rest, e_abar_rest, residual
    double k = 1.0, m = 1.0, epsilon = 1.0, sigma_rate = 1.0, s = 1.0;
};

struct Table {
    std::string provenance;  ///< emitted as a '#' comment ahead of the header
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

std::vector<std::string> figure_names();

/// Sweep definition for a named figure; throws on unknown names.
SweepConfig figure_sweep(const std::string& name, const std::vector<double>& curve_override = {},
                         int points_override = 0);

Table run_sweep(const SweepConfig& config);

Table figure_table(const std::string& name, const std::vector<double>& curve_override = {},
                   int points_override = 0);

/// Provenance comment, header row, then one row per abscissa value.
void write_table(std::ostream& os, const Table& table, char separator = ',');

}  // namespace expanse
