#include "expanse/figures.hpp"

#include <ostream>
#include <sstream>
#include <stdexcept>

#include "expanse/entanglement.hpp"
#include "expanse/grid.hpp"
#include "expanse/inverse.hpp"
#include "expanse/version.hpp"

namespace expanse {

namespace {

const std::vector<double> kMomentumCurves = {0.5, 1.0, 2.0, 4.0};
const std::vector<double> kVolumeCurves = {0.5, 1.0, 2.0, 4.0};
const std::vector<double> kSqueezingCurves = {0.5, 1.0, 1.5, 2.0};

SweepConfig base_sweep(const std::string& x, const std::string& quantity) {
    SweepConfig cfg;
    cfg.parameter = x;
    cfg.quantity = quantity;
    if (x == "m") {
        cfg.min = 1e-3;
        cfg.max = 1e3;
        cfg.count = 121;
        cfg.log_scale = true;
    } else {
        cfg.min = 0.1;
        cfg.max = 6.0;
        cfg.count = 120;
        cfg.log_scale = false;
    }
    return cfg;
}

double evaluate(const SweepConfig& cfg, double x, double curve) {
    ParameterPoint p;
    p.k = cfg.k;
    p.m = cfg.m;
    p.s = cfg.s;
    p.epsilon = cfg.epsilon;
    p.sigma_rate = cfg.sigma_rate;
    auto assign = [&](const std::string& name, double value) {
        if (name == "k") {
            p.k = value;
        } else if (name == "m") {
            p.m = value;
        } else if (name == "s") {
            p.s = value;
        } else if (name == "epsilon") {
            p.epsilon = value;
        } else if (name == "sigma_rate") {
            p.sigma_rate = value;
        } else {
            throw std::invalid_argument("sweep: unknown parameter '" + name + "'");
        }
    };
    assign(cfg.parameter, x);
    if (!cfg.curve_parameter.empty()) {
        assign(cfg.curve_parameter, curve);
    }

    const EntanglementReport report =
        full_report(InitialState(p.s), p.k, ExpansionModel(p.epsilon, p.sigma_rate, p.m));
    if (cfg.quantity == "e_ab") return report.e_ab;
    if (cfg.quantity == "e_a_abar") return report.e_a_abar;
    if (cfg.quantity == "e_a_rest") return report.e_a_rest;
    if (cfg.quantity == "e_abar_rest") return report.e_abar_rest;
    if (cfg.quantity == "residual") return report.residual;
    throw std::invalid_argument("sweep: unknown quantity '" + cfg.quantity + "'");
}

}  // namespace

std::vector<std::string> figure_names() {
    return {"fig1a", "fig1b", "fig2a", "fig2b", "fig3a", "fig3b",
            "fig3c", "fig3d", "fig3e", "fig3f", "fig4a", "fig4b"};
}

SweepConfig figure_sweep(const std::string& name, const std::vector<double>& curve_override,
                         int points_override) {
    SweepConfig cfg;
    if (name == "fig1a") {
        cfg = base_sweep("sigma_rate", "e_ab");
        cfg.curve_parameter = "k";
        cfg.curve_values = kMomentumCurves;
    } else if (name == "fig1b") {
        cfg = base_sweep("m", "e_ab");
        cfg.curve_parameter = "epsilon";
        cfg.curve_values = kVolumeCurves;
    } else if (name == "fig2a") {
        cfg = base_sweep("sigma_rate", "e_a_abar");
        cfg.curve_parameter = "k";
        cfg.curve_values = kMomentumCurves;
    } else if (name == "fig2b") {
        cfg = base_sweep("m", "e_a_abar");
        cfg.curve_parameter = "epsilon";
        cfg.curve_values = kVolumeCurves;
    } else if (name == "fig3a" || name == "fig3d") {
        cfg = base_sweep("sigma_rate", name == "fig3a" ? "e_a_rest" : "e_abar_rest");
        cfg.curve_parameter = "s";
        cfg.curve_values = kSqueezingCurves;
    } else if (name == "fig3b" || name == "fig3e") {
        cfg = base_sweep("epsilon", name == "fig3b" ? "e_a_rest" : "e_abar_rest");
        cfg.curve_parameter = "k";
        cfg.curve_values = kMomentumCurves;
    } else if (name == "fig3c" || name == "fig3f") {
        cfg = base_sweep("m", name == "fig3c" ? "e_a_rest" : "e_abar_rest");
    } else if (name == "fig4a") {
        cfg = base_sweep("sigma_rate", "residual");
        cfg.curve_parameter = "k";
        cfg.curve_values = kMomentumCurves;
    } else if (name == "fig4b") {
        cfg = base_sweep("m", "residual");
        cfg.curve_parameter = "epsilon";
        cfg.curve_values = kVolumeCurves;
    } else {
        throw std::invalid_argument("unknown figure '" + name + "'");
    }
    if (!curve_override.empty()) {
        if (cfg.curve_parameter.empty()) {
            throw std::invalid_argument("figure '" + name + "' has no curve parameter to override");
        }
        cfg.curve_values = curve_override;
    }
    if (points_override > 0) {
        if (points_override < 2) {
            throw std::invalid_argument("figure: point count must be >= 2");
        }
        cfg.count = points_override;
    }
    cfg.label = name;
    return cfg;
}

Table run_sweep(const SweepConfig& cfg) {
    if (cfg.count < 2 || !(cfg.min < cfg.max)) {
        throw std::invalid_argument("sweep: need count >= 2 and min < max");
    }
    const std::vector<double> xs = cfg.log_scale ? logspace(cfg.min, cfg.max, cfg.count)
                                                 : linspace(cfg.min, cfg.max, cfg.count);
    const bool has_curves = !cfg.curve_parameter.empty();
    const std::vector<double> curves = has_curves ? cfg.curve_values : std::vector<double>{0.0};
    if (has_curves && curves.empty()) {
        throw std::invalid_argument("sweep: empty curve set");
    }

    Table table;
    table.header.push_back(cfg.parameter);
    for (double c : curves) {
        if (has_curves) {
            table.header.push_back(cfg.quantity + "[" + cfg.curve_parameter + "=" +
                                   format_double(c) + "]");
        } else {
            table.header.push_back(cfg.quantity);
        }
    }

    std::ostringstream prov;
    prov << "expanse " << kVersion;
    if (!cfg.label.empty()) {
        prov << " figure=" << cfg.label;
    }
    prov << " quantity=" << cfg.quantity << " sweep=" << cfg.parameter
         << " range=[" << format_double(cfg.min) << "," << format_double(cfg.max) << "]"
         << " points=" << cfg.count << " scale=" << (cfg.log_scale ? "log" : "linear");
    if (has_curves) {
        prov << " curves=" << cfg.curve_parameter << "{";
        for (size_t i = 0; i < curves.size(); ++i) {
            prov << (i ? "," : "") << format_double(curves[i]);
        }
        prov << "}";
    }
    prov << " fixed{";
    bool first = true;
    auto fixed = [&](const std::string& name, double value) {
        if (name == cfg.parameter || name == cfg.curve_parameter) {
            return;
        }
        prov << (first ? "" : ",") << name << "=" << format_double(value);
        first = false;
    };
    fixed("k", cfg.k);
    fixed("m", cfg.m);
    fixed("s", cfg.s);
    fixed("epsilon", cfg.epsilon);
    fixed("sigma_rate", cfg.sigma_rate);
    prov << "}";
    table.provenance = prov.str();

    for (double x : xs) {
        std::vector<double> row;
        row.reserve(curves.size() + 1);
        row.push_back(x);
        for (double c : curves) {
            row.push_back(evaluate(cfg, x, c));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

Table figure_table(const std::string& name, const std::vector<double>& curve_override,
                   int points_override) {
    return run_sweep(figure_sweep(name, curve_override, points_override));
}

void write_table(std::ostream& os, const Table& table, char separator) {
    os << "# " << table.provenance << "\n";
    for (size_t i = 0; i < table.header.size(); ++i) {
        os << (i ? std::string(1, separator) : "") << table.header[i];
    }
    os << "\n";
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            os << (i ? std::string(1, separator) : "") << format_double(row[i]);
        }
        os << "\n";
    }
}

}  // namespace expanse
