#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "expanse/entanglement.hpp"
#include "expanse/figures.hpp"
#include "expanse/fitconfig.hpp"
#include "expanse/grid.hpp"
#include "expanse/selftest.hpp"
#include "expanse/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitFit = 3;

struct GlobalFlags {
    std::string out_path;
    std::string format = "csv";
    bool quick = false;
};

std::ostream& open_output(std::ofstream& file, const GlobalFlags& flags) {
    if (flags.out_path.empty()) {
        return std::cout;
    }
    file.open(flags.out_path);
    if (!file) {
        throw std::invalid_argument("cannot open output file '" + flags.out_path + "'");
    }
    return file;
}

char separator_for(const GlobalFlags& flags) {
    if (flags.format == "csv") {
        return ',';
    }
    if (flags.format == "tsv") {
        return '\t';
    }
    throw std::invalid_argument("unknown format '" + flags.format + "' (expected csv or tsv)");
}

int cmd_report(double k, double m, double epsilon, double sigma_rate, double s, bool as_json,
               const GlobalFlags& flags) {
    const expanse::EntanglementReport report =
        expanse::full_report(expanse::InitialState(s), k,
                             expanse::ExpansionModel(epsilon, sigma_rate, m));
    std::ofstream file;
    std::ostream& os = open_output(file, flags);
    if (as_json) {
        nlohmann::json j;
        j["parameters"] = {{"k", report.k},
                           {"m", report.m},
                           {"epsilon", report.epsilon},
                           {"sigma_rate", report.sigma_rate},
                           {"s", report.s},
                           {"theta", report.theta}};
        j["e_ab"] = report.e_ab;
        j["e_ab_clamped"] = report.e_ab_clamped;
        j["e_abar_bbar"] = report.e_abar_bbar;
        j["e_a_bbar"] = report.e_a_bbar;
        j["e_a_abar"] = report.e_a_abar;
        j["e_a_rest"] = report.e_a_rest;
        j["e_abar_rest"] = report.e_abar_rest;
        j["residual"] = report.residual;
        os << j.dump(2) << "\n";
        return kExitOk;
    }
    os << "parameters: k=" << expanse::format_double(report.k)
       << " m=" << expanse::format_double(report.m)
       << " epsilon=" << expanse::format_double(report.epsilon)
       << " sigma_rate=" << expanse::format_double(report.sigma_rate)
       << " s=" << expanse::format_double(report.s) << "\n";
    os << "theta       = " << expanse::format_double(report.theta) << "\n";
    os << "e_ab        = " << expanse::format_double(report.e_ab)
       << (report.e_ab_clamped ? "   (clamped to the separable branch)" : "") << "\n";
    os << "e_a_abar    = " << expanse::format_double(report.e_a_abar) << "\n";
    os << "e_a_bbar    = " << expanse::format_double(report.e_a_bbar) << "\n";
    os << "e_abar_bbar = " << expanse::format_double(report.e_abar_bbar) << "\n";
    os << "e_a_rest    = " << expanse::format_double(report.e_a_rest) << "\n";
    os << "e_abar_rest = " << expanse::format_double(report.e_abar_rest) << "\n";
    os << "residual    = " << expanse::format_double(report.residual) << "\n";
    return kExitOk;
}

int cmd_figure(const std::string& name, const std::string& curves, int points,
               const GlobalFlags& flags) {
    std::vector<double> overrides;
    if (!curves.empty()) {
        std::istringstream tokens(curves);
        std::string item;
        while (std::getline(tokens, item, ',')) {
            overrides.push_back(std::stod(item));
        }
    }
    const expanse::Table table = expanse::figure_table(name, overrides, points);
    std::ofstream file;
    std::ostream& os = open_output(file, flags);
    expanse::write_table(os, table, separator_for(flags));
    return kExitOk;
}

int cmd_fit(const std::string& config_path, const GlobalFlags& flags) {
    const expanse::FitConfig cfg = expanse::load_fit_config(config_path);
    const expanse::FitResult result = expanse::fit_parameters(cfg.problem, cfg.options);

    std::cout << "converged   = " << (result.converged ? "yes" : "no") << "\n";
    std::cout << "degenerate  = " << (result.degenerate ? "yes" : "no") << "\n";
    for (const auto& [name, value] : result.estimates) {
        std::cout << name << " = " << expanse::format_double(value) << "\n";
    }
    std::cout << "rss         = " << expanse::format_double(result.rss) << "\n";
    std::cout << "evaluations = " << result.evaluations << "\n";

    // Residual table for the fitted point.
    expanse::ParameterPoint p;
    auto lookup = [&](const std::string& name) {
        auto known = cfg.problem.known.find(name);
        if (known != cfg.problem.known.end()) {
            return known->second;
        }
        return result.estimates.at(name);
    };
    p.m = lookup("m");
    p.s = lookup("s");
    p.epsilon = lookup("epsilon");
    p.sigma_rate = lookup("sigma_rate");

    std::ofstream file;
    std::ostream& os = open_output(file, flags);
    const char sep = separator_for(flags);
    os << "# expanse " << expanse::kVersion << " fit residuals for " << config_path << "\n";
    os << "k" << sep << "quantity" << sep << "observed" << sep << "modeled" << sep << "residual"
       << "\n";
    for (const auto& obs : cfg.problem.observations) {
        p.k = obs.k;
        const double modeled = expanse::forward_model(obs.quantity, p);
        os << expanse::format_double(obs.k) << sep << expanse::to_string(obs.quantity) << sep
           << expanse::format_double(obs.value) << sep << expanse::format_double(modeled) << sep
           << expanse::format_double(modeled - obs.value) << "\n";
    }
    return (result.converged && !result.degenerate) ? kExitOk : kExitFit;
}

int cmd_selftest(bool inject_fault, const GlobalFlags& flags) {
    const std::vector<expanse::SuiteResult> results =
        expanse::run_selftest(flags.quick, inject_fault);
    bool all_passed = true;
    for (const auto& suite : results) {
        all_passed = all_passed && suite.passed;
        std::cout << (suite.passed ? "[PASS] " : "[FAIL] ") << std::left << std::setw(24)
                  << suite.name << std::right << std::fixed << std::setprecision(3)
                  << suite.seconds << " s";
        if (!suite.passed) {
            std::cout << "  " << suite.detail;
        }
        std::cout << "\n";
    }
    std::cout << (all_passed ? "all suites passed" : "FAILURES detected") << "\n";
    return all_passed ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian entanglement in a smoothly expanding universe"};
    app.set_version_flag("--version", expanse::kVersion);
    app.require_subcommand(1);

    GlobalFlags flags;
    app.add_option("--out", flags.out_path, "Write tabular output to this path (default: stdout)");
    app.add_option("--format", flags.format, "Tabular output format: csv or tsv")
        ->check(CLI::IsMember({"csv", "tsv"}));
    app.add_flag("--quick", flags.quick, "Reduced grids (selftest)");

    double k = 1.0, m = 1.0, epsilon = 1.0, sigma_rate = 1.0, s = 1.0;
    bool as_json = false;
    CLI::App* report = app.add_subcommand("report", "All entanglement values at one point");
    report->add_option("--k", k, "Mode momentum")->check(CLI::PositiveNumber);
    report->add_option("--m", m, "Field mass")->check(CLI::NonNegativeNumber);
    report->add_option("--epsilon", epsilon, "Expansion volume")->check(CLI::PositiveNumber);
    report->add_option("--sigma-rate", sigma_rate, "Expansion rapidity")
        ->check(CLI::PositiveNumber);
    report->add_option("--s", s, "Input squeezing")->check(CLI::NonNegativeNumber);
    report->add_flag("--json", as_json, "Machine-readable output");

    std::string figure_name;
    std::string curves;
    int points = 0;
    CLI::App* figure = app.add_subcommand("figure", "Parameter sweep as a table");
    figure->add_option("name", figure_name, "One of: fig1a fig1b fig2a fig2b fig3a-fig3f fig4a fig4b")
        ->required();
    figure->add_option("--curves", curves, "Comma-separated curve values overriding the default set");
    figure->add_option("--points", points, "Samples along the sweep axis");

    std::string config_path;
    CLI::App* fit = app.add_subcommand("fit", "Recover parameters from observations");
    fit->add_option("config", config_path, "Fit configuration file")->required();

    bool inject_fault = false;
    CLI::App* selftest = app.add_subcommand("selftest", "Run every invariant suite");
    selftest->add_flag("--inject-fault", inject_fault, "")->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (report->parsed()) {
            return cmd_report(k, m, epsilon, sigma_rate, s, as_json, flags);
        }
        if (figure->parsed()) {
            return cmd_figure(figure_name, curves, points, flags);
        }
        if (fit->parsed()) {
            return cmd_fit(config_path, flags);
        }
        if (selftest->parsed()) {
            return cmd_selftest(inject_fault, flags);
        }
    } catch (const expanse::physicality_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitNumeric;
    } catch (const expanse::numeric_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitNumeric;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}
