#include "expanse/fitconfig.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace expanse {

namespace {

std::string trim(const std::string& s) {
    const size_t begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return {};
    }
    const size_t end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& token, const std::string& context) {
    size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != token.size()) {
        throw std::invalid_argument("fit config: bad number '" + token + "' in " + context);
    }
    return value;
}

}  // namespace

FitConfig parse_fit_config(std::istream& is) {
    FitConfig cfg;
    std::set<std::string> seen;
    std::string raw;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        const size_t hash = raw.find('#');
        if (hash != std::string::npos) {
            raw.erase(hash);
        }
        const std::string line = trim(raw);
        if (line.empty()) {
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("fit config line " + std::to_string(line_no) +
                                        ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string where = "line " + std::to_string(line_no);

        if (key != "obs" && !seen.insert(key).second) {
            throw std::invalid_argument("fit config " + where + ": duplicate key '" + key + "'");
        }

        if (key.rfind("known.", 0) == 0) {
            cfg.problem.known[key.substr(6)] = parse_number(value, where);
        } else if (key.rfind("unknown.", 0) == 0) {
            std::istringstream tokens(value);
            std::string lo, hi, extra;
            if (!(tokens >> lo >> hi) || (tokens >> extra)) {
                throw std::invalid_argument("fit config " + where + ": expected 'lo hi' bounds");
            }
            cfg.problem.unknowns[key.substr(8)] =
                Bounds{parse_number(lo, where), parse_number(hi, where)};
        } else if (key == "obs") {
            std::istringstream tokens(value);
            std::string k, quantity, observed, weight;
            if (!(tokens >> k >> quantity >> observed)) {
                throw std::invalid_argument("fit config " + where +
                                            ": expected 'k quantity value [weight]'");
            }
            Observation obs;
            obs.k = parse_number(k, where);
            obs.quantity = quantity_from_string(quantity);
            obs.value = parse_number(observed, where);
            if (tokens >> weight) {
                obs.weight = parse_number(weight, where);
            }
            std::string extra;
            if (tokens >> extra) {
                throw std::invalid_argument("fit config " + where + ": trailing tokens");
            }
            cfg.problem.observations.push_back(obs);
        } else if (key == "grid") {
            cfg.options.grid_per_axis = static_cast<int>(parse_number(value, where));
        } else {
            throw std::invalid_argument("fit config " + where + ": unknown key '" + key + "'");
        }
    }
    return cfg;
}

FitConfig load_fit_config(const std::string& path) {
    std::ifstream file(path);
    if (!file) {
        throw std::invalid_argument("fit config: cannot open '" + path + "'");
    }
    return parse_fit_config(file);
}

}  // namespace expanse
