#ifndef TRANSONIC_CONFIG_HPP
#define TRANSONIC_CONFIG_HPP

#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "transonic/errors.hpp"
#include "transonic/force.hpp"
#include "transonic/linear_solver.hpp"

namespace transonic {

// Run configuration, parsed from a plain key=value file with [section]
// headers. Every key has a default; unknown keys are rejected.
struct RunConfig {
    GasConfig gas;

    ForceKind force_kind = ForceKind::linear;
    std::vector<double> force_params;
    std::optional<double> force_amplitude;  // absent: calibrate to the sonic state
    std::vector<double> force_xs, force_fs; // table kind only

    int N_modes = 12;
    int Q_nodes = 96;
    int M_x1 = 160;

    SigmaSchedule sigma;

    double eps = 1e-3;
    double tol_fp = 1e-9;
    int max_iter = 30;
    double damping = 1.0;
    double delta0_override = -1.0;  // <= 0: use sqrt(eps)

    std::string inlet_kind = "builtin";
    double inlet_amplitude = 2e-5;
    double beta0 = 0.25;

    std::string out_dir = "out";
    std::vector<std::string> formats = {"csv", "json", "svg"};

    ForceModel make_force() const {
        ForceModel shape;
        shape.kind = force_kind;
        shape.params = force_params;
        shape.xs = force_xs;
        shape.fs = force_fs;
        if (force_amplitude) {
            shape.amplitude = *force_amplitude;
            check_sign_pattern(shape, gas);
            return shape;
        }
        return calibrate_force(shape, gas);
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& v, const std::string& path, int line) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line) + ": value of '" + path +
                         "' is not a number: '" + v + "'");
    }
}

inline int parse_int(const std::string& v, const std::string& path, int line) {
    try {
        std::size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return static_cast<int>(x);
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line) + ": value of '" + path +
                         "' is not an integer: '" + v + "'");
    }
}

inline std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : v) {
        if (c == ' ' || c == '\t' || c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

inline std::vector<double> parse_list(const std::string& v, const std::string& path, int line) {
    std::vector<double> out;
    for (const std::string& tok : split_list(v)) out.push_back(parse_double(tok, path, line));
    return out;
}

} // namespace detail

inline RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::map<std::string, int> seen;  // key path -> first line
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line = 0;

    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const std::size_t hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = detail::trim(s);
        if (s.empty()) continue;

        if (s.front() == '[') {
            if (s.back() != ']')
                throw ParseError("line " + std::to_string(line) + ": unterminated section header");
            section = detail::trim(s.substr(1, s.size() - 2));
            if (section.empty())
                throw ParseError("line " + std::to_string(line) + ": empty section name");
            continue;
        }

        const std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(line) + ": expected key=value");
        const std::string key = detail::trim(s.substr(0, eq));
        const std::string val = detail::trim(s.substr(eq + 1));
        if (key.empty())
            throw ParseError("line " + std::to_string(line) + ": empty key");
        const std::string path = section.empty() ? key : section + "." + key;

        auto [it, fresh] = seen.emplace(path, line);
        if (!fresh)
            throw ParseError("line " + std::to_string(line) + ": duplicate key '" + path +
                             "' (first set at line " + std::to_string(it->second) + ")");

        auto d = [&] { return detail::parse_double(val, path, line); };
        auto n = [&] { return detail::parse_int(val, path, line); };
        auto lst = [&] { return detail::parse_list(val, path, line); };

        if (path == "gas.gamma") cfg.gas.gamma = d();
        else if (path == "gas.rho0") cfg.gas.rho0 = d();
        else if (path == "gas.u0") cfg.gas.u0 = d();
        else if (path == "gas.L0") cfg.gas.L0 = d();
        else if (path == "gas.L1") cfg.gas.L1 = d();
        else if (path == "force.kind") {
            if (val == "linear") cfg.force_kind = ForceKind::linear;
            else if (val == "polynomial") cfg.force_kind = ForceKind::polynomial;
            else if (val == "sign_jump") cfg.force_kind = ForceKind::sign_jump;
            else if (val == "table") cfg.force_kind = ForceKind::table;
            else throw ValidationError("force.kind: unknown kind '" + val + "'");
        }
        else if (path == "force.params") cfg.force_params = lst();
        else if (path == "force.amplitude") cfg.force_amplitude = d();
        else if (path == "force.xs") cfg.force_xs = lst();
        else if (path == "force.fs") cfg.force_fs = lst();
        else if (path == "discretization.N_modes") cfg.N_modes = n();
        else if (path == "discretization.Q_nodes") cfg.Q_nodes = n();
        else if (path == "discretization.M_x1") cfg.M_x1 = n();
        else if (path == "sigma.sigma0") cfg.sigma.sigma0 = d();
        else if (path == "sigma.levels") cfg.sigma.levels = n();
        else if (path == "sigma.tol_sigma") cfg.sigma.tol_sigma = d();
        else if (path == "sigma.ratio_cap") cfg.sigma.ratio_cap = d();
        else if (path == "fixed_point.eps") cfg.eps = d();
        else if (path == "fixed_point.tol_fp") cfg.tol_fp = d();
        else if (path == "fixed_point.max_iter") cfg.max_iter = n();
        else if (path == "fixed_point.damping") cfg.damping = d();
        else if (path == "fixed_point.delta0_override") cfg.delta0_override = d();
        else if (path == "inlet.kind") cfg.inlet_kind = val;
        else if (path == "inlet.amplitude") cfg.inlet_amplitude = d();
        else if (path == "inlet.beta0") cfg.beta0 = d();
        else if (path == "outputs.directory") cfg.out_dir = val;
        else if (path == "outputs.formats") {
            cfg.formats.clear();
            for (const std::string& f : detail::split_list(val)) cfg.formats.push_back(f);
        }
        else throw ValidationError("unknown key: " + path);
    }

    // validation, cheapest checks first, key paths in the messages
    if (!(cfg.gas.gamma > 1.0)) throw ValidationError("gas.gamma: gamma must exceed 1");
    if (!(cfg.gas.rho0 > 0.0)) throw ValidationError("gas.rho0: must be positive");
    if (!(cfg.gas.u0 > 0.0)) throw ValidationError("gas.u0: must be positive");
    if (!(cfg.gas.L0 < 0.0)) throw ValidationError("gas.L0: must be negative");
    if (!(cfg.gas.L1 > 0.0)) throw ValidationError("gas.L1: must be positive");
    if (cfg.N_modes < 1) throw ValidationError("discretization.N_modes: must be at least 1");
    if (cfg.Q_nodes < 4 * cfg.N_modes)
        throw ValidationError("discretization.Q_nodes: need at least 4 quadrature nodes per mode");
    if (cfg.M_x1 < 9) throw ValidationError("discretization.M_x1: must be at least 9");
    if (!(cfg.sigma.sigma0 > 0.0)) throw ValidationError("sigma.sigma0: must be positive");
    if (cfg.sigma.levels < 1) throw ValidationError("sigma.levels: must be at least 1");
    if (!(cfg.sigma.tol_sigma > 0.0)) throw ValidationError("sigma.tol_sigma: must be positive");
    if (!(cfg.sigma.ratio_cap >= 1.0)) throw ValidationError("sigma.ratio_cap: must be at least 1");
    if (!(cfg.eps >= 0.0)) throw ValidationError("fixed_point.eps: must be non-negative");
    if (!(cfg.tol_fp > 0.0)) throw ValidationError("fixed_point.tol_fp: must be positive");
    if (cfg.max_iter < 1) throw ValidationError("fixed_point.max_iter: must be at least 1");
    if (!(cfg.damping > 0.0 && cfg.damping <= 1.0))
        throw ValidationError("fixed_point.damping: must lie in (0, 1]");
    if (cfg.inlet_kind != "builtin")
        throw ValidationError("inlet.kind: unknown kind '" + cfg.inlet_kind + "'");
    if (!(cfg.beta0 > 0.0 && cfg.beta0 < 0.5))
        throw ValidationError("inlet.beta0: must lie in (0, 0.5)");
    if (!(cfg.inlet_amplitude > 0.0))
        throw ValidationError("inlet.amplitude: must be positive");
    for (const std::string& f : cfg.formats)
        if (f != "csv" && f != "json" && f != "svg" && f != "dat")
            throw ValidationError("outputs.formats: unknown format '" + f + "'");
    return cfg;
}

} // namespace transonic

#endif
