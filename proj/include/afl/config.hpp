#pragma once

// Flat key=value configuration: one pair per line, '#' starts a comment.
// Keys are the ExperimentConfig field names (family, nu, a, x_min, x_max,
// n_cells, t_final, ic, outputs, emit_svg).

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include "afl/core.hpp"
#include "afl/experiments.hpp"
#include "afl/families.hpp"

namespace afl::config {

using KeyValues = std::map<std::string, std::string>;

inline const std::set<std::string>& experiment_keys() {
    static const std::set<std::string> keys{"family", "nu",      "a",  "x_min",   "x_max",
                                            "n_cells", "t_final", "ic", "outputs", "emit_svg"};
    return keys;
}

inline KeyValues parse_key_values(std::istream& in, const std::string& source = "config") {
    KeyValues out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string trimmed = detail::trim(line);
        if (trimmed.empty()) {
            continue;
        }
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source + ":" + std::to_string(line_no) + ": expected key=value");
        }
        const std::string key = detail::trim(trimmed.substr(0, eq));
        if (key.empty()) {
            throw ConfigError(source + ":" + std::to_string(line_no) + ": empty key");
        }
        out[key] = detail::trim(trimmed.substr(eq + 1));
    }
    return out;
}

inline KeyValues load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    return parse_key_values(in, path);
}

inline void write_key_values(std::ostream& os, const KeyValues& kv) {
    for (const auto& [k, v] : kv) {
        os << k << '=' << v << '\n';
    }
}

/// Later entries win.
inline KeyValues merge(KeyValues base, const KeyValues& overrides) {
    for (const auto& [k, v] : overrides) {
        base[k] = v;
    }
    return base;
}

inline void reject_unknown(const KeyValues& kv, const std::set<std::string>& allowed) {
    for (const auto& [k, v] : kv) {
        if (!allowed.count(k)) {
            throw ConfigError("unknown configuration key '" + k + "'");
        }
    }
}

inline const std::string& require(const KeyValues& kv, const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end() || it->second.empty()) {
        throw ConfigError("missing required setting '" + key + "'");
    }
    return it->second;
}

inline double real_value(const KeyValues& kv, const std::string& key, double fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : detail::parse_real(it->second, key);
}

inline long long integer_value(const KeyValues& kv, const std::string& key, long long fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) {
        return fallback;
    }
    const double v = detail::parse_real(it->second, key);
    if (v != std::floor(v)) {
        throw ConfigError("setting '" + key + "' must be an integer, got '" + it->second + "'");
    }
    return static_cast<long long>(v);
}

inline bool bool_value(const KeyValues& kv, const std::string& key, bool fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) {
        return fallback;
    }
    const std::string v = detail::lower(it->second);
    if (v == "true" || v == "1" || v == "yes" || v == "on") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no" || v == "off") {
        return false;
    }
    throw ConfigError("setting '" + key + "' must be a boolean, got '" + it->second + "'");
}

/// Wraps a ConfigError raised while interpreting one key so the message names it.
template <typename F>
auto for_key(const std::string& key, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        if (what.find('\'' + key + '\'') != std::string::npos) {
            throw;
        }
        throw ConfigError("invalid setting '" + key + "': " + what);
    }
}

/// Builds a validated ExperimentConfig. `nu` and `t_final` are required;
/// the rest default to the reference setup (a = 1 on [-5, 5], 100 cells).
inline ExperimentConfig build_experiment_config(const KeyValues& kv, const std::string& default_outputs = ".") {
    reject_unknown(kv, experiment_keys());
    ExperimentConfig c;
    c.family = for_key("family", [&] {
        const auto it = kv.find("family");
        return it == kv.end() ? FamilySpec{family::Traditional{}} : parse_family(it->second);
    });
    c.nu = for_key("nu", [&] { return detail::parse_real(require(kv, "nu"), "nu"); });
    for_key("nu", [&] { return CourantNumber(c.nu).value(); });
    c.a = real_value(kv, "a", 1.0);
    if (!(c.a > 0.0)) {
        throw ConfigError("setting 'a' must be positive");
    }
    c.x_min = real_value(kv, "x_min", -5.0);
    c.x_max = real_value(kv, "x_max", 5.0);
    c.n_cells = integer_value(kv, "n_cells", 100);
    c.t_final = for_key("t_final", [&] { return detail::parse_real(require(kv, "t_final"), "t_final"); });
    if (!(c.t_final >= 0.0)) {
        throw ConfigError("setting 't_final' must be nonnegative");
    }
    const Grid1D grid = for_key("n_cells", [&] { return make_grid(c.x_min, c.x_max, c.n_cells); });
    const auto ic_it = kv.find("ic");
    c.ic_text = ic_it == kv.end() ? "sine:m=10" : ic_it->second;
    c.ic = for_key("ic", [&] {
        auto ic = parse_initial_condition(c.ic_text, grid);
        ic.check_resolvable(grid);
        return ic;
    });
    const auto out_it = kv.find("outputs");
    c.outputs = out_it == kv.end() ? default_outputs : out_it->second;
    c.emit_svg = bool_value(kv, "emit_svg", false);
    // Resolving here surfaces singular family parameters as config errors.
    for_key("family", [&] { return resolve(c.family, CourantNumber(c.nu)); });
    return c;
}

}  // namespace afl::config
