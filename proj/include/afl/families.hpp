#pragma once

// Closed-form parameter families obtained from the eigenvalue order
// conditions, and their canonical text form.
//
//   traditional            R = S = 3, T = 1 - nu, U = nu
//   second:R=..,S=..,T=..  U from the second-order condition
//   third:R=..,S=..        T, U from the third-order conditions
//   method3:R=..           third-order with S = R
//   fourth:R=..            S, T, U from the fourth-order conditions
//   superduper             fourth-order with R = 6/(2 - nu)
//   halfcfl:R=..           fourth-order conditions evaluated at nu = 1/2
//   custom:R=..,S=..,T=..,U=..

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <type_traits>
#include <variant>

#include "afl/core.hpp"

namespace afl {

namespace family {

struct Traditional {};
struct SecondOrder { double R, S, T; };
struct ThirdOrder { double R, S; };
struct Method3 { double R; };
struct FourthOrder { double R; };
struct SuperDuper {};
struct HalfCflExact { double R; };
struct Custom { SchemeParameters params; };

}  // namespace family

using FamilySpec = std::variant<family::Traditional, family::SecondOrder, family::ThirdOrder,
                                family::Method3, family::FourthOrder, family::SuperDuper,
                                family::HalfCflExact, family::Custom>;

/// U from the second-order condition U = (R - 2ST + S) / (2R). The R = 0
/// branch (any S, T = 1/2, U free) is expressed with Custom parameters.
inline double second_order_U(double R, double S, double T) {
    if (R == 0.0) {
        throw ConfigError("second-order condition with R = 0 requires T = 1/2; use custom parameters");
    }
    return (R - 2.0 * S * T + S) / (2.0 * R);
}

struct TUPair {
    double T;
    double U;
};

inline TUPair third_order_TU(double R, double S, double nu) {
    const double sum = R + S;
    if (sum == 0.0) {
        throw ConfigError("third-order conditions need R + S != 0");
    }
    const double T = -(nu + 1.0) * R / 3.0 + R * R / sum + 0.5;
    const double U = (2.0 * S * (nu - 3.0 * R / sum + 1.0) + 3.0) / 6.0;
    return {T, U};
}

struct STUTriple {
    double S;
    double T;
    double U;
};

inline STUTriple fourth_order_STU(double R, double nu) {
    const double denom = -nu * nu + nu + 2.0;
    if (denom == 0.0 || nu == 2.0) {
        throw ConfigError("fourth-order conditions are singular at this Courant number");
    }
    const double S = 18.0 / denom - R;
    const double T = (9.0 - (nu + 1.0) * R * ((nu - 2.0) * R + 6.0)) / 18.0;
    const double U = (-(nu - 2.0) * (nu + 1.0) * R * R - 6.0 * (nu + 4.0) * R + 9.0 * (nu - 14.0) / (nu - 2.0)) / 18.0;
    return {S, T, U};
}

inline SchemeParameters super_duper(CourantNumber nu) {
    const double c = nu.value();
    return {6.0 / (2.0 - c), 6.0 / (1.0 + c), 0.5, 0.5};
}

/// Parameters exact at nu = 1/2: S = 8 - R, T = (R-2)^2/8, U = (R-6)^2/8.
inline SchemeParameters half_cfl_exact(double R) {
    return {R, 8.0 - R, (R - 2.0) * (R - 2.0) / 8.0, (R - 6.0) * (R - 6.0) / 8.0};
}

inline SchemeParameters resolve(const FamilySpec& spec, CourantNumber nu) {
    const double c = nu.value();
    SchemeParameters p = std::visit(
        [c, nu](const auto& f) -> SchemeParameters {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, family::Traditional>) {
                return {3.0, 3.0, 1.0 - c, c};
            } else if constexpr (std::is_same_v<F, family::SecondOrder>) {
                return {f.R, f.S, f.T, second_order_U(f.R, f.S, f.T)};
            } else if constexpr (std::is_same_v<F, family::ThirdOrder>) {
                const auto tu = third_order_TU(f.R, f.S, c);
                return {f.R, f.S, tu.T, tu.U};
            } else if constexpr (std::is_same_v<F, family::Method3>) {
                const auto tu = third_order_TU(f.R, f.R, c);
                return {f.R, f.R, tu.T, tu.U};
            } else if constexpr (std::is_same_v<F, family::FourthOrder>) {
                const auto stu = fourth_order_STU(f.R, c);
                return {f.R, stu.S, stu.T, stu.U};
            } else if constexpr (std::is_same_v<F, family::SuperDuper>) {
                return super_duper(nu);
            } else if constexpr (std::is_same_v<F, family::HalfCflExact>) {
                return half_cfl_exact(f.R);
            } else {
                return f.params;
            }
        },
        spec);
    p.validate();
    return p;
}

/// Formal order of the principal eigenvalue guaranteed by the family's
/// conditions (eigenvalue error is O(theta^(order + 1))).
inline int eigenvalue_order(const FamilySpec& spec) {
    return std::visit(
        [](const auto& f) -> int {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, family::SecondOrder>) {
                return 2;
            } else if constexpr (std::is_same_v<F, family::FourthOrder> || std::is_same_v<F, family::SuperDuper> ||
                                 std::is_same_v<F, family::HalfCflExact>) {
                return 4;
            } else if constexpr (std::is_same_v<F, family::Custom>) {
                return 1;
            } else {
                return 3;
            }
        },
        spec);
}

// ---------------------------------------------------------------------------
// Text form

namespace detail {

inline std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) { return std::tolower(ch); });
    return out;
}

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

inline double parse_real(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
        throw ConfigError("invalid real value '" + text + "' for key '" + key + "'");
    }
    return v;
}

/// "k1=v1,k2=v2" with case-insensitive keys.
inline std::map<std::string, double> parse_kv_reals(std::string_view body, const std::string& context) {
    std::map<std::string, double> out;
    if (trim(body).empty()) {
        return out;
    }
    std::stringstream ss{std::string(body)};
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("expected key=value in '" + context + "', got '" + item + "'");
        }
        const std::string key = lower(trim(item.substr(0, eq)));
        out[key] = parse_real(item.substr(eq + 1), key);
    }
    return out;
}

inline double require(const std::map<std::string, double>& kv, const std::string& key, const std::string& context) {
    const auto it = kv.find(lower(key));
    if (it == kv.end()) {
        throw ConfigError("family '" + context + "' is missing parameter " + key);
    }
    return it->second;
}

inline void allow_only(const std::map<std::string, double>& kv, std::initializer_list<const char*> keys,
                       const std::string& context) {
    for (const auto& [k, v] : kv) {
        const bool known = std::any_of(keys.begin(), keys.end(), [&](const char* key) { return lower(key) == k; });
        if (!known) {
            throw ConfigError("family '" + context + "' does not take parameter " + k);
        }
    }
}

/// Shortest decimal text that parses back to the same double.
inline std::string format_real(double v) {
    std::string text;
    for (int digits = 1; digits <= 17; ++digits) {
        std::ostringstream s;
        s.precision(digits);
        s << v;
        text = s.str();
        if (std::strtod(text.c_str(), nullptr) == v) {
            break;
        }
    }
    return text;
}

}  // namespace detail

inline FamilySpec parse_family(std::string_view text) {
    const std::string full = detail::trim(text);
    const auto colon = full.find(':');
    const std::string name = detail::lower(detail::trim(full.substr(0, colon)));
    const std::string body = colon == std::string::npos ? std::string{} : full.substr(colon + 1);
    const auto kv = detail::parse_kv_reals(body, full);
    using detail::allow_only;
    using detail::require;

    if (name == "traditional") {
        allow_only(kv, {}, full);
        return family::Traditional{};
    }
    if (name == "superduper") {
        allow_only(kv, {}, full);
        return family::SuperDuper{};
    }
    if (name == "second") {
        allow_only(kv, {"R", "S", "T"}, full);
        return family::SecondOrder{require(kv, "R", full), require(kv, "S", full), require(kv, "T", full)};
    }
    if (name == "third") {
        allow_only(kv, {"R", "S"}, full);
        return family::ThirdOrder{require(kv, "R", full), require(kv, "S", full)};
    }
    if (name == "method3") {
        allow_only(kv, {"R"}, full);
        return family::Method3{require(kv, "R", full)};
    }
    if (name == "fourth") {
        allow_only(kv, {"R"}, full);
        return family::FourthOrder{require(kv, "R", full)};
    }
    if (name == "halfcfl") {
        allow_only(kv, {"R"}, full);
        return family::HalfCflExact{require(kv, "R", full)};
    }
    if (name == "custom") {
        allow_only(kv, {"R", "S", "T", "U"}, full);
        return family::Custom{{require(kv, "R", full), require(kv, "S", full), require(kv, "T", full),
                               require(kv, "U", full)}};
    }
    throw ConfigError("unknown family '" + full + "'");
}

inline std::string to_string(const FamilySpec& spec) {
    using detail::format_real;
    return std::visit(
        [](const auto& f) -> std::string {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, family::Traditional>) {
                return "traditional";
            } else if constexpr (std::is_same_v<F, family::SecondOrder>) {
                return "second:R=" + format_real(f.R) + ",S=" + format_real(f.S) + ",T=" + format_real(f.T);
            } else if constexpr (std::is_same_v<F, family::ThirdOrder>) {
                return "third:R=" + format_real(f.R) + ",S=" + format_real(f.S);
            } else if constexpr (std::is_same_v<F, family::Method3>) {
                return "method3:R=" + format_real(f.R);
            } else if constexpr (std::is_same_v<F, family::FourthOrder>) {
                return "fourth:R=" + format_real(f.R);
            } else if constexpr (std::is_same_v<F, family::SuperDuper>) {
                return "superduper";
            } else if constexpr (std::is_same_v<F, family::HalfCflExact>) {
                return "halfcfl:R=" + format_real(f.R);
            } else {
                return "custom:R=" + format_real(f.params.R) + ",S=" + format_real(f.params.S) +
                       ",T=" + format_real(f.params.T) + ",U=" + format_real(f.params.U);
            }
        },
        spec);
}

}  // namespace afl
