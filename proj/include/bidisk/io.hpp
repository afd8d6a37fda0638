// SPDX-License-Identifier: Apache-2.0
#pragma once

// Series and measure definitions (builtin names, inline JSON or JSON files),
// JSON encodings of results and the decay CSV.
//
// Series JSON:  {"deg":[d1,d2],"coeffs":[[re,im],...]}   row-major, (d1+1)(d2+1) pairs
//               {"builtin":"one_minus_pow","params":{"M":2,"N":3}}
// Measure JSON: {"K":4,"coeffs":[[k,l,re,im],...]}         mirrors filled by conjugation
//               {"builtin":"diagonal_current"}
// Command-line shorthand: builtin:NAME or builtin:NAME:key=value,key=value

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bidisk/analysis.hpp"
#include "bidisk/approximants.hpp"
#include "bidisk/capacity.hpp"
#include "bidisk/error.hpp"
#include "bidisk/series.hpp"

namespace bidisk::io {

using json = nlohmann::json;

struct SeriesSpec {
    TwoVarSeries f;
    std::string label;
    /// Structural family when the builtin has one; explicit grids carry none.
    std::optional<Family> family;
};

namespace detail {

inline double param(const json& params, const char* key, double fallback) {
    if (!params.contains(key)) return fallback;
    if (!params[key].is_number()) throw InputError(std::string("parameter '") + key + "' must be a number");
    return params[key].get<double>();
}

inline int int_param(const json& params, const char* key, int fallback) {
    const double v = param(params, key, fallback);
    if (v != std::floor(v)) throw InputError(std::string("parameter '") + key + "' must be an integer");
    return static_cast<int>(v);
}

/// "k=v,k=v" -> {"k": v, ...}
inline json parse_params(const std::string& text) {
    json params = json::object();
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw InputError("builtin parameter '" + item + "' is not key=value");
        try {
            params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw InputError("builtin parameter '" + item + "' has a non-numeric value");
        }
    }
    return params;
}

/// Accepts builtin shorthand, inline JSON or a path to a JSON file.
inline json load_definition(const std::string& text) {
    if (text.rfind("builtin:", 0) == 0) {
        const std::string rest = text.substr(8);
        const auto colon = rest.find(':');
        json j;
        j["builtin"] = rest.substr(0, colon);
        j["params"] = colon == std::string::npos ? json::object() : parse_params(rest.substr(colon + 1));
        return j;
    }
    std::string body = text;
    if (text.empty() || text.front() != '{') {
        std::ifstream in(text);
        if (!in) throw InputError("cannot open definition file '" + text + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        body = buf.str();
    }
    try {
        return json::parse(body);
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

inline Complex parse_complex(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    throw InputError("coefficient must be a number or a [re, im] pair");
}

}  // namespace detail

inline SeriesSpec builtin_series(const std::string& name, const json& params = json::object()) {
    const Complex one{1.0};
    if (name == "one_minus_z1z2") {
        return {TwoVarSeries::from_rows({{one, 0.0}, {0.0, -one}}), name, Family::diagonal({1, 1})};
    }
    if (name == "product_one_minus") {
        return {TwoVarSeries::from_rows({{one, -one}, {-one, one}}), name, Family::separable()};
    }
    if (name == "one_minus_z1") {
        return {TwoVarSeries::from_rows({{one}, {-one}}), name, Family::onevar()};
    }
    if (name == "one_minus_pow") {
        const DiagonalPattern pat(detail::int_param(params, "M", 1), detail::int_param(params, "N", 1));
        auto f = TwoVarSeries::zero(pat.M, pat.N);
        f.set(0, 0, 1.0);
        f.set(pat.M, pat.N, -1.0);
        return {f, fmt::format("one_minus_pow(M={},N={})", pat.M, pat.N), Family::diagonal(pat)};
    }
    if (name == "cos_pair") {
        const double theta = detail::param(params, "theta", 0.0);
        auto f = TwoVarSeries::zero(2, 2);
        f.set(0, 0, 1.0);
        f.set(1, 1, -2.0 * std::cos(theta));
        f.set(2, 2, 1.0);
        return {f, fmt::format("cos_pair(theta={})", theta), Family::diagonal({1, 1})};
    }
    throw InputError("unknown builtin series '" + name + "'");
}

inline SeriesSpec series_from_json(const json& j) {
    if (!j.is_object()) throw InputError("series definition must be a JSON object");
    if (j.contains("builtin")) {
        if (!j["builtin"].is_string()) throw InputError("'builtin' must be a string");
        return builtin_series(j["builtin"].get<std::string>(), j.value("params", json::object()));
    }
    if (!j.contains("deg") || !j.contains("coeffs")) throw InputError("series JSON needs 'deg' and 'coeffs'");
    const json& deg = j["deg"];
    if (!deg.is_array() || deg.size() != 2 || !deg[0].is_number_integer() || !deg[1].is_number_integer()) {
        throw InputError("'deg' must be [d1, d2] with integers");
    }
    const int d1 = deg[0].get<int>();
    const int d2 = deg[1].get<int>();
    const json& coeffs = j["coeffs"];
    if (!coeffs.is_array()) throw InputError("'coeffs' must be an array");
    std::vector<Complex> values;
    values.reserve(coeffs.size());
    for (const auto& c : coeffs) values.push_back(detail::parse_complex(c));
    return {TwoVarSeries(d1, d2, std::move(values)), "explicit", std::nullopt};
}

inline SeriesSpec parse_series(const std::string& text) { return series_from_json(detail::load_definition(text)); }

/// Measure definition; builtins are materialized up to cutoff K.
inline FourierMeasure parse_measure(const std::string& text, int K) {
    const json j = detail::load_definition(text);
    if (!j.is_object()) throw InputError("measure definition must be a JSON object");
    if (j.contains("builtin")) {
        const std::string name = j["builtin"].get<std::string>();
        if (name == "lebesgue") return FourierMeasure::lebesgue(K);
        if (name == "diagonal_current") return FourierMeasure::diagonal_current(K);
        if (name == "point_mass") return FourierMeasure::point_mass(K);
        throw InputError("unknown builtin measure '" + name + "'");
    }
    if (!j.contains("K") || !j["K"].is_number_integer()) throw InputError("measure JSON needs integer 'K'");
    std::vector<FourierMeasure::Coefficient> given;
    for (const auto& c : j.value("coeffs", json::array())) {
        if (!c.is_array() || c.size() != 4 || !c[0].is_number_integer() || !c[1].is_number_integer() ||
            !c[2].is_number() || !c[3].is_number()) {
            throw InputError("measure coefficient must be [k, l, re, im]");
        }
        given.push_back({c[0].get<int>(), c[1].get<int>(), {c[2].get<double>(), c[3].get<double>()}});
    }
    return FourierMeasure::from_coefficients(j["K"].get<int>(), given);
}

inline json to_json(const TwoVarSeries& f) {
    json coeffs = json::array();
    for (const auto& c : f.coeffs()) coeffs.push_back({c.real(), c.imag()});
    return {{"deg", {f.deg1(), f.deg2()}}, {"coeffs", coeffs}};
}

inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json to_json(const EnergyReport& rep) {
    return {{"K", rep.K},
            {"partial", rep.partial},
            {"terms",
             {{"constant", rep.constant},
              {"axis_z1", rep.axis_z1},
              {"axis_z2", rep.axis_z2},
              {"interior", rep.interior}}}};
}

inline std::string format_number(double v) { return fmt::format("{:.17g}", v); }

/// CSV with header `n,dist_sq,predicted,ratio`; predicted and ratio are empty
/// when no theoretical rate applies.
inline std::string decay_csv(const DecaySeries& ds, const std::optional<TheoryRate>& theory) {
    std::string out = "n,dist_sq,predicted,ratio\n";
    for (const auto& p : ds.points) {
        out += fmt::format("{},{},", p.n, format_number(p.dist_sq));
        const std::optional<double> pred = theory ? theory->value(p.n) : std::nullopt;
        if (pred) {
            out += format_number(*pred) + "," + format_number(p.dist_sq / *pred);
        } else {
            out += ",";
        }
        out += "\n";
    }
    return out;
}

}  // namespace bidisk::io
