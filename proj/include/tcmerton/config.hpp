/**
 * @file config.hpp
 * @brief INI-style run configuration
 *
 *   # comment
 *   [market]       r, mu, sigma                       (required)
 *   [preferences]  p (required), terminal = true|false
 *   [discount]     kind = exponential | type1 | type2 (required)
 *                  exponential: delta; type1: lambda, rho1, rho2; type2: lambda, rho
 *   [finite]       T, steps, demo_times = t1,t2,...
 *   [simulation]   x0, n_paths, n_steps, horizon, max_dt, tail_tolerance, seed
 *   [output]       dir
 *
 * Unknown sections or keys are rejected, as are keys that do not belong to
 * the selected discount kind.
 */

#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tcmerton/csv.hpp"
#include "tcmerton/discounting.hpp"
#include "tcmerton/error.hpp"
#include "tcmerton/preferences.hpp"

namespace tcmerton {

struct SimSettings {
    double x0 = 1.0;
    std::size_t n_paths = 100000;
    std::size_t n_steps = 200;
    std::optional<double> horizon;  // infinite-horizon check; chosen from tail_tolerance when absent
    double max_dt = 2.0;            // cap on the step when the horizon is chosen automatically
    double tail_tolerance = 1e-3;   // relative to the target value
    std::uint64_t seed = 42;

    friend bool operator==(const SimSettings&, const SimSettings&) = default;
};

struct RunConfig {
    MarketParams market{};
    CrraPreferences prefs{};
    DiscountSpec discount = Exponential{0.1};
    std::optional<double> horizon;
    int steps = 1000;
    std::vector<double> demo_times;  // empty: {0, T/4, T/2}
    SimSettings sim;
    std::string output_dir = ".";

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parsed but not yet interpreted INI document: section -> key -> (value, line).
using IniDocument = std::map<std::string, std::map<std::string, std::pair<std::string, int>>>;

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] inline void parse_error(int line, const std::string& msg) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + msg);
}

[[noreturn]] inline void validation_error(int line, const std::string& msg) {
    throw Error(ErrorKind::ValidationError, "line " + std::to_string(line) + ": " + msg);
}

inline double parse_double(std::string_view text, int line) {
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty())
        parse_error(line, "not a decimal number: '" + std::string(text) + "'");
    return value;
}

template <class Int>
Int parse_integer(std::string_view text, int line) {
    Int value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty())
        parse_error(line, "not a non-negative integer: '" + std::string(text) + "'");
    return value;
}

inline bool parse_bool(std::string_view text, int line) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    parse_error(line, "not a boolean: '" + std::string(text) + "'");
}

inline const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"market", {"r", "mu", "sigma"}},
        {"preferences", {"p", "terminal"}},
        {"discount", {"kind", "delta", "lambda", "rho1", "rho2", "rho"}},
        {"finite", {"T", "steps", "demo_times"}},
        {"simulation", {"x0", "n_paths", "n_steps", "horizon", "max_dt", "tail_tolerance", "seed"}},
        {"output", {"dir"}},
    };
    return keys;
}

inline void check_key(const std::string& section, const std::string& key, int line) {
    const auto& s = schema();
    const auto it = s.find(section);
    if (it == s.end()) parse_error(line, "unknown section [" + section + "]");
    if (!it->second.contains(key)) parse_error(line, "unknown key '" + key + "' in [" + section + "]");
}

}  // namespace detail

inline IniDocument parse_ini(std::string_view text) {
    IniDocument doc;
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') detail::parse_error(line_no, "unterminated section header");
            section = std::string(detail::trim(line.substr(1, line.size() - 2)));
            if (!detail::schema().contains(section)) detail::parse_error(line_no, "unknown section [" + section + "]");
            doc[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) detail::parse_error(line_no, "expected key=value");
        if (section.empty()) detail::parse_error(line_no, "key outside of any section");
        const std::string key(detail::trim(line.substr(0, eq)));
        const std::string value(detail::trim(line.substr(eq + 1)));
        detail::check_key(section, key, line_no);
        if (!doc[section].emplace(key, std::pair{value, line_no}).second)
            detail::parse_error(line_no, "duplicate key '" + key + "'");
    }
    return doc;
}

/// Applies an override of the form "section.key=value".
inline void apply_override(IniDocument& doc, std::string_view assignment) {
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq)
        throw Error(ErrorKind::ParseError, "override must look like section.key=value: " + std::string(assignment));
    const std::string section(detail::trim(assignment.substr(0, dot)));
    const std::string key(detail::trim(assignment.substr(dot + 1, eq - dot - 1)));
    detail::check_key(section, key, 0);
    doc[section][key] = {std::string(detail::trim(assignment.substr(eq + 1))), 0};
}

inline RunConfig build_config(const IniDocument& doc) {
    RunConfig cfg;
    auto find = [&](const std::string& section, const std::string& key) -> const std::pair<std::string, int>* {
        const auto s = doc.find(section);
        if (s == doc.end()) return nullptr;
        const auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    };
    auto number = [&](const std::string& section, const std::string& key) -> std::optional<std::pair<double, int>> {
        const auto* entry = find(section, key);
        if (!entry) return std::nullopt;
        return std::pair{detail::parse_double(entry->first, entry->second), entry->second};
    };
    auto required = [&](const std::string& section, const std::string& key) {
        auto v = number(section, key);
        if (!v) throw Error(ErrorKind::ValidationError, "missing required key " + section + "." + key);
        return *v;
    };
    // Ranges are checked key by key so the offending line is reported.
    auto positive = [](std::pair<double, int> v, const char* what) {
        if (!(v.first > 0.0)) detail::validation_error(v.second, std::string(what) + " must be > 0");
        return v.first;
    };
    auto non_negative = [](std::pair<double, int> v, const char* what) {
        if (!(v.first >= 0.0)) detail::validation_error(v.second, std::string(what) + " must be >= 0");
        return v.first;
    };

    cfg.market.sigma = positive(required("market", "sigma"), "sigma");
    cfg.market.r = non_negative(required("market", "r"), "r");
    cfg.market.mu = non_negative(required("market", "mu"), "mu");

    const auto p = required("preferences", "p");
    if (!(p.first < 1.0) || p.first == 0.0) detail::validation_error(p.second, "p must satisfy p < 1 and p != 0");
    cfg.prefs.p = p.first;
    if (const auto* t = find("preferences", "terminal")) cfg.prefs.include_terminal = detail::parse_bool(t->first, t->second);

    const auto* kind = find("discount", "kind");
    if (!kind) throw Error(ErrorKind::ValidationError, "missing required key discount.kind");
    std::set<std::string> allowed{"kind"};
    if (kind->first == "exponential") {
        allowed.insert("delta");
        cfg.discount = Exponential{required("discount", "delta").first};
    } else if (kind->first == "type1") {
        allowed.insert({"lambda", "rho1", "rho2"});
        cfg.discount = TypeI{required("discount", "lambda").first, required("discount", "rho1").first,
                             required("discount", "rho2").first};
    } else if (kind->first == "type2") {
        allowed.insert({"lambda", "rho"});
        cfg.discount = TypeII{required("discount", "lambda").first, required("discount", "rho").first};
    } else {
        detail::parse_error(kind->second, "unknown discount kind '" + kind->first + "'");
    }
    if (const auto s = doc.find("discount"); s != doc.end())
        for (const auto& [key, entry] : s->second)
            if (!allowed.contains(key))
                detail::validation_error(entry.second, "key '" + key + "' does not apply to kind " + kind->first);
    try {
        validate(cfg.discount);
    } catch (const Error& e) {
        throw Error(ErrorKind::ValidationError, e.what());
    }

    if (auto v = number("finite", "T")) cfg.horizon = positive(*v, "T");
    if (const auto* s = find("finite", "steps")) {
        cfg.steps = detail::parse_integer<int>(s->first, s->second);
        if (cfg.steps < 10) detail::validation_error(s->second, "steps must be >= 10");
    }
    if (const auto* d = find("finite", "demo_times")) {
        std::string_view rest = d->first;
        while (!rest.empty()) {
            const auto comma = std::min(rest.find(','), rest.size());
            cfg.demo_times.push_back(detail::parse_double(detail::trim(rest.substr(0, comma)), d->second));
            rest = comma < rest.size() ? rest.substr(comma + 1) : std::string_view{};
        }
        for (double t : cfg.demo_times) {
            if (!(t >= 0.0)) detail::validation_error(d->second, "demo times must be >= 0");
            if (cfg.horizon && !(t < *cfg.horizon)) detail::validation_error(d->second, "demo times must be < T");
        }
    }

    if (auto v = number("simulation", "x0")) cfg.sim.x0 = positive(*v, "x0");
    if (const auto* s = find("simulation", "n_paths")) {
        cfg.sim.n_paths = detail::parse_integer<std::size_t>(s->first, s->second);
        if (cfg.sim.n_paths < 1) detail::validation_error(s->second, "n_paths must be >= 1");
    }
    if (const auto* s = find("simulation", "n_steps")) {
        cfg.sim.n_steps = detail::parse_integer<std::size_t>(s->first, s->second);
        if (cfg.sim.n_steps < 1) detail::validation_error(s->second, "n_steps must be >= 1");
    }
    if (auto v = number("simulation", "horizon")) cfg.sim.horizon = positive(*v, "horizon");
    if (auto v = number("simulation", "max_dt")) cfg.sim.max_dt = positive(*v, "max_dt");
    if (auto v = number("simulation", "tail_tolerance")) cfg.sim.tail_tolerance = positive(*v, "tail_tolerance");
    if (const auto* s = find("simulation", "seed")) cfg.sim.seed = detail::parse_integer<std::uint64_t>(s->first, s->second);

    if (const auto* d = find("output", "dir")) {
        if (d->first.empty()) detail::validation_error(d->second, "output dir must not be empty");
        cfg.output_dir = d->first;
    }
    return cfg;
}

inline RunConfig parse_config(std::string_view text) { return build_config(parse_ini(text)); }

/// Canonical text form; parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const RunConfig& cfg) {
    using csv::number;
    std::ostringstream out;
    out << "[market]\nr=" << number(cfg.market.r) << "\nmu=" << number(cfg.market.mu)
        << "\nsigma=" << number(cfg.market.sigma) << "\n\n";
    out << "[preferences]\np=" << number(cfg.prefs.p) << "\nterminal=" << csv::boolean(cfg.prefs.include_terminal)
        << "\n\n";
    out << "[discount]\n";
    std::visit(overloaded{[&](const Exponential& e) { out << "kind=exponential\ndelta=" << number(e.delta) << "\n"; },
                          [&](const TypeI& d) {
                              out << "kind=type1\nlambda=" << number(d.lambda) << "\nrho1=" << number(d.rho1)
                                  << "\nrho2=" << number(d.rho2) << "\n";
                          },
                          [&](const TypeII& d) {
                              out << "kind=type2\nlambda=" << number(d.lambda) << "\nrho=" << number(d.rho) << "\n";
                          }},
               cfg.discount);
    out << "\n[finite]\n";
    if (cfg.horizon) out << "T=" << number(*cfg.horizon) << "\n";
    out << "steps=" << cfg.steps << "\n";
    if (!cfg.demo_times.empty()) {
        out << "demo_times=";
        for (std::size_t i = 0; i < cfg.demo_times.size(); ++i) out << (i ? "," : "") << number(cfg.demo_times[i]);
        out << "\n";
    }
    out << "\n[simulation]\nx0=" << number(cfg.sim.x0) << "\nn_paths=" << cfg.sim.n_paths
        << "\nn_steps=" << cfg.sim.n_steps << "\n";
    if (cfg.sim.horizon) out << "horizon=" << number(*cfg.sim.horizon) << "\n";
    out << "max_dt=" << number(cfg.sim.max_dt) << "\ntail_tolerance=" << number(cfg.sim.tail_tolerance)
        << "\nseed=" << cfg.sim.seed << "\n\n";
    out << "[output]\ndir=" << cfg.output_dir << "\n";
    return out.str();
}

}  // namespace tcmerton
