#ifndef METASTABLE_CONFIG_HPP
#define METASTABLE_CONFIG_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "metastable/errors.hpp"
#include "metastable/io.hpp"
#include "metastable/potential.hpp"
#include "metastable/sde.hpp"

namespace metastable {

inline const std::vector<std::string>& known_analyses() {
    static const std::vector<std::string> kAnalyses = {
        "hierarchy", "predict", "spectrum", "capacity", "committor", "simulate", "compare"};
    return kAnalyses;
}

struct McSettings {
    int n = 2000;
    std::optional<double> dt;
    std::uint64_t seed = 0;
    std::optional<double> max_time;
    std::optional<double> target_radius;
    BoxBoundary boundary = BoxBoundary::absorbing;
    int threads = 1;
};

struct ExperimentConfig {
    std::string potential_name;
    ParamMap params;
    std::vector<Monomial> terms; // polynomial only
    std::optional<Box> box;
    std::vector<int> cells; // per axis; empty = default policy

    std::vector<std::string> analyses;
    std::vector<double> epsilons;
    std::optional<double> c1;
    std::optional<double> ball_radius;
    int spectrum_k = 4;
    double compare_tolerance = 0.15;

    McSettings mc;
    std::string out_dir = "out";

    Potential make() const {
        const Box* b = box ? &*box : nullptr;
        return make_potential(potential_name, params, terms, b);
    }

    /// Canonical text form: section/key sorted, 17-digit floats. The config
    /// digest is the hash of this string.
    std::string canonical() const {
        std::ostringstream s;
        s << "potential=" << potential_name << "\n";
        for (const auto& [k, v] : params) s << "param." << k << "=" << format_g17(v) << "\n";
        for (const auto& t : terms) {
            s << "term=" << format_g17(t.coeff);
            for (int e : t.exponents) s << " " << e;
            s << "\n";
        }
        if (box) {
            s << "box=";
            for (std::size_t a = 0; a < box->lo.size(); ++a)
                s << format_g17(box->lo[a]) << " " << format_g17(box->hi[a]) << " ";
            s << "\n";
        }
        s << "cells=";
        for (int c : cells) s << c << " ";
        s << "\nanalyses=";
        for (const auto& a : analyses) s << a << " ";
        s << "\nepsilons=";
        for (double e : epsilons) s << format_g17(e) << " ";
        s << "\n";
        if (c1) s << "c1=" << format_g17(*c1) << "\n";
        if (ball_radius) s << "ball_radius=" << format_g17(*ball_radius) << "\n";
        s << "spectrum_k=" << spectrum_k << "\n";
        s << "compare_tolerance=" << format_g17(compare_tolerance) << "\n";
        s << "mc.n=" << mc.n << "\nmc.seed=" << mc.seed << "\n";
        if (mc.dt) s << "mc.dt=" << format_g17(*mc.dt) << "\n";
        if (mc.max_time) s << "mc.max_time=" << format_g17(*mc.max_time) << "\n";
        if (mc.target_radius) s << "mc.target_radius=" << format_g17(*mc.target_radius) << "\n";
        s << "mc.boundary=" << (mc.boundary == BoxBoundary::absorbing ? "absorbing" : "reflecting")
          << "\n";
        return s.str();
    }

    std::string digest() const { return hex64(fnv1a64(canonical())); }
};

struct ConfigResult {
    std::optional<ExperimentConfig> config;
    std::vector<std::string> errors; // all validation problems, field paths included

    bool ok() const { return errors.empty() && config.has_value(); }
};

namespace detail {

struct RawEntry {
    std::string value;
    int line;
};

struct RawConfig {
    // section -> key -> entries (repeated keys allowed, e.g. polynomial terms)
    std::map<std::string, std::map<std::string, std::vector<RawEntry>>> sections;
};

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

inline RawConfig tokenize_config(const std::string& text) {
    RawConfig raw;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ParseError("unterminated section header", lineno,
                                 static_cast<int>(line.find('[')) + 1);
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty()) throw ParseError("empty section name", lineno, 1);
            raw.sections[section];
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value'", lineno, 1);
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key.empty()) throw ParseError("empty key", lineno, 1);
        if (section.empty())
            throw ParseError("key outside any [section]", lineno, 1);
        raw.sections[section][key].push_back({val, lineno});
    }
    return raw;
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) {
        // tolerate comma-separated lists
        while (!tok.empty() && tok.back() == ',') tok.pop_back();
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

inline std::optional<double> to_double(const std::string& s) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) return std::nullopt;
        return v;
    } catch (...) {
        return std::nullopt;
    }
}

inline std::optional<long long> to_int(const std::string& s) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) return std::nullopt;
        return v;
    } catch (...) {
        return std::nullopt;
    }
}

} // namespace detail

/// Parse the structured key-value experiment grammar. Syntax problems throw
/// ParseError with position; semantic problems are all collected in the
/// result's error list.
inline ConfigResult parse_config(const std::string& text) {
    using detail::split_ws;
    using detail::to_double;
    using detail::to_int;

    ConfigResult result;
    auto raw = detail::tokenize_config(text);
    ExperimentConfig cfg;
    auto err = [&result](const std::string& path, const std::string& msg) {
        result.errors.push_back(path + ": " + msg);
    };

    auto get_one = [&](const std::string& sec, const std::string& key)
        -> std::optional<std::string> {
        auto s = raw.sections.find(sec);
        if (s == raw.sections.end()) return std::nullopt;
        auto k = s->second.find(key);
        if (k == s->second.end() || k->second.empty()) return std::nullopt;
        if (k->second.size() > 1) err(sec + "." + key, "given more than once");
        return k->second.back().value;
    };

    // [potential]
    if (auto name = get_one("potential", "name")) {
        cfg.potential_name = *name;
        auto names = potential_registry_names();
        if (std::find(names.begin(), names.end(), *name) == names.end()) {
            std::string list;
            for (const auto& n : names) list += n + " ";
            err("potential.name", "unknown potential '" + *name + "'; registry: " + list);
        }
    } else {
        err("potential.name", "required");
    }
    if (auto s = raw.sections.find("potential"); s != raw.sections.end()) {
        for (const auto& [key, entries] : s->second) {
            if (key == "name" || key == "box" || key == "term" || key == "dim") continue;
            for (const auto& e : entries) {
                auto v = to_double(e.value);
                if (!v)
                    err("potential." + key, "not a number: '" + e.value + "'");
                else
                    cfg.params[key] = *v;
            }
        }
        if (auto k = s->second.find("term"); k != s->second.end()) {
            for (const auto& e : k->second) {
                auto toks = split_ws(e.value);
                if (toks.size() < 2) {
                    err("potential.term", "need 'coeff exponents...', got '" + e.value + "'");
                    continue;
                }
                Monomial m;
                auto c = to_double(toks[0]);
                if (!c) {
                    err("potential.term", "bad coefficient '" + toks[0] + "'");
                    continue;
                }
                m.coeff = *c;
                bool ok = true;
                for (std::size_t i = 1; i < toks.size(); ++i) {
                    auto ev = to_int(toks[i]);
                    if (!ev || *ev < 0) {
                        err("potential.term", "bad exponent '" + toks[i] + "'");
                        ok = false;
                        break;
                    }
                    m.exponents.push_back(static_cast<int>(*ev));
                }
                if (ok) cfg.terms.push_back(std::move(m));
            }
        }
        if (!cfg.terms.empty()) {
            std::size_t d = cfg.terms.front().exponents.size();
            for (const auto& t : cfg.terms)
                if (t.exponents.size() != d)
                    err("potential.term", "terms disagree on dimension");
        }
    }
    if (auto b = get_one("potential", "box")) {
        auto toks = split_ws(*b);
        if (toks.size() % 2 != 0 || toks.empty()) {
            err("potential.box", "need 'lo hi' per axis");
        } else {
            Box box;
            bool ok = true;
            for (std::size_t i = 0; i < toks.size(); i += 2) {
                auto lo = to_double(toks[i]), hi = to_double(toks[i + 1]);
                if (!lo || !hi || *lo >= *hi) {
                    err("potential.box", "bad interval '" + toks[i] + " " + toks[i + 1] + "'");
                    ok = false;
                    break;
                }
                box.lo.push_back(*lo);
                box.hi.push_back(*hi);
            }
            if (ok) cfg.box = std::move(box);
        }
    }

    // [grid]
    if (auto c = get_one("grid", "cells")) {
        for (const auto& tok : split_ws(*c)) {
            auto v = to_int(tok);
            if (!v || *v < 2)
                err("grid.cells", "bad cell count '" + tok + "'");
            else
                cfg.cells.push_back(static_cast<int>(*v) + 1); // cells -> nodes
        }
    }

    // [analysis]
    if (auto a = get_one("analysis", "run")) {
        for (const auto& tok : split_ws(*a)) {
            const auto& known = known_analyses();
            if (std::find(known.begin(), known.end(), tok) == known.end()) {
                std::string list;
                for (const auto& n : known) list += n + " ";
                err("analysis.run", "unknown analysis '" + tok + "'; known: " + list);
            } else {
                cfg.analyses.push_back(tok);
            }
        }
    } else {
        err("analysis.run", "required (at least one analysis)");
    }
    if (auto e = get_one("analysis", "epsilons")) {
        for (const auto& tok : split_ws(*e)) {
            auto v = to_double(tok);
            if (!v)
                err("analysis.epsilons", "not a number: '" + tok + "'");
            else {
                if (*v <= 0.0)
                    err("analysis.epsilons", "epsilon must be > 0, got " + tok);
                cfg.epsilons.push_back(*v);
            }
        }
        if (cfg.epsilons.empty()) err("analysis.epsilons", "list must be nonempty");
    } else {
        err("analysis.epsilons", "required");
    }
    if (auto v = get_one("analysis", "c1")) {
        auto d = to_double(*v);
        if (!d)
            err("analysis.c1", "not a number: '" + *v + "'");
        else
            cfg.c1 = *d;
    }
    if (auto v = get_one("analysis", "ball_radius")) {
        auto d = to_double(*v);
        if (!d || *d <= 0.0)
            err("analysis.ball_radius", "must be a positive number, got '" + *v + "'");
        else
            cfg.ball_radius = *d;
    }
    if (auto v = get_one("analysis", "spectrum_k")) {
        auto d = to_int(*v);
        if (!d || *d < 1 || *d > 8)
            err("analysis.spectrum_k", "must be an integer in [1,8], got '" + *v + "'");
        else
            cfg.spectrum_k = static_cast<int>(*d);
    }
    if (auto v = get_one("analysis", "compare_tolerance")) {
        auto d = to_double(*v);
        if (!d || *d <= 0.0)
            err("analysis.compare_tolerance", "must be positive, got '" + *v + "'");
        else
            cfg.compare_tolerance = *d;
    }

    // [mc]
    if (auto v = get_one("mc", "n")) {
        auto d = to_int(*v);
        if (!d || *d < 1)
            err("mc.n", "must be a positive integer, got '" + *v + "'");
        else
            cfg.mc.n = static_cast<int>(*d);
    }
    if (auto v = get_one("mc", "dt")) {
        auto d = to_double(*v);
        if (!d || *d <= 0.0)
            err("mc.dt", "must be positive, got '" + *v + "'");
        else
            cfg.mc.dt = *d;
    }
    if (auto v = get_one("mc", "seed")) {
        auto d = to_int(*v);
        if (!d || *d < 0)
            err("mc.seed", "must be a nonnegative integer, got '" + *v + "'");
        else
            cfg.mc.seed = static_cast<std::uint64_t>(*d);
    }
    if (auto v = get_one("mc", "max_time")) {
        auto d = to_double(*v);
        if (!d || *d <= 0.0)
            err("mc.max_time", "must be positive, got '" + *v + "'");
        else
            cfg.mc.max_time = *d;
    }
    if (auto v = get_one("mc", "target_radius")) {
        auto d = to_double(*v);
        if (!d || *d <= 0.0)
            err("mc.target_radius", "must be positive, got '" + *v + "'");
        else
            cfg.mc.target_radius = *d;
    }
    if (auto v = get_one("mc", "boundary")) {
        if (*v == "absorbing")
            cfg.mc.boundary = BoxBoundary::absorbing;
        else if (*v == "reflecting")
            cfg.mc.boundary = BoxBoundary::reflecting;
        else
            err("mc.boundary", "must be 'absorbing' or 'reflecting', got '" + *v + "'");
    }
    if (auto v = get_one("mc", "threads")) {
        auto d = to_int(*v);
        if (!d || *d < 1 || *d > 256)
            err("mc.threads", "must be an integer in [1,256], got '" + *v + "'");
        else
            cfg.mc.threads = static_cast<int>(*d);
    }

    // [output]
    if (auto v = get_one("output", "out")) cfg.out_dir = *v;

    // cross-field checks
    if (cfg.potential_name == "polynomial" && cfg.terms.empty())
        err("potential.term", "polynomial potential needs at least one term");
    if (cfg.potential_name != "polynomial" && !cfg.terms.empty())
        err("potential.term", "terms are only valid for the polynomial potential");
    bool wants_mc = false;
    for (const auto& a : cfg.analyses)
        if (a == "simulate" || a == "compare") wants_mc = true;
    if (wants_mc && raw.sections.find("mc") == raw.sections.end())
        err("mc", "simulate/compare requested but [mc] section is missing");

    if (result.errors.empty()) result.config = std::move(cfg);
    return result;
}

inline ExperimentConfig parse_config_or_throw(const std::string& text) {
    auto res = parse_config(text);
    if (!res.ok()) {
        std::string msg = "config validation failed:";
        for (const auto& e : res.errors) msg += "\n  " + e;
        throw ValidationError(msg);
    }
    return *res.config;
}

} // namespace metastable

#endif
