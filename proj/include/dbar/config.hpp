#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "catalog.hpp"
#include "f4family.hpp"
#include "secondvar.hpp"

namespace dbar {

using json = nlohmann::json;

enum class Action { energy, critical, index, certify, levi, f4_family, cutoff };

inline std::string to_string(Action a) {
    switch (a) {
        case Action::energy: return "energy";
        case Action::critical: return "critical";
        case Action::index: return "index";
        case Action::certify: return "certify";
        case Action::levi: return "levi";
        case Action::f4_family: return "f4_family";
        case Action::cutoff: return "cutoff";
    }
    return "?";
}

inline Action parse_action(std::string s) {
    for (auto& c : s)
        if (c == '-') c = '_';
    for (Action a : {Action::energy, Action::critical, Action::index, Action::certify, Action::levi, Action::f4_family,
                     Action::cutoff})
        if (to_string(a) == s) return a;
    throw ParseError("unknown action: " + s);
}

// Polynomial specs. A z-term is {"z": a, "zbar": b, "coeff": [re, im]} or
// {"r": p, "k": k, "coeff": [re, im]}; a scalar spec is a list of z-terms whose
// real part is taken; a map spec lists z-terms per complex coordinate; a
// domain spec is {"n": n, "terms": [{"exponents": [...], "coeff": c}]} over
// (x_1..x_n, y_1..y_n).
namespace spec {

inline double number(const json& j, const char* what) {
    if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ParseError(std::string(what) + " must be finite");
    return v;
}

inline cplx coefficient(const json& j) {
    if (j.is_number()) return number(j, "coefficient");
    if (j.is_array() && j.size() == 2) return {number(j[0], "coefficient"), number(j[1], "coefficient")};
    throw ParseError("coefficient must be a number or [re, im]");
}

inline ZPolynomial z_polynomial(const json& j) {
    if (!j.is_array()) throw ParseError("polynomial spec must be a list of terms");
    ZPolynomial p;
    for (const auto& t : j) {
        if (!t.is_object() || !t.contains("coeff")) throw ParseError("polynomial term needs a coeff");
        const cplx c = coefficient(t["coeff"]);
        if (t.contains("z") || t.contains("zbar")) {
            const double a = t.contains("z") ? number(t["z"], "z exponent") : 0.0;
            const double b = t.contains("zbar") ? number(t["zbar"], "zbar exponent") : 0.0;
            if (a < 0 || b < 0 || a != std::floor(a) || b != std::floor(b))
                throw ParseError("z and zbar exponents must be non-negative integers");
            p.add(a, b, c);
        } else if (t.contains("r") && t.contains("k")) {
            const double r = number(t["r"], "r power");
            const double k = number(t["k"], "frequency");
            if (k != std::floor(k)) throw ParseError("frequency must be an integer");
            try {
                auto term = ZPolynomial::polar_term(r, static_cast<int>(k), c);
                p.add(term.alpha, term.beta, term.coeff);
            } catch (const InvalidArgument& e) {
                throw ParseError(e.what());
            }
        } else {
            throw ParseError("polynomial term needs (z, zbar) or (r, k) exponents");
        }
    }
    return p;
}

inline ScalarPolynomial scalar(const json& j) { return ScalarPolynomial(z_polynomial(j)); }

inline ComplexPolyMap map(const json& j) {
    if (j.is_string()) return catalog::map(j.get<std::string>());
    if (!j.is_array() || j.empty()) throw ParseError("map spec must be a catalog name or a list of coordinates");
    std::vector<ZPolynomial> coords;
    for (const auto& c : j) coords.push_back(z_polynomial(c));
    return ComplexPolyMap(std::move(coords));
}

inline RealPolynomial domain(const json& j) {
    if (j.is_string()) return catalog::domain_polynomial(j.get<std::string>());
    if (!j.is_object() || !j.contains("n") || !j.contains("terms")) throw ParseError("domain spec needs n and terms");
    const int n = j["n"].get<int>();
    if (n < 1) throw ParseError("domain dimension must be >= 1");
    std::vector<RealPolynomial::Term> terms;
    for (const auto& t : j["terms"]) {
        if (!t.contains("exponents") || !t.contains("coeff")) throw ParseError("domain term needs exponents and coeff");
        terms.push_back({t["exponents"].get<std::vector<int>>(), number(t["coeff"], "coefficient")});
    }
    try {
        return RealPolynomial(2 * n, std::move(terms));
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what());
    }
}

}  // namespace spec

struct ScenarioConfig {
    json domain;  // catalog name or spec; null when absent
    json map;
    int n_r = 32;
    int n_theta = 64;
    Action action = Action::energy;
    json params = json::object();
    Tolerances tolerances;
    std::uint64_t seed = 0;
    bool deterministic = false;

    bool has_domain() const { return !domain.is_null(); }
    bool has_map() const { return !map.is_null(); }

    DiskGrid grid() const { return DiskGrid(n_r, n_theta); }

    DefiningFunction defining_function() const {
        if (!has_domain()) throw InvalidArgument("scenario has no domain");
        RealPolynomial p = spec::domain(domain);
        return DefiningFunction::from_polynomial(p.vars() / 2, p);
    }

    ComplexPolyMap poly_map() const {
        if (!has_map()) throw InvalidArgument("scenario has no map");
        return spec::map(map);
    }

    DiskMap disk_map() const {
        ComplexPolyMap m = poly_map();
        return DiskMap(grid(), m.evaluator(), 2 * m.n());
    }

    template <typename T>
    T param(const char* key, T fallback) const {
        return params.contains(key) ? params[key].get<T>() : fallback;
    }

    json tolerances_json() const {
        const Tolerances& t = tolerances;
        return {{"boundary", t.boundary},     {"degenerate", t.degenerate}, {"pseudoconvex", t.pseudoconvex},
                {"harmonic", t.harmonic},     {"free_boundary", t.free_boundary}, {"lambda", t.lambda},
                {"conformal", t.conformal},   {"admissible", t.admissible}, {"negative_rel", t.negative_rel},
                {"holomorphic", t.holomorphic}, {"index_value", t.index_value}};
    }

    json echo() const {
        return {{"domain", domain},   {"map", map},         {"grid", {n_r, n_theta}},
                {"action", to_string(action)}, {"params", params}, {"tolerances", tolerances_json()},
                {"seed", seed},       {"deterministic", deterministic}};
    }
};

inline Tolerances parse_tolerances(const json& j, Tolerances t = {}) {
    if (!j.is_object()) throw ParseError("tolerances must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const double v = spec::number(it.value(), "tolerance");
        if (!(v >= 0.0)) throw ParseError("tolerance must be non-negative: " + it.key());
        const std::string& k = it.key();
        if (k == "boundary") t.boundary = v;
        else if (k == "degenerate") t.degenerate = v;
        else if (k == "pseudoconvex") t.pseudoconvex = v;
        else if (k == "harmonic") t.harmonic = v;
        else if (k == "free_boundary") t.free_boundary = v;
        else if (k == "lambda") t.lambda = v;
        else if (k == "conformal") t.conformal = v;
        else if (k == "admissible") t.admissible = v;
        else if (k == "negative_rel") t.negative_rel = v;
        else if (k == "holomorphic") t.holomorphic = v;
        else if (k == "index_value") t.index_value = v;
        else throw ParseError("unknown tolerance: " + k);
    }
    return t;
}

inline ScenarioConfig parse_config(const json& j) {
    if (!j.is_object()) throw ParseError("config must be a JSON object");
    ScenarioConfig c;
    try {
        if (j.contains("domain")) c.domain = j["domain"];
        if (j.contains("map")) c.map = j["map"];
        if (j.contains("grid")) {
            const auto& g = j["grid"];
            if (!g.is_array() || g.size() != 2) throw ParseError("grid must be [n_r, n_theta]");
            c.n_r = g[0].get<int>();
            c.n_theta = g[1].get<int>();
        }
        if (j.contains("action")) c.action = parse_action(j["action"].get<std::string>());
        if (j.contains("params")) c.params = j["params"];
        if (!c.params.is_object()) throw ParseError("params must be an object");
        if (j.contains("tolerances")) c.tolerances = parse_tolerances(j["tolerances"]);
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("deterministic")) c.deterministic = j["deterministic"].get<bool>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    // validate references early
    try {
        if (c.has_domain()) spec::domain(c.domain);
        if (c.has_map()) spec::map(c.map);
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what());
    }
    return c;
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read config: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return parse_config(j);
}

}  // namespace dbar
