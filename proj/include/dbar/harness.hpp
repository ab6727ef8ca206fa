#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "config.hpp"
#include "criticality.hpp"
#include "f4family.hpp"
#include "holsec.hpp"
#include "report.hpp"
#include "secondvar.hpp"

namespace dbar {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

struct Report {
    json data;
    std::optional<Mat> gram;
    std::vector<std::string> gram_labels;
    int status = 0;  // 0 ok, 1 error, 2 refusal
};

namespace detail {

inline json energy_json(const DiskMap& f) {
    const DerivativeFields d = derivatives(f);
    const EnergyReport e = energies(f, d);
    return {{"e_full", e.e_full},
            {"e_del", e.e_del},
            {"e_dbar", e.e_dbar},
            {"kahler", e.kahler},
            {"max_dbar_density", max_dbar_density(d)},
            {"split_residual", std::abs(e.e_full - e.e_del - e.e_dbar)},
            {"kahler_residual", std::abs(e.e_del - e.e_dbar - e.kahler)}};
}

inline json criticality_json(const CriticalityReport& c) {
    return {{"harmonic_residual", c.harmonic_residual},
            {"boundary_residual", c.boundary_residual},
            {"lambda", to_json(c.lambda)},
            {"lambda_min", c.lambda_min},
            {"lambda_max", c.lambda.maxCoeff()},
            {"conformality_defect", c.conformality_defect},
            {"critical", c.critical},
            {"warnings", c.warnings}};
}

inline json classification_json(const Classification& c) {
    json j = {{"kind", to_string(c.kind)}, {"margin", c.margin}, {"worst_sample", c.worst_sample},
              {"samples", c.eigenvalues.size()}};
    if (c.worst_sample >= 0) j["worst_eigenvalues"] = to_json(c.eigenvalues[c.worst_sample]);
    return j;
}

inline BasisParams basis_params(const ScenarioConfig& c) {
    BasisParams b;
    if (c.params.contains("basis")) {
        const json& j = c.params["basis"];
        b.tangent_kmax = j.value("tangent_kmax", b.tangent_kmax);
        b.bump_kmax = j.value("bump_kmax", b.bump_kmax);
        b.tangent = j.value("tangent", b.tangent);
        b.bumps = j.value("bumps", b.bumps);
    }
    return b;
}

inline json basis_json(const BasisParams& b) {
    return {{"tangent_kmax", b.tangent_kmax}, {"bump_kmax", b.bump_kmax}, {"tangent", b.tangent}, {"bumps", b.bumps}};
}

inline json certificate_json(const Certificate& c, const json& tol_json) {
    return {{"mode", to_string(c.mode)},
            {"k", c.k},
            {"pivot", c.pivot + 1},
            {"sections", c.labels},
            {"values", c.values},
            {"real_values", c.real_values},
            {"real_negative", c.real_negative},
            {"crosscheck", c.crosscheck},
            {"max_subset_sum", c.max_subset_sum},
            {"subsets_negative", c.subsets_negative},
            {"certified_bound", c.certified_bound},
            {"orthogonality", c.orthogonality},
            {"coefficient_dbar", c.coefficient_dbar},
            {"domain_classification", classification_json(c.domain_classification)},
            {"tolerances", tol_json}};
}

inline F4Family family_from(const json& j) {
    F4Family fam;
    auto get = [&](const char* key) { return j.contains(key) ? spec::scalar(j[key]) : ScalarPolynomial(); };
    fam.sigma = get("sigma");
    fam.phi = get("phi");
    fam.psi = get("psi");
    fam.eta = get("eta");
    return fam;
}

inline json comparison_json(const F4Comparison& c, const std::string& label) {
    json diffs = json::object();
    for (const auto& [k, v] : c.differences) diffs[k] = v;
    return {{"label", label},
            {"h", c.h},
            {"fd", c.fd},
            {"pre_ibp", c.pre_ibp},
            {"post_ibp", c.post_ibp},
            {"index_form", c.index_form},
            {"relative_differences", diffs},
            {"max_relative_difference", c.max_relative_difference}};
}

// Sum of the boundary-tangent basis fields with k <= 1: a fixed admissible
// field for the cutoff experiment.
inline VariationField cutoff_field(const DiskMap& f, const DefiningFunction& df) {
    auto fields = tangent_fields(f, df, 1);
    DiskMap sum = fields.front().field;
    for (std::size_t i = 1; i < fields.size(); ++i) sum = sum.combine(1.0, fields[i].field, 1.0);
    return VariationField(sum, "tangent-sum");
}

}  // namespace detail

inline Report run(const ScenarioConfig& c) {
    const auto start = std::chrono::steady_clock::now();
    Report rep;
    json& d = rep.data;
    d["config"] = c.echo();
    d["version"] = kVersion;
    d["schema_version"] = kSchemaVersion;
    d["action"] = to_string(c.action);
    const DiskGrid grid = c.grid();
    const Tolerances& tol = c.tolerances;

    switch (c.action) {
        case Action::energy: {
            d["energy"] = detail::energy_json(c.disk_map());
            break;
        }
        case Action::critical: {
            const DiskMap f = c.disk_map();
            d["energy"] = detail::energy_json(f);
            d["criticality"] = detail::criticality_json(is_critical(f, c.defining_function(), tol));
            break;
        }
        case Action::index: {
            const DiskMap f = c.disk_map();
            const DefiningFunction df = c.defining_function();
            d["energy"] = detail::energy_json(f);
            const CriticalityReport crit = is_critical(f, df, tol);
            d["criticality"] = detail::criticality_json(crit);
            const BasisParams bp = detail::basis_params(c);
            std::vector<VariationField> basis;
            if (c.param("include_u", false)) {
                try {
                    auto u = u_real_fields(build_U(build_frame(f, df), f, tol));
                    basis.insert(basis.end(), u.begin(), u.end());
                    d["u_fields"] = static_cast<int>(u.size());
                } catch (const Refusal& e) {
                    d["u_fields"] = 0;
                    d["u_fields_skipped"] = e.what();
                }
            }
            auto rest = admissible_basis(f, df, bp);
            basis.insert(basis.end(), rest.begin(), rest.end());
            const IndexForm form(f, df, tol);
            const GramSpectrum gs = assemble_gram(form, basis, c.deterministic);
            d["gram"] = {{"size", static_cast<int>(basis.size())},
                         {"eigenvalues", to_json(gs.eigenvalues)},
                         {"min_eigenvalue", gs.eigenvalues(0)},
                         {"negative_count", gs.negative_count},
                         {"tol_neg", gs.tol_neg},
                         {"symmetry_defect", (gs.matrix - gs.matrix.transpose()).cwiseAbs().maxCoeff()},
                         {"labels", gs.labels},
                         {"basis", detail::basis_json(bp)},
                         {"morse_index_lower_bound", gs.negative_count}};
            if (!crit.critical) d["gram"]["warning"] = "map is not critical";
            rep.gram = gs.matrix;
            rep.gram_labels = gs.labels;
            break;
        }
        case Action::certify: {
            const DiskMap f = c.disk_map();
            const DefiningFunction df = c.defining_function();
            const std::string mode = c.param<std::string>("mode", "pc");
            if (mode != "pc" && mode != "kpc") throw ParseError("certify mode must be pc or kpc");
            const CertifyMode m = mode == "pc" ? CertifyMode::pseudoconvex : CertifyMode::k_pseudoconvex;
            // refuses before anything else when the preconditions fail
            const Certificate cert = certify_index(f, df, m, c.param("k", 1), tol);
            d["energy"] = detail::energy_json(f);
            d["criticality"] = detail::criticality_json(is_critical(f, df, tol));
            d["certificate"] = detail::certificate_json(cert, c.tolerances_json());
            break;
        }
        case Action::levi: {
            const DefiningFunction df = c.defining_function();
            std::vector<Vec> samples;
            if (c.params.contains("points")) {
                for (const auto& p : c.params["points"]) {
                    auto v = p.get<std::vector<double>>();
                    samples.push_back(Eigen::Map<Vec>(v.data(), static_cast<Eigen::Index>(v.size())));
                }
            } else {
                const Mat rim = c.disk_map().boundary_trace();
                for (int m = 0; m < rim.rows(); ++m) samples.push_back(rim.row(m).transpose());
            }
            for (const auto& s : samples)
                if (s.size() != 2 * df.n()) throw ParseError("levi sample has wrong dimension");
            const Classification cl = classify_pseudoconvexity(df, samples, c.param("k", 1), tol);
            d["levi"] = detail::classification_json(cl);
            d["levi"]["k"] = c.param("k", 1);
            break;
        }
        case Action::f4_family: {
            const std::vector<double> hs = c.param("h", std::vector<double>{1e-2});
            json rows = json::array();
            if (c.params.contains("family")) {
                rows.push_back(detail::comparison_json(
                    f4_family_experiment(detail::family_from(c.params["family"]), hs, grid, tol), "given"));
            }
            std::mt19937_64 rng(c.seed);
            const int random = c.param("random", 0);
            const int degree = c.param("degree", 3);
            for (int i = 0; i < random; ++i)
                rows.push_back(detail::comparison_json(f4_family_experiment(random_f4_family(rng, degree), hs, grid, tol),
                                                       "random" + std::to_string(i)));
            if (rows.empty()) throw InvalidArgument("f4_family needs params.family or params.random > 0");
            double worst = 0.0, minimum = std::numeric_limits<double>::infinity();
            for (const auto& r : rows) {
                worst = std::max(worst, r["max_relative_difference"].get<double>());
                for (const char* key : {"pre_ibp", "post_ibp", "index_form"}) minimum = std::min(minimum, r[key].get<double>());
            }
            d["f4_family"] = {{"families", rows}, {"max_relative_difference", worst}, {"min_value", minimum}};
            break;
        }
        case Action::cutoff: {
            const std::vector<double> eps = c.param("epsilons", std::vector<double>{1e-2, 1e-3, 1e-4});
            json rows = json::array();
            std::optional<IndexForm> form;
            std::optional<VariationField> v;
            if (c.has_map() && c.has_domain()) {
                const DiskMap f = c.disk_map();
                const DefiningFunction df = c.defining_function();
                form.emplace(f, df, tol);
                v.emplace(detail::cutoff_field(f, df));
            }
            double previous = std::numeric_limits<double>::infinity();
            bool decreasing = true;
            for (double e : eps) {
                const CutoffProfile p = log_cutoff(e, grid);
                const double bound = 2.0 * M_PI / std::abs(std::log(e));
                json row = {{"epsilon", e},
                            {"dirichlet", p.dirichlet},
                            {"log_bound", bound},
                            {"ratio", p.dirichlet / bound},
                            {"max_slope_ratio", p.max_slope_ratio}};
                decreasing = decreasing && p.dirichlet < previous;
                previous = p.dirichlet;
                if (form) {
                    const CutoffIndex ci = cutoff_index_form(*form, *v, e);
                    row["index"] = {{"base", ci.base},       {"cut", ci.cut},           {"sup_v", ci.sup_v},
                                    {"sup_grad", ci.sup_grad}, {"constant", ci.constant}, {"bound", ci.bound},
                                    {"consistent", ci.cut >= ci.base - ci.bound}};
                }
                rows.push_back(row);
            }
            d["cutoff"] = {{"profiles", rows}, {"strictly_decreasing", decreasing}};
            break;
        }
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    d["wall_clock"] = c.deterministic ? 0.0 : elapsed;
    d["status"] = "ok";
    return rep;
}

// Runs the scenario and folds failures into the report with the matching
// exit status instead of throwing.
inline Report execute(const ScenarioConfig& c) {
    auto failed = [&](int status, const std::string& kind, const std::string& msg) {
        Report r;
        r.status = status;
        r.data = {{"config", c.echo()}, {"version", kVersion}, {"schema_version", kSchemaVersion},
                  {"action", to_string(c.action)}, {"status", kind}, {"message", msg}, {"wall_clock", 0.0}};
        return r;
    };
    try {
        return run(c);
    } catch (const Refusal& e) {
        return failed(2, "refused", e.what());
    } catch (const std::exception& e) {
        return failed(1, "error", e.what());
    }
}

inline void emit(const Report& r, const std::filesystem::path& dir) {
    write_file(dir / "report.json", to_json_text(r.data));
    if (r.gram) write_file(dir / "gram.csv", to_csv(*r.gram, r.gram_labels));
}

}  // namespace dbar
