#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dbar/dbar.hpp"

namespace {

// "NR,NT" -> (NR, NT)
std::pair<int, int> parse_grid(const std::string& s) {
    std::istringstream in(s);
    int nr = 0, nt = 0;
    char comma = 0;
    if (!(in >> nr >> comma >> nt) || comma != ',' || !in.eof())
        throw dbar::ParseError("--grid expects NR,NT, got " + s);
    return {nr, nt};
}

void summarize(const dbar::Report& r) {
    const auto& d = r.data;
    std::printf("%s: %s\n", d["action"].get<std::string>().c_str(), d["status"].get<std::string>().c_str());
    if (d.contains("message")) std::printf("  %s\n", d["message"].get<std::string>().c_str());
    if (d.contains("energy"))
        std::printf("  E = %.12g  E' = %.12g  E'' = %.12g\n", d["energy"]["e_full"].get<double>(),
                    d["energy"]["e_del"].get<double>(), d["energy"]["e_dbar"].get<double>());
    if (d.contains("criticality"))
        std::printf("  critical: %s  (boundary residual %.3g)\n", d["criticality"]["critical"].get<bool>() ? "yes" : "no",
                    d["criticality"]["boundary_residual"].get<double>());
    if (d.contains("gram"))
        std::printf("  gram %d x %d, negative_count %d, min eigenvalue %.6g\n", d["gram"]["size"].get<int>(),
                    d["gram"]["size"].get<int>(), d["gram"]["negative_count"].get<int>(),
                    d["gram"]["min_eigenvalue"].get<double>());
    if (d.contains("certificate"))
        std::printf("  certified Morse index >= %d\n", d["certificate"]["certified_bound"].get<int>());
    if (d.contains("levi"))
        std::printf("  %s (margin %.12g)\n", d["levi"]["kind"].get<std::string>().c_str(), d["levi"]["margin"].get<double>());
    if (d.contains("f4_family"))
        std::printf("  max relative difference %.3g\n", d["f4_family"]["max_relative_difference"].get<double>());
    if (d.contains("cutoff"))
        std::printf("  Dirichlet integrals strictly decreasing: %s\n",
                    d["cutoff"]["strictly_decreasing"].get<bool>() ? "yes" : "no");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Second variation of the dbar-energy for free boundary disks"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", grid, domain, map;
    bool deterministic = false;
    std::uint64_t seed = 0;
    bool quiet = false;

    const char* actions[][2] = {{"energy", "Partial energies and the Kahler identity"},
                                {"critical", "Harmonicity and free boundary condition"},
                                {"index", "Gram matrix of the index form over an admissible basis"},
                                {"certify", "Morse index lower bound from holomorphic sections"},
                                {"levi", "Levi form classification along boundary samples"},
                                {"f4-family", "Second variation along the f4 deformation family"},
                                {"cutoff", "Logarithmic cutoff experiment"}};
    for (auto& a : actions) {
        CLI::App* sub = app.add_subcommand(a[0], a[1]);
        sub->add_option("--config", config_path, "Scenario config (JSON)")->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "Output directory for report.json and CSV files");
        sub->add_flag("--deterministic", deterministic, "Serial reductions and zero wall clock");
        sub->add_option("--grid", grid, "Grid resolution NR,NT");
        sub->add_option("--seed", seed, "Random seed");
        sub->add_option("--domain", domain, "Catalog domain (overrides config)");
        sub->add_option("--map", map, "Catalog map (overrides config)");
        sub->add_flag("-q,--quiet", quiet, "No summary on stdout");
    }
    CLI11_PARSE(app, argc, argv);

    dbar::ScenarioConfig cfg;
    try {
        if (!config_path.empty()) cfg = dbar::load_config(config_path);
        cfg.action = dbar::parse_action(app.get_subcommands().front()->get_name());
        if (!domain.empty()) cfg.domain = domain;
        if (!map.empty()) cfg.map = map;
        if (!grid.empty()) std::tie(cfg.n_r, cfg.n_theta) = parse_grid(grid);
        if (app.get_subcommands().front()->count("--seed")) cfg.seed = seed;
        if (deterministic) cfg.deterministic = true;
        cfg = dbar::parse_config(cfg.echo());  // revalidate overrides
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    const dbar::Report report = dbar::execute(cfg);
    try {
        dbar::emit(report, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (!quiet) summarize(report);
    if (report.status != 0) std::cerr << report.data["status"].get<std::string>() << ": " << report.data["message"].get<std::string>() << "\n";
    return report.status;
}
