// Command-line front end: equilibria, simulate, audit, robustness.
//
// Every subcommand takes a config file or a preset name (nominal-reduced,
// nominal-full, open-loop). Exit status is 0 iff every requested check passes.

#include "sit/analysis.hpp"
#include "sit/config.hpp"
#include "sit/csv.hpp"
#include "sit/harness.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

int run_equilibria(const sit::ScenarioConfig& cfg) {
    const sit::Params p = sit::validate_params(cfg.params);
    const sit::EquilibriumSet eq = sit::persistence_equilibrium(p);
    const double k_back = sit::capacity_for_aquatic_level(eq.E_bar, p.values());
    const double k_err = std::abs(k_back - p->k) / p->k;
    std::cout << "R0 = " << sit::format_double(eq.R0) << '\n'
              << "F_bar = " << sit::format_double(eq.F_bar) << '\n'
              << "E_bar = " << sit::format_double(eq.E_bar) << '\n'
              << "M_bar = " << sit::format_double(eq.M_bar) << '\n'
              << "k = " << sit::format_double(p->k) << '\n'
              << "k_from_E_bar = " << sit::format_double(k_back) << " (relative error "
              << sit::format_double(k_err) << ")\n";
    return k_err <= 1e-9 ? 0 : 1;
}

int run_simulate(sit::ScenarioConfig cfg, const std::optional<std::string>& model,
                 const std::optional<std::string>& variant, const std::optional<double>& t_end,
                 const std::optional<double>& dt, const std::optional<std::string>& out) {
    if (model) cfg.sim.model = sit::parse_model(*model);
    if (variant) cfg.variant = sit::parse_variant(*variant);
    if (t_end) cfg.sim.t_end = *t_end;
    if (dt) cfg.sim.dt = *dt;
    if (out) cfg.out_dir = *out;
    const sit::ScenarioResult res = sit::run_scenario(cfg);
    std::cout << res.summary;
    return res.pass ? 0 : 1;
}

int run_audit(const sit::ScenarioConfig& cfg, const std::string& check,
              const std::optional<std::string>& out) {
    const sit::Params p = sit::validate_params(cfg.params);
    const sit::ControllerConfig ctrl = sit::make_controller_config(cfg.controller, p);
    std::vector<sit::AuditReport> reports;
    if (check == "all") {
        for (sit::AuditCheck c : sit::all_audit_checks()) reports.push_back(sit::audit_grid(ctrl, p, c));
    } else {
        reports.push_back(sit::audit_grid(ctrl, p, sit::parse_audit_check(check)));
    }
    bool ok = true;
    for (const auto& r : reports) {
        ok = ok && r.pass;
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.check << "  worst=" << sit::format_double(r.worst_value)
                  << " at (F=" << sit::format_double(r.witness_F) << ", Ms=" << sit::format_double(r.witness_Ms)
                  << ")\n      grid: " << r.grid << "\n      " << r.note << '\n';
    }
    if (out) {
        std::filesystem::create_directories(*out);
        std::ofstream csv(std::filesystem::path(*out) / (cfg.name + "_audit.csv"), std::ios::binary);
        sit::write_audit_csv(reports, csv);
    }
    return ok ? 0 : 1;
}

int run_robust(sit::ScenarioConfig cfg, const std::optional<std::size_t>& trials,
               const std::optional<double>& uncertainty, const std::optional<std::uint64_t>& seed,
               const std::optional<std::string>& model, bool include_k,
               const std::optional<std::string>& out) {
    if (trials) cfg.robustness.trials = *trials;
    if (uncertainty) cfg.robustness.uncertainty = *uncertainty;
    if (seed) cfg.robustness.seed = *seed;
    if (model) cfg.sim.model = sit::parse_model(*model);
    if (include_k && std::find(cfg.robustness.perturb.begin(), cfg.robustness.perturb.end(), "k") ==
                         cfg.robustness.perturb.end()) {
        cfg.robustness.perturb.emplace_back("k");
    }
    if (out) cfg.out_dir = *out;
    const sit::RobustnessResult res = sit::run_robustness({cfg, cfg.robustness});
    for (const auto& t : res.trials) std::cout << sit::format_trial(t) << '\n';
    std::cout << "passed = " << res.passed << '/' << res.trials.size() << '\n'
              << "max_peak_ratio = " << sit::format_double(res.max_peak_ratio) << '\n'
              << "resample_rate = " << sit::format_double(res.resample_rate) << '\n';
    return res.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sterile-male release control: simulation and verification"};
    app.require_subcommand(1);

    std::string config;

    auto* eq = app.add_subcommand("equilibria", "Print R0 and the persistence equilibrium");
    eq->add_option("config", config, "Config file or preset name")->required();

    std::optional<std::string> model, variant, out;
    std::optional<double> t_end, dt;
    auto* sim = app.add_subcommand("simulate", "Run a closed-loop scenario and check it");
    sim->add_option("config", config, "Config file or preset name")->required();
    sim->add_option("--model", model, "reduced or full");
    sim->add_option("--variant", variant, "none, raw, plus or global");
    sim->add_option("--t-end", t_end, "Horizon in days");
    sim->add_option("--dt", dt, "Step in days");
    sim->add_option("--out", out, "Output directory");

    std::string check = "all";
    auto* audit = app.add_subcommand("audit", "Grid audits of the controller inequalities");
    audit->add_option("config", config, "Config file or preset name")->required();
    audit->add_option("--check", check, "Check name or 'all'");
    audit->add_option("--out", out, "Output directory for the CSV report");

    std::optional<std::size_t> trials;
    std::optional<double> uncertainty;
    std::optional<std::uint64_t> seed;
    bool include_k = false;
    auto* rob = app.add_subcommand("robustness", "Nominal law against perturbed plants");
    rob->add_option("config", config, "Config file or preset name")->required();
    rob->add_option("--trials", trials, "Number of trials");
    rob->add_option("--uncertainty", uncertainty, "Relative half-width of the perturbation");
    rob->add_option("--seed", seed, "RNG seed");
    rob->add_option("--model", model, "reduced or full");
    rob->add_flag("--include-k", include_k, "Also perturb the egg capacity k");
    rob->add_option("--out", out, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        const sit::ScenarioConfig cfg = sit::load_config(config);
        if (*eq) return run_equilibria(cfg);
        if (*sim) return run_simulate(cfg, model, variant, t_end, dt, out);
        if (*audit) return run_audit(cfg, check, out);
        if (*rob) return run_robust(cfg, trials, uncertainty, seed, model, include_k, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
