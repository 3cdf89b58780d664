#pragma once

#include "sit/analysis.hpp"
#include "sit/config.hpp"
#include "sit/controller.hpp"
#include "sit/model.hpp"
#include "sit/sim.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace sit {

// Closed-loop run for a scenario. The law is always designed from
// cfg.params; `plant` overrides the parameters of the simulated system.
SimSpec build_sim_spec(const ScenarioConfig& cfg, const std::optional<Params>& plant = {});

struct ScenarioResult {
    ScenarioConfig config;
    EquilibriumSet equilibrium;
    ControllerConfig controller;
    Trajectory trajectory;
    std::optional<DecayReport> decay;
    std::vector<AuditReport> audits;
    std::optional<double> extinction_time;
    ControlBudget budget;
    bool control_nonnegative = true;
    // Full model only: min of u_full / u_reduced over the last quarter of the
    // horizon, against the same law on the reduced model.
    std::optional<double> reduced_twin_ratio;
    bool pass = false;
    std::string summary;  // key=value lines
};

// Runs the scenario, checks it and, when cfg.out_dir is set, writes
// <name>_trajectory.csv, <name>_reports.csv and <name>_summary.txt there.
//
// Pass rules: no non-negativity violation; open loop returns to within 1% of
// F_bar; controlled reduced runs satisfy the decay certificate and the dV/dt
// check at tolerance 1e-3; controlled full runs reach the extinction
// threshold. Non-negative variants must keep u >= 0 at every sample.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

// Portable 64-bit stream: mt19937_64 seeded through splitmix64 from
// (seed, stream index).
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream);

// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(std::mt19937_64& rng);

struct Perturbation {
    BioParams params;
    std::size_t attempts = 1;  // 1 means no resampling was needed
};

// Multiplies each named field by an independent factor drawn uniformly from
// [1 - fraction, 1 + fraction]; redraws the whole set (up to max_attempts)
// until it validates. Throws ParamError naming the last binding constraint
// on exhaustion, std::invalid_argument for a bad fraction or field name.
Perturbation perturb_params(const BioParams& p, double fraction, std::mt19937_64& rng,
                            std::span<const std::string> fields, std::size_t max_attempts = 100);

struct RobustnessConfig {
    ScenarioConfig base;
    RobustnessSettings settings;
};

struct TrialSummary {
    std::size_t index = 0;
    BioParams plant;
    std::size_t attempts = 1;
    Termination termination = Termination::horizon;
    std::optional<double> extinction_time;
    double final_F = 0.0;
    double max_u = 0.0;
    double total_u = 0.0;
    bool nonnegative = true;
    bool decreasing_tail = true;
    bool pass = false;
    std::string error;  // set when the trial could not run
};

// One line per trial; bit-stable for a given seed and config.
std::string format_trial(const TrialSummary& t);

struct RobustnessResult {
    Trajectory nominal;
    std::vector<TrialSummary> trials;
    std::vector<Trajectory> trajectories;
    std::size_t passed = 0;
    double max_peak_ratio = 0.0;  // largest trial peak u over nominal peak u
    double resample_rate = 0.0;   // extra draws per trial
    bool pass = false;
};

// u is treated as decreasing over the last half of the record when no sample
// exceeds its predecessor by more than 1e-9 of the run's peak.
bool decreasing_over_last_half(const Trajectory& traj);

// Drives perturbed plants with the nominal law. Trials run concurrently on
// independent streams; results are ordered by trial index. When
// base.out_dir is set, writes trial CSVs and robustness_summary.txt.
RobustnessResult run_robustness(const RobustnessConfig& cfg);

}  // namespace sit
