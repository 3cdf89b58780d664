#include "sit/harness.hpp"

#include "sit/csv.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <cstdio>
#include <future>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sit {

SimSpec build_sim_spec(const ScenarioConfig& cfg, const std::optional<Params>& plant) {
    const Params nominal = validate_params(cfg.params);
    const EquilibriumSet eq = persistence_equilibrium(nominal);
    const ControllerConfig ctrl = make_controller_config(cfg.controller, nominal);
    const SimSettings& s = cfg.sim;

    const double F0 = s.F0.value_or(s.F0_ratio * eq.F_bar);
    std::variant<ReducedState, FullState> initial;
    if (s.model == ModelKind::reduced) {
        initial = ReducedState{F0, s.Ms0};
    } else {
        initial = FullState{s.E0.value_or(eq.E_bar), s.M0.value_or(eq.M_bar), F0, s.Ms0};
    }
    return SimSpec{.law = ControlLaw(cfg.variant, ctrl, nominal),
                   .plant = plant.value_or(nominal),
                   .initial = initial,
                   .t_end = s.t_end,
                   .dt = s.dt,
                   .record_every = s.record_every,
                   .clamp_tol = s.clamp_tol,
                   .stop_below = std::nullopt};
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

AuditReport as_audit(const DecayReport& d, bool norm) {
    AuditReport r;
    if (norm) {
        r.check = "decay_norm";
        r.grid = "active span, c0=" + format_double(d.norm_c0) +
                 (d.norm_contracting ? ", settling" : ", not settling");
        r.pass = d.norm_pass;
        r.worst_value = d.norm_tail_growth;
    } else {
        r.check = "decay_envelope";
        r.grid = "all samples, lambda=" + format_double(d.lambda_theory);
        r.pass = d.envelope_pass;
        r.worst_value = d.max_violation;
    }
    return r;
}

double min_ratio_last_quarter(const Trajectory& num, const Trajectory& den, double t_end) {
    double worst = std::numeric_limits<double>::infinity();
    const std::size_t n = std::min(num.size(), den.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (num.t[i] < 0.75 * t_end) continue;
        if (den.u[i] > 0.0) {
            worst = std::min(worst, num.u[i] / den.u[i]);
        } else if (num.u[i] < 0.0) {
            worst = -std::numeric_limits<double>::infinity();
        }
    }
    return worst;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    ScenarioResult res;
    res.config = cfg;
    const SimSpec spec = build_sim_spec(cfg);
    const Params& nominal = spec.law.params();
    res.equilibrium = persistence_equilibrium(nominal);
    res.controller = spec.law.config();
    res.trajectory = integrate(spec);
    const Trajectory& tr = res.trajectory;

    res.control_nonnegative = std::all_of(tr.u.begin(), tr.u.end(), [](double u) { return u >= 0.0; });
    res.extinction_time = detect_extinction(tr, cfg.sim.extinction_threshold);
    const bool above_knee = tr.F.front() > res.controller.F2;
    const double lambda = guaranteed_rate(res.controller, nominal, above_knee);
    res.budget = control_budget(tr, lambda);

    bool ok = tr.termination != Termination::nonnegativity_violation;
    if (cfg.variant == Variant::none) {
        const double F_bar = res.equilibrium.F_bar;
        ok = ok && std::abs(tr.F.back() - F_bar) <= 0.01 * F_bar;
    } else if (cfg.sim.model == ModelKind::reduced) {
        res.decay = verify_decay(tr, lambda, 1e-3);
        res.audits.push_back(as_audit(*res.decay, false));
        res.audits.push_back(as_audit(*res.decay, true));
        res.audits.push_back(vdot_check(tr, res.controller, nominal, 1e-3));
        ok = ok && res.decay->pass() && res.audits.back().pass;
    } else {
        ScenarioConfig twin = cfg;
        twin.sim.model = ModelKind::reduced;
        const Trajectory reduced = integrate(build_sim_spec(twin));
        res.reduced_twin_ratio = min_ratio_last_quarter(tr, reduced, cfg.sim.t_end);
        ok = ok && res.extinction_time.has_value();
    }
    if (cfg.variant == Variant::plus || cfg.variant == Variant::global) {
        ok = ok && res.control_nonnegative;
    }
    res.pass = ok;

    std::ostringstream os;
    os << "scenario=" << cfg.name << '\n'
       << "model=" << to_string(cfg.sim.model) << '\n'
       << "variant=" << to_string(cfg.variant) << '\n'
       << "R0=" << format_double(res.equilibrium.R0) << '\n'
       << "F_bar=" << format_double(res.equilibrium.F_bar) << '\n'
       << "F_hat=" << format_double(res.controller.F_hat) << '\n'
       << "eps=" << format_double(res.controller.eps) << '\n'
       << "eta=" << format_double(res.controller.eta) << '\n'
       << "rho=" << format_double(res.controller.rho) << '\n'
       << "F2=" << format_double(res.controller.F2) << '\n'
       << "lambda=" << format_double(lambda) << '\n'
       << "termination=" << to_string(tr.termination) << '\n'
       << "samples=" << tr.size() << '\n'
       << "F_end=" << format_double(tr.F.back()) << '\n'
       << "u_start=" << format_double(tr.u.front()) << '\n'
       << "u_end=" << format_double(tr.u.back()) << '\n'
       << "control_nonnegative=" << (res.control_nonnegative ? "true" : "false") << '\n'
       << "control_total=" << format_double(res.budget.total) << '\n'
       << "control_tail_bound=" << format_double(res.budget.tail_bound) << '\n'
       << "extinction_time="
       << (res.extinction_time ? format_double(*res.extinction_time) : std::string("none")) << '\n';
    if (res.decay) {
        os << "lambda_fit=" << format_double(res.decay->lambda_fit) << '\n'
           << "envelope_max_ratio=" << format_double(res.decay->max_violation) << '\n'
           << "norm_c0=" << format_double(res.decay->norm_c0) << '\n';
    }
    if (res.reduced_twin_ratio) {
        os << "full_over_reduced_u_last_quarter_min=" << format_double(*res.reduced_twin_ratio)
           << '\n';
    }
    for (const auto& a : res.audits) {
        os << "check." << a.check << '=' << (a.pass ? "pass" : "fail") << '\n';
    }
    os << "pass=" << (res.pass ? "true" : "false") << '\n';
    res.summary = os.str();

    if (!cfg.out_dir.empty()) {
        const std::filesystem::path dir(cfg.out_dir);
        std::filesystem::create_directories(dir);
        write_trajectory_csv(tr, dir / (cfg.name + "_trajectory.csv"));
        std::ostringstream audit;
        write_audit_csv(res.audits, audit);
        write_text(dir / (cfg.name + "_reports.csv"), audit.str());
        write_text(dir / (cfg.name + "_summary.txt"), res.summary);
    }
    return res;
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return std::mt19937_64(z);
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Perturbation perturb_params(const BioParams& p, double fraction, std::mt19937_64& rng,
                            std::span<const std::string> fields, std::size_t max_attempts) {
    if (!(fraction >= 0.0 && fraction < 1.0)) {
        throw std::invalid_argument("perturbation fraction must lie in [0, 1)");
    }
    std::vector<const ParamField*> selected;
    for (const auto& name : fields) {
        const ParamField* f = find_param_field(name);
        if (!f) throw std::invalid_argument("unknown parameter '" + name + "'");
        selected.push_back(f);
    }
    std::optional<ParamError> last;
    for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
        BioParams q = p;
        for (const ParamField* f : selected) {
            q.*f->member = p.*f->member * (1.0 + fraction * (2.0 * uniform01(rng) - 1.0));
        }
        try {
            validate_params(q);
            return {q, attempt};
        } catch (const ParamError& e) {
            last = e;
        }
    }
    throw ParamError(last->violation(), last->fields(),
                     "no valid perturbation after " + std::to_string(max_attempts) +
                         " attempts; binding constraint: " + last->what());
}

bool decreasing_over_last_half(const Trajectory& traj) {
    if (traj.size() < 2) return true;
    const double peak = *std::max_element(traj.u.begin(), traj.u.end());
    const double slack = 1e-9 * std::max(peak, 0.0);
    const double t_half = 0.5 * traj.t.back();
    for (std::size_t i = 1; i < traj.size(); ++i) {
        if (traj.t[i - 1] < t_half) continue;
        if (traj.u[i] > traj.u[i - 1] + slack) return false;
    }
    return true;
}

std::string format_trial(const TrialSummary& t) {
    std::ostringstream os;
    os << "trial=" << t.index << " attempts=" << t.attempts;
    for (const auto& f : param_fields()) os << ' ' << f.name << '=' << format_double(t.plant.*f.member);
    os << " termination=" << to_string(t.termination) << " extinction_time="
       << (t.extinction_time ? format_double(*t.extinction_time) : std::string("none"))
       << " final_F=" << format_double(t.final_F) << " max_u=" << format_double(t.max_u)
       << " total_u=" << format_double(t.total_u)
       << " nonnegative=" << (t.nonnegative ? "true" : "false")
       << " decreasing_tail=" << (t.decreasing_tail ? "true" : "false")
       << " pass=" << (t.pass ? "true" : "false");
    if (!t.error.empty()) os << " error=\"" << t.error << '"';
    return os.str();
}

RobustnessResult run_robustness(const RobustnessConfig& cfg) {
    const RobustnessSettings& s = cfg.settings;
    if (s.trials < 1) throw std::invalid_argument("robustness needs at least one trial");
    if (!(s.uncertainty >= 0.0 && s.uncertainty < 1.0)) {
        throw std::invalid_argument("uncertainty must lie in [0, 1)");
    }

    RobustnessResult res;
    res.nominal = integrate(build_sim_spec(cfg.base));
    const double threshold = cfg.base.sim.extinction_threshold;
    const ControllerConfig ctrl = make_controller_config(cfg.base.controller, validate_params(cfg.base.params));
    const double lambda = guaranteed_rate(ctrl, validate_params(cfg.base.params), false);

    auto run_trial = [&](std::size_t i) {
        std::pair<TrialSummary, Trajectory> out;
        TrialSummary& t = out.first;
        t.index = i;
        try {
            auto rng = make_stream(s.seed, i);
            const Perturbation pert = perturb_params(cfg.base.params, s.uncertainty, rng, s.perturb);
            t.plant = pert.params;
            t.attempts = pert.attempts;
            out.second = integrate(build_sim_spec(cfg.base, validate_params(pert.params)));
            const Trajectory& tr = out.second;
            t.termination = tr.termination;
            t.extinction_time = detect_extinction(tr, threshold);
            t.final_F = tr.F.back();
            t.max_u = *std::max_element(tr.u.begin(), tr.u.end());
            t.total_u = control_budget(tr, lambda).total;
            t.nonnegative = std::all_of(tr.u.begin(), tr.u.end(), [](double u) { return u >= 0.0; });
            t.decreasing_tail = decreasing_over_last_half(tr);
            t.pass = t.termination != Termination::nonnegativity_violation &&
                     t.extinction_time.has_value() && t.nonnegative && t.decreasing_tail;
        } catch (const std::exception& e) {
            t.error = e.what();
            t.pass = false;
        }
        return out;
    };

    std::vector<std::future<std::pair<TrialSummary, Trajectory>>> jobs;
    jobs.reserve(s.trials);
    for (std::size_t i = 0; i < s.trials; ++i) {
        jobs.push_back(std::async(std::launch::async, run_trial, i));
    }
    const double nominal_peak = *std::max_element(res.nominal.u.begin(), res.nominal.u.end());
    std::size_t extra_draws = 0;
    for (auto& job : jobs) {
        auto [summary, traj] = job.get();
        if (summary.pass) ++res.passed;
        if (nominal_peak > 0.0) res.max_peak_ratio = std::max(res.max_peak_ratio, summary.max_u / nominal_peak);
        extra_draws += summary.attempts - 1;
        res.trials.push_back(std::move(summary));
        res.trajectories.push_back(std::move(traj));
    }
    res.resample_rate = static_cast<double>(extra_draws) / static_cast<double>(s.trials);
    res.pass = res.passed == s.trials;

    if (!cfg.base.out_dir.empty()) {
        const std::filesystem::path dir(cfg.base.out_dir);
        std::filesystem::create_directories(dir);
        write_trajectory_csv(res.nominal, dir / (cfg.base.name + "_nominal.csv"));
        std::ostringstream os;
        for (std::size_t i = 0; i < res.trials.size(); ++i) {
            char name[64];
            std::snprintf(name, sizeof name, "_trial_%03zu.csv", i);
            if (!res.trajectories[i].t.empty()) {
                write_trajectory_csv(res.trajectories[i], dir / (cfg.base.name + name));
            }
            os << format_trial(res.trials[i]) << '\n';
        }
        os << "passed=" << res.passed << '/' << res.trials.size() << '\n'
           << "max_peak_ratio=" << format_double(res.max_peak_ratio) << '\n'
           << "resample_rate=" << format_double(res.resample_rate) << '\n'
           << "pass=" << (res.pass ? "true" : "false") << '\n';
        write_text(dir / (cfg.base.name + "_robustness.txt"), os.str());
    }
    return res;
}

}  // namespace sit
