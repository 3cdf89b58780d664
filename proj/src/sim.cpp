#include "sit/sim.hpp"

#include "sit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sit {

std::string_view to_string(ModelKind m) { return m == ModelKind::full ? "full" : "reduced"; }

ModelKind parse_model(std::string_view name) {
    if (name == "reduced") return ModelKind::reduced;
    if (name == "full") return ModelKind::full;
    throw std::invalid_argument("unknown model '" + std::string(name) +
                                "' (expected reduced or full)");
}

std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::horizon: return "horizon";
        case Termination::extinction: return "extinction";
        case Termination::nonnegativity_violation: return "nonnegativity_violation";
    }
    return "?";
}

ClampResult clamp_nonnegative(std::span<double> x, double tol) {
    ClampResult r;
    for (double& v : x) {
        if (v >= 0.0) continue;
        if (v > -tol) {
            r.max_overshoot = std::max(r.max_overshoot, -v);
            v = 0.0;
        } else {
            r.violated = true;
        }
    }
    return r;
}

ClampResult step_reduced(ReducedState& x, double dt, const ControlLaw& law, const Params& plant,
                         double clamp_tol) {
    auto rhs = [&](const std::array<double, 2>& s) {
        const double u = law(std::max(s[0], 0.0), std::max(s[1], 0.0));
        const ReducedState d = reduced_rhs({s[0], s[1]}, u, plant);
        return std::array<double, 2>{d.F, d.Ms};
    };
    auto next = rk4_step(std::array<double, 2>{x.F, x.Ms}, dt, rhs);
    const ClampResult r = clamp_nonnegative(next, clamp_tol);
    if (!r.violated) x = {next[0], next[1]};
    return r;
}

ClampResult step_full(FullState& x, double dt, const ControlLaw& law, const Params& plant,
                      double clamp_tol) {
    auto rhs = [&](const std::array<double, 4>& s) {
        const double u = law(std::max(s[2], 0.0), std::max(s[3], 0.0));
        const FullState d = full_rhs({s[0], s[1], s[2], s[3]}, u, plant);
        return std::array<double, 4>{d.E, d.M, d.F, d.Ms};
    };
    auto next = rk4_step(std::array<double, 4>{x.E, x.M, x.F, x.Ms}, dt, rhs);
    const ClampResult r = clamp_nonnegative(next, clamp_tol);
    if (!r.violated) x = {next[0], next[1], next[2], next[3]};
    return r;
}

namespace {

void validate_spec(const SimSpec& spec) {
    if (!(spec.t_end > 0.0) || !std::isfinite(spec.t_end)) {
        throw std::invalid_argument("t_end must be positive and finite");
    }
    if (!(spec.dt > 0.0) || spec.dt > 0.1) {
        throw std::invalid_argument("dt must lie in (0, 0.1]");
    }
    if (spec.record_every == 0) throw std::invalid_argument("record_every must be >= 1");
    if (spec.clamp_tol && !(*spec.clamp_tol >= 0.0)) {
        throw std::invalid_argument("clamp_tol must be non-negative");
    }
    auto negative = [](auto... v) { return ((v < 0.0 || !std::isfinite(v)) || ...); };
    const bool bad = std::visit(
        [&](const auto& s) {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, ReducedState>) {
                return negative(s.F, s.Ms);
            } else {
                return negative(s.E, s.M, s.F, s.Ms);
            }
        },
        spec.initial);
    if (bad) throw std::invalid_argument("initial state must be finite and non-negative");
}

template <class State>
void record(Trajectory& tr, double t, const State& s, const ControlLaw& law) {
    tr.t.push_back(t);
    tr.F.push_back(s.F);
    tr.Ms.push_back(s.Ms);
    if constexpr (std::is_same_v<State, FullState>) {
        tr.E.push_back(s.E);
        tr.M.push_back(s.M);
    }
    tr.u.push_back(law(s.F, s.Ms));
    tr.V.push_back(lyapunov_value(s.F, s.Ms, law.config(), law.params()));
}

template <class State, class Step>
Trajectory run(const SimSpec& spec, State x, Step step) {
    Trajectory tr;
    tr.model = spec.model();

    double norm2 = 0.0;
    if constexpr (std::is_same_v<State, FullState>) {
        norm2 = x.E * x.E + x.M * x.M + x.F * x.F + x.Ms * x.Ms;
    } else {
        norm2 = x.F * x.F + x.Ms * x.Ms;
    }
    const double tol = spec.clamp_tol.value_or(1e-9 * std::sqrt(norm2));

    const auto n = static_cast<std::size_t>(std::ceil(spec.t_end / spec.dt - 1e-9));
    const std::size_t every = spec.record_every;
    record(tr, 0.0, x, spec.law);
    if (spec.stop_below && x.F <= *spec.stop_below) {
        tr.termination = Termination::extinction;
        return tr;
    }
    for (std::size_t i = 1; i <= n; ++i) {
        const double t = i == n ? spec.t_end : static_cast<double>(i) * spec.dt;
        const double h = t - static_cast<double>(i - 1) * spec.dt;
        const ClampResult c = step(x, h, spec.law, spec.plant, tol);
        if (c.violated) {
            tr.termination = Termination::nonnegativity_violation;
            break;
        }
        tr.max_clamp = std::max(tr.max_clamp, c.max_overshoot);
        tr.steps = i;
        const bool stop = spec.stop_below && x.F <= *spec.stop_below;
        if (i % every == 0 || i == n || stop) record(tr, t, x, spec.law);
        if (stop) {
            tr.termination = Termination::extinction;
            break;
        }
    }
    return tr;
}

}  // namespace

Trajectory integrate(const SimSpec& spec) {
    validate_spec(spec);
    if (const auto* s = std::get_if<ReducedState>(&spec.initial)) {
        return run(spec, *s, step_reduced);
    }
    return run(spec, std::get<FullState>(spec.initial), step_full);
}

std::optional<double> detect_extinction(const Trajectory& traj, double threshold) {
    if (!(threshold > 0.0)) throw std::invalid_argument("extinction threshold must be positive");
    std::optional<double> first;
    for (std::size_t i = traj.size(); i-- > 0;) {
        if (traj.F[i] > threshold) break;
        first = traj.t[i];
    }
    return first;
}

}  // namespace sit
