#pragma once

#include "sit/controller.hpp"
#include "sit/model.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace sit {

enum class ModelKind { reduced, full };

std::string_view to_string(ModelKind m);
ModelKind parse_model(std::string_view name);

enum class Termination { horizon, extinction, nonnegativity_violation };

std::string_view to_string(Termination t);

// Closed-loop run description. The law carries the parameters it was designed
// with; the plant parameters may differ.
struct SimSpec {
    ControlLaw law;
    Params plant;
    std::variant<ReducedState, FullState> initial;
    double t_end = 1000.0;
    double dt = 0.01;
    std::size_t record_every = 100;
    // Negative overshoot zeroed silently; defaults to 1e-9 times the norm of
    // the initial state.
    std::optional<double> clamp_tol;
    // Stop once F drops to or below this level.
    std::optional<double> stop_below;

    ModelKind model() const noexcept {
        return std::holds_alternative<FullState>(initial) ? ModelKind::full : ModelKind::reduced;
    }
};

// Columnar time series. E and M are empty for the reduced model. V is the
// Lyapunov value of (F, Ms) under the law's design constants.
struct Trajectory {
    ModelKind model = ModelKind::reduced;
    std::vector<double> t, F, Ms, E, M, u, V;
    Termination termination = Termination::horizon;
    std::size_t steps = 0;
    double max_clamp = 0.0;  // largest negative overshoot that was zeroed

    std::size_t size() const noexcept { return t.size(); }
};

// Classical four-stage Runge-Kutta step. The right-hand side receives the
// stage state, so feedback is re-evaluated at every stage.
template <std::size_t N, class Rhs>
std::array<double, N> rk4_step(const std::array<double, N>& x, double dt, Rhs&& rhs) {
    auto axpy = [](const std::array<double, N>& a, double h, const std::array<double, N>& b) {
        std::array<double, N> r;
        for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + h * b[i];
        return r;
    };
    const std::array<double, N> k1 = rhs(x);
    const std::array<double, N> k2 = rhs(axpy(x, 0.5 * dt, k1));
    const std::array<double, N> k3 = rhs(axpy(x, 0.5 * dt, k2));
    const std::array<double, N> k4 = rhs(axpy(x, dt, k3));
    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

struct ClampResult {
    double max_overshoot = 0.0;
    bool violated = false;
};

// Zeroes components in (-tol, 0). A component at or below -tol is left as is
// and flagged.
ClampResult clamp_nonnegative(std::span<double> x, double tol);

// One guarded RK4 step of the closed loop. Returns the clamp outcome; x is
// updated in place.
ClampResult step_reduced(ReducedState& x, double dt, const ControlLaw& law, const Params& plant,
                         double clamp_tol);
ClampResult step_full(FullState& x, double dt, const ControlLaw& law, const Params& plant,
                      double clamp_tol);

// Fixed-step integration up to t_end, sampling every record_every steps plus
// the final step. Throws std::invalid_argument for an invalid spec.
Trajectory integrate(const SimSpec& spec);

// Earliest sample time at which F is at or below threshold and stays there
// for every later sample.
std::optional<double> detect_extinction(const Trajectory& traj, double threshold);

}  // namespace sit
