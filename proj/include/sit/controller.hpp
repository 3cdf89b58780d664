#pragma once

#include "sit/params.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace sit {

// Shape of the cut-off that disables the controller above F_hat.
enum class CutoffKind {
    cubic,    // 3s^2 - 2s^3, C1
    quintic,  // 6s^5 - 15s^4 + 10s^3, C2
};

// Resolved design constants of the backstepping family.
//
//   F_hat  ceiling of the virtual feedback; the virtual sterile level is
//          positive on (0, F_hat) and vanishes at both ends.
//   eps    contraction offset tied to F_hat: with the virtual level in place
//          the females decay at rate delta_F - eps.
//   eta    tracking gain of the sterile-male error.
//   rho    weight of F^2 in the Lyapunov function.
//   F2     knee of the cut-off, F_bar < F2 < F_hat.
struct ControllerConfig {
    double F_hat = 0.0;
    double eps = 0.0;
    double eta = 0.0;
    double rho = 0.0;
    double F2 = 0.0;
    CutoffKind cutoff = CutoffKind::quintic;
};

// User-facing description of a controller. Exactly one of F_hat, F_hat_ratio
// (relative to F_bar) or eps anchors the design; the other two follow from
// the offset relation. F2 defaults to the midpoint of (F_bar, F_hat).
struct ControllerSpec {
    std::optional<double> F_hat;
    std::optional<double> F_hat_ratio;
    std::optional<double> eps;
    double eta = 0.1;
    double rho = 0.5;
    std::optional<double> F2;
    CutoffKind cutoff = CutoffKind::quintic;

    friend bool operator==(const ControllerSpec&, const ControllerSpec&) = default;
};

// eps = 0.01, eta = delta_s - 0.02, rho = 0.5.
ControllerSpec nominal_controller_spec();

// Builds and validates a ControllerConfig. Throws std::invalid_argument when
// the anchor is missing or ambiguous, F_hat <= F_bar, eps >= delta_F,
// rho <= 0, eta <= 0, or F2 is outside (F_bar, F_hat).
ControllerConfig make_controller_config(const ControllerSpec& spec, const Params& p);

// True when eta lies in (delta_F, delta_s), the range for which the
// cut-corrected law is guaranteed non-negative.
bool nonnegativity_guaranteed(const ControllerConfig& cfg, const Params& p);

// nu k beta_E nu_E / (nu_E k + F_hat beta_E + delta_E k).
double contraction_offset(double F_hat, const Params& p);

// Inverse of contraction_offset.
double ceiling_for_offset(double eps, const Params& p);

// Virtual sterile-male level M_s*(F). Closed form for every F >= 0; negative
// above F_hat.
double virtual_sterile_level(double F, const ControllerConfig& cfg, const Params& p);

// dM_s*/dF.
double virtual_sterile_slope(double F, const ControllerConfig& cfg, const Params& p);

// Divided difference of recruitment between Ms and the virtual level, times F.
// Falls back to the partial derivative within a relative 1e-8 band of the
// diagonal, and is 0 at the origin.
double mismatch_rate(double F, double Ms, const ControllerConfig& cfg, const Params& p);

inline constexpr double kMismatchSwitchTol = 1e-8;

// x*y except in the open second quadrant (x < 0, y > 0), where it is 0.
double cut_second_quadrant(double x, double y);

// 1 on [0, F2], 0 on [F_hat, inf), smooth and non-increasing in between.
double cutoff_weight(double F, const ControllerConfig& cfg);

double backstepping_raw(double F, double Ms, const ControllerConfig& cfg, const Params& p);
double backstepping_plus(double F, double Ms, const ControllerConfig& cfg, const Params& p);
double backstepping_global(double F, double Ms, const ControllerConfig& cfg, const Params& p);

// Contraction rate of the females above the knee F2:
// delta_F - nu beta_E nu_E / aquatic_turnover(F2). Throws
// std::invalid_argument when F2 <= F_bar.
double knee_contraction(double F2, const Params& p);

// 2 min(delta_F - eps, eta), and additionally min'd with the knee
// contraction when the trajectory starts above F2.
double guaranteed_rate(const ControllerConfig& cfg, const Params& p, bool starts_above_knee);

enum class Variant { none, raw, plus, global };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view name);

std::string_view to_string(CutoffKind c);
CutoffKind parse_cutoff(std::string_view name);

// A state-feedback release law bound to the parameters it was designed with.
// The plant it drives may carry different parameters.
class ControlLaw {
public:
    ControlLaw(Variant variant, const ControllerConfig& config, const Params& params)
        : variant_(variant), config_(config), params_(params) {}

    double operator()(double F, double Ms) const;

    Variant variant() const noexcept { return variant_; }
    const ControllerConfig& config() const noexcept { return config_; }
    const Params& params() const noexcept { return params_; }

private:
    Variant variant_;
    ControllerConfig config_;
    Params params_;
};

}  // namespace sit
