#include "sit/controller.hpp"

#include "sit/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sit {

namespace {

// Common factor (1 - nu) nu_E beta_E^2 k / (gamma_s delta_M) of the virtual
// level, and the offset k (nu_E + delta_E) of its denominator.
struct VirtualShape {
    double gain;
    double base;
};

VirtualShape virtual_shape(const Params& p) {
    return {(1.0 - p->nu) * p->nu_E * p->beta_E * p->beta_E * p->k / (p->gamma_s * p->delta_M),
            p->k * (p->nu_E + p->delta_E)};
}

}  // namespace

ControllerSpec nominal_controller_spec() {
    ControllerSpec spec;
    spec.eps = 0.01;
    spec.eta = BioParams{}.delta_s - 0.02;
    spec.rho = 0.5;
    return spec;
}

double contraction_offset(double F_hat, const Params& p) {
    return p->nu * p->k * p->beta_E * p->nu_E /
           (p->nu_E * p->k + F_hat * p->beta_E + p->delta_E * p->k);
}

double ceiling_for_offset(double eps, const Params& p) {
    return (p->nu * p->k * p->beta_E * p->nu_E / eps - p->k * (p->nu_E + p->delta_E)) /
           p->beta_E;
}

ControllerConfig make_controller_config(const ControllerSpec& spec, const Params& p) {
    const int anchors = int(spec.F_hat.has_value()) + int(spec.F_hat_ratio.has_value()) +
                        int(spec.eps.has_value());
    if (anchors != 1) {
        throw std::invalid_argument(
            "controller needs exactly one of F_hat, F_hat_ratio, eps");
    }
    const double F_bar = persistence_equilibrium(p).F_bar;

    ControllerConfig cfg;
    if (spec.F_hat) {
        cfg.F_hat = *spec.F_hat;
    } else if (spec.F_hat_ratio) {
        cfg.F_hat = *spec.F_hat_ratio * F_bar;
    } else {
        if (!(*spec.eps > 0.0)) throw std::invalid_argument("eps must be positive");
        cfg.F_hat = ceiling_for_offset(*spec.eps, p);
    }
    if (!(cfg.F_hat > F_bar)) {
        std::ostringstream os;
        os << "F_hat=" << cfg.F_hat << " must exceed the persistence level F_bar=" << F_bar;
        throw std::invalid_argument(os.str());
    }
    cfg.eps = spec.eps ? *spec.eps : contraction_offset(cfg.F_hat, p);
    if (!(cfg.eps < p->delta_F)) {
        std::ostringstream os;
        os << "eps=" << cfg.eps << " must be below delta_F=" << p->delta_F
           << " (raise F_hat)";
        throw std::invalid_argument(os.str());
    }
    if (!(spec.eta > 0.0)) throw std::invalid_argument("eta must be positive");
    if (!(spec.rho > 0.0)) throw std::invalid_argument("rho must be positive");
    cfg.eta = spec.eta;
    cfg.rho = spec.rho;
    cfg.F2 = spec.F2 ? *spec.F2 : 0.5 * (F_bar + cfg.F_hat);
    if (!(cfg.F2 > F_bar && cfg.F2 < cfg.F_hat)) {
        std::ostringstream os;
        os << "F2=" << cfg.F2 << " must lie in (F_bar, F_hat) = (" << F_bar << ", "
           << cfg.F_hat << ")";
        throw std::invalid_argument(os.str());
    }
    cfg.cutoff = spec.cutoff;
    return cfg;
}

bool nonnegativity_guaranteed(const ControllerConfig& cfg, const Params& p) {
    return cfg.eta > p->delta_F && cfg.eta < p->delta_s;
}

double virtual_sterile_level(double F, const ControllerConfig& cfg, const Params& p) {
    const auto [gain, base] = virtual_shape(p);
    const double d = p->beta_E * F + base;
    return gain * F * (cfg.F_hat - F) / (d * d);
}

double virtual_sterile_slope(double F, const ControllerConfig& cfg, const Params& p) {
    const auto [gain, base] = virtual_shape(p);
    const double d = p->beta_E * F + base;
    return gain * ((cfg.F_hat - 2.0 * F) * d - 2.0 * p->beta_E * F * (cfg.F_hat - F)) /
           (d * d * d);
}

double mismatch_rate(double F, double Ms, const ControllerConfig& cfg, const Params& p) {
    if (F == 0.0) return 0.0;
    const double target = virtual_sterile_level(F, cfg, p);
    const double gap = Ms - target;
    if (std::abs(gap) > kMismatchSwitchTol * std::max(1.0, std::abs(target))) {
        return (recruitment(F, Ms, p) - cfg.eps * F) / gap * F;
    }
    return recruitment_dms(F, Ms, p) * F;
}

double cut_second_quadrant(double x, double y) {
    if (x < 0.0 && y > 0.0) return 0.0;
    return x * y;
}

double cutoff_weight(double F, const ControllerConfig& cfg) {
    if (F <= cfg.F2) return 1.0;
    if (F >= cfg.F_hat) return 0.0;
    const double s = std::clamp((F - cfg.F2) / (cfg.F_hat - cfg.F2), 0.0, 1.0);
    switch (cfg.cutoff) {
        case CutoffKind::cubic:
            return 1.0 - s * s * (3.0 - 2.0 * s);
        case CutoffKind::quintic:
            break;
    }
    return 1.0 - s * s * s * (s * (6.0 * s - 15.0) + 10.0);
}

namespace {

// Terms shared by the raw and cut-corrected laws.
double tracking_part(double F, double Ms, const ControllerConfig& cfg, const Params& p) {
    return (p->delta_s - cfg.eta) * Ms + cfg.eta * virtual_sterile_level(F, cfg, p) -
           cfg.rho * mismatch_rate(F, Ms, cfg, p);
}

double female_drift(double F, double Ms, const Params& p) {
    return recruitment(F, Ms, p) - p->delta_F * F;
}

}  // namespace

double backstepping_raw(double F, double Ms, const ControllerConfig& cfg, const Params& p) {
    return tracking_part(F, Ms, cfg, p) +
           virtual_sterile_slope(F, cfg, p) * female_drift(F, Ms, p);
}

double backstepping_plus(double F, double Ms, const ControllerConfig& cfg, const Params& p) {
    return tracking_part(F, Ms, cfg, p) +
           cut_second_quadrant(virtual_sterile_slope(F, cfg, p), female_drift(F, Ms, p));
}

double backstepping_global(double F, double Ms, const ControllerConfig& cfg, const Params& p) {
    const double w = cutoff_weight(F, cfg);
    if (w == 0.0) return 0.0;
    return backstepping_plus(F, Ms, cfg, p) * w;
}

double knee_contraction(double F2, const Params& p) {
    const double F_bar = persistence_equilibrium(p).F_bar;
    if (!(F2 > F_bar)) {
        std::ostringstream os;
        os << "knee F2=" << F2 << " must exceed F_bar=" << F_bar;
        throw std::invalid_argument(os.str());
    }
    return p->delta_F - p->nu * p->beta_E * p->nu_E / aquatic_turnover(F2, p);
}

double guaranteed_rate(const ControllerConfig& cfg, const Params& p, bool starts_above_knee) {
    double r = std::min(p->delta_F - cfg.eps, cfg.eta);
    if (starts_above_knee) r = std::min(r, knee_contraction(cfg.F2, p));
    return 2.0 * r;
}

std::string_view to_string(Variant v) {
    switch (v) {
        case Variant::none: return "none";
        case Variant::raw: return "raw";
        case Variant::plus: return "plus";
        case Variant::global: return "global";
    }
    return "?";
}

Variant parse_variant(std::string_view name) {
    if (name == "none") return Variant::none;
    if (name == "raw") return Variant::raw;
    if (name == "plus") return Variant::plus;
    if (name == "global") return Variant::global;
    throw std::invalid_argument("unknown variant '" + std::string(name) +
                                "' (expected none, raw, plus or global)");
}

std::string_view to_string(CutoffKind c) {
    return c == CutoffKind::cubic ? "cubic" : "quintic";
}

CutoffKind parse_cutoff(std::string_view name) {
    if (name == "cubic") return CutoffKind::cubic;
    if (name == "quintic") return CutoffKind::quintic;
    throw std::invalid_argument("unknown cutoff '" + std::string(name) +
                                "' (expected cubic or quintic)");
}

double ControlLaw::operator()(double F, double Ms) const {
    switch (variant_) {
        case Variant::none: return 0.0;
        case Variant::raw: return backstepping_raw(F, Ms, config_, params_);
        case Variant::plus: return backstepping_plus(F, Ms, config_, params_);
        case Variant::global: return backstepping_global(F, Ms, config_, params_);
    }
    return 0.0;
}

}  // namespace sit
