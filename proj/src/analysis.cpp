#include "sit/analysis.hpp"

#include "sit/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sit {

double lyapunov_value(double F, double Ms, const ControllerConfig& cfg, const Params& p) {
    const double gap = Ms - virtual_sterile_level(F, cfg, p);
    return 0.5 * cfg.rho * F * F + 0.5 * gap * gap;
}

DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> value) {
    if (t.size() != value.size()) throw std::invalid_argument("fit_decay_rate: size mismatch");
    if (t.size() < 10) throw std::invalid_argument("fit_decay_rate: need at least 10 samples");
    const auto n = static_cast<double>(t.size());
    double st = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(value[i] > 0.0)) {
            std::ostringstream os;
            os << "fit_decay_rate: non-positive value " << value[i] << " at t=" << t[i];
            throw std::invalid_argument(os.str());
        }
        st += t[i];
        sy += std::log(value[i]);
    }
    const double mt = st / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double dx = t[i] - mt;
        sxx += dx * dx;
        sxy += dx * (std::log(value[i]) - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit_decay_rate: degenerate time samples");
    const double slope = sxy / sxx;
    return {-slope, std::exp(my - slope * mt)};
}

DecayReport verify_decay(const Trajectory& traj, double lambda_theory, double tol) {
    DecayReport r;
    r.lambda_theory = lambda_theory;
    if (traj.size() == 0 || traj.V.front() == 0.0) return r;

    const double V0 = traj.V.front();
    const double t_last = traj.t.back();
    r.max_violation = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double ratio = traj.V[i] / (V0 * std::exp(-lambda_theory * traj.t[i]));
        r.max_violation = std::max(r.max_violation, ratio);
        if (r.envelope_pass && ratio > 1.0 + tol) {
            r.envelope_pass = false;
            r.witness_t = traj.t[i];
        }
    }

    std::vector<double> wt, wv;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (traj.t[i] < 0.05 * t_last || traj.V[i] <= 1e-12 * V0) continue;
        wt.push_back(traj.t[i]);
        wv.push_back(traj.V[i]);
    }
    if (wt.size() >= 10) {
        const DecayFit fit = fit_decay_rate(wt, wv);
        r.lambda_fit = fit.rate;
        r.c0_fit = fit.prefactor / V0;
        r.window_start = wt.front();
        r.window_end = wt.back();
    } else {
        r.lambda_fit = std::numeric_limits<double>::quiet_NaN();
    }

    const bool have_states = traj.F.size() == traj.size() && traj.Ms.size() == traj.size();
    const double n0 = have_states ? traj.F[0] * traj.F[0] + traj.Ms[0] * traj.Ms[0] : 0.0;
    if (have_states && n0 > 0.0) {
        r.norm_checked = true;
        auto ratio_at = [&](std::size_t i) {
            const double n = traj.F[i] * traj.F[i] + traj.Ms[i] * traj.Ms[i];
            return n * std::exp(lambda_theory * traj.t[i]) / n0;
        };
        // Active span: samples with V above the floor used by the fit.
        double t_active = 0.0;
        for (std::size_t i = 0; i < traj.size(); ++i) {
            if (traj.V[i] > 1e-12 * V0) t_active = traj.t[i];
        }
        // c0 is the running supremum of the ratio; its growth over four equal
        // blocks of the second half of the active span must contract, and the
        // last block may add at most tol * c0.
        constexpr int kBlocks = 4;
        const double t_half = 0.5 * t_active;
        double sup = 1.0;
        std::array<double, kBlocks> growth{};
        for (std::size_t i = 0; i < traj.size() && traj.t[i] <= t_active; ++i) {
            const double ratio = ratio_at(i);
            if (ratio > sup && traj.t[i] > t_half && t_active > 0.0) {
                const int k = std::min(kBlocks - 1, static_cast<int>((traj.t[i] - t_half) / (t_half / kBlocks)));
                growth[static_cast<std::size_t>(k)] += ratio - sup;
            }
            sup = std::max(sup, ratio);
        }
        r.norm_c0 = sup;
        r.norm_tail_growth = growth.back() / sup;
        r.norm_contracting = true;
        for (std::size_t k = 1; k < growth.size(); ++k) {
            if (growth[k] > growth[k - 1] + tol * sup) r.norm_contracting = false;
        }
        r.norm_pass = r.norm_contracting && r.norm_tail_growth <= tol;
    }
    return r;
}

AuditReport vdot_check(const Trajectory& traj, const ControllerConfig& cfg, const Params& p,
                       double tol) {
    AuditReport r;
    r.check = "vdot";
    const bool above = traj.size() > 0 && traj.F.front() > cfg.F2;
    const double lambda = guaranteed_rate(cfg, p, above);
    {
        std::ostringstream os;
        os << traj.size() << " samples, central differences, lambda=" << lambda;
        r.grid = os.str();
    }
    r.worst_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        const double vdot = (traj.V[i + 1] - traj.V[i - 1]) / (traj.t[i + 1] - traj.t[i - 1]);
        const double excess = vdot + lambda * traj.V[i] - tol * (1.0 + traj.V[i]);
        if (excess > r.worst_value) {
            r.worst_value = excess;
            r.witness_F = traj.F[i];
            r.witness_Ms = traj.Ms[i];
        }
    }
    r.pass = traj.size() < 3 || r.worst_value <= 0.0;
    return r;
}

ControlBudget control_budget(const Trajectory& traj, double lambda) {
    ControlBudget b;
    for (std::size_t i = 1; i < traj.size(); ++i) {
        b.total += 0.5 * (traj.u[i] + traj.u[i - 1]) * (traj.t[i] - traj.t[i - 1]);
    }
    if (traj.size() > 0 && lambda > 0.0) {
        const std::size_t from = traj.size() - std::max<std::size_t>(1, traj.size() / 10);
        const double u_max = *std::max_element(traj.u.begin() + static_cast<long>(from), traj.u.end());
        b.tail_bound = std::max(u_max, 0.0) / lambda;
    }
    return b;
}

namespace {

constexpr std::array<AuditCheck, 6> kChecks{
    AuditCheck::nonneg_plus,  AuditCheck::lemma4,       AuditCheck::pi_sign,
    AuditCheck::mstar_identity, AuditCheck::utilde_bound, AuditCheck::nonneg_global,
};

double linspace(double lo, double hi, std::size_t i, std::size_t n) {
    return n < 2 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

double max_virtual_level(const ControllerConfig& cfg, const Params& p, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        m = std::max(m, virtual_sterile_level(linspace(0.0, cfg.F_hat, i, n), cfg, p));
    }
    return m;
}

std::string describe_2d(std::size_t nF, double F_hi, std::size_t nMs, double Ms_hi) {
    std::ostringstream os;
    os << nF << "x" << nMs << " on F in [0, " << F_hi << "] x Ms in [0, " << Ms_hi << "]";
    return os.str();
}

// Visits every node of a uniform 2-D grid.
template <class Fn>
void sweep(std::size_t nF, double F_hi, std::size_t nMs, double Ms_hi, Fn&& fn) {
    for (std::size_t i = 0; i < nF; ++i) {
        const double F = linspace(0.0, F_hi, i, nF);
        for (std::size_t j = 0; j < nMs; ++j) fn(F, linspace(0.0, Ms_hi, j, nMs));
    }
}

// The Lemma identity in closed form: M_s*(F) - F dM_s*/dF.
double lemma_gap_closed_form(double F, const ControllerConfig& cfg, const Params& p) {
    const double base = p->k * (p->nu_E + p->delta_E);
    const double d = p->beta_E * F + base;
    return (1.0 - p->nu) * p->nu_E * p->beta_E * p->beta_E * p->k * F * F *
           (p->beta_E * (2.0 * cfg.F_hat - F) + base) / (p->gamma_s * p->delta_M * d * d * d);
}

AuditReport audit_nonneg(const ControllerConfig& cfg, const Params& p, const AuditGrid& g,
                         bool global) {
    AuditReport r;
    r.check = global ? "nonneg_global" : "nonneg_plus";
    const double F_hi = global ? g.global_F_span * cfg.F_hat : cfg.F_hat;
    const double Ms_hi = global ? g.global_Ms_max : g.ms_span * max_virtual_level(cfg, p, g.n_line);
    r.grid = describe_2d(g.n_F, F_hi, g.n_Ms, Ms_hi);
    double scale = 0.0;
    r.worst_value = std::numeric_limits<double>::infinity();
    sweep(g.n_F, F_hi, g.n_Ms, Ms_hi, [&](double F, double Ms) {
        const double u = global ? backstepping_global(F, Ms, cfg, p)
                                : backstepping_plus(F, Ms, cfg, p);
        scale = std::max(scale, std::abs(u));
        if (u < r.worst_value) {
            r.worst_value = u;
            r.witness_F = F;
            r.witness_Ms = Ms;
        }
    });
    r.pass = r.worst_value >= -1e-9 * scale;
    std::ostringstream os;
    os << "min u >= -1e-9 * max|u| (max|u|=" << scale << ")";
    if (!nonnegativity_guaranteed(cfg, p)) os << "; eta outside (delta_F, delta_s)";
    r.note = os.str();
    return r;
}

AuditReport audit_lemma(const ControllerConfig& cfg, const Params& p, const AuditGrid& g) {
    AuditReport r;
    r.check = "lemma4";
    std::ostringstream gs;
    gs << g.n_line << " points on F in [0, " << cfg.F_hat << "]";
    r.grid = gs.str();
    double scale = 0.0, worst_identity = 0.0;
    r.worst_value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.n_line; ++i) {
        const double F = linspace(0.0, cfg.F_hat, i, g.n_line);
        const double level = virtual_sterile_level(F, cfg, p);
        const double gap = level - F * virtual_sterile_slope(F, cfg, p);
        scale = std::max(scale, std::abs(level));
        if (gap < r.worst_value) {
            r.worst_value = gap;
            r.witness_F = F;
        }
        const double closed = lemma_gap_closed_form(F, cfg, p);
        if (closed != 0.0) {
            worst_identity = std::max(worst_identity, std::abs(gap - closed) / std::abs(closed));
        } else if (gap != 0.0) {
            worst_identity = std::numeric_limits<double>::infinity();
        }
    }
    r.pass = r.worst_value >= -1e-12 * scale && worst_identity <= 1e-9;
    std::ostringstream os;
    os << "min gap >= -1e-12 * " << scale << "; closed-form identity residual "
       << worst_identity << " (tol 1e-9)";
    r.note = os.str();
    return r;
}

AuditReport audit_pi_sign(const ControllerConfig& cfg, const Params& p, const AuditGrid& g) {
    AuditReport r;
    r.check = "pi_sign";
    const double Ms_hi = g.ms_span * max_virtual_level(cfg, p, g.n_line);
    r.grid = describe_2d(g.n_F, cfg.F_hat, g.n_Ms, Ms_hi);
    r.worst_value = -std::numeric_limits<double>::infinity();
    sweep(g.n_F, cfg.F_hat, g.n_Ms, Ms_hi, [&](double F, double Ms) {
        const double v = mismatch_rate(F, Ms, cfg, p);
        if (v > r.worst_value) {
            r.worst_value = v;
            r.witness_F = F;
            r.witness_Ms = Ms;
        }
    });
    r.pass = r.worst_value <= 1e-12;
    r.note = "max pi <= 1e-12";
    return r;
}

AuditReport audit_identity(const ControllerConfig& cfg, const Params& p, const AuditGrid& g) {
    AuditReport r;
    r.check = "mstar_identity";
    std::ostringstream gs;
    gs << g.n_log << " log-spaced points on F in [" << g.log_min_F << ", " << cfg.F_hat << "]";
    r.grid = gs.str();
    const double lo = std::log(g.log_min_F), hi = std::log(cfg.F_hat);
    r.worst_value = 0.0;
    for (std::size_t i = 0; i < g.n_log; ++i) {
        const double F = i + 1 == g.n_log ? cfg.F_hat : std::exp(linspace(lo, hi, i, g.n_log));
        const double target = cfg.eps * F;
        const double rel =
            std::abs(recruitment(F, virtual_sterile_level(F, cfg, p), p) - target) / target;
        if (rel > r.worst_value) {
            r.worst_value = rel;
            r.witness_F = F;
            r.witness_Ms = virtual_sterile_level(F, cfg, p);
        }
    }
    r.pass = r.worst_value <= 1e-9;
    r.note = "max |g(F, M_s*(F)) - eps F| / (eps F) <= 1e-9";
    return r;
}

AuditReport audit_linear_bound(const ControllerConfig& cfg, const Params& p, const AuditGrid& g) {
    AuditReport r;
    r.check = "utilde_bound";
    const double F_hi = g.global_F_span * cfg.F_hat;
    r.grid = describe_2d(g.n_F, F_hi, g.n_Ms, g.global_Ms_max);
    double K = 0.0;
    bool finite = true;
    sweep(g.n_F, F_hi, g.n_Ms, g.global_Ms_max, [&](double F, double Ms) {
        const double excess = backstepping_global(F, Ms, cfg, p) - (p->delta_s - cfg.eta) * Ms;
        if (F == 0.0) {
            if (excess > 1e-9 * std::max(1.0, Ms)) finite = false;
            return;
        }
        const double k = excess / F;
        if (!std::isfinite(k)) finite = false;
        if (k > K) {
            K = k;
            r.witness_F = F;
            r.witness_Ms = Ms;
        }
    });
    r.worst_value = K;
    r.pass = finite && std::isfinite(K);
    std::ostringstream os;
    os << "u_tilde <= (delta_s - eta) Ms + K F with estimated K=" << K;
    r.note = os.str();
    return r;
}

}  // namespace

std::string_view to_string(AuditCheck c) {
    switch (c) {
        case AuditCheck::nonneg_plus: return "nonneg_plus";
        case AuditCheck::lemma4: return "lemma4";
        case AuditCheck::pi_sign: return "pi_sign";
        case AuditCheck::mstar_identity: return "mstar_identity";
        case AuditCheck::utilde_bound: return "utilde_bound";
        case AuditCheck::nonneg_global: return "nonneg_global";
    }
    return "?";
}

AuditCheck parse_audit_check(std::string_view name) {
    for (AuditCheck c : kChecks) {
        if (to_string(c) == name) return c;
    }
    throw std::invalid_argument("unknown audit check '" + std::string(name) + "'");
}

std::span<const AuditCheck> all_audit_checks() { return kChecks; }

AuditReport audit_grid(const ControllerConfig& cfg, const Params& p, AuditCheck which,
                       const AuditGrid& grid) {
    switch (which) {
        case AuditCheck::nonneg_plus: return audit_nonneg(cfg, p, grid, false);
        case AuditCheck::lemma4: return audit_lemma(cfg, p, grid);
        case AuditCheck::pi_sign: return audit_pi_sign(cfg, p, grid);
        case AuditCheck::mstar_identity: return audit_identity(cfg, p, grid);
        case AuditCheck::utilde_bound: return audit_linear_bound(cfg, p, grid);
        case AuditCheck::nonneg_global: return audit_nonneg(cfg, p, grid, true);
    }
    throw std::invalid_argument("unknown audit check");
}

}  // namespace sit
