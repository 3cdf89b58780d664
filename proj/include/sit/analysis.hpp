#pragma once

#include "sit/controller.hpp"
#include "sit/sim.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sit {

// (rho/2) F^2 + (1/2) (Ms - M_s*(F))^2. Zero only at the origin.
double lyapunov_value(double F, double Ms, const ControllerConfig& cfg, const Params& p);

struct DecayFit {
    double rate = 0.0;       // negated slope of ln(value) against t
    double prefactor = 0.0;  // exp(intercept)
};

// Ordinary least squares on (t, ln value). Needs at least 10 samples, all
// positive; throws std::invalid_argument otherwise.
DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> value);

// Exponential-decay certificate checked against a recorded trajectory.
//
// The Lyapunov envelope V(t) <= V(0) exp(-lambda t) (1 + tol) is checked at
// every sample. The empirical rate is fitted on ln V over the window that
// skips the first 5% of the horizon and samples below 1e-12 V(0). The
// squared-norm estimate F^2 + Ms^2 <= c0 exp(-lambda t) (F(0)^2 + Ms(0)^2)
// takes c0 as the supremum of the ratio over the active span (samples with V
// above 1e-12 V(0)). The supremum must have settled: its growth over four
// equal blocks of the second half of the span must not increase from block
// to block (up to tol c0), and the last block may add at most tol c0.
struct DecayReport {
    double lambda_theory = 0.0;
    double lambda_fit = 0.0;
    double c0_fit = 0.0;         // fitted prefactor of V, relative to V(0)
    double max_violation = 0.0;  // max of V(t) / (V(0) exp(-lambda t))
    double window_start = 0.0;
    double window_end = 0.0;
    bool envelope_pass = true;
    double witness_t = 0.0;  // first sample outside the envelope

    double norm_c0 = 1.0;
    double norm_tail_growth = 0.0;  // growth of the supremum in the last block, over c0
    bool norm_contracting = true;
    bool norm_checked = false;
    bool norm_pass = true;

    bool pass() const noexcept { return envelope_pass && norm_pass; }
};

DecayReport verify_decay(const Trajectory& traj, double lambda_theory, double tol);

struct AuditReport {
    std::string check;
    std::string grid;
    bool pass = false;
    double worst_value = 0.0;
    double witness_F = 0.0;
    double witness_Ms = 0.0;
    std::string note;
};

// Central-difference estimate of dV/dt at interior samples must satisfy
// dV/dt <= -lambda V + tol (1 + V). lambda is the guaranteed rate, including
// the knee contraction when the run starts above F2.
AuditReport vdot_check(const Trajectory& traj, const ControllerConfig& cfg, const Params& p,
                       double tol);

struct ControlBudget {
    double total = 0.0;       // trapezoidal integral of u over the record
    double tail_bound = 0.0;  // u_max / lambda over the last tenth of the record
};

ControlBudget control_budget(const Trajectory& traj, double lambda);

enum class AuditCheck {
    nonneg_plus,
    lemma4,
    pi_sign,
    mstar_identity,
    utilde_bound,
    nonneg_global,
};

std::string_view to_string(AuditCheck c);
AuditCheck parse_audit_check(std::string_view name);
std::span<const AuditCheck> all_audit_checks();

struct AuditGrid {
    std::size_t n_F = 400;
    std::size_t n_Ms = 400;
    std::size_t n_line = 4000;       // one-dimensional checks on [0, F_hat]
    std::size_t n_log = 1000;        // log-spaced identity check
    double log_min_F = 1e-6;
    double ms_span = 10.0;           // Ms range in multiples of max M_s*
    double global_F_span = 3.0;      // F range of the global checks, times F_hat
    double global_Ms_max = 1e5;
};

AuditReport audit_grid(const ControllerConfig& cfg, const Params& p, AuditCheck which,
                       const AuditGrid& grid = {});

}  // namespace sit
