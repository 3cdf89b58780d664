#include "sit/analysis.hpp"
#include "sit/model.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace {

const sit::Params P = sit::nominal_params();
const sit::ControllerConfig C = sit::make_controller_config(sit::nominal_controller_spec(), P);

// Samples of V = v0 exp(-rate t) on [0, t_end], carried by F alone.
sit::Trajectory exponential(double v0, double rate, double t_end, std::size_t n) {
    sit::Trajectory tr;
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = t_end * static_cast<double>(i) / static_cast<double>(n);
        const double v = v0 * std::exp(-rate * t);
        tr.t.push_back(t);
        tr.V.push_back(v);
        tr.F.push_back(std::sqrt(v));
        tr.Ms.push_back(0.0);
        tr.u.push_back(0.0);
    }
    return tr;
}

}  // namespace

TEST_CASE("Lyapunov value") {
    const double F_bar = sit::persistence_equilibrium(P).F_bar;
    CHECK(sit::lyapunov_value(0.0, 0.0, C, P) == 0.0);
    CHECK(sit::lyapunov_value(F_bar, 0.0, C, P) == doctest::Approx(154923392.67872089).epsilon(1e-12));
    const double ms = sit::virtual_sterile_level(F_bar, C, P);
    CHECK(sit::lyapunov_value(F_bar, ms, C, P) == doctest::Approx(0.5 * C.rho * F_bar * F_bar).epsilon(1e-14));
    CHECK(sit::lyapunov_value(0.0, 3.0, C, P) == doctest::Approx(4.5));
}

TEST_CASE("log-linear decay fit is exact on exponentials") {
    std::vector<double> t, v;
    for (int i = 0; i < 50; ++i) {
        t.push_back(2.0 * i);
        v.push_back(7.0 * std::exp(-0.03 * 2.0 * i));
    }
    const sit::DecayFit f = sit::fit_decay_rate(t, v);
    CHECK(f.rate == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(f.prefactor == doctest::Approx(7.0).epsilon(1e-12));

    std::vector<double> t9(t.begin(), t.begin() + 9), v9(v.begin(), v.begin() + 9);
    CHECK_THROWS_AS((void)sit::fit_decay_rate(t9, v9), std::invalid_argument);
    v[3] = 0.0;
    CHECK_THROWS_AS((void)sit::fit_decay_rate(t, v), std::invalid_argument);
    v[3] = -1.0;
    CHECK_THROWS_AS((void)sit::fit_decay_rate(t, v), std::invalid_argument);
}

TEST_CASE("decay certificate accepts faster decay and rejects slower decay") {
    const sit::DecayReport ok = sit::verify_decay(exponential(5.0, 0.07, 400.0, 400), 0.06, 1e-3);
    CHECK(ok.pass());
    CHECK(ok.envelope_pass);
    CHECK(ok.norm_checked);
    CHECK(ok.lambda_fit == doctest::Approx(0.07).epsilon(1e-9));
    CHECK(ok.max_violation == doctest::Approx(1.0));

    const sit::DecayReport slow = sit::verify_decay(exponential(5.0, 0.05, 400.0, 400), 0.06, 1e-3);
    CHECK_FALSE(slow.envelope_pass);
    CHECK_FALSE(slow.pass());
    CHECK(slow.witness_t > 0.0);

    CHECK_FALSE(slow.norm_pass);
    CHECK(slow.norm_tail_growth > 1e-3);

    // An early bump only raises c0; the envelope still catches it.
    sit::Trajectory bump = exponential(5.0, 0.07, 400.0, 400);
    bump.V[10] *= 1.5;
    bump.F[10] = std::sqrt(bump.V[10]);
    const sit::DecayReport b = sit::verify_decay(bump, 0.06, 1e-3);
    CHECK_FALSE(b.envelope_pass);
    CHECK(b.norm_pass);
    CHECK(b.norm_c0 == doctest::Approx(1.5 * std::exp(-0.01 * 10.0)));

    // A transient that settles geometrically passes the norm estimate.
    sit::Trajectory settle = exponential(5.0, 0.06, 400.0, 400);
    for (std::size_t i = 0; i < settle.size(); ++i) {
        settle.F[i] *= std::sqrt(2.0 - std::exp(-0.05 * settle.t[i]));
    }
    const sit::DecayReport sd = sit::verify_decay(settle, 0.06, 1e-3);
    CHECK(sd.norm_pass);
    CHECK(sd.norm_c0 == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("dV/dt check along synthetic runs") {
    const sit::AuditReport ok = sit::vdot_check(exponential(5.0, 0.07, 400.0, 4000), C, P, 1e-3);
    CHECK(ok.pass);
    const sit::AuditReport bad = sit::vdot_check(exponential(1e6, 0.01, 400.0, 4000), C, P, 1e-3);
    CHECK_FALSE(bad.pass);
}

TEST_CASE("control budget") {
    sit::Trajectory tr = exponential(1.0, 0.0, 10.0, 100);
    for (double& u : tr.u) u = 2.0;
    const sit::ControlBudget b = sit::control_budget(tr, 0.5);
    CHECK(b.total == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(b.tail_bound == doctest::Approx(4.0));
    for (double& u : tr.u) u = 0.0;
    CHECK(sit::control_budget(tr, 0.5).total == 0.0);
    CHECK(sit::control_budget(tr, 0.5).tail_bound == 0.0);
    // Linear ramp is integrated exactly by the trapezoid rule.
    for (std::size_t i = 0; i < tr.size(); ++i) tr.u[i] = 3.0 * tr.t[i];
    CHECK(sit::control_budget(tr, 0.5).total == doctest::Approx(150.0).epsilon(1e-12));
}

TEST_CASE("grid audits pass for the nominal design") {
    for (sit::AuditCheck c : sit::all_audit_checks()) {
        const sit::AuditReport r = sit::audit_grid(C, P, c);
        INFO(r.check << " worst=" << r.worst_value << " " << r.note);
        CHECK(r.pass);
        CHECK(sit::parse_audit_check(r.check) == c);
    }
    CHECK(sit::all_audit_checks().size() == 6);
    CHECK_THROWS_AS((void)sit::parse_audit_check("lemma5"), std::invalid_argument);
}
