#include "sit/model.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

namespace {

const sit::Params P = sit::nominal_params();

}  // namespace

TEST_CASE("aquatic turnover") {
    CHECK(sit::aquatic_turnover(0.0, P) == doctest::Approx(0.035).epsilon(1e-15));
    CHECK(sit::aquatic_turnover(12264.0, P) == doctest::Approx(0.6124826952959458).epsilon(1e-14));
    double prev = sit::aquatic_turnover(0.0, P);
    for (int i = 1; i <= 1000; ++i) {
        const double a = sit::aquatic_turnover(100.0 * i, P);
        REQUIRE(a > prev);
        prev = a;
    }
}

TEST_CASE("recruitment edge values") {
    CHECK(sit::recruitment(0.0, 0.0, P) == 0.0);
    CHECK(sit::recruitment(0.0, 1e6, P) == 0.0);
    CHECK(sit::recruitment(1e-300, 0.0, P) >= 0.0);
    // Without sterile males every hatch is fertile.
    const double F = 5000.0;
    const double expected = P->nu * P->nu_E * P->beta_E * F / sit::aquatic_turnover(F, P);
    CHECK(sit::recruitment(F, 0.0, P) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(sit::recruitment(F, 1e300, P) < 1e-200);
}

TEST_CASE("recruitment agrees with the quasi-steady-state substitution of the full model") {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        for (int j = 0; j < 100; ++j) {
            const double F = 1e-3 + 600.0 * i;
            const double Ms = 1000.0 * j;
            const double ref = static_cast<double>(oracle::recruitment_via_quasi_steady_state(F, Ms, P.values()));
            worst = std::max(worst, oracle::relative_error(sit::recruitment(F, Ms, P), ref));
        }
    }
    CHECK(worst <= 1e-13);
}

TEST_CASE("recruitment is non-increasing in Ms and its partial matches central differences") {
    const double F_bar = sit::persistence_equilibrium(P).F_bar;
    auto g = [&](double ms) { return sit::recruitment(F_bar, ms, P); };
    const double analytic = sit::recruitment_dms(F_bar, 100.0, P);
    CHECK(analytic < 0.0);
    CHECK(oracle::relative_error(analytic, oracle::central_difference2(g, 100.0, 1e-3)) <= 1e-6);

    double worst = 0.0;
    for (int i = 1; i <= 100; ++i) {
        for (int j = 0; j < 100; ++j) {
            const double F = 500.0 * i;
            const double Ms = 50.0 + 400.0 * j;
            auto gi = [&](double ms) { return sit::recruitment(F, ms, P); };
            const double a = sit::recruitment_dms(F, Ms, P);
            REQUIRE(a <= 0.0);
            REQUIRE(sit::recruitment(F, Ms + 1.0, P) <= sit::recruitment(F, Ms, P));
            worst = std::max(worst, oracle::relative_error(a, oracle::central_difference(gi, Ms, 1e-2 * (1.0 + Ms))));
        }
    }
    CHECK(worst <= 1e-6);
    CHECK_THROWS_AS((void)sit::recruitment_dms(0.0, 0.0, P), std::domain_error);
    CHECK(sit::recruitment_dms(0.0, 10.0, P) == 0.0);
}

TEST_CASE("persistence equilibrium") {
    const sit::EquilibriumSet eq = sit::persistence_equilibrium(P);
    CHECK(eq.R0 == doctest::Approx(17.5).epsilon(1e-12));
    CHECK(eq.F_bar == doctest::Approx(12264.3675).epsilon(1e-12));
    CHECK(eq.E_bar == doctest::Approx(200234.57142857143).epsilon(1e-12));
    CHECK(eq.M_bar == doctest::Approx(5105.9815714285714).epsilon(1e-12));
    // Published rounded values.
    CHECK(std::abs(eq.F_bar - 12264.0) / 12264.0 <= 5e-4);
    CHECK(std::abs(eq.E_bar - 200240.0) / 200240.0 <= 1e-3);
    CHECK(std::abs(eq.M_bar - 5106.0) / 5106.0 <= 1e-3);
    // Balance of recruitment and mortality.
    CHECK(std::abs(sit::recruitment(eq.F_bar, 0.0, P) - P->delta_F * eq.F_bar) <= 1e-9 * eq.F_bar);
    CHECK(sit::capacity_for_aquatic_level(eq.E_bar, P.values()) == doctest::Approx(P->k).epsilon(1e-12));
}

TEST_CASE("equilibrium is a rest point of both models") {
    const sit::EquilibriumSet eq = sit::persistence_equilibrium(P);
    const sit::ReducedState r = sit::reduced_rhs({eq.F_bar, 0.0}, 0.0, P);
    CHECK(std::abs(r.F) <= 1e-9 * eq.F_bar);
    CHECK(r.Ms == 0.0);
    const sit::FullState f = sit::full_rhs({eq.E_bar, eq.M_bar, eq.F_bar, 0.0}, 0.0, P);
    CHECK(std::abs(f.E) <= 1e-9 * eq.E_bar);
    CHECK(std::abs(f.M) <= 1e-9 * eq.M_bar);
    CHECK(std::abs(f.F) <= 1e-9 * eq.F_bar);
}

TEST_CASE("sterile males evolve linearly in both models") {
    const sit::ReducedState r = sit::reduced_rhs({100.0, 50.0}, 7.0, P);
    CHECK(r.Ms == doctest::Approx(7.0 - P->delta_s * 50.0));
    const sit::FullState f = sit::full_rhs({10.0, 20.0, 30.0, 50.0}, 7.0, P);
    CHECK(f.Ms == doctest::Approx(7.0 - P->delta_s * 50.0));
}

TEST_CASE("full model handles the mating fraction at M = Ms = 0") {
    const sit::FullState f = sit::full_rhs({1000.0, 0.0, 10.0, 0.0}, 0.0, P);
    CHECK(std::isfinite(f.F));
    CHECK(f.F == doctest::Approx(-P->delta_F * 10.0));
    const sit::FullState z = sit::full_rhs({0.0, 0.0, 0.0, 0.0}, 0.0, P);
    CHECK(z == sit::FullState{});
}

TEST_CASE("nonnegative orthant is forward invariant for the vector fields") {
    // On each face the normal component of the field is non-negative.
    for (double v : {0.0, 1.0, 1e3, 1e5}) {
        CHECK(sit::full_rhs({0.0, v, v, v}, 0.0, P).E >= 0.0);
        CHECK(sit::full_rhs({v, 0.0, v, v}, 0.0, P).M >= 0.0);
        CHECK(sit::full_rhs({v, v, 0.0, v}, 0.0, P).F >= 0.0);
        CHECK(sit::full_rhs({v, v, v, 0.0}, 0.0, P).Ms >= 0.0);
        CHECK(sit::reduced_rhs({0.0, v}, 0.0, P).F >= 0.0);
        CHECK(sit::reduced_rhs({v, 0.0}, 0.0, P).Ms >= 0.0);
    }
}
