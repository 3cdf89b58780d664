#pragma once

#include "sit/params.hpp"

namespace sit {

// Reduced model state: fertilized females and sterile males.
struct ReducedState {
    double F = 0.0;
    double Ms = 0.0;

    friend bool operator==(const ReducedState&, const ReducedState&) = default;
};

// Complete model state: aquatic phase, fertile males, fertilized females,
// sterile males.
struct FullState {
    double E = 0.0;
    double M = 0.0;
    double F = 0.0;
    double Ms = 0.0;

    friend bool operator==(const FullState&, const FullState&) = default;
};

struct EquilibriumSet {
    double R0 = 0.0;
    double F_bar = 0.0;  // reduced persistence level of females
    double E_bar = 0.0;
    double M_bar = 0.0;
};

// Exit rate of the aquatic phase at quasi-steady state:
// beta_E F / k + nu_E + delta_E. Strictly increasing in F.
double aquatic_turnover(double F, const Params& p);

// Female recruitment of the reduced model once E and M are at quasi-steady
// state. Zero at F = 0, non-increasing in Ms.
double recruitment(double F, double Ms, const Params& p);

// Partial derivative of recruitment with respect to Ms. Always <= 0 and
// bounded; throws std::domain_error at (0, 0) where it is not continuous.
double recruitment_dms(double F, double Ms, const Params& p);

// Positive equilibrium (F_bar, E_bar, M_bar) and R0. Throws std::domain_error
// when R0 <= 1 or when the computed level fails to balance recruitment and
// female mortality to 1e-9 relative.
EquilibriumSet persistence_equilibrium(const Params& p);

// Inverse of the equilibrium relation: the egg capacity k that yields the
// aquatic-phase level E_bar for the remaining rates in p.
double capacity_for_aquatic_level(double E_bar, const BioParams& p);

// Time derivatives of the reduced model under release rate u.
ReducedState reduced_rhs(const ReducedState& s, double u, const Params& p);

// Time derivatives of the complete model under release rate u. The mating
// fraction M / (M + gamma_s Ms) is taken as 0 when M = Ms = 0.
FullState full_rhs(const FullState& s, double u, const Params& p);

}  // namespace sit
