#include "sit/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sit {

double aquatic_turnover(double F, const Params& p) {
    return p->beta_E * F / p->k + p->nu_E + p->delta_E;
}

double recruitment(double F, double Ms, const Params& p) {
    if (F == 0.0) return 0.0;
    const double a = aquatic_turnover(F, p);
    const double be_ne = p->beta_E * p->nu_E;
    const double num = p->nu * (1.0 - p->nu) * be_ne * be_ne * F * F;
    const double den = a * ((1.0 - p->nu) * be_ne * F + a * p->delta_M * p->gamma_s * Ms);
    return num / den;
}

double recruitment_dms(double F, double Ms, const Params& p) {
    if (F == 0.0 && Ms == 0.0) {
        throw std::domain_error("recruitment_dms: gradient is not defined at (0, 0)");
    }
    const double a = aquatic_turnover(F, p);
    const double be_ne = p->beta_E * p->nu_E;
    const double mix = (1.0 - p->nu) * be_ne * F + a * p->delta_M * p->gamma_s * Ms;
    return -p->nu * (1.0 - p->nu) * be_ne * be_ne * F * F * p->delta_M * p->gamma_s /
           (mix * mix);
}

EquilibriumSet persistence_equilibrium(const Params& p) {
    EquilibriumSet eq;
    eq.R0 = basic_offspring_number(p.values());
    if (!(eq.R0 > 1.0)) {
        throw std::domain_error("no persistence equilibrium: R0 <= 1");
    }
    const double survive = 1.0 - 1.0 / eq.R0;
    eq.F_bar = p->nu * p->nu_E * p->k / p->delta_F * survive;
    eq.E_bar = p->k * survive;
    eq.M_bar = (1.0 - p->nu) * p->nu_E * eq.E_bar / p->delta_M;

    const double balance = recruitment(eq.F_bar, 0.0, p);
    const double loss = p->delta_F * eq.F_bar;
    if (std::abs(balance - loss) > 1e-9 * loss) {
        std::ostringstream os;
        os << "persistence equilibrium does not balance: g=" << balance
           << " vs delta_F*F=" << loss;
        throw std::domain_error(os.str());
    }
    return eq;
}

double capacity_for_aquatic_level(double E_bar, const BioParams& p) {
    return E_bar / (1.0 - p.delta_F * (p.nu_E + p.delta_E) / (p.beta_E * p.nu * p.nu_E));
}

ReducedState reduced_rhs(const ReducedState& s, double u, const Params& p) {
    return {recruitment(s.F, s.Ms, p) - p->delta_F * s.F, u - p->delta_s * s.Ms};
}

FullState full_rhs(const FullState& s, double u, const Params& p) {
    const double pool = s.M + p->gamma_s * s.Ms;
    const double mating = pool > 0.0 ? s.M / pool : 0.0;
    return {
        p->beta_E * s.F * (1.0 - s.E / p->k) - (p->nu_E + p->delta_E) * s.E,
        (1.0 - p->nu) * p->nu_E * s.E - p->delta_M * s.M,
        p->nu * p->nu_E * s.E * mating - p->delta_F * s.F,
        u - p->delta_s * s.Ms,
    };
}

}  // namespace sit
