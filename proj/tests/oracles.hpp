#pragma once

// Reference values computed by routes that do not share code with the
// library: extended-precision direct formulas, the quasi-steady-state
// substitution of the four-compartment model, central differences and
// closed-form solutions.

#include "sit/params.hpp"

#include <cmath>
#include <functional>

namespace oracle {

using ld = long double;

inline ld offspring_number(const sit::BioParams& p) {
    return static_cast<ld>(p.nu) * p.beta_E * p.nu_E /
           (static_cast<ld>(p.delta_F) * (static_cast<ld>(p.nu_E) + p.delta_E));
}

// Recruitment obtained by setting dE/dt = 0 and dM/dt = 0 in the
// four-compartment model and substituting into the hatching term of dF/dt.
inline ld recruitment_via_quasi_steady_state(ld F, ld Ms, const sit::BioParams& p) {
    if (F == 0) return 0;
    const ld alpha = p.beta_E * F / p.k + p.nu_E + p.delta_E;
    const ld E = p.beta_E * F / alpha;
    const ld M = (1 - static_cast<ld>(p.nu)) * p.nu_E * E / p.delta_M;
    return p.nu * p.nu_E * E * M / (M + p.gamma_s * Ms);
}

// Virtual sterile level written in terms of the offset eps rather than the
// ceiling F_hat.
inline ld virtual_level_from_offset(ld F, ld eps, const sit::BioParams& p) {
    const ld b = p.beta_E, k = p.k, a = k * (p.nu_E + p.delta_E);
    const ld num = (1 - static_cast<ld>(p.nu)) * p.nu_E * b * k * F *
                   (p.nu * k * b * p.nu_E / eps - (b * F + p.nu_E * k + p.delta_E * k));
    const ld D = b * F + a;
    return num / (p.gamma_s * p.delta_M * D * D);
}

// Chord gap M_s*(F) - F dM_s*/dF in closed form; non-negative on [0, F_hat].
inline ld chord_gap(ld F, ld F_hat, const sit::BioParams& p) {
    const ld a = p.k * (static_cast<ld>(p.nu_E) + p.delta_E);
    const ld D = p.beta_E * F + a;
    return (1 - static_cast<ld>(p.nu)) * p.nu_E * p.beta_E * p.beta_E * p.k * F * F *
           (p.beta_E * (2 * F_hat - F) + a) / (p.gamma_s * p.delta_M * D * D * D);
}

// Fourth-order central difference.
inline double central_difference(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

// Second-order central difference.
inline double central_difference2(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2 * h);
}

inline double relative_error(double value, double reference) {
    return std::abs(value - reference) / std::abs(reference);
}

}  // namespace oracle
