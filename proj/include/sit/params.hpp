#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sit {

// Biological rates and capacities of the four-compartment mosquito model.
// Rates are per day, densities are counts. Defaults are the nominal field
// values (egg capacity k = 212370).
struct BioParams {
    double beta_E = 10.0;   // oviposition rate
    double gamma_s = 1.0;   // female preference for sterile males
    double nu_E = 0.005;    // hatching rate
    double nu = 0.49;       // probability that a pupa becomes a female
    double delta_E = 0.03;  // aquatic-phase death rate
    double delta_M = 0.1;   // fertile male death rate
    double delta_F = 0.04;  // female death rate
    double delta_s = 0.12;  // sterile male death rate
    double k = 212370.0;    // egg carrying capacity

    friend bool operator==(const BioParams&, const BioParams&) = default;
};

struct ParamField {
    std::string_view name;
    double BioParams::*member;
};

// The nine fields in serialization order.
std::span<const ParamField> param_fields();

// Field lookup by key; nullptr when the key is unknown.
const ParamField* find_param_field(std::string_view name);

enum class ParamViolation {
    non_finite,
    non_positive,
    female_fraction_range,
    sterile_mortality,
    offspring_number,
};

class ParamError : public std::invalid_argument {
public:
    ParamError(ParamViolation violation, std::vector<std::string> fields, const std::string& what);

    ParamViolation violation() const noexcept { return violation_; }
    const std::vector<std::string>& fields() const noexcept { return fields_; }

private:
    ParamViolation violation_;
    std::vector<std::string> fields_;
};

// A BioParams value that has passed validate_params. Only validated values
// reach the dynamics and the controllers.
class Params {
public:
    const BioParams& values() const noexcept { return values_; }
    const BioParams* operator->() const noexcept { return &values_; }

private:
    explicit Params(const BioParams& values) : values_(values) {}
    friend Params validate_params(const BioParams& p);

    BioParams values_;
};

// Checks positivity, nu in (0,1), delta_s > max(delta_F, delta_M) and R0 > 1,
// in that order; throws ParamError for the first violated condition.
Params validate_params(const BioParams& p);

Params nominal_params();

// nu * beta_E * nu_E / (delta_F * (nu_E + delta_E)).
double basic_offspring_number(const BioParams& p);

}  // namespace sit
