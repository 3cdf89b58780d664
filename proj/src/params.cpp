#include "sit/params.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <utility>

namespace sit {

namespace {

constexpr std::array<ParamField, 9> kFields{{
    {"beta_E", &BioParams::beta_E},
    {"gamma_s", &BioParams::gamma_s},
    {"nu_E", &BioParams::nu_E},
    {"nu", &BioParams::nu},
    {"delta_E", &BioParams::delta_E},
    {"delta_M", &BioParams::delta_M},
    {"delta_F", &BioParams::delta_F},
    {"delta_s", &BioParams::delta_s},
    {"k", &BioParams::k},
}};

std::string join(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) {
        if (!out.empty()) out += ", ";
        out += n;
    }
    return out;
}

}  // namespace

std::span<const ParamField> param_fields() { return kFields; }

const ParamField* find_param_field(std::string_view name) {
    auto it = std::find_if(kFields.begin(), kFields.end(),
                           [&](const ParamField& f) { return f.name == name; });
    return it == kFields.end() ? nullptr : &*it;
}

ParamError::ParamError(ParamViolation violation, std::vector<std::string> fields,
                       const std::string& what)
    : std::invalid_argument(what), violation_(violation), fields_(std::move(fields)) {}

double basic_offspring_number(const BioParams& p) {
    return p.nu * p.beta_E * p.nu_E / (p.delta_F * (p.nu_E + p.delta_E));
}

Params validate_params(const BioParams& p) {
    std::vector<std::string> bad;
    for (const auto& f : kFields) {
        if (!std::isfinite(p.*f.member)) bad.emplace_back(f.name);
    }
    if (!bad.empty()) {
        throw ParamError(ParamViolation::non_finite, bad, "non-finite parameter(s): " + join(bad));
    }
    for (const auto& f : kFields) {
        if (!(p.*f.member > 0.0)) bad.emplace_back(f.name);
    }
    if (!bad.empty()) {
        throw ParamError(ParamViolation::non_positive, bad,
                         "parameter(s) must be strictly positive: " + join(bad));
    }
    if (!(p.nu < 1.0)) {
        throw ParamError(ParamViolation::female_fraction_range, {"nu"},
                         "nu must lie in (0,1)");
    }
    if (!(p.delta_s > std::max(p.delta_F, p.delta_M))) {
        std::vector<std::string> binding{"delta_s"};
        if (p.delta_s <= p.delta_F) binding.emplace_back("delta_F");
        if (p.delta_s <= p.delta_M) binding.emplace_back("delta_M");
        std::ostringstream os;
        os << "sterile males must die faster than wild adults: delta_s=" << p.delta_s
           << " <= max(delta_F, delta_M)=" << std::max(p.delta_F, p.delta_M);
        throw ParamError(ParamViolation::sterile_mortality, binding, os.str());
    }
    const double r0 = basic_offspring_number(p);
    if (!(r0 > 1.0)) {
        std::ostringstream os;
        os << "basic offspring number R0=" << r0 << " must exceed 1";
        throw ParamError(ParamViolation::offspring_number,
                         {"nu", "beta_E", "nu_E", "delta_F", "delta_E"}, os.str());
    }
    return Params(p);
}

Params nominal_params() { return validate_params(BioParams{}); }

}  // namespace sit
