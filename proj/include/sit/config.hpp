#pragma once

#include "sit/controller.hpp"
#include "sit/params.hpp"
#include "sit/sim.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sit {

// Shortest text that reads back to the same double: 17 significant digits,
// general notation.
std::string format_double(double v);

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string source, std::size_t line, const std::string& message);

    const std::string& source() const noexcept { return source_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string source_;
    std::size_t line_;
};

struct SimSettings {
    ModelKind model = ModelKind::reduced;
    double t_end = 1000.0;
    double dt = 0.01;
    std::size_t record_every = 100;
    std::optional<double> clamp_tol;
    // Initial females: F0 if given, else F0_ratio * F_bar. E and M default to
    // the persistence levels.
    double F0_ratio = 1.0;
    std::optional<double> F0;
    double Ms0 = 0.0;
    std::optional<double> E0;
    std::optional<double> M0;
    double extinction_threshold = 1.0;

    friend bool operator==(const SimSettings&, const SimSettings&) = default;
};

struct RobustnessSettings {
    std::size_t trials = 20;
    double uncertainty = 0.10;
    std::uint64_t seed = 1;
    std::vector<std::string> perturb{"beta_E", "gamma_s", "nu_E",    "nu",
                                     "delta_E", "delta_M", "delta_F", "delta_s"};

    friend bool operator==(const RobustnessSettings&, const RobustnessSettings&) = default;
};

struct ScenarioConfig {
    std::string name = "scenario";
    std::string out_dir;
    BioParams params;
    ControllerSpec controller = nominal_controller_spec();
    Variant variant = Variant::global;
    SimSettings sim;
    RobustnessSettings robustness;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// Flat `key = value` text with `#` comments. Global keys `name` and `out`
// precede the sections [params], [controller], [sim] and [robustness]. Every
// key is optional; omitted keys keep the nominal values. Throws ConfigError
// carrying the offending line number.
ScenarioConfig parse_config(std::string_view text, const std::string& source = "<config>");

ScenarioConfig read_config(const std::filesystem::path& path);

std::string write_config(const ScenarioConfig& cfg);

// Built-in scenarios: nominal-reduced, nominal-full, open-loop.
std::optional<ScenarioConfig> preset(std::string_view name);
std::vector<std::string> preset_names();

// A preset name or a config file path.
ScenarioConfig load_config(const std::string& name_or_path);

// Edit distance used to suggest the nearest valid key.
std::size_t edit_distance(std::string_view a, std::string_view b);

}  // namespace sit
