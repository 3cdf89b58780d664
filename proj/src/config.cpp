#include "sit/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace sit {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

ConfigError::ConfigError(std::string source, std::size_t line, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + message),
      source_(std::move(source)),
      line_(line) {}

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct Parser {
    const std::string& source;
    std::size_t line = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(source, line, msg); }

    double number(std::string_view key, std::string_view v) const {
        double out = 0.0;
        auto res = std::from_chars(v.data(), v.data() + v.size(), out);
        if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
            fail("value of '" + std::string(key) + "' is not a number: '" + std::string(v) + "'");
        }
        return out;
    }

    std::uint64_t integer(std::string_view key, std::string_view v) const {
        std::uint64_t out = 0;
        auto res = std::from_chars(v.data(), v.data() + v.size(), out);
        if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
            fail("value of '" + std::string(key) + "' is not a non-negative integer: '" +
                 std::string(v) + "'");
        }
        return out;
    }

    template <class Fn>
    auto guarded(Fn&& fn) const {
        try {
            return fn();
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }
};

using Setter = std::function<void(ScenarioConfig&, const Parser&, std::string_view key,
                                  std::string_view value)>;
using KeyTable = std::map<std::string, Setter, std::less<>>;

KeyTable global_keys() {
    return {
        {"name", [](ScenarioConfig& c, const Parser&, auto, auto v) { c.name = v; }},
        {"out", [](ScenarioConfig& c, const Parser&, auto, auto v) { c.out_dir = v; }},
    };
}

KeyTable params_keys() {
    KeyTable t;
    for (const auto& f : param_fields()) {
        t.emplace(std::string(f.name), [m = f.member](ScenarioConfig& c, const Parser& p,
                                                      auto k, auto v) {
            c.params.*m = p.number(k, v);
        });
    }
    return t;
}

KeyTable controller_keys() {
    auto num = [](std::optional<double> ControllerSpec::*m) {
        return [m](ScenarioConfig& c, const Parser& p, auto k, auto v) {
            c.controller.*m = p.number(k, v);
        };
    };
    return {
        {"F_hat", num(&ControllerSpec::F_hat)},
        {"F_hat_ratio", num(&ControllerSpec::F_hat_ratio)},
        {"eps", num(&ControllerSpec::eps)},
        {"F2", num(&ControllerSpec::F2)},
        {"eta", [](ScenarioConfig& c, const Parser& p, auto k, auto v) {
             c.controller.eta = p.number(k, v);
         }},
        {"rho", [](ScenarioConfig& c, const Parser& p, auto k, auto v) {
             c.controller.rho = p.number(k, v);
         }},
        {"variant", [](ScenarioConfig& c, const Parser& p, auto, auto v) {
             c.variant = p.guarded([&] { return parse_variant(v); });
         }},
        {"cutoff", [](ScenarioConfig& c, const Parser& p, auto, auto v) {
             c.controller.cutoff = p.guarded([&] { return parse_cutoff(v); });
         }},
    };
}

KeyTable sim_keys() {
    auto num = [](double SimSettings::*m) {
        return [m](ScenarioConfig& c, const Parser& p, auto k, auto v) {
            c.sim.*m = p.number(k, v);
        };
    };
    auto opt = [](std::optional<double> SimSettings::*m) {
        return [m](ScenarioConfig& c, const Parser& p, auto k, auto v) {
            c.sim.*m = p.number(k, v);
        };
    };
    return {
        {"model", [](ScenarioConfig& c, const Parser& p, auto, auto v) {
             c.sim.model = p.guarded([&] { return parse_model(v); });
         }},
        {"t_end", num(&SimSettings::t_end)},
        {"dt", num(&SimSettings::dt)},
        {"record_every", [](ScenarioConfig& c, const Parser& p, auto k, auto v) {
             c.sim.record_every = p.integer(k, v);
         }},
        {"clamp_tol", opt(&SimSettings::clamp_tol)},
        {"F0_ratio", num(&SimSettings::F0_ratio)},
        {"F0", opt(&SimSettings::F0)},
        {"Ms0", num(&SimSettings::Ms0)},
        {"E0", opt(&SimSettings::E0)},
        {"M0", opt(&SimSettings::M0)},
        {"extinction_threshold", num(&SimSettings::extinction_threshold)},
    };
}

KeyTable robustness_keys() {
    return {
        {"trials", [](ScenarioConfig& c, const Parser& p, auto k, auto v) {
             c.robustness.trials = p.integer(k, v);
         }},
        {"uncertainty", [](ScenarioConfig& c, const Parser& p, auto k, auto v) {
             c.robustness.uncertainty = p.number(k, v);
         }},
        {"seed", [](ScenarioConfig& c, const Parser& p, auto k, auto v) {
             c.robustness.seed = p.integer(k, v);
         }},
        {"perturb", [](ScenarioConfig& c, const Parser& p, auto, std::string_view v) {
             std::vector<std::string> names;
             while (!v.empty()) {
                 const auto comma = v.find(',');
                 const auto item = trim(v.substr(0, comma));
                 if (!item.empty()) {
                     if (!find_param_field(item)) {
                         p.fail("unknown parameter '" + std::string(item) + "' in perturb list");
                     }
                     names.emplace_back(item);
                 }
                 if (comma == std::string_view::npos) break;
                 v.remove_prefix(comma + 1);
             }
             c.robustness.perturb = std::move(names);
         }},
    };
}

const std::map<std::string, KeyTable, std::less<>>& sections() {
    static const std::map<std::string, KeyTable, std::less<>> s{
        {"", global_keys()},
        {"params", params_keys()},
        {"controller", controller_keys()},
        {"sim", sim_keys()},
        {"robustness", robustness_keys()},
    };
    return s;
}

std::string nearest_key(std::string_view key, const KeyTable& table) {
    std::string best;
    std::size_t best_d = std::string::npos;
    for (const auto& [name, setter] : table) {
        const std::size_t d = edit_distance(key, name);
        if (d < best_d) {
            best_d = d;
            best = name;
        }
    }
    return best;
}

}  // namespace

ScenarioConfig parse_config(std::string_view text, const std::string& source) {
    ScenarioConfig cfg;
    Parser parser{source};
    std::string section;
    std::set<std::pair<std::string, std::string>> seen;
    bool anchor_given = false;

    while (!text.empty()) {
        ++parser.line;
        const auto nl = text.find('\n');
        std::string_view raw = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);

        const auto hash = raw.find('#');
        const std::string_view line = trim(raw.substr(0, hash));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') parser.fail("unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section.empty() || !sections().contains(section)) {
                parser.fail("unknown section [" + section +
                            "] (expected params, controller, sim or robustness)");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) parser.fail("expected 'key = value'");
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) parser.fail("missing key before '='");
        if (value.empty()) parser.fail("missing value for '" + std::string(key) + "'");

        const KeyTable& table = sections().find(section)->second;
        auto it = table.find(key);
        if (it == table.end()) {
            const std::string where = section.empty() ? "top level" : "[" + section + "]";
            parser.fail("unknown key '" + std::string(key) + "' in " + where +
                        "; did you mean '" + nearest_key(key, table) + "'?");
        }
        if (!seen.emplace(section, std::string(key)).second) {
            parser.fail("duplicate key '" + std::string(key) + "'");
        }
        if (section == "controller" && (key == "F_hat" || key == "F_hat_ratio" || key == "eps")) {
            if (!anchor_given) {
                cfg.controller.F_hat.reset();
                cfg.controller.F_hat_ratio.reset();
                cfg.controller.eps.reset();
                anchor_given = true;
            }
        }
        it->second(cfg, parser, key, value);
    }
    return cfg;
}

ScenarioConfig read_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

std::string write_config(const ScenarioConfig& cfg) {
    std::ostringstream os;
    auto opt = [&](std::string_view key, const std::optional<double>& v) {
        if (v) os << key << " = " << format_double(*v) << '\n';
    };
    os << "name = " << cfg.name << '\n';
    if (!cfg.out_dir.empty()) os << "out = " << cfg.out_dir << '\n';

    os << "\n[params]\n";
    for (const auto& f : param_fields()) {
        os << f.name << " = " << format_double(cfg.params.*f.member) << '\n';
    }

    os << "\n[controller]\n";
    opt("F_hat", cfg.controller.F_hat);
    opt("F_hat_ratio", cfg.controller.F_hat_ratio);
    opt("eps", cfg.controller.eps);
    os << "eta = " << format_double(cfg.controller.eta) << '\n';
    os << "rho = " << format_double(cfg.controller.rho) << '\n';
    opt("F2", cfg.controller.F2);
    os << "variant = " << to_string(cfg.variant) << '\n';
    os << "cutoff = " << to_string(cfg.controller.cutoff) << '\n';

    const SimSettings& s = cfg.sim;
    os << "\n[sim]\n";
    os << "model = " << to_string(s.model) << '\n';
    os << "t_end = " << format_double(s.t_end) << '\n';
    os << "dt = " << format_double(s.dt) << '\n';
    os << "record_every = " << s.record_every << '\n';
    opt("clamp_tol", s.clamp_tol);
    os << "F0_ratio = " << format_double(s.F0_ratio) << '\n';
    opt("F0", s.F0);
    os << "Ms0 = " << format_double(s.Ms0) << '\n';
    opt("E0", s.E0);
    opt("M0", s.M0);
    os << "extinction_threshold = " << format_double(s.extinction_threshold) << '\n';

    const RobustnessSettings& r = cfg.robustness;
    os << "\n[robustness]\n";
    os << "trials = " << r.trials << '\n';
    os << "uncertainty = " << format_double(r.uncertainty) << '\n';
    os << "seed = " << r.seed << '\n';
    os << "perturb = ";
    for (std::size_t i = 0; i < r.perturb.size(); ++i) os << (i ? ", " : "") << r.perturb[i];
    os << '\n';
    return os.str();
}

std::vector<std::string> preset_names() { return {"nominal-reduced", "nominal-full", "open-loop"}; }

std::optional<ScenarioConfig> preset(std::string_view name) {
    ScenarioConfig cfg;
    cfg.name = std::string(name);
    if (name == "nominal-reduced") {
        cfg.variant = Variant::plus;
        cfg.sim.model = ModelKind::reduced;
        cfg.sim.t_end = 1000.0;
        return cfg;
    }
    if (name == "nominal-full") {
        cfg.variant = Variant::global;
        cfg.sim.model = ModelKind::full;
        cfg.sim.t_end = 2000.0;
        return cfg;
    }
    if (name == "open-loop") {
        cfg.variant = Variant::none;
        cfg.sim.model = ModelKind::reduced;
        cfg.sim.t_end = 2000.0;
        cfg.sim.F0_ratio = 0.9;
        return cfg;
    }
    return std::nullopt;
}

ScenarioConfig load_config(const std::string& name_or_path) {
    if (std::filesystem::exists(name_or_path)) return read_config(name_or_path);
    if (auto p = preset(name_or_path)) return *p;
    std::string names;
    for (const auto& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
    throw std::runtime_error("'" + name_or_path + "' is neither a readable config file nor a preset (" +
                             names + ")");
}

}  // namespace sit
