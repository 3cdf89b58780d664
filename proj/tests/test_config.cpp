#include "sit/config.hpp"
#include "sit/csv.hpp"
#include "sit/harness.hpp"

#include <doctest.h>

#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

namespace {

std::string config_error(const std::string& text) {
    try {
        (void)sit::parse_config(text, "test.cfg");
    } catch (const sit::ConfigError& e) {
        return std::to_string(e.line()) + ": " + e.what();
    }
    return "no error";
}

}  // namespace

TEST_CASE("number formatting reads back exactly") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::uint64_t> bits;
    int checked = 0;
    while (checked < 10000) {
        const std::uint64_t b = bits(rng);
        double v;
        std::memcpy(&v, &b, sizeof v);
        if (!std::isfinite(v)) continue;
        ++checked;
        const std::string text = sit::format_double(v);
        double back = 0.0;
        std::from_chars(text.data(), text.data() + text.size(), back);
        REQUIRE(back == v);
    }
    CHECK(sit::format_double(0.1) == "0.10000000000000001");
    CHECK(sit::format_double(212370.0) == "212370");
}

TEST_CASE("empty config is the nominal scenario") {
    const sit::ScenarioConfig c = sit::parse_config("# nothing\n\n");
    CHECK(c == sit::ScenarioConfig{});
    CHECK(c.params == sit::BioParams{});
    CHECK(c.controller.eps == 0.01);
}

TEST_CASE("config text round-trips for presets and random scenarios") {
    for (const auto& name : sit::preset_names()) {
        const sit::ScenarioConfig c = *sit::preset(name);
        CHECK(sit::parse_config(sit::write_config(c)) == c);
    }
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.5, 1.5);
    for (int i = 0; i < 200; ++i) {
        sit::ScenarioConfig c;
        c.name = "case" + std::to_string(i);
        for (const auto& f : sit::param_fields()) c.params.*f.member *= u(rng);
        c.controller.eps.reset();
        c.controller.F_hat = 30000.0 * u(rng);
        c.controller.eta = 0.1 * u(rng);
        c.controller.F2 = 20000.0 * u(rng);
        c.controller.cutoff = i % 2 ? sit::CutoffKind::cubic : sit::CutoffKind::quintic;
        c.variant = static_cast<sit::Variant>(i % 4);
        c.sim.model = i % 3 ? sit::ModelKind::reduced : sit::ModelKind::full;
        c.sim.t_end = 1000.0 * u(rng);
        c.sim.dt = 0.01 * u(rng);
        c.sim.record_every = 1 + static_cast<std::size_t>(i);
        c.sim.clamp_tol = 1e-9 * u(rng);
        c.sim.F0 = 1e4 * u(rng);
        c.sim.Ms0 = 1e3 * u(rng);
        c.sim.E0 = 1e5 * u(rng);
        c.robustness.seed = rng();
        c.robustness.uncertainty = 0.2 * u(rng);
        c.robustness.perturb = {"beta_E", "k"};
        const std::string text = sit::write_config(c);
        const sit::ScenarioConfig back = sit::parse_config(text);
        REQUIRE(back == c);
        REQUIRE(sit::write_config(back) == text);
    }
}

TEST_CASE("config errors carry the line and a suggestion") {
    const std::string e = config_error("name = x\n[params]\nbetaE = 3\n");
    CHECK(e.rfind("3: ", 0) == 0);
    CHECK(e.find("beta_E") != std::string::npos);
    CHECK(config_error("[params]\nk = 1\nk = 2\n").rfind("3: ", 0) == 0);
    CHECK(config_error("[params]\nk = abc\n").rfind("2: ", 0) == 0);
    CHECK(config_error("[params]\nk = 1.0x\n").rfind("2: ", 0) == 0);
    CHECK(config_error("[bogus]\n").rfind("1: ", 0) == 0);
    CHECK(config_error("[params\n").rfind("1: ", 0) == 0);
    CHECK(config_error("[sim]\nmodel = half\n").rfind("2: ", 0) == 0);
    CHECK(config_error("[sim]\nrecord_every = 2.5\n").rfind("2: ", 0) == 0);
    CHECK(config_error("[robustness]\nperturb = beta_E, zeta\n").rfind("2: ", 0) == 0);
    CHECK(config_error("novalue\n").rfind("1: ", 0) == 0);
}

TEST_CASE("setting one design anchor clears the others") {
    const sit::ScenarioConfig c = sit::parse_config("[controller]\nF_hat_ratio = 1.35\n");
    CHECK_FALSE(c.controller.eps.has_value());
    CHECK(c.controller.F_hat_ratio == 1.35);
}

TEST_CASE("edit distance") {
    CHECK(sit::edit_distance("", "") == 0);
    CHECK(sit::edit_distance("betaE", "beta_E") == 1);
    CHECK(sit::edit_distance("kitten", "sitting") == 3);
    CHECK(sit::edit_distance("abc", "") == 3);
}

TEST_CASE("config files and presets load by name") {
    const auto dir = std::filesystem::temp_directory_path() / "sit_test_config";
    std::filesystem::create_directories(dir);
    const auto path = dir / "case.cfg";
    {
        std::ofstream out(path);
        out << "name = from_file\n[sim]\nt_end = 12\n";
    }
    const sit::ScenarioConfig c = sit::load_config(path.string());
    CHECK(c.name == "from_file");
    CHECK(c.sim.t_end == 12.0);
    CHECK(sit::load_config("open-loop").variant == sit::Variant::none);
    CHECK_THROWS((void)sit::load_config("no-such-preset"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("trajectory CSV round-trips and has one row per sample") {
    for (const char* name : {"nominal-reduced", "nominal-full"}) {
        sit::ScenarioConfig cfg = *sit::preset(name);
        cfg.sim.t_end = 50.0;
        cfg.sim.record_every = 37;
        const sit::Trajectory tr = sit::integrate(sit::build_sim_spec(cfg));
        std::ostringstream os;
        sit::write_trajectory_csv(tr, os);
        const std::string text = os.str();
        std::size_t rows = 0;
        for (std::size_t pos = 0; (pos = text.find("\r\n", pos)) != std::string::npos; pos += 2) ++rows;
        CHECK(rows == tr.size() + 1);
        std::istringstream is(text);
        const sit::Trajectory back = sit::read_trajectory_csv(is);
        CHECK(back.model == tr.model);
        CHECK(back.t == tr.t);
        CHECK(back.F == tr.F);
        CHECK(back.Ms == tr.Ms);
        CHECK(back.E == tr.E);
        CHECK(back.M == tr.M);
        CHECK(back.u == tr.u);
        CHECK(back.V == tr.V);
    }
}

TEST_CASE("malformed trajectory CSV is rejected") {
    std::istringstream bad_header("a,b\r\n");
    CHECK_THROWS((void)sit::read_trajectory_csv(bad_header));
    std::istringstream short_row("t,F,Ms,u,V\r\n1,2,3\r\n");
    CHECK_THROWS((void)sit::read_trajectory_csv(short_row));
    std::istringstream long_row("t,F,Ms,u,V\r\n1,2,3,4,5,6\r\n");
    CHECK_THROWS((void)sit::read_trajectory_csv(long_row));
}

TEST_CASE("CSV field quoting") {
    CHECK(sit::csv_field("plain") == "plain");
    CHECK(sit::csv_field("a,b") == "\"a,b\"");
    CHECK(sit::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(sit::csv_field("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("audit CSV") {
    sit::AuditReport r;
    r.check = "lemma4";
    r.grid = "4000 points, [0, F_hat]";
    r.pass = true;
    r.worst_value = 0.25;
    std::ostringstream os;
    const std::vector<sit::AuditReport> reports{r};
    sit::write_audit_csv(reports, os);
    CHECK(os.str() ==
          "check,grid,pass,worst_value,witness_F,witness_Ms\r\n"
          "lemma4,\"4000 points, [0, F_hat]\",true,0.25,0,0\r\n");
}
