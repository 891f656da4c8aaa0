#include <catch_amalgamated.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "fluxread/errors.hpp"
#include "fluxread/scenario.hpp"

using namespace fluxread;
using Catch::Approx;

TEST_CASE("every preset resolves and unknown names are rejected") {
    for (const auto& name : preset_names()) {
        const auto cfg = preset_config(name);
        CHECK(cfg.scenario == name);
        CHECK_NOTHROW(validate(cfg.params));
    }
    CHECK_THROWS_AS(preset_config("caseC"), ValidationError);
    CHECK(preset_config("caseA-n1").qubit_state == 1);
    CHECK(preset_config("caseA-cc").engine == Engine::CC);
    CHECK(preset_config("halfflux-failure").params.phi_ext == Approx(0.8 * pi));
}

TEST_CASE("flat config text sets fields in their documented units") {
    auto cfg = preset_config("caseA-n0");
    apply_config_text(cfg,
                      "# comment\n"
                      "phi_ext_over_pi = 0.25\n"
                      "ic_rail_ratio = 6.1\n"
                      "engine = cc\n"
                      "flux_term = shifted\n"
                      "backaction = false\n"
                      "qubit_state = 1\n"
                      "ic_rail_ratio = 6.2\n");
    CHECK(cfg.params.phi_ext == Approx(0.25 * pi));
    CHECK(cfg.params.ic_rail == Approx(6.2));
    CHECK(cfg.engine == Engine::CC);
    CHECK(cfg.shifted_flux_term);
    CHECK_FALSE(cfg.backaction);
    CHECK(cfg.qubit_state == 1);
}

TEST_CASE("unknown keys and malformed values are rejected") {
    auto cfg = preset_config("caseA-n0");
    CHECK_THROWS_AS(apply_config_text(cfg, "ic_rail = 6\n"), ValidationError);
    CHECK_THROWS_AS(apply_config_text(cfg, "[section]\nbeta2 = 0.4\n"), ValidationError);
    CHECK_THROWS_AS(apply_config_text(cfg, "beta2 = fast\n"), ValidationError);
    CHECK_THROWS_AS(apply_config_text(cfg, "lq_ratio = -3\n"), ValidationError);
    CHECK_THROWS_AS(apply_config_text(cfg, "engine = quantum\n"), ValidationError);
    CHECK_THROWS_AS(apply_config_text(cfg, "scenario = caseB-n0\n"), ValidationError);
    CHECK_THROWS_AS(apply_override(cfg, "beta2"), ValidationError);
    CHECK_THROWS_AS(apply_override(cfg, "=3"), ValidationError);
    CHECK_THROWS_AS(apply_config_file(cfg, "/nonexistent/fluxread.cfg"), ValidationError);
}

TEST_CASE("config files round trip through the canonical listing") {
    auto cfg = preset_config("caseB-n1");
    apply_override(cfg, "v_over_c=0.55");
    const auto path = std::filesystem::temp_directory_path() / "fluxread_roundtrip.cfg";
    {
        std::ofstream f(path);
        f << canonical_text(cfg);
    }
    auto other = preset_config("caseB-n1");
    other.v = 0.1;
    // The scenario line is informational; strip it before feeding the text back.
    std::ifstream in(path);
    std::string line, text;
    while (std::getline(in, line))
        if (line.rfind("scenario", 0) != 0) text += line + "\n";
    apply_config_text(other, text);
    CHECK(input_hash(other) == input_hash(cfg));
    std::filesystem::remove(path);
}

TEST_CASE("input hash is deterministic and ignores the output directory") {
    auto a = preset_config("caseA-n0");
    auto b = preset_config("caseA-n0");
    b.out_dir = "elsewhere";
    CHECK(input_hash(a) == input_hash(b));
    CHECK(input_hash(a).size() == 64);
    apply_override(b, "x0=-12");
    CHECK(input_hash(a) != input_hash(b));
    CHECK(input_hash(preset_config("caseA-n0")) != input_hash(preset_config("caseA-n1")));
}

TEST_CASE("config keys are sorted and typed") {
    const auto keys = config_keys();
    CHECK(std::is_sorted(keys.begin(), keys.end()));
    CHECK(is_numeric_key("phi_q_offset_over_pi"));
    CHECK_FALSE(is_numeric_key("engine"));
    CHECK_FALSE(is_numeric_key("nonsense"));
}

TEST_CASE("sweep keeps input order and records failures per row") {
    auto base = preset_config("coherence-check");
    const std::vector<double> values{0.3, 0.6, 1.5, 0.5, 0.2};
    const auto rows = sweep(base, "v_over_c", values, 3);
    REQUIRE(rows.size() == values.size());
    for (size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].value == values[i]);
    CHECK(rows[0].ok);
    CHECK_FALSE(rows[2].ok);
    CHECK_FALSE(rows[2].error.empty());
    CHECK(rows[1].result["kinetic_energy_E0"].get<double>() == Approx(2.0));
    CHECK(rows[4].result["kinetic_energy_E0"].get<double>() ==
          Approx(8.0 / std::sqrt(1 - 0.04) - 8.0));

    const auto serial = sweep(base, "v_over_c", values, 1);
    for (size_t i = 0; i < rows.size(); ++i) CHECK(serial[i].result == rows[i].result);
}

TEST_CASE("empty sweeps and bad axes") {
    const auto base = preset_config("coherence-check");
    CHECK(sweep(base, "v_over_c", {}, 4).empty());
    CHECK_THROWS_AS(sweep(base, "engine", {1.0}, 1), ValidationError);
    CHECK_THROWS_AS(sweep(base, "unknown", {1.0}, 1), ValidationError);
}

TEST_CASE("sweep CSV has one line per row plus the header") {
    const auto base = preset_config("coherence-check");
    const auto rows = sweep(base, "v_over_c", {0.4, 2.0}, 2);
    const auto path = std::filesystem::temp_directory_path() / "fluxread_sweep.csv";
    write_sweep_csv(rows, "v_over_c", path.string());
    std::ifstream f(path);
    std::string header, r1, r2, extra;
    std::getline(f, header);
    std::getline(f, r1);
    std::getline(f, r2);
    CHECK(header.rfind("v_over_c,status,", 0) == 0);
    CHECK(r1.rfind("0.4,ok,", 0) == 0);
    CHECK(r2.rfind("2,failed,", 0) == 0);
    CHECK_FALSE(std::getline(f, extra));
    std::filesystem::remove(path);
}

TEST_CASE("summary JSON is reproducible across runs") {
    auto cfg = preset_config("fabrication-tableI");
    cfg.out_dir = (std::filesystem::temp_directory_path() / "fluxread_fab").string();
    const auto a = run_scenario(cfg);
    const auto b = run_scenario(cfg);
    CHECK(a.result == b.result);
    CHECK(a.input_hash == b.input_hash);
    CHECK(std::filesystem::exists(std::filesystem::path(cfg.out_dir) / "table_I.csv"));
    std::filesystem::remove_all(cfg.out_dir);
}
