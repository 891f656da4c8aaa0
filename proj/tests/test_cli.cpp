#include <catch_amalgamated.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path scratch = fs::temp_directory_path() / "fluxread_cli_test";

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FLUXREAD_CLI) + " " + args + " > " +
                            (scratch / "stdout.txt").string() + " 2> " + (scratch / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    return {std::istreambuf_iterator<char>(f), {}};
}

struct Scratch {
    Scratch() {
        fs::remove_all(scratch);
        fs::create_directories(scratch);
    }
};

}  // namespace

TEST_CASE_METHOD(Scratch, "successful scenario writes its artifacts") {
    const auto out = scratch / "coh";
    REQUIRE(run_cli("scenario coherence-check --out " + out.string()) == 0);
    CHECK(fs::exists(out / "coherence.json"));
    CHECK(fs::exists(out / "summary.json"));
    CHECK(fs::exists(out / "timing.json"));
    const auto j = nlohmann::json::parse(slurp(scratch / "stdout.txt"));
    CHECK(j["scenario"] == "coherence-check");
    CHECK(j["input_hash"].get<std::string>().size() == 64);
}

TEST_CASE_METHOD(Scratch, "validation errors exit with code 2") {
    CHECK(run_cli("") == 2);
    CHECK(run_cli("scenario no-such-preset") == 2);
    CHECK(run_cli("scenario caseA-n0 --set unknown_key=1") == 2);
    CHECK(run_cli("scenario caseA-n0 --set x0=-1") == 2);
    CHECK(run_cli("scenario caseA-n0 --set beta2=abc") == 2);
    CHECK(run_cli("sweep coherence-check --axis engine --values 1") == 2);
    CHECK(run_cli("sweep coherence-check --axis v_over_c --values 0.2,x") == 2);
    CHECK(run_cli("fabricate --case B --jcq-ratio 3") == 2);
    CHECK(run_cli("spectrum --bias-min-over-pi 1 --bias-max-over-pi 0") == 2);
    const auto cfg = scratch / "bad.cfg";
    std::ofstream(cfg) << "ic_rail_ratio = 5.9\nmystery = 3\n";
    CHECK(run_cli("scenario caseA-n0 --config " + cfg.string()) == 2);
    CHECK(slurp(scratch / "stderr.txt").find("mystery") != std::string::npos);
}

TEST_CASE_METHOD(Scratch, "numerical blow-up exits with code 3") {
    CHECK(run_cli("scenario caseA-n0 --set discreteness=0.01 --set n_cells=2500 --set dt=0.02 "
                  "--set backaction=false --out " + (scratch / "nf").string()) == 3);
    CHECK(slurp(scratch / "stderr.txt").find("non-finite") != std::string::npos);
}

TEST_CASE_METHOD(Scratch, "sweep writes rows in input order") {
    const auto out = scratch / "sw";
    REQUIRE(run_cli("sweep coherence-check --axis v_over_c --values 0.5,0.1,1.5,0.3 --workers 3 --out " +
                    out.string()) == 0);
    std::ifstream f(out / "sweep.csv");
    std::string line;
    std::getline(f, line);
    std::vector<std::string> firsts;
    while (std::getline(f, line)) firsts.push_back(line.substr(0, line.find(',')));
    CHECK(firsts == std::vector<std::string>{"0.5", "0.1", "1.5", "0.3"});
}

TEST_CASE_METHOD(Scratch, "empty sweep produces only the header") {
    const auto out = scratch / "empty";
    REQUIRE(run_cli("sweep coherence-check --axis v_over_c --out " + out.string()) == 0);
    const auto text = slurp(out / "sweep.csv");
    CHECK(std::count(text.begin(), text.end(), '\n') == 1);
}

TEST_CASE_METHOD(Scratch, "fabricate, spectrum and check-coherence subcommands") {
    REQUIRE(run_cli("fabricate --case A") == 0);
    const auto fab = nlohmann::json::parse(slurp(scratch / "stdout.txt"));
    CHECK(fab["f01_GHz"].get<double>() > 5.0);
    REQUIRE(run_cli("spectrum --points 11 --levels 3") == 0);
    const auto table = slurp(scratch / "stdout.txt");
    CHECK(std::count(table.begin(), table.end(), '\n') == 12);
    REQUIRE(run_cli("check-coherence") == 0);
    const auto coh = nlohmann::json::parse(slurp(scratch / "stdout.txt"));
    CHECK(coh["k_lambda"].get<double>() == Catch::Approx(12.0));
}
