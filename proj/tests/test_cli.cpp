#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::path(KYLEQ_CLI_WORK);

int run_cli(const std::string& args, const fs::path& stdout_to = {}) {
    std::string cmd = std::string(KYLEQ_CLI_PATH) + " " + args;
    if (!stdout_to.empty()) cmd += " > " + stdout_to.string();
    cmd += " 2> " + (kWork / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct WorkDir {
    WorkDir() {
        fs::remove_all(kWork);
        fs::create_directories(kWork);
    }
};

}  // namespace

TEST_CASE("calibrate closed loop through the command line") {
    WorkDir wd;
    const int rc = run_cli(
        "calibrate --sigma-w 1 --sigma-a 1 --sigma-v 1 --rho 0.3 "
        "--T 0.78220079419593325 --format json",
        kWork / "cal.json");
    CHECK(rc == 0);
    const auto j = nlohmann::json::parse(slurp(kWork / "cal.json"));
    CHECK(std::abs(j["r0"].get<double>() - 1.0) < 1e-10);
    CHECK(j["residual"].get<double>() <= 1e-12);
}

TEST_CASE("usage and validation exit codes") {
    WorkDir wd;
    CHECK(run_cli("curves") == 2);                       // missing required --out
    CHECK(run_cli("calibrate --T -1") == 2);             // invalid parameter
    CHECK(run_cli("calibrate --rho 0") == 2);
    CHECK(run_cli("nonsense") == 2);
    CHECK(run_cli("--help") == 0);
    const std::string err = slurp(kWork / "stderr.txt");

    const int rc = run_cli("calibrate --T -1");
    CHECK(rc == 2);
    CHECK(slurp(kWork / "stderr.txt").find("T must be finite and > 0") != std::string::npos);
}

TEST_CASE("curves output matches the contract") {
    WorkDir wd;
    const int rc = run_cli("curves --grid 51 --out " + (kWork / "curves").string());
    CHECK(rc == 0);
    std::ifstream in(kWork / "curves" / "curves.csv");
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("t,r,Sigma1,Sigma2,Sigma3,Sigma4,lambda,mu,beta", 0) == 0);

    std::string first, line, last;
    std::getline(in, first);
    while (std::getline(in, line))
        if (!line.empty()) last = line;

    // First row: t = 0, r = r0, Sigma1 = sigma_a^2 = 1, Sigma4 = sigma_v^2 = 1.
    std::stringstream fs_(first);
    std::string cell;
    std::getline(fs_, cell, ',');
    CHECK(cell == "0");
    std::getline(fs_, cell, ',');
    CHECK(std::stod(cell) > 0.8);
    std::getline(fs_, cell, ',');
    CHECK(std::stod(cell) == doctest::Approx(1.0));

    // Last row: beta blank.
    std::stringstream ls(last);
    for (int i = 0; i < 9; ++i) std::getline(ls, cell, ',');
    CHECK(cell.empty());

    CHECK(fs::exists(kWork / "curves" / "run_config.json"));
}

TEST_CASE("simulate is deterministic and gates on its moment checks") {
    WorkDir wd;
    const std::string base =
        "simulate --paths 2000 --steps 100 --seed 5 --out ";
    CHECK(run_cli(base + (kWork / "s1").string()) == 0);
    CHECK(run_cli(base + (kWork / "s2").string()) == 0);
    CHECK(slurp(kWork / "s1" / "moments.csv") == slurp(kWork / "s2" / "moments.csv"));
    CHECK(!slurp(kWork / "s1" / "moments.csv").empty());

    const auto config = nlohmann::json::parse(slurp(kWork / "s1" / "run_config.json"));
    CHECK(config["command"] == "simulate");
    CHECK(config["seed"] == 5);
}

TEST_CASE("figures command emits four panels with sane first rows") {
    WorkDir wd;
    const int rc = run_cli("figures --grid 41 --out " + (kWork / "figs").string());
    CHECK(rc == 0);
    for (const char* name : {"fig1A.csv", "fig1B.csv", "fig1C.csv", "fig1D.csv"})
        CHECK(fs::exists(kWork / "figs" / name));

    std::ifstream in(kWork / "figs" / "fig1D.csv");
    std::string header, first;
    std::getline(in, header);
    CHECK(header == "t,sigma_a=5,sigma_a=3,sigma_a=1");
    std::getline(in, first);
    std::stringstream ss(first);
    std::string cell;
    std::getline(ss, cell, ',');
    while (std::getline(ss, cell, ','))
        CHECK(std::stod(cell) == doctest::Approx(0.09).epsilon(1e-9));
}

TEST_CASE("verify gates on the invariant suite") {
    WorkDir wd;
    CHECK(run_cli("verify --grid 200 --oracle-steps 20000", kWork / "verify.txt") == 0);
    CHECK(slurp(kWork / "verify.txt").find("FAIL") == std::string::npos);

    // The hidden perturbation hook must trip the HJB residuals.
    CHECK(run_cli("verify --grid 200 --oracle-steps 20000 --inject-j-perturb 0.001",
                  kWork / "verify_bad.txt") == 5);
    CHECK(slurp(kWork / "verify_bad.txt").find("FAIL") != std::string::npos);
}
