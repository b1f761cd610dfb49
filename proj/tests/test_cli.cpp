#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#include "solwave/field.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args, const fs::path& outdir) {
    fs::create_directories(outdir);
    const std::string cmd = std::string(SOLWAVE_CLI_PATH) + " " + args + " --out " +
                            outdir.string() + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path temp_dir(const std::string& tag) {
    auto p = fs::temp_directory_path() / ("solwave_test_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("solve subcommand writes profile, json and manifest", "[cli]") {
    auto dir = temp_dir("solve");
    const int rc = run_cli(
        "solve --problem subcritical --omega -1.25 --c 1 --b 1 "
        "--n 2048 --L 50.2654824574366918 --tol 1e-9",
        dir);
    REQUIRE(rc == 0);
    REQUIRE(fs::exists(dir / "psi.csv"));
    REQUIRE(fs::exists(dir / "groundstate.json"));
    REQUIRE(fs::exists(dir / "manifest.json"));

    auto j = nlohmann::json::parse(slurp(dir / "groundstate.json"));
    // reduce(): nu = -1.25 + 1/4 = -1, A = -1
    REQUIRE(j["params"]["nu"].get<double>() == Catch::Approx(-1.0));
    REQUIRE(j["params"]["A"].get<double>() == Catch::Approx(-1.0));
    REQUIRE(j["converged"].get<bool>());
    REQUIRE(j["residual"].get<double>() <= 1e-9);

    // every emitted CSV parses back through the library reader
    auto psi = solwave::read_field_csv((dir / "psi.csv").string());
    REQUIRE(psi.size() == 2048);

    auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
    for (const auto& f : m["outputs"]) REQUIRE(fs::exists(dir / f.get<std::string>()));
}

TEST_CASE("blocked regime exits 3 without --force", "[cli]") {
    auto dir = temp_dir("blocked");
    const int rc = run_cli("solve --b -1 --gamma 1 --omega -1 --n 512 --L 20", dir);
    // b = -1 gives A = 1, with B = 0, gamma = 1: blocked case 1
    REQUIRE(rc == 3);
    REQUIRE(!fs::exists(dir / "groundstate.json"));
}

TEST_CASE("parse errors exit 2", "[cli]") {
    auto dir = temp_dir("parse");
    REQUIRE(run_cli("solve --no-such-flag", dir) == 2);
    REQUIRE(run_cli("frobnicate", dir) == 2);
}

TEST_CASE("verify exact oracle exits 0; noise exits 5", "[cli]") {
    auto dir = temp_dir("verify_ok");
    REQUIRE(run_cli("verify --exact a=1,x0=0,gamma=-1 --n 8192", dir) == 0);
    auto j = nlohmann::json::parse(slurp(dir / "verify.json"));
    REQUIRE(j["pass"].get<bool>());

    // noise field: residual large by construction
    auto noisy = temp_dir("verify_noise");
    auto g = solwave::make_grid(512, 20.0);
    solwave::Field f(g);
    std::uint64_t s = 12345;
    for (auto& z : f.v) {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        z = solwave::cplx(static_cast<double>(s >> 40) / 1e7, 0.0);
    }
    solwave::write_field_csv(f, (noisy / "noise.csv").string());
    REQUIRE(run_cli("verify --field " + (noisy / "noise.csv").string() +
                        " --nu -1 --A -1",
                    noisy) == 5);
}

TEST_CASE("verify on the zero field exits 0", "[cli]") {
    auto dir = temp_dir("verify_zero");
    auto g = solwave::make_grid(256, 10.0);
    solwave::write_field_csv(solwave::Field(g), (dir / "zero.csv").string());
    REQUIRE(run_cli("verify --field " + (dir / "zero.csv").string(), dir) == 0);
}

TEST_CASE("evolve writes a parsable trace", "[cli]") {
    auto dir = temp_dir("evolve");
    // make a standing-wave profile first
    REQUIRE(run_cli("solve --problem subcritical --omega -1 --b 2 --n 1024 "
                    "--L 50.2654824574366918",
                    dir) == 0);
    const int rc = run_cli("evolve --field " + (dir / "psi.csv").string() +
                               " --omega -1 --b 2 --T 0.5 --n 1024 "
                               "--L 50.2654824574366918",
                           dir);
    REQUIRE(rc == 0);
    std::ifstream is(dir / "trace.csv");
    std::string header;
    std::getline(is, header);
    REQUIRE(header == "t,M,P,Eaction,drift");
    std::string line, last;
    while (std::getline(is, line))
        if (!line.empty()) last = line;
    double t, M, P, E, drift;
    REQUIRE(std::sscanf(last.c_str(), "%lg,%lg,%lg,%lg,%lg", &t, &M, &P, &E, &drift) ==
            5);
    REQUIRE(t == Catch::Approx(0.5));
    REQUIRE(drift <= 1e-5);
}

TEST_CASE("sweep records blocked points and continues", "[cli]") {
    auto dir = temp_dir("sweep");
    // b in {-1, 1}: b = -1 is blocked (A = 1, gamma = 1), b = 1 is admissible
    const int rc = run_cli(
        "sweep --axis b=-1,1 --gamma 1 --omega -1 --problem subcritical "
        "--n 1024 --L 50.2654824574366918 --jobs 2",
        dir);
    REQUIRE(rc == 0);
    auto idx = nlohmann::json::parse(slurp(dir / "index.json"));
    REQUIRE(idx["total"].get<int>() == 2);
    REQUIRE(idx["succeeded"].get<int>() == 1);
    bool saw_blocked = false, saw_ok = false;
    for (const auto& p : idx["points"]) {
        if (p["status"] == "blocked") saw_blocked = true;
        if (p["status"] == "ok") {
            saw_ok = true;
            REQUIRE(fs::exists(dir / p["dir"].get<std::string>() / "groundstate.json"));
        }
    }
    REQUIRE(saw_blocked);
    REQUIRE(saw_ok);
}

TEST_CASE("sweep with every point blocked exits 6", "[cli]") {
    auto dir = temp_dir("sweep_fail");
    const int rc = run_cli(
        "sweep --axis b=-1,-2 --gamma 1 --omega -1 --n 512 --L 20 --jobs 2", dir);
    REQUIRE(rc == 6);
}

TEST_CASE("repeated runs are byte-identical apart from the manifest", "[cli]") {
    auto d1 = temp_dir("repro1");
    auto d2 = temp_dir("repro2");
    const std::string args =
        "solve --problem subcritical --omega -1 --b 2 --n 1024 --L 50.2654824574366918";
    REQUIRE(run_cli(args, d1) == 0);
    REQUIRE(run_cli(args, d2) == 0);
    REQUIRE(slurp(d1 / "psi.csv") == slurp(d2 / "psi.csv"));
    REQUIRE(slurp(d1 / "groundstate.json") == slurp(d2 / "groundstate.json"));
}

TEST_CASE("SOLWAVE_OUT overrides the output directory", "[cli]") {
    auto flagdir = temp_dir("envflag");
    auto envdir = temp_dir("envreal");
    const std::string cmd = "SOLWAVE_OUT=" + envdir.string() + " " +
                            std::string(SOLWAVE_CLI_PATH) +
                            " verify --exact a=1,x0=0,gamma=-1 --n 4096 --out " +
                            flagdir.string() + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    REQUIRE(fs::exists(envdir / "verify.json"));
    REQUIRE(!fs::exists(flagdir / "verify.json"));
}

TEST_CASE("config file precedence: flag beats file beats default", "[cli]") {
    auto dir = temp_dir("config");
    {
        std::ofstream os(dir / "run.cfg");
        os << "b = 2\nomega = -1\ngamma = 0.25\n";
    }
    const int rc = run_cli("solve --problem subcritical --config " +
                               (dir / "run.cfg").string() +
                               " --gamma 0 --n 1024 --L 50.2654824574366918",
                           dir);
    REQUIRE(rc == 0);
    auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
    REQUIRE(m["params"]["physical"]["b"].get<double>() == Catch::Approx(2.0));   // file
    REQUIRE(m["params"]["physical"]["gamma"].get<double>() == 0.0);              // flag
    REQUIRE(m["params"]["physical"]["c"].get<double>() == 0.0);                  // default
}

TEST_CASE("selftest passes", "[cli]") {
    auto dir = temp_dir("selftest");
    REQUIRE(run_cli("selftest", dir) == 0);
}
