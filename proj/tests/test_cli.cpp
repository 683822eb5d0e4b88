#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#ifdef _WIN32
#error "cli tests assume a POSIX shell"
#endif
#include <sys/wait.h>

// End-to-end checks against the installed binary. The ctest registration
// exports SPINBATH_BIN (binary path) and SPINBATH_SRC (source tree) into the
// environment; without them every test in this file is skipped.

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string binary_path() {
    const char* p = std::getenv("SPINBATH_BIN");
    return p ? std::string(p) : std::string();
}

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() /
               ("spinbath_cli_" + std::to_string(rd()) + "_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Runs the tool, returns the exit status (or -1 if the shell itself failed).
int run_cli(const std::string& args) {
    const std::string cmd = binary_path() + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    if (WIFEXITED(rc)) return WEXITSTATUS(rc);
    return -1;
}

json read_json(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    return json::parse(in);
}

} // namespace

TEST_CASE("nsd command writes spectrum table and summary", "[cli]") {
    if (binary_path().empty()) SKIP("SPINBATH_BIN not set");
    TempDir dir;
    write_file(dir.path / "cfg.json", R"({
        "schema": 1,
        "seed": 7,
        "bath": {"tau_c": "5 us", "b_rms": "0.0284 G"},
        "nsd": {"omega_min": "1000 Hz", "omega_max": "10 MHz", "n_points": 64}
    })");
    const fs::path out = dir.path / "out";
    const int rc = run_cli("nsd --config " + (dir.path / "cfg.json").string() + " --out " +
                           out.string());
    REQUIRE(rc == 0);

    REQUIRE(fs::exists(out / "nsd.csv"));
    REQUIRE(fs::exists(out / "nsd.json"));

    // First data row starts at omega = 0 for a zero omega_min.
    std::ifstream csv(out / "nsd.csv");
    std::string header, first;
    std::getline(csv, header);
    std::getline(csv, first);
    CHECK(header == "omega_rad_s,nsd_s_per_rad");
    CHECK(first.substr(0, 2) == "0,");

    const json j = read_json(out / "nsd.json");
    CHECK(j.at("schema").get<int>() == 1);
    CHECK(j.at("command").get<std::string>() == "nsd");
    CHECK(j.at("effective_seed").get<std::uint64_t>() == 7);
    CHECK(j.at("tau_c_us").get<double>() == Catch::Approx(5.0));
}

TEST_CASE("unknown config key fails before any computation", "[cli]") {
    if (binary_path().empty()) SKIP("SPINBATH_BIN not set");
    TempDir dir;
    write_file(dir.path / "cfg.json", R"({
        "schema": 1,
        "bath": {"tau_c": "5 us", "b_rms": "0.0284 G", "tao_c": "1 us"}
    })");
    const fs::path out = dir.path / "out";
    const int rc = run_cli("nsd --config " + (dir.path / "cfg.json").string() + " --out " +
                           out.string());
    CHECK(rc == 2);
    CHECK_FALSE(fs::exists(out / "nsd.csv"));
}

TEST_CASE("malformed json config exits with the config code", "[cli]") {
    if (binary_path().empty()) SKIP("SPINBATH_BIN not set");
    TempDir dir;
    write_file(dir.path / "cfg.json", "{ not json");
    const int rc = run_cli("nsd --config " + (dir.path / "cfg.json").string() + " --out " +
                           (dir.path / "out").string());
    CHECK(rc == 2);
}

TEST_CASE("missing config file exits with the config code", "[cli]") {
    if (binary_path().empty()) SKIP("SPINBATH_BIN not set");
    TempDir dir;
    const int rc = run_cli("nsd --config " + (dir.path / "nope.json").string() + " --out " +
                           (dir.path / "out").string());
    CHECK(rc == 2);
}

TEST_CASE("fit decay with an empty data directory is a data failure", "[cli]") {
    if (binary_path().empty()) SKIP("SPINBATH_BIN not set");
    TempDir dir;
    fs::create_directories(dir.path / "data");
    write_file(dir.path / "cfg.json", R"({
        "schema": 1,
        "fit": {"mode": "decay"}
    })");
    const int rc = run_cli("fit --config " + (dir.path / "cfg.json").string() + " --data " +
                           (dir.path / "data").string() + " --out " +
                           (dir.path / "out").string());
    CHECK(rc == 3);
}

TEST_CASE("constant-signal curve surfaces as a fit failure", "[cli]") {
    if (binary_path().empty()) SKIP("SPINBATH_BIN not set");
    TempDir dir;
    fs::create_directories(dir.path / "data");
    std::ostringstream csv;
    csv << "t_us,signal\n";
    for (int i = 0; i < 12; ++i) csv << i << ",0.5\n";
    write_file(dir.path / "data" / "flat.csv", csv.str());
    write_file(dir.path / "cfg.json", R"({
        "schema": 1,
        "fit": {"mode": "decay"}
    })");
    const fs::path out = dir.path / "out";
    const int rc = run_cli("fit --config " + (dir.path / "cfg.json").string() + " --data " +
                           (dir.path / "data").string() + " --out " + out.string());
    CHECK(rc == 4);

    // The per-curve error is still reported in the JSON before the exit.
    const json j = read_json(out / "fits.json");
    REQUIRE(j.at("errors").size() == 1);
    CHECK(j.at("errors")[0].at("id").get<std::string>() == "flat");
    CHECK(j.at("fits").empty());
}

TEST_CASE("non-decaying bath prediction is a numerical failure", "[cli]") {
    if (binary_path().empty()) SKIP("SPINBATH_BIN not set");
    TempDir dir;
    // Coherence stays above 1/e forever: vanishing field, no intrinsic rates.
    write_file(dir.path / "cfg.json", R"({
        "schema": 1,
        "bath": {"tau_c": "5 us", "b_rms": "1e-12 G"},
        "sensor": {"echo_tau": "1 us", "t2_star": "1 us"}
    })");
    const int rc = run_cli("predict --config " + (dir.path / "cfg.json").string() + " --out " +
                           (dir.path / "out").string());
    CHECK(rc == 4);
}

TEST_CASE("simulate reruns with a fixed seed are byte identical", "[cli]") {
    if (binary_path().empty()) SKIP("SPINBATH_BIN not set");
    TempDir dir;
    write_file(dir.path / "cfg.json", R"({
        "schema": 1,
        "seed": 42,
        "mc": {
            "sigma_b": "0.0284 G",
            "tau_c": "5 us",
            "dt": "0.05 us",
            "n_steps": 400,
            "n_trajectories": 300,
            "echo": {"tau_min": "5 us", "tau_max": "10 us", "n_tau": 3}
        }
    })");
    const fs::path out_a = dir.path / "a";
    const fs::path out_b = dir.path / "b";
    const std::string cfg = (dir.path / "cfg.json").string();
    REQUIRE(run_cli("simulate --config " + cfg + " --out " + out_a.string()) == 0);
    REQUIRE(run_cli("simulate --config " + cfg + " --out " + out_b.string()) == 0);

    const std::string decay_a = slurp(out_a / "echo_decay.csv");
    REQUIRE_FALSE(decay_a.empty());
    CHECK(decay_a == slurp(out_b / "echo_decay.csv"));

    // A --seed override changes the draw and is recorded in the summary.
    const fs::path out_c = dir.path / "c";
    REQUIRE(run_cli("simulate --config " + cfg + " --out " + out_c.string() + " --seed 999") == 0);
    CHECK(slurp(out_c / "echo_decay.csv") != decay_a);
    const json j = read_json(out_c / "simulate.json");
    CHECK(j.at("effective_seed").get<std::uint64_t>() == 999);
    CHECK(j.at("validation_passed").get<bool>());
}

TEST_CASE("zero-amplitude bath gives a flat unit echo signal", "[cli]") {
    if (binary_path().empty()) SKIP("SPINBATH_BIN not set");
    TempDir dir;
    write_file(dir.path / "cfg.json", R"({
        "schema": 1,
        "seed": 1,
        "mc": {
            "sigma_b": "0 G",
            "tau_c": "5 us",
            "dt": "0.05 us",
            "n_steps": 400,
            "n_trajectories": 100,
            "echo": {"tau_min": "5 us", "tau_max": "10 us", "n_tau": 2}
        }
    })");
    const fs::path out = dir.path / "out";
    REQUIRE(run_cli("simulate --config " + (dir.path / "cfg.json").string() + " --out " +
                    out.string()) == 0);

    std::ifstream csv(out / "echo_decay.csv");
    std::string line;
    std::getline(csv, line); // header
    int rows = 0;
    while (std::getline(csv, line)) {
        std::istringstream ss(line);
        std::string t, signal;
        std::getline(ss, t, ',');
        std::getline(ss, signal, ',');
        CHECK(std::stod(signal) == 1.0);
        ++rows;
    }
    CHECK(rows == 2);
}

TEST_CASE("geometry command reports cap statistics", "[cli]") {
    if (binary_path().empty()) SKIP("SPINBATH_BIN not set");
    TempDir dir;
    write_file(dir.path / "cfg.json", R"({
        "schema": 1,
        "seed": 5,
        "geometry": {
            "nv_depth_nm": 8.0,
            "sensing_radius_nm": 20.0,
            "cap_radius_nm": 20.0,
            "cap_height_nm": 20.0,
            "concentration_mM": 1.0,
            "dipolar": true,
            "n_samples": 20000
        }
    })");
    const fs::path out = dir.path / "out";
    REQUIRE(run_cli("geometry --config " + (dir.path / "cfg.json").string() + " --out " +
                    out.string()) == 0);
    const json j = read_json(out / "geometry.json");
    CHECK(j.at("cap_volume_m3").get<double>() ==
          Catch::Approx(1.6755160819145568e-23).epsilon(1e-12));
    CHECK(j.at("dipolar").at("b_rms_t").get<double>() > 0.0);
    CHECK(j.at("molecule_count").get<double>() == Catch::Approx(10.090193690933152));
}

TEST_CASE("unknown subcommand and missing arguments fail fast", "[cli]") {
    if (binary_path().empty()) SKIP("SPINBATH_BIN not set");
    CHECK(run_cli("frobnicate") != 0);
    CHECK(run_cli("nsd") != 0);
}
