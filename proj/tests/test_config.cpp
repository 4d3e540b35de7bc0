#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "liq/config.hpp"
#include "liq/csv.hpp"
#include "liq/experiments.hpp"

using namespace liq;

namespace {

const char* kMinimalConfig = R"(
# comment
[problem]
horizon = 1.0
p = 2.0
y0 = 0.0

[problem.factor]
dim = 1
ellipticity = 1.0
sigma_sup = 1.0
drift_sup = 0.0

[problem.factor.drift]
form = constant
value = 0.0

[problem.factor.sigma]
entries = 1.0

[problem.costs]
kappa0 = 1.0

[problem.costs.eta]
form = constant
value = 1.0

[problem.costs.gamma]
form = constant
value = 0.0

[problem.costs.lambda]
form = constant
value = 1.0

[domain]
lo = -4.0
hi = 4.0

[grid]
nt = 256
ny = 11

[simulation]
paths = 64
seed = 7
steps = 128

[probes]
times = 0.25, 0.75
)";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("config parses sections, lists, and defaults") {
    const ConfigFile cfg = ConfigFile::parse_string(kMinimalConfig, "inline");
    CHECK(cfg.number("problem.horizon") == 1.0);
    CHECK(cfg.integer("grid.nt") == 256);
    CHECK(cfg.numbers("probes.times").size() == 2);
    CHECK(cfg.number_or("problem.theta", 0.25) == 0.25);

    const ExperimentConfig ec = load_experiment_config(cfg);
    CHECK(ec.grid.nt == 256);
    CHECK(ec.sim.n_paths == 64);
    CHECK(ec.probes.size() == 2);
    CHECK(ec.probes.front().y[0] == 0.0);
    CHECK_NOTHROW(build_problem(ec.inputs));
}

TEST_CASE("parse errors carry line references") {
    try {
        ConfigFile::parse_string("[problem]\nhorizon 1.0\n", "broken.cfg");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("broken.cfg:2") != std::string::npos);
    }
    try {
        const ConfigFile cfg = ConfigFile::parse_string("[a]\nx = oops\n", "bad.cfg");
        cfg.number("a.x");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("bad.cfg:2") != std::string::npos);
    }
}

TEST_CASE("overrides replace file scalars") {
    ConfigFile cfg = ConfigFile::parse_string(kMinimalConfig, "inline");
    cfg.override_value("grid.nt", "512");
    CHECK(load_experiment_config(cfg).grid.nt == 512);
}

TEST_CASE("per-experiment output names are honored") {
    namespace fs = std::filesystem;
    ConfigFile cfg = ConfigFile::parse_string(kMinimalConfig, "inline");
    cfg.override_value("experiment.certificate.output", "cert_custom.csv");
    const ExperimentConfig ec = load_experiment_config(cfg);
    const std::string dir = (fs::temp_directory_path() / "liq_test_outname").string();
    const auto outcome = run_experiment("certificate", ec, cfg.content_hash(), dir);
    CHECK(fs::exists(fs::path(dir) / "cert_custom.csv"));
    fs::remove_all(dir);
}

TEST_CASE("csv formatting round-trips doubles") {
    const double vals[] = {0.1, 1.0 / 3.0, 1e-300, 12345.678901234567, -0.0};
    for (double v : vals) {
        const std::string s = csv::format(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("experiments write byte-identical CSVs for identical config and seed") {
    namespace fs = std::filesystem;
    ConfigFile cfg = ConfigFile::parse_string(kMinimalConfig, "inline");
    cfg.override_value("simulation.dump_paths", "2");
    const ExperimentConfig ec = load_experiment_config(cfg);
    const std::string dir_a = (fs::temp_directory_path() / "liq_test_run_a").string();
    const std::string dir_b = (fs::temp_directory_path() / "liq_test_run_b").string();
    for (const char* name : {"solve", "verify-bounds", "certificate", "asymptotics", "simulate",
                             "compare-strategies"}) {
        const auto oa = run_experiment(name, ec, cfg.content_hash(), dir_a);
        const auto ob = run_experiment(name, ec, cfg.content_hash(), dir_b);
        REQUIRE(oa.files_written.size() == ob.files_written.size());
        for (std::size_t i = 0; i < oa.files_written.size(); ++i)
            CHECK(read_file(oa.files_written[i]) == read_file(ob.files_written[i]));
    }
    // the path dump exists and carries the header columns
    const std::string dump = read_file((fs::path(dir_a) / "path_0.csv").string());
    CHECK(dump.find("t,y1,x,xi,pi,fill_flag,running_cost") == 0);

    // manifests record the config hash and seed
    const std::string manifest = read_file((fs::path(dir_a) / "manifest-solve.json").string());
    CHECK(manifest.find("config_hash") != std::string::npos);
    CHECK(manifest.find("\"seed\": 7") != std::string::npos);
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}

TEST_CASE("unknown experiment name is rejected") {
    const ConfigFile cfg = ConfigFile::parse_string(kMinimalConfig, "inline");
    const ExperimentConfig ec = load_experiment_config(cfg);
    CHECK_THROWS_AS(run_experiment("frobnicate", ec, 0, "/tmp"), ConfigError);
}
