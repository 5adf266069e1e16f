#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "fraclimit/csv.hpp"
#include "fraclimit/errors.hpp"
#include "run.hpp"

using namespace fraclimit;
using namespace fraclimit::cli;
namespace fs = std::filesystem;

namespace {

std::string scratch(const std::string& name) {
    fs::path p = fs::path(::testing::TempDir()) / ("fraclimit_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string error_of(const std::string& text) {
    try {
        make_run_config(ConfigValues::parse(text, "run.cfg"));
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

int run_exe(const std::string& args) {
    const std::string cmd = std::string(FRACLIMIT_EXE) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

DensityField sample_field() {
    DensityField f = zero_field(uniform_grid_1d(0.0, 2.0, 4), 0.5);
    f.values = {0.1, 0.4, 0.3, 0.2};
    f.std_err = {0.01, 0.02, 0.015, 0.01};
    f.out_of_window = 0.0;
    return f;
}

}  // namespace

TEST(Config, MinimalConfigGetsDefaults) {
    const std::string text =
        "mode = simulate-kinetic\n[model]\nd = 1\ns = 0.75\nnu0 = 1\nalpha = 0\neps = 0.1\n";
    RunConfig c = make_run_config(ConfigValues::parse(text));
    EXPECT_EQ(c.mode, Mode::SimulateKinetic);
    EXPECT_EQ(c.params.d, 1);
    EXPECT_DOUBLE_EQ(c.params.s, 0.75);
    EXPECT_DOUBLE_EQ(c.params.eps, 0.1);
    EXPECT_EQ(c.particles, 100000u);
    EXPECT_EQ(c.seed, 20240611u);
    EXPECT_EQ(c.workers, 1);
    EXPECT_EQ(c.eps_list, (std::vector<double>{0.2, 0.1, 0.05}));
    EXPECT_EQ(c.grid_bins, std::vector<int>{80});
    // Every schema key is present in the resolved values.
    for (const auto& k : config_schema()) {
        const std::string full = k.section.empty() ? k.key : k.section + "." + k.key;
        EXPECT_EQ(c.raw.values().count(full), 1u) << full;
    }
    EXPECT_TRUE(c.raw.explicitly_set("model.s"));
    EXPECT_FALSE(c.raw.explicitly_set("kinetic.particles"));
}

TEST(Config, MaxwellRangeMessage) {
    const std::string msg = error_of("mode = simulate-kinetic\n[model]\nalpha = 0.5\ns = 0.4\n");
    EXPECT_NE(msg.find("s > 1/2"), std::string::npos) << msg;
}

TEST(Config, UnknownKeyIsNamed) {
    try {
        ConfigValues::parse("mode = converge\n[model]\nfoo=1\n", "run.cfg");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        const std::string m = e.what();
        EXPECT_NE(m.find("'foo'"), std::string::npos) << m;
        EXPECT_NE(m.find("run.cfg:3"), std::string::npos) << m;
    }
    EXPECT_THROW(ConfigValues::parse("foo = 1\n"), ConfigError);
}

TEST(Config, StructuralErrors) {
    EXPECT_THROW(ConfigValues::parse("[nosuch]\n"), ConfigError);
    EXPECT_THROW(ConfigValues::parse("[model]\ns = 0.7\ns = 0.8\n"), ConfigError);
    EXPECT_THROW(ConfigValues::parse("[model]\njust words\n"), ConfigError);
    EXPECT_NO_THROW(ConfigValues::parse("# comment\n\n[model]\ns = 0.7  # trailing\n"));
    EXPECT_THROW(parse_mode("fly"), ConfigError);
    for (Mode m : {Mode::SimulateKinetic, Mode::EvalOperators, Mode::Converge, Mode::SolveLimit, Mode::Compare,
                   Mode::FullPipeline})
        EXPECT_EQ(parse_mode(mode_name(m)), m);
}

TEST(Config, RangeAndModeChecks) {
    EXPECT_FALSE(error_of("mode = converge\n[model]\neps_list = 0.1, 0.2\n").empty());
    EXPECT_FALSE(error_of("mode = converge\n[model]\ns = 1.5\n").empty());
    EXPECT_FALSE(error_of("mode = compare\n").empty());
    EXPECT_FALSE(error_of("mode = solve-limit\n[model]\nd = 2\n").empty());
    EXPECT_FALSE(error_of("mode = full-pipeline\n[model]\nalpha = 0.5\n[pipeline]\nlimit = reference\n").empty());
    EXPECT_FALSE(error_of("mode = simulate-kinetic\n[kinetic]\nparticles = 0\n").empty());
    EXPECT_FALSE(error_of("mode = simulate-kinetic\n[kinetic]\nsnapshot_times = 0.3, 0.1\n").empty());
    EXPECT_TRUE(error_of("mode = eval-operators\n[model]\nd = 2\n").empty());
}

TEST(Config, OverridesAndDump) {
    ConfigValues v = ConfigValues::parse("mode = converge\n");
    v.set("model.s=0.6");
    v.set("workers = 2");
    EXPECT_EQ(v.get("model.s"), "0.6");
    EXPECT_EQ(v.get("workers"), "2");
    EXPECT_THROW(v.set("model.nope=1"), ConfigError);
    EXPECT_THROW(v.set("no equals sign"), ConfigError);
    ConfigValues back = ConfigValues::parse(v.dump());
    EXPECT_EQ(back.values(), v.values());
}

TEST(Csv, DensityRoundTrip) {
    const std::string dir = scratch("csv");
    DensityField f = sample_field();
    f.out_of_window = 0.125;
    write_density(dir + "/d.csv", f);
    DensityField g = read_density(dir + "/d.csv");
    EXPECT_TRUE(g.grid.same_as(f.grid));
    EXPECT_EQ(g.values, f.values);
    EXPECT_EQ(g.std_err, f.std_err);
    EXPECT_DOUBLE_EQ(g.t, 0.5);
    EXPECT_DOUBLE_EQ(g.out_of_window, 0.125);
    std::ofstream(dir + "/bare.csv") << "x,rho,stderr\n0.25,1,0\n0.75,2,0\n1.25,3,0\n";
    DensityField h = read_density(dir + "/bare.csv");
    EXPECT_DOUBLE_EQ(h.grid.lower[0], 0.0);
    EXPECT_DOUBLE_EQ(h.grid.upper[0], 1.5);
    EXPECT_EQ(h.values, (std::vector<double>{1, 2, 3}));
    EXPECT_THROW(read_density(dir + "/missing.csv"), IoError);
}

TEST(Csv, TableHeaders) {
    const std::string dir = scratch("headers");
    ConvergenceReport rep;
    rep.rows.push_back({0.1, "LSR", "gauss", 0.01, 0.0});
    write_convergence(dir + "/c.csv", rep);
    EXPECT_EQ(slurp(dir + "/c.csv").substr(0, 50).find("epsilon,operator,psi_id,l2_error,order_estimate"), 0u);
    OperatorSample s;
    s.op = "LSR";
    s.psi = "gauss";
    s.points = {vec1(1.0)};
    s.values = {2.0};
    s.errors = {1e-9};
    write_operator_samples(dir + "/o.csv", {s});
    EXPECT_EQ(slurp(dir + "/o.csv").find("op,psi_id,eps,alpha,x1,value,error_estimate"), 0u);
    EXPECT_THROW(write_nodal("/nonexistent_dir/x.csv", {0.0}, {1.0}), IoError);
}

TEST(RunMode, CompareIdenticalFiles) {
    const std::string dir = scratch("compare");
    write_density(dir + "/a.csv", sample_field());
    ConfigValues v = ConfigValues::parse("mode = compare\n[compare]\na = " + dir + "/a.csv\nb = " + dir + "/a.csv\n");
    v.set("out=" + dir + "/out");
    std::ostringstream log;
    EXPECT_EQ(run_mode(make_run_config(v), log), kOk);
    const std::string table = slurp(dir + "/out/compare.csv");
    EXPECT_NE(table.find("\n0,0,0,"), std::string::npos) << table;
    nlohmann::json man = nlohmann::json::parse(slurp(dir + "/out/manifest.json"));
    EXPECT_EQ(man["mode"], "compare");
    EXPECT_EQ(man["exit_status"], 0);
    EXPECT_DOUBLE_EQ(man["results"]["l2_rel"].get<double>(), 0.0);
    EXPECT_TRUE(fs::exists(dir + "/out/config.cfg"));
}

TEST(RunMode, SimulateIsByteReproducible) {
    const std::string dir = scratch("simulate");
    std::string digest[2];
    for (int k = 0; k < 2; ++k) {
        ConfigValues v = ConfigValues::parse(
            "mode = simulate-kinetic\nseed = 42\n[model]\nalpha = 0.5\n[kinetic]\nparticles = 5000\n"
            "t_end = 0.2\nsnapshot_times = 0.1, 0.2\n");
        v.set("out=" + dir + "/run" + std::to_string(k));
        std::ostringstream log;
        ASSERT_EQ(run_mode(make_run_config(v), log), kOk);
        digest[k] = slurp(dir + "/run" + std::to_string(k) + "/density_000.csv") +
                    slurp(dir + "/run" + std::to_string(k) + "/density_001.csv");
    }
    EXPECT_FALSE(digest[0].empty());
    EXPECT_EQ(digest[0], digest[1]);
}

TEST(RunMode, ManifestRecordsRun) {
    const std::string dir = scratch("manifest");
    ConfigValues v = ConfigValues::parse(
        "mode = solve-limit\n[limit]\nelements = 60\nproblem = stationary\n[model]\nalpha = 0.5\n");
    v.set("out=" + dir);
    std::ostringstream log;
    EXPECT_EQ(run_mode(make_run_config(v), log), kOk);
    nlohmann::json man = nlohmann::json::parse(slurp(dir + "/manifest.json"));
    EXPECT_EQ(man["config"]["model.alpha"], "0.5");
    EXPECT_TRUE(man.contains("backends"));
    EXPECT_TRUE(man.contains("fraclimit_version"));
    EXPECT_TRUE(man.contains("seeds"));
    EXPECT_TRUE(man.contains("phases"));
    EXPECT_TRUE(man.contains("wall_clock_seconds"));
    EXPECT_TRUE(man["checks"].is_array());
    for (const auto& c : man["checks"]) EXPECT_TRUE(c["passed"].get<bool>()) << c.dump();
}

TEST(ExitCodes, ExceptionMapping) {
    auto code = [](auto thrower) {
        try {
            thrower();
        } catch (...) {
            std::string msg;
            return exit_code_for_current_exception(msg);
        }
        return -1;
    };
    EXPECT_EQ(code([] { throw ConfigError("x"); }), kConfigError);
    EXPECT_EQ(code([] { throw NumericError("x"); }), kNumericError);
    EXPECT_EQ(code([] { throw IoError("x"); }), kIoError);
}

TEST(Executable, ExitCodes) {
    const std::string dir = scratch("exe");
    EXPECT_EQ(run_exe("--help"), kOk);
    EXPECT_EQ(run_exe("--list-keys"), kOk);
    EXPECT_EQ(run_exe(""), kConfigError);
    EXPECT_EQ(run_exe("--config " + dir + "/missing.cfg"), kIoError);
    std::ofstream(dir + "/bad.cfg") << "mode = converge\n[model]\nfoo = 1\n";
    EXPECT_EQ(run_exe("--config " + dir + "/bad.cfg"), kConfigError);
    write_density(dir + "/a.csv", sample_field());
    std::ofstream(dir + "/cmp.cfg") << "mode = compare\n[compare]\na = " << dir << "/a.csv\nb = " << dir
                                    << "/a.csv\n";
    EXPECT_EQ(run_exe("--config " + dir + "/cmp.cfg --out " + dir + "/out"), kOk);
    EXPECT_TRUE(fs::exists(dir + "/out/compare.csv"));
    EXPECT_EQ(run_exe("--config " + dir + "/cmp.cfg --set compare.b=" + dir + "/none.csv --out " + dir + "/o2"),
              kIoError);
    EXPECT_EQ(run_exe("--config " + dir + "/cmp.cfg --set model.s=2 --out " + dir + "/o3"), kConfigError);
}
