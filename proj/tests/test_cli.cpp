#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const char* kBin = GROUPFLOW_CLI_BIN;
const fs::path kConfigs = fs::path(GROUPFLOW_SOURCE_DIR) / "configs";

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "groupflow-cli-tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(kBin) + " " + args;
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
    REQUIRE(out.good());
}

long line_count(const std::string& text) {
    long n = 0;
    for (char c : text) n += c == '\n' ? 1 : 0;
    return n;
}

} // namespace

TEST_CASE("run verb writes its artifact set and refuses silent overwrite", "[cli]") {
    const fs::path dir = fresh_dir("run");
    const std::string cfg = (kConfigs / "smoke.cfg").string();
    REQUIRE(run_cli("run --config " + cfg + " --out " + (dir / "a").string() + " > /dev/null") == 0);
    for (const char* name : {"manifest.cfg", "speeds.csv", "histogram.csv", "density.pgm", "summary.txt"})
        CHECK(fs::exists(dir / "a" / name));

    CHECK(run_cli("run --config " + cfg + " --out " + (dir / "a").string() + " 2> /dev/null") == 2);
    CHECK(run_cli("run --config " + cfg + " --out " + (dir / "a").string() +
                  " --force > /dev/null") == 0);
}

TEST_CASE("identical invocations produce byte-identical outputs", "[cli]") {
    const fs::path dir = fresh_dir("determinism");
    const std::string cfg = (kConfigs / "smoke.cfg").string();
    REQUIRE(run_cli("run --config " + cfg + " --out " + (dir / "a").string() + " > /dev/null") == 0);
    REQUIRE(run_cli("run --config " + cfg + " --out " + (dir / "b").string() + " > /dev/null") == 0);
    for (const char* name : {"manifest.cfg", "speeds.csv", "histogram.csv", "density.pgm"})
        REQUIRE(slurp(dir / "a" / name) == slurp(dir / "b" / name));
}

TEST_CASE("analyze replays a manifest to the same bytes", "[cli]") {
    const fs::path dir = fresh_dir("analyze");
    const std::string cfg = (kConfigs / "smoke.cfg").string();
    REQUIRE(run_cli("run --config " + cfg + " --out " + (dir / "a").string() + " > /dev/null") == 0);
    REQUIRE(run_cli("analyze --config " + (dir / "a" / "manifest.cfg").string() + " --out " +
                    (dir / "b").string() + " > /dev/null") == 0);
    for (const char* name : {"manifest.cfg", "speeds.csv", "histogram.csv", "density.pgm"})
        REQUIRE(slurp(dir / "a" / name) == slurp(dir / "b" / name));
}

TEST_CASE("seed flag overrides the config seed", "[cli]") {
    const fs::path dir = fresh_dir("seed");
    const std::string cfg = (kConfigs / "smoke.cfg").string();
    REQUIRE(run_cli("run --config " + cfg + " --seed 99 --out " + (dir / "a").string() +
                    " > /dev/null") == 0);
    CHECK(slurp(dir / "a" / "manifest.cfg").find("seed = 99\n") != std::string::npos);
}

TEST_CASE("config errors exit 2 with a file and line diagnostic", "[cli]") {
    const fs::path dir = fresh_dir("errors");
    spit(dir / "bad.cfg", "[scenario]\nthis is not a key value pair\n");
    const fs::path log = dir / "err.txt";
    CHECK(run_cli("run --config " + (dir / "bad.cfg").string() + " --out " +
                  (dir / "out").string() + " 2> " + log.string()) == 2);
    const std::string err = slurp(log);
    CHECK(err.find("config-parse") != std::string::npos);
    CHECK(err.find("bad.cfg:2") != std::string::npos);

    CHECK(run_cli("run --config " + (dir / "missing.cfg").string() + " --out " +
                  (dir / "out2").string() + " 2> /dev/null") == 2);
    CHECK(run_cli("frobnicate 2> /dev/null") == 2);
    CHECK(run_cli("run 2> /dev/null") == 2); // --out is required
}

TEST_CASE("fd verb windows its campaign per the config", "[cli]") {
    const fs::path dir = fresh_dir("fd");
    spit(dir / "fd.cfg",
         "[scenario]\nkind = periodic-corridor\nsteps = 300\nwarmup_steps = 100\nseed = 7\n");
    REQUIRE(run_cli("fd --config " + (dir / "fd.cfg").string() +
                    " --density 0.5 --dyads 0.5 --replicas 1 --out " + (dir / "out").string() +
                    " > /dev/null") == 0);
    // (300 - 100) / 40 = 5 windows, one row each, plus the header.
    CHECK(line_count(slurp(dir / "out" / "fd_windows.csv")) == 6);
    CHECK(line_count(slurp(dir / "out" / "fd_cells.csv")) == 2);
    CHECK(fs::exists(dir / "out" / "manifest.cfg"));
}

TEST_CASE("bottleneck verb renders both population panels", "[cli]") {
    const fs::path dir = fresh_dir("bottleneck");
    spit(dir / "bn.cfg",
         "[scenario]\nkind = bottleneck-room\npopulation = 150\nsteps = 120\n"
         "warmup_steps = 40\nseed = 7\n");
    REQUIRE(run_cli("bottleneck --config " + (dir / "bn.cfg").string() +
                    " --width 2 --dyads 0.5 --replicas 1 --out " + (dir / "out").string() +
                    " > /dev/null") == 0);
    // One width, fractions {0, 0.5}: per-replica row + mean row each.
    CHECK(line_count(slurp(dir / "out" / "flow.csv")) == 5);
    CHECK(fs::exists(dir / "out" / "density_w2_singles.pgm"));
    CHECK(fs::exists(dir / "out" / "density_w2_dyads.pgm"));
}

TEST_CASE("sweep verb is deterministic at the file level", "[cli]") {
    const fs::path dir = fresh_dir("sweep");
    spit(dir / "sw.cfg",
         "[scenario]\nkind = calibration-corridor\ndyad_fraction = 0.4444444444444444\n"
         "steps = 300\nseed = 7\n\n[sweep]\ndelta_lo = 6\ndelta_hi = 7\ndelta_step = 1\n"
         "kappa_c_lo = 12\nkappa_c_hi = 12\nkappa_c_step = 1\nreplicas = 2\nseed_base = 7\n");
    REQUIRE(run_cli("sweep --config " + (dir / "sw.cfg").string() + " --out " +
                    (dir / "a").string() + " > /dev/null") == 0);
    REQUIRE(run_cli("sweep --config " + (dir / "sw.cfg").string() + " --out " +
                    (dir / "b").string() + " > /dev/null") == 0);
    REQUIRE(slurp(dir / "a" / "sweep.csv") == slurp(dir / "b" / "sweep.csv"));
    REQUIRE(slurp(dir / "a" / "ranking.csv") == slurp(dir / "b" / "ranking.csv"));
    CHECK(line_count(slurp(dir / "a" / "sweep.csv")) == 3); // 2 points + header

    // Replaying the sweep manifest reproduces the result files too.
    REQUIRE(run_cli("analyze --config " + (dir / "a" / "manifest.cfg").string() + " --out " +
                    (dir / "c").string() + " > /dev/null") == 0);
    REQUIRE(slurp(dir / "a" / "sweep.csv") == slurp(dir / "c" / "sweep.csv"));
    REQUIRE(slurp(dir / "a" / "manifest.cfg") == slurp(dir / "c" / "manifest.cfg"));
}
