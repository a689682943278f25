#include <catch_amalgamated.hpp>

#include <cstdlib>

#include "groupflow/campaign.hpp"
#include "test_support.hpp"

using namespace groupflow;

namespace {

/// Short calibration base shared by the mini-sweep tests.
ScenarioConfig short_calibration(std::uint64_t seed) {
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::CalibrationCorridor;
    cfg.dyad_fraction = 24.0 / 54.0;
    cfg.steps = 300;
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("objective: worked example, exact zero, and error ids", "[calibration]") {
    const Reference ref = Reference::standard();

    SimStats match;
    match.speeds.singles = ref.speed_singles;
    match.speeds.dyads = ref.speed_dyads;
    match.speeds.population = ref.speed_population;
    match.rel_positions = ref.rel_positions;
    CHECK(objective(match, ref) == 0.0);

    SimStats offset = match;
    offset.speeds.singles = ref.speed_singles + 0.1;
    offset.speeds.dyads = ref.speed_dyads + 0.1;
    offset.speeds.population = ref.speed_population + 0.1;
    CHECK(std::abs(objective(offset, ref) - 0.03) < 1e-12); // 3 x 0.1^2, no L1 term

    // Weight knobs scale their terms.
    CHECK(std::abs(objective(offset, ref, 2.0, 0.5) - 0.06) < 1e-12);

    SimStats incomplete = match;
    incomplete.speeds.dyads.reset();
    try {
        objective(incomplete, ref);
        FAIL("expected incomplete-stats");
    } catch (const Error& e) {
        CHECK(e.id() == "incomplete-stats");
    }

    SimStats wrong_bins = match;
    wrong_bins.rel_positions = Histogram2D::make(0.2, 11);
    try {
        objective(wrong_bins, ref);
        FAIL("expected histogram-mismatch");
    } catch (const Error& e) {
        CHECK(e.id() == "histogram-mismatch");
    }
}

TEST_CASE("standard reference is a normalized symmetric line-abreast bump", "[calibration]") {
    const Reference ref = Reference::standard();
    const Histogram2D& h = ref.rel_positions;
    CHECK(std::abs(h.total() - 1.0) <= 1e-12);
    // Bin centers mirror only to rounding (min_m is inexact), so the far
    // Gaussian tails differ in their last ulps; compare with a tolerance.
    for (int iy = 0; iy < h.bins; ++iy)
        for (int ix = 0; ix < h.bins; ++ix) {
            REQUIRE(std::abs(h.at(ix, iy) - h.at(h.bins - 1 - ix, iy)) <= 1e-12);
            REQUIRE(std::abs(h.at(ix, iy) - h.at(ix, h.bins - 1 - iy)) <= 1e-12);
        }
    // Peak on the lateral axis at |dy| near 0.5 m, zero longitudinal offset.
    // 0.5 m falls on a bin edge, so the mode center is half a bin away.
    const auto [mx, my] = h.mode();
    CHECK(h.center(mx, my).x == 0.0);
    CHECK(std::abs(std::abs(h.center(mx, my).y) - 0.5) <= 0.1 + 1e-12);
}

TEST_CASE("sweep spec: lattice arithmetic, validation, config round-trip", "[calibration]") {
    SweepSpec spec;
    spec.delta_lo = 3;
    spec.delta_hi = 7;
    spec.kappa_lo = 8;
    spec.kappa_hi = 16;
    spec.kappa_step = 2;
    spec.replicas = 10;
    spec.seed_base = 20260823;
    spec.validate();
    CHECK(spec.delta_count() == 5);
    CHECK(spec.kappa_count() == 5);
    CHECK(spec.point_count() == 25);
    CHECK(spec.delta_at(0) == 3);
    CHECK(spec.delta_at(4) == 7);
    CHECK(spec.kappa_at(2) == 12);

    ConfigWriter w;
    spec.write_to(w);
    const SweepSpec back = SweepSpec::from_config(Config::parse(w.text(), "sweep-rt"));
    CHECK(back.delta_lo == spec.delta_lo);
    CHECK(back.delta_hi == spec.delta_hi);
    CHECK(back.kappa_lo == spec.kappa_lo);
    CHECK(back.kappa_hi == spec.kappa_hi);
    CHECK(back.kappa_step == spec.kappa_step);
    CHECK(back.replicas == spec.replicas);
    CHECK(back.seed_base == spec.seed_base);
    CHECK(back.w_hist == spec.w_hist);

    auto expect_invalid = [](SweepSpec s) {
        try {
            s.validate();
            FAIL("expected config-value");
        } catch (const Error& e) {
            CHECK(e.id() == "config-value");
        }
    };
    SweepSpec bad = spec;
    bad.delta_step = 0;
    expect_invalid(bad);
    bad = spec;
    bad.delta_hi = 2;
    expect_invalid(bad);
    bad = spec;
    bad.replicas = 0;
    expect_invalid(bad);
}

TEST_CASE("delta lattice units are tenths of a meter", "[calibration]") {
    CHECK(kDeltaUnitM == 0.1);
    CHECK(7 * kDeltaUnitM == 0.7000000000000001); // the value runs actually use
}

TEST_CASE("sweep reproduces a hand-rolled evaluation of one point", "[calibration]") {
    const ScenarioConfig base = short_calibration(7);
    SweepSpec spec;
    spec.delta_lo = spec.delta_hi = 7;
    spec.kappa_lo = spec.kappa_hi = 12;
    spec.replicas = 2;
    spec.seed_base = 7;
    const SweepResult result = sweep(spec, base);
    REQUIRE(result.points.size() == 1);
    REQUIRE(!result.points[0].failed);

    // Same recipe, written out longhand against the public pieces.
    const Reference ref = Reference::standard();
    const Rect area = measurement_rect_m(base);
    ScenarioConfig cfg = base;
    cfg.weights.delta = 7 * kDeltaUnitM;
    cfg.weights.kappa_c = 12.0;
    SpeedSums sums;
    Histogram2D counts = Histogram2D::make(0.2, 21);
    for (int r = 0; r < spec.replicas; ++r) {
        cfg.seed = spec.seed_base ^ 0ull ^ std::uint64_t(r);
        const RunRecord rec = simulate(cfg);
        sums.add(class_speed_sums(rec, area));
        relative_position_counts(rec, area, counts);
    }
    counts.normalize();
    SimStats stats;
    stats.speeds = to_class_speeds(sums);
    stats.rel_positions = counts;

    CHECK(result.points[0].speeds.singles == stats.speeds.singles);
    CHECK(result.points[0].speeds.dyads == stats.speeds.dyads);
    CHECK(result.points[0].objective == objective(stats, ref, spec.w_speed, spec.w_hist));
}

TEST_CASE("sweep is deterministic and ranks by objective", "[calibration]") {
    const ScenarioConfig base = short_calibration(7);
    SweepSpec spec;
    spec.delta_lo = 6;
    spec.delta_hi = 7;
    spec.kappa_lo = 11;
    spec.kappa_hi = 12;
    spec.replicas = 2;
    spec.seed_base = 7;

    const SweepResult a = sweep(spec, base);
    const SweepResult b = sweep(spec, base);
    REQUIRE(a.points.size() == 4);
    REQUIRE(a.ranking.size() == 4);
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        REQUIRE(!a.points[i].failed);
        REQUIRE(a.points[i].objective == b.points[i].objective);
        REQUIRE(a.points[i].speeds.population == b.points[i].speeds.population);
        REQUIRE(a.ranking[i] == b.ranking[i]);
    }
    for (std::size_t i = 1; i < a.ranking.size(); ++i) {
        const double prev = a.points[std::size_t(a.ranking[i - 1])].objective;
        const double cur = a.points[std::size_t(a.ranking[i])].objective;
        REQUIRE(prev <= cur);
    }
    // Points enumerate the lattice row-major: delta outer, kappa inner.
    CHECK(a.points[0].delta_lattice == 6);
    CHECK(a.points[0].kappa_c == 11);
    CHECK(a.points[1].kappa_c == 12);
    CHECK(a.points[2].delta_lattice == 7);
}

TEST_CASE("a failing sweep point is flagged, not fatal", "[calibration]") {
    ScenarioConfig base = short_calibration(7);
    base.dyad_fraction = 0.0; // no dyads: every point throws no-dyads inside
    SweepSpec spec;
    spec.delta_lo = 6;
    spec.delta_hi = 7;
    spec.kappa_lo = spec.kappa_hi = 12;
    spec.replicas = 1;
    spec.seed_base = 7;
    const SweepResult result = sweep(spec, base);
    REQUIRE(result.points.size() == 2);
    for (const SweepPoint& p : result.points) {
        CHECK(p.failed);
        CHECK(std::isinf(p.objective));
    }
    CHECK(result.ranking == std::vector<int>{0, 1}); // stable under equal objectives
}

TEST_CASE("sweep rejects non-calibration scenarios", "[calibration]") {
    ScenarioConfig base = short_calibration(7);
    base.kind = ScenarioKind::PeriodicCorridor;
    try {
        sweep(SweepSpec{}, base);
        FAIL("expected config-value");
    } catch (const Error& e) {
        CHECK(e.id() == "config-value");
    }
}

TEST_CASE("replica seeds are derived and collision-free in practice", "[calibration]") {
    CHECK(replica_seed(20260823, 3, 5) ==
          derive_seed(derive_seed(20260823, 3), 5));
    std::vector<std::uint64_t> seen;
    for (std::uint64_t salt = 0; salt < 16; ++salt)
        for (int r = 0; r < 16; ++r) seen.push_back(replica_seed(20260823, salt, r));
    std::sort(seen.begin(), seen.end());
    CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}

TEST_CASE("calibration batch pools replicas exactly", "[calibration]") {
    const ScenarioConfig base = short_calibration(20260823);
    const CalibrationBatch batch = run_calibration_batch(base, 2);
    REQUIRE(batch.per_replica.size() == 2);
    REQUIRE(batch.hist_samples > 0);
    CHECK(std::abs(batch.stats.rel_positions.total() - 1.0) <= 1e-12);

    // Longhand pooling over the same derived seeds.
    const Rect area = measurement_rect_m(base);
    SpeedSums pooled;
    Histogram2D counts = Histogram2D::make(0.2, 21);
    long samples = 0;
    for (int r = 0; r < 2; ++r) {
        ScenarioConfig cfg = base;
        cfg.seed = replica_seed(base.seed, 0, r);
        const RunRecord rec = simulate(cfg);
        const SpeedSums sums = class_speed_sums(rec, area);
        pooled.add(sums);
        samples += relative_position_counts(rec, area, counts);
        const ClassSpeeds replica = to_class_speeds(sums);
        CHECK(batch.per_replica[std::size_t(r)].population == replica.population);
    }
    CHECK(batch.hist_samples == samples);
    const ClassSpeeds want = to_class_speeds(pooled);
    CHECK(batch.stats.speeds.singles == want.singles);
    CHECK(batch.stats.speeds.dyads == want.dyads);
    counts.normalize();
    for (std::size_t i = 0; i < counts.mass.size(); ++i)
        REQUIRE(batch.stats.rel_positions.mass[i] == counts.mass[i]);
}

TEST_CASE("thread budget honors the environment override", "[calibration]") {
    const char* saved = std::getenv("GROUPFLOW_THREADS");
    const std::string restore = saved ? saved : "";
    setenv("GROUPFLOW_THREADS", "3", 1);
    CHECK(thread_budget() == 3);
    setenv("GROUPFLOW_THREADS", "junk", 1);
    CHECK(thread_budget() >= 1); // malformed values fall back to hardware
    if (saved) setenv("GROUPFLOW_THREADS", restore.c_str(), 1);
    else unsetenv("GROUPFLOW_THREADS");

    // parallel_for covers every job exactly once and rethrows failures.
    std::vector<int> hits(64, 0);
    parallel_for(64, [&](int j) { hits[std::size_t(j)] += 1; });
    for (int h : hits) REQUIRE(h == 1);
    try {
        parallel_for(8, [](int j) {
            if (j == 5) throw Error("config-value", "boom");
        });
        FAIL("expected rethrow");
    } catch (const Error& e) {
        CHECK(e.id() == "config-value");
    }
}

TEST_CASE("fd cells aggregate replica windows", "[calibration]") {
    ScenarioConfig base;
    base.kind = ScenarioKind::PeriodicCorridor;
    base.steps = 200;
    base.warmup_steps = 40;
    base.seed = 20260823;
    const FdCell cell = run_fd_cell(base, 1.0, 0.5, 2, 0);
    CHECK(cell.target_density == 1.0);
    CHECK(cell.dyad_fraction == 0.5);
    CHECK(cell.replicas == 2);
    REQUIRE(cell.windows.size() == 8); // (200-40)/40 = 4 windows per replica
    double mean_flow = 0;
    for (const FdPoint& p : cell.windows) mean_flow += p.flow;
    mean_flow /= double(cell.windows.size());
    CHECK(cell.mean_flow == mean_flow);
    CHECK(cell.mean_density > 0.5);
    CHECK(cell.mean_speed > 1.0);
}

TEST_CASE("bottleneck cells report discrete widths and averaged flows", "[calibration]") {
    ScenarioConfig base;
    base.kind = ScenarioKind::BottleneckRoom;
    base.steps = 150;
    base.warmup_steps = 50;
    base.seed = 20260823;
    const BottleneckCell cell = run_bottleneck_cell(base, 2.5, 0.0, 2, 0);
    CHECK(cell.width_m == 2.5);
    CHECK(cell.width_discrete_m == 6 * 0.4); // 2.5 m rounds to 6 cells
    REQUIRE(cell.per_replica.size() == 2);
    CHECK(cell.mean.specific ==
          (cell.per_replica[0].specific + cell.per_replica[1].specific) / 2);
    CHECK(cell.mean.J > 0.0);
    CHECK(cell.map_width == 29);
    CHECK(cell.map_height == 27);
    REQUIRE(cell.density_map.size() == std::size_t(29 * 27));
    double peak = 0;
    for (double v : cell.density_map) peak = std::max(peak, v);
    CHECK(peak > 0.0);
    CHECK(peak <= 1.0 / (0.4 * 0.4) + 1e-9);
}
