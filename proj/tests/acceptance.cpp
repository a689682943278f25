// Release acceptance gate: runs the six gate criteria end to end against the
// shipped defaults and prints one verdict line each, with the measured values
// inline. Exit status is the number of failed criteria, so the gate can never
// look green while a criterion is red.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <queue>
#include <string>
#include <vector>

#include "groupflow/campaign.hpp"
#include "groupflow/engine.hpp"
#include "groupflow/io.hpp"

using namespace groupflow;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::uint64_t kGateSeed = 20260823;

struct Criterion {
    bool pass = true;
    std::string detail;

    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
    void require(bool cond, const std::string& what) {
        if (!cond) {
            pass = false;
            note("FAILED " + what);
        }
    }
};

std::string fmt(double v, int prec = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

ScenarioConfig calibration_base() {
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::CalibrationCorridor;
    cfg.dyad_fraction = 24.0 / 54.0; // 12 dyads + 30 singles of 54
    cfg.steps = 2000;
    cfg.seed = kGateSeed;
    return cfg;
}

// --------------------------------------------------------------------------
// 1. Calibrated speeds at the frozen parameter point (delta = 0.7 m lattice 7,
//    kappa_c = 12), pooled over 10 replicas: each class speed within 0.08 m/s
//    of its target.

Criterion calibration_speeds() {
    Criterion c;
    const CalibrationBatch batch = run_calibration_batch(calibration_base(), 10);
    const double s = batch.stats.speeds.singles.value_or(0.0);
    const double d = batch.stats.speeds.dyads.value_or(0.0);
    const double p = batch.stats.speeds.population.value_or(0.0);
    c.note("singles=" + fmt(s) + " dyads=" + fmt(d) + " population=" + fmt(p) + " m/s");
    c.require(std::abs(s - 1.308) <= 0.08, "singles within 1.308+-0.08");
    c.require(std::abs(d - 1.305) <= 0.08, "dyads within 1.305+-0.08");
    c.require(std::abs(p - 1.3067) <= 0.08, "population within 1.3067+-0.08");
    return c;
}

// --------------------------------------------------------------------------
// 2. Dyad arrangement: the relative-position histogram mode sits on the
//    lateral axis (0, +-0.4 m) in at least 9 of 10 seeded replicas.

Criterion lateral_arrangement() {
    Criterion c;
    const ScenarioConfig base = calibration_base();
    const Rect area = measurement_rect_m(base);
    int good = 0;
    for (int r = 0; r < 10; ++r) {
        ScenarioConfig cfg = base;
        cfg.seed = replica_seed(base.seed, 0, r);
        const RunRecord rec = simulate(cfg);
        const Histogram2D h = relative_position_histogram(rec, area);
        const auto [ix, iy] = h.mode();
        const Vec2d ctr = h.center(ix, iy);
        if (std::abs(ctr.x) < 1e-9 && std::abs(std::abs(ctr.y) - 0.4) < 1e-9) ++good;
    }
    c.note(std::to_string(good) + "/10 replica modes at (0, +-0.4) m");
    c.require(good >= 9, "mode on the lateral axis in >= 9/10 replicas");
    return c;
}

// --------------------------------------------------------------------------
// 3. Fundamental diagrams over densities {0.5, 1, 1.5, 2, 3} p/m^2 at dyad
//    fractions 0 and 0.5, 3 replicas each: speeds nonincreasing in density
//    (0.01 m/s replica-noise guard), the 50%-dyad flow strictly below the
//    singles flow past 1.5 p/m^2, and free speeds in [1.3, 1.6] m/s.

Criterion fundamental_diagrams() {
    Criterion c;
    ScenarioConfig base;
    base.kind = ScenarioKind::PeriodicCorridor;
    base.steps = 5000;
    base.warmup_steps = 2000;
    base.seed = kGateSeed;
    const std::vector<double> densities = {0.5, 1.0, 1.5, 2.0, 3.0};
    const std::vector<FdCell> cells = run_fd_campaign(base, densities, {0.0, 0.5}, 3);
    auto cell = [&](int fi, int di) -> const FdCell& { return cells[std::size_t(fi * 5 + di)]; };

    for (int fi = 0; fi < 2; ++fi) {
        const std::string who = fi == 0 ? "singles" : "50% dyads";
        for (int di = 0; di + 1 < 5; ++di) {
            c.require(cell(fi, di + 1).mean_speed <= cell(fi, di).mean_speed + 0.01,
                      who + " speed nonincreasing at rho=" + fmt(densities[std::size_t(di + 1)], 1));
        }
    }
    for (int di = 3; di < 5; ++di) {
        c.require(cell(1, di).mean_flow < cell(0, di).mean_flow,
                  "dyad flow below singles at rho=" + fmt(densities[std::size_t(di)], 1));
    }
    const double v0s = cell(0, 0).mean_speed;
    const double v0d = cell(1, 0).mean_speed;
    c.note("free speeds " + fmt(v0s) + "/" + fmt(v0d) + " m/s, flows at rho=3: " +
           fmt(cell(0, 4).mean_flow) + " vs " + fmt(cell(1, 4).mean_flow) + " p/(m s)");
    c.require(v0s >= 1.3 && v0s <= 1.6, "singles free speed in [1.3, 1.6]");
    c.require(v0d >= 1.3 && v0d <= 1.6, "dyad free speed in [1.3, 1.6]");
    return c;
}

// --------------------------------------------------------------------------
// 4. Bottleneck outflow at widths {2, 3, 4} m, 3 replicas, steady window
//    steps 2000..5000: singles specific flow within 2.1+-0.3 p/(m s), 50%-dyad
//    specific flow within 1.8+-0.3, and dyads strictly below singles at every
//    width.

Criterion bottleneck_flows() {
    Criterion c;
    ScenarioConfig base;
    base.kind = ScenarioKind::BottleneckRoom;
    base.population = 400;
    base.steps = 5000;
    base.warmup_steps = 2000;
    base.seed = kGateSeed;
    const std::vector<double> widths = {2.0, 3.0, 4.0};
    const std::vector<BottleneckCell> cells = run_bottleneck_campaign(base, widths, {0.0, 0.5}, 3);

    for (std::size_t i = 0; i < widths.size(); ++i) {
        const double s = cells[i].mean.specific;
        const double d = cells[3 + i].mean.specific;
        const std::string w = fmt(widths[i], 0) + " m";
        c.note("w=" + w + ": singles " + fmt(s) + ", dyads " + fmt(d) + " p/(m s)");
        c.require(std::abs(s - 2.1) <= 0.3, "singles specific flow within 2.1+-0.3 at " + w);
        c.require(std::abs(d - 1.8) <= 0.3, "dyad specific flow within 1.8+-0.3 at " + w);
        c.require(d < s, "dyads strictly below singles at " + w);
    }
    return c;
}

// --------------------------------------------------------------------------
// 5. Property suite: hard invariants of the engine and its fields.

std::vector<double> reference_distance(const Environment& env, const std::vector<Vec2i>& sources) {
    // Independent octile Dijkstra: tracks (orth, diag) pairs; the optimal pair
    // per cell is unique, so values must match the production field bitwise.
    struct Steps {
        long orth = -1;
        long diag = 0;
    };
    auto value = [&](Steps s) { return env.cell_size * (double(s.orth) + kSqrt2 * double(s.diag)); };
    std::vector<Steps> best(std::size_t(env.cell_count()));
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
    for (Vec2i s : sources) {
        best[std::size_t(env.index(s))] = {0, 0};
        queue.push({0.0, env.index(s)});
    }
    while (!queue.empty()) {
        const auto [val, idx] = queue.top();
        queue.pop();
        const Steps cur = best[std::size_t(idx)];
        if (cur.orth < 0 || val > value(cur)) continue;
        const Vec2i cell = env.cell_of(idx);
        for (Vec2i off : kMooreOffsets) {
            if (off.x == 0 && off.y == 0) continue;
            Vec2i nb = cell + off;
            if (!env.wrap(nb)) continue;
            if (env.kind_at(nb) == CellKind::Obstacle) continue;
            Steps cand = cur;
            (off.x != 0 && off.y != 0 ? cand.diag : cand.orth) += 1;
            const std::size_t ni = std::size_t(env.index(nb));
            if (best[ni].orth < 0 || value(cand) < value(best[ni])) {
                best[ni] = cand;
                queue.push({value(cand), env.index(nb)});
            }
        }
    }
    std::vector<double> out(std::size_t(env.cell_count()), ScalarField::kUnreachable);
    for (std::size_t i = 0; i < out.size(); ++i)
        if (best[i].orth >= 0) out[i] = value(best[i]);
    return out;
}

Criterion property_suite() {
    Criterion c;

    { // Exclusion and conservation over 5000 steps of a dense mixed corridor.
        ScenarioConfig cfg;
        cfg.kind = ScenarioKind::PeriodicCorridor;
        cfg.target_density = 1.5;
        cfg.dyad_fraction = 0.5;
        cfg.seed = kGateSeed;
        SimState st = build_scenario(cfg);
        const int population = st.active_count();
        Rng rng(derive_seed(cfg.seed, detail::kRunStream));
        bool exclusive = true, conserved = true, normalized = true;
        std::vector<int> seen;
        for (int t = 1; t <= 5000; ++t) {
            step(st, rng);
            conserved = conserved && st.active_count() == population;
            seen.assign(std::size_t(st.env.cell_count()), 0);
            for (const Agent& a : st.agents) {
                exclusive = exclusive && st.env.walkable(a.pos) &&
                            ++seen[std::size_t(st.env.index(a.pos))] == 1;
            }
            if (t % 500 == 0) { // sampled move distributions stay normalized
                for (const Agent& a : st.agents) {
                    double total = 0.0;
                    for (const MoveOption& m : move_distribution(a, st)) total += m.probability;
                    normalized = normalized && std::abs(total - 1.0) <= 1e-9;
                }
            }
        }
        c.require(exclusive, "one agent per cell across 5000 steps");
        c.require(conserved, "agent count conserved across 5000 steps");
        c.require(normalized, "move distributions normalized to 1e-9");
    }

    { // Cohesion bounded on 10^4 randomized dyad configurations.
        Rng rng(derive_seed(kGateSeed, 0xc07e));
        bool bounded = true;
        for (int trial = 0; trial < 10000 && bounded; ++trial) {
            SimState s;
            s.env = Environment::make(6 + int(rng.below(20)), 6 + int(rng.below(20)), 0.4);
            s.env.periodic_x = trial % 3 == 0;
            s.obstacle_proximity = build_obstacle_proximity(s.env);
            s.goal = GoalField::drift_x();
            auto cell = [&] {
                return Vec2i{int(rng.below(std::uint64_t(s.env.width))),
                             int(rng.below(std::uint64_t(s.env.height)))};
            };
            const Vec2i pa = cell();
            Vec2i pb = pa;
            while (pb == pa) pb = cell();
            Agent a;
            a.id = 0;
            a.pos = pa;
            a.group_id = 0;
            a.cls = AgentClass::DyadMember;
            Agent b = a;
            b.id = 1;
            b.pos = pb;
            b.vel = {int(rng.below(3)) - 1, int(rng.below(3)) - 1};
            s.agents = {a, b};
            s.groups = {Group{0, {0, 1}, false}};
            s.rebuild_occupancy();
            const double v = cohesion_value(cell(), s.agents[0], s);
            bounded = bounded && v >= -1.0 && v <= 1.0;
        }
        c.require(bounded, "cohesion in [-1, 1] over 10^4 random cases");
    }

    { // Goal field vs the independent Dijkstra on 100 random 50x50 grids.
        Rng rng(derive_seed(kGateSeed, 0xd1c));
        bool match = true;
        for (int trial = 0; trial < 100 && match; ++trial) {
            Environment env = Environment::make(50, 50, 0.4);
            env.periodic_x = trial % 2 == 1;
            for (int i = 0; i < env.cell_count(); ++i)
                if (rng.uniform01() < 0.3) env.kinds[std::size_t(i)] = CellKind::Obstacle;
            std::vector<Vec2i> walkable;
            for (int i = 0; i < env.cell_count(); ++i)
                if (env.kinds[std::size_t(i)] == CellKind::Walkable) walkable.push_back(env.cell_of(i));
            if (walkable.empty()) continue;
            std::vector<Vec2i> sources;
            for (std::size_t k = 0, n = 1 + rng.below(3); k < n; ++k)
                sources.push_back(walkable[rng.below(walkable.size())]);
            const ScalarField field = build_distance_field(env, sources);
            const std::vector<double> ref = reference_distance(env, sources);
            for (int i = 0; i < env.cell_count() && match; ++i) {
                const double got = field.values[std::size_t(i)];
                const double want = ref[std::size_t(i)];
                match = ScalarField::unreachable(want) ? ScalarField::unreachable(got) : got == want;
            }
        }
        c.require(match, "distance fields match the reference Dijkstra bitwise (100x50x50)");
    }

    { // Seed determinism of whole trajectories.
        ScenarioConfig cfg = calibration_base();
        cfg.steps = 500;
        const bool same = trajectory_digest(simulate(cfg)) == trajectory_digest(simulate(cfg));
        ScenarioConfig other = cfg;
        other.seed = cfg.seed + 1;
        const bool differs = trajectory_digest(simulate(cfg)) != trajectory_digest(simulate(other));
        c.require(same, "same seed reproduces the trajectory digest");
        c.require(differs, "different seeds diverge");
    }

    { // Softmax shift invariance at 1e-12.
        Rng rng(derive_seed(kGateSeed, 0x50f));
        bool invariant = true;
        std::vector<double> u, p, q;
        for (int trial = 0; trial < 1000 && invariant; ++trial) {
            u.resize(1 + rng.below(9));
            for (double& x : u) x = (rng.uniform01() - 0.5) * 40.0;
            softmax(u, p);
            for (double& x : u) x += 17.25;
            softmax(u, q);
            double total = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i) {
                invariant = invariant && std::abs(p[i] - q[i]) <= 1e-12;
                total += p[i];
            }
            invariant = invariant && std::abs(total - 1.0) <= 1e-12;
        }
        c.require(invariant, "softmax shift-invariant and normalized to 1e-12");
    }

    if (c.pass) c.note("exclusion, conservation, normalization, cohesion bounds, Dijkstra oracle, determinism, softmax");
    return c;
}

// --------------------------------------------------------------------------
// 6. Calibration sweep: the 5x5 (delta, kappa_c) lattice around the frozen
//    point, 10 replicas per point, reproduced bit-identically on a second run.

std::string sweep_fingerprint(const SweepResult& r) {
    std::string out;
    for (const SweepPoint& p : r.points) {
        out += std::to_string(p.delta_lattice) + "," + std::to_string(p.kappa_c) + ",";
        out += format_double(p.objective) + "," + format_double(p.hist_distance) + ",";
        out += format_double(p.speeds.population.value_or(-1.0)) + "," +
               (p.failed ? "x" : "-") + ";";
    }
    for (int i : r.ranking) out += std::to_string(i) + ",";
    return out;
}

Criterion sweep_reproducibility() {
    Criterion c;
    SweepSpec spec;
    spec.delta_lo = 3;
    spec.delta_hi = 7;
    spec.delta_step = 1;
    spec.kappa_lo = 8;
    spec.kappa_hi = 16;
    spec.kappa_step = 2;
    spec.replicas = 10;
    spec.seed_base = kGateSeed;
    const ScenarioConfig base = calibration_base();

    const SweepResult first = sweep(spec, base);
    const SweepResult second = sweep(spec, base);
    c.require(first.points.size() == 25, "25 lattice points evaluated");
    int failed_points = 0;
    for (const SweepPoint& p : first.points) failed_points += p.failed ? 1 : 0;
    c.require(failed_points == 0, "no failed sweep points");
    c.require(sweep_fingerprint(first) == sweep_fingerprint(second),
              "second run reproduces objectives, speeds and ranking bitwise");
    if (!first.ranking.empty()) {
        const SweepPoint& best = first.points[std::size_t(first.ranking[0])];
        c.note("best point delta=" + std::to_string(best.delta_lattice) +
               " kappa_c=" + std::to_string(best.kappa_c) +
               " objective=" + fmt(best.objective, 4));
    }
    return c;
}

} // namespace

int main() {
    struct Gate {
        const char* name;
        Criterion (*fn)();
        double budget_s; // 0 = no pinned runtime
    };
    const Gate gates[] = {
        {"1 calibration speeds", &calibration_speeds, 120.0},
        {"2 lateral dyad arrangement", &lateral_arrangement, 0.0},
        {"3 fundamental diagrams", &fundamental_diagrams, 600.0},
        {"4 bottleneck outflow", &bottleneck_flows, 900.0},
        {"5 property suite", &property_suite, 0.0},
        {"6 sweep reproducibility", &sweep_reproducibility, 600.0},
    };

    std::printf("groupflow acceptance gate\n");
    int failed = 0;
    for (const Gate& g : gates) {
        const auto t0 = Clock::now();
        Criterion c = g.fn();
        const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        if (g.budget_s > 0)
            c.require(secs <= g.budget_s, "runtime within " + fmt(g.budget_s, 0) + " s");
        std::printf("criterion %s: %s  [%s] (%.1f s)\n", g.name, c.pass ? "PASS" : "FAIL",
                    c.detail.c_str(), secs);
        std::fflush(stdout);
        failed += c.pass ? 0 : 1;
    }
    std::printf("%d/6 criteria passed\n", int(sizeof(gates) / sizeof(gates[0])) - failed);
    return failed;
}
