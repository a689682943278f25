#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "groupflow/config.hpp"
#include "groupflow/metrics.hpp"
#include "groupflow/parallel.hpp"
#include "groupflow/record.hpp"

namespace groupflow {

/// Aggregated statistics of one or more calibration-corridor replicas.
struct SimStats {
    ClassSpeeds speeds;
    Histogram2D rel_positions; // normalized PMF
};

/// Calibration targets: the experiment row of the paper's speed table plus a
/// reference relative-position distribution. The published distribution
/// exists only as a figure, so the shipped reference is a synthetic
/// line-abreast bump (lateral peaks at +-0.5 m); see README.
struct Reference {
    double speed_singles = 1.32;
    double speed_dyads = 1.30;
    double speed_population = 1.31;
    Histogram2D rel_positions;

    static Reference standard(double bin_m = 0.2, int bins = 21) {
        Reference ref;
        ref.rel_positions = Histogram2D::make(bin_m, bins);
        const double sigma = 0.15;
        for (int iy = 0; iy < bins; ++iy)
            for (int ix = 0; ix < bins; ++ix) {
                const Vec2d c = ref.rel_positions.center(ix, iy);
                const double lateral = std::abs(c.y) - 0.5;
                ref.rel_positions.at(ix, iy) =
                    std::exp(-(c.x * c.x + lateral * lateral) / (2.0 * sigma * sigma));
            }
        ref.rel_positions.normalize();
        return ref;
    }

    static Reference from_stats(const SimStats& stats) {
        Reference ref;
        ref.speed_singles = stats.speeds.singles.value_or(0.0);
        ref.speed_dyads = stats.speeds.dyads.value_or(0.0);
        ref.speed_population = stats.speeds.population.value_or(0.0);
        ref.rel_positions = stats.rel_positions;
        return ref;
    }
};

/// w_speed * SSE(class speeds) + w_hist * L1(relative-position PMFs).
/// Zero iff the statistics match the reference exactly.
inline double objective(const SimStats& stats, const Reference& ref, double w_speed = 1.0,
                        double w_hist = 0.5) {
    if (!stats.speeds.singles || !stats.speeds.dyads || !stats.speeds.population)
        throw Error("incomplete-stats", "objective needs speeds for singles, dyads and population");
    if (stats.rel_positions.bins != ref.rel_positions.bins ||
        stats.rel_positions.bin_m != ref.rel_positions.bin_m)
        throw Error("histogram-mismatch", "stats and reference use different binning");
    const double ds = *stats.speeds.singles - ref.speed_singles;
    const double dd = *stats.speeds.dyads - ref.speed_dyads;
    const double dp = *stats.speeds.population - ref.speed_population;
    double sse = ds * ds + dd * dd + dp * dp;
    double l1 = 0;
    for (std::size_t i = 0; i < stats.rel_positions.mass.size(); ++i)
        l1 += std::abs(stats.rel_positions.mass[i] - ref.rel_positions.mass[i]);
    return w_speed * sse + w_hist * l1;
}

/// Meters per lattice unit of delta in the sweep grid. Calibrating in tenths
/// of a meter keeps the sigmoid's active region at real dyad separations
/// (0.2..1.5 m); a full-cell unit would leave cohesion saturated off across
/// the whole swept range.
inline constexpr double kDeltaUnitM = 0.1;

/// Inclusive integer lattice over (delta, kappa_c). Delta values are lattice
/// units of kDeltaUnitM (the calibration sweeps integers); they convert to
/// meters when applied.
struct SweepSpec {
    int delta_lo = 0, delta_hi = 30, delta_step = 1;
    int kappa_lo = 0, kappa_hi = 30, kappa_step = 1;
    int replicas = 10;
    std::uint64_t seed_base = 1;
    double w_speed = 1.0;
    double w_hist = 0.5;

    void validate() const {
        if (delta_step < 1 || kappa_step < 1)
            throw Error("config-value", "sweep steps must be >= 1");
        if (delta_hi < delta_lo || kappa_hi < kappa_lo)
            throw Error("config-value", "sweep ranges must be non-empty");
        if (replicas < 1) throw Error("config-value", "sweep replicas must be >= 1");
    }

    int delta_count() const { return (delta_hi - delta_lo) / delta_step + 1; }
    int kappa_count() const { return (kappa_hi - kappa_lo) / kappa_step + 1; }
    int point_count() const { return delta_count() * kappa_count(); }

    int delta_at(int i) const { return delta_lo + i * delta_step; }
    int kappa_at(int j) const { return kappa_lo + j * kappa_step; }

    static SweepSpec from_config(const Config& cfg) {
        SweepSpec s;
        s.delta_lo = int(cfg.get_int("sweep.delta_lo", s.delta_lo));
        s.delta_hi = int(cfg.get_int("sweep.delta_hi", s.delta_hi));
        s.delta_step = int(cfg.get_int("sweep.delta_step", s.delta_step));
        s.kappa_lo = int(cfg.get_int("sweep.kappa_c_lo", s.kappa_lo));
        s.kappa_hi = int(cfg.get_int("sweep.kappa_c_hi", s.kappa_hi));
        s.kappa_step = int(cfg.get_int("sweep.kappa_c_step", s.kappa_step));
        s.replicas = int(cfg.get_int("sweep.replicas", s.replicas));
        s.seed_base = cfg.get_uint64("sweep.seed_base", s.seed_base);
        s.w_speed = cfg.get_double("sweep.w_speed", s.w_speed);
        s.w_hist = cfg.get_double("sweep.w_hist", s.w_hist);
        s.validate();
        return s;
    }

    void write_to(ConfigWriter& w) const {
        w.section("sweep");
        w.set("delta_lo", long(delta_lo));
        w.set("delta_hi", long(delta_hi));
        w.set("delta_step", long(delta_step));
        w.set("kappa_c_lo", long(kappa_lo));
        w.set("kappa_c_hi", long(kappa_hi));
        w.set("kappa_c_step", long(kappa_step));
        w.set("replicas", long(replicas));
        w.set("seed_base", seed_base);
        w.set("w_speed", w_speed);
        w.set("w_hist", w_hist);
    }
};

struct SweepPoint {
    int delta_lattice = 0;
    int kappa_c = 0;
    ClassSpeeds speeds;
    double hist_distance = 0; // L1 against the reference
    double objective = std::numeric_limits<double>::infinity();
    bool failed = false;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepPoint> points;
    std::vector<int> ranking; // point indices, best objective first
};

/// Evaluates every lattice point with `replicas` seeded runs each
/// (seed = base XOR point-index XOR replica-index), pools speed sums and
/// histogram counts across replicas, and ranks by objective (ties by lattice
/// index). A replica failure flags its point instead of aborting the sweep.
/// Points run in parallel; results land in per-point slots, so the outcome
/// is independent of scheduling.
inline SweepResult sweep(const SweepSpec& spec, const ScenarioConfig& base) {
    spec.validate();
    if (base.kind != ScenarioKind::CalibrationCorridor)
        throw Error("config-value", "sweep requires a calibration-corridor scenario");
    const Reference ref = Reference::standard();
    const Rect area = measurement_rect_m(base);

    SweepResult result;
    result.spec = spec;
    result.points.resize(std::size_t(spec.point_count()));

    parallel_for(spec.point_count(), [&](int p) {
        const int di = p / spec.kappa_count();
        const int kj = p % spec.kappa_count();
        SweepPoint point;
        point.delta_lattice = spec.delta_at(di);
        point.kappa_c = spec.kappa_at(kj);
        try {
            ScenarioConfig cfg = base;
            cfg.weights.delta = point.delta_lattice * kDeltaUnitM;
            cfg.weights.kappa_c = double(point.kappa_c);
            SpeedSums sums;
            Histogram2D counts = Histogram2D::make(ref.rel_positions.bin_m, ref.rel_positions.bins);
            long hist_samples = 0;
            for (int r = 0; r < spec.replicas; ++r) {
                cfg.seed = spec.seed_base ^ std::uint64_t(p) ^ std::uint64_t(r);
                const RunRecord rec = simulate(cfg);
                sums.add(class_speed_sums(rec, area));
                hist_samples += relative_position_counts(rec, area, counts);
            }
            SimStats stats;
            stats.speeds = to_class_speeds(sums);
            if (hist_samples == 0)
                throw Error("no-dyads", "sweep point collected no dyad offsets");
            counts.normalize();
            stats.rel_positions = counts;
            point.speeds = stats.speeds;
            double l1 = 0;
            for (std::size_t i = 0; i < counts.mass.size(); ++i)
                l1 += std::abs(counts.mass[i] - ref.rel_positions.mass[i]);
            point.hist_distance = l1;
            point.objective = objective(stats, ref, spec.w_speed, spec.w_hist);
        } catch (const std::exception&) {
            point.failed = true;
            point.objective = std::numeric_limits<double>::infinity();
        }
        result.points[std::size_t(p)] = point;
    });

    result.ranking.resize(result.points.size());
    for (std::size_t i = 0; i < result.ranking.size(); ++i) result.ranking[i] = int(i);
    std::stable_sort(result.ranking.begin(), result.ranking.end(), [&](int a, int b) {
        const double oa = result.points[std::size_t(a)].objective;
        const double ob = result.points[std::size_t(b)].objective;
        if (oa != ob) return oa < ob;
        return a < b;
    });
    return result;
}

} // namespace groupflow
