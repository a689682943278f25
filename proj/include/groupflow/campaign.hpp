#pragma once

#include <cmath>
#include <vector>

#include "groupflow/calibration.hpp"
#include "groupflow/metrics.hpp"
#include "groupflow/parallel.hpp"
#include "groupflow/record.hpp"

namespace groupflow {

/// Replica seeds are derived, not sequential, so adjacent replicas share no
/// stream structure: seed_r = splitmix(base_seed ^ golden(salt||r)).
inline std::uint64_t replica_seed(std::uint64_t base_seed, std::uint64_t salt, int replica) {
    return derive_seed(derive_seed(base_seed, salt), std::uint64_t(replica));
}

// ---------------------------------------------------------------------------
// Calibration corridor batches

struct CalibrationBatch {
    SimStats stats; // pooled over replicas
    std::vector<ClassSpeeds> per_replica;
    long hist_samples = 0;
};

/// Runs `replicas` seeded calibration-corridor replicas and pools per-agent
/// speed sums and histogram counts. Replicas run in parallel into fixed
/// slots; pooling is an order-independent sum over slots.
inline CalibrationBatch run_calibration_batch(const ScenarioConfig& base, int replicas,
                                              std::uint64_t salt = 0) {
    const Rect area = measurement_rect_m(base);
    const std::size_t n_slots = std::size_t(replicas);
    std::vector<SpeedSums> sums(n_slots);
    std::vector<Histogram2D> hists(n_slots);
    std::vector<long> samples(n_slots, 0);
    std::vector<ClassSpeeds> per_replica(n_slots);

    parallel_for(replicas, [&](int r) {
        ScenarioConfig cfg = base;
        cfg.seed = replica_seed(base.seed, salt, r);
        const RunRecord rec = simulate(cfg);
        sums[std::size_t(r)] = class_speed_sums(rec, area);
        Histogram2D h = Histogram2D::make(0.2, 21);
        samples[std::size_t(r)] = relative_position_counts(rec, area, h);
        hists[std::size_t(r)] = std::move(h);
        per_replica[std::size_t(r)] = to_class_speeds(sums[std::size_t(r)]);
    });

    CalibrationBatch batch;
    SpeedSums pooled;
    Histogram2D pooled_hist = Histogram2D::make(0.2, 21);
    for (int r = 0; r < replicas; ++r) {
        pooled.add(sums[std::size_t(r)]);
        pooled_hist.add(hists[std::size_t(r)]);
        batch.hist_samples += samples[std::size_t(r)];
    }
    pooled_hist.normalize();
    batch.stats.speeds = to_class_speeds(pooled);
    batch.stats.rel_positions = pooled_hist;
    batch.per_replica = std::move(per_replica);
    return batch;
}

// ---------------------------------------------------------------------------
// Fundamental-diagram campaign

struct FdCell {
    double target_density = 0;
    double dyad_fraction = 0;
    int replicas = 0;
    std::vector<FdPoint> windows; // replica-major, window order within
    double mean_density = 0;      // unweighted means over all windows
    double mean_speed = 0;
    double mean_flow = 0;
};

/// All replicas of one (density, dyad-fraction) cell of the FD campaign.
inline FdCell run_fd_cell(const ScenarioConfig& base, double density, double dyad_fraction,
                          int replicas, std::uint64_t salt, long window_steps = 40) {
    ScenarioConfig proto = base;
    proto.kind = ScenarioKind::PeriodicCorridor;
    proto.target_density = density;
    proto.dyad_fraction = dyad_fraction;
    const Rect area = measurement_rect_m(proto);

    const std::size_t n_slots = std::size_t(replicas);
    std::vector<std::vector<FdPoint>> slots(n_slots);
    parallel_for(replicas, [&](int r) {
        ScenarioConfig cfg = proto;
        cfg.seed = replica_seed(base.seed, salt, r);
        const RunRecord rec = simulate(cfg);
        slots[std::size_t(r)] = fundamental_diagram(rec, area, window_steps);
    });

    FdCell cell;
    cell.target_density = density;
    cell.dyad_fraction = dyad_fraction;
    cell.replicas = replicas;
    for (auto& windows : slots)
        cell.windows.insert(cell.windows.end(), windows.begin(), windows.end());
    if (!cell.windows.empty()) {
        for (const FdPoint& p : cell.windows) {
            cell.mean_density += p.density;
            cell.mean_speed += p.speed;
            cell.mean_flow += p.flow;
        }
        cell.mean_density /= double(cell.windows.size());
        cell.mean_speed /= double(cell.windows.size());
        cell.mean_flow /= double(cell.windows.size());
    }
    return cell;
}

/// Densities x dyad-fractions grid; the per-cell seed salt is the cell's
/// position in the grid, so adding a density re-seeds only the new cell.
inline std::vector<FdCell> run_fd_campaign(const ScenarioConfig& base,
                                           const std::vector<double>& densities,
                                           const std::vector<double>& dyad_fractions, int replicas,
                                           long window_steps = 40) {
    std::vector<FdCell> cells;
    std::uint64_t salt = 0;
    for (double f : dyad_fractions)
        for (double d : densities) {
            cells.push_back(run_fd_cell(base, d, f, replicas, salt, window_steps));
            ++salt;
        }
    return cells;
}

// ---------------------------------------------------------------------------
// Bottleneck campaign

struct BottleneckCell {
    double width_m = 0;          // requested opening width
    double width_discrete_m = 0; // realized opening width after cell rounding
    double dyad_fraction = 0;
    int replicas = 0;
    std::vector<FlowStats> per_replica;
    FlowStats mean;                  // J and specific averaged over replicas
    std::vector<double> density_map; // mean cumulative density, per cell
    int map_width = 0;
    int map_height = 0;
};

/// All replicas of one (width, dyad-fraction) cell of the bottleneck
/// campaign. Flow is measured over the post-warmup window; the specific flow
/// divides by the realized (cell-rounded) opening width.
inline BottleneckCell run_bottleneck_cell(const ScenarioConfig& base, double width_m,
                                          double dyad_fraction, int replicas, std::uint64_t salt) {
    ScenarioConfig proto = base;
    proto.kind = ScenarioKind::BottleneckRoom;
    proto.bottleneck_width_m = width_m;
    proto.dyad_fraction = dyad_fraction;
    const double width_discrete =
        std::lround(width_m / proto.cell_size_m) * proto.cell_size_m;

    const std::size_t n_slots = std::size_t(replicas);
    std::vector<FlowStats> flows(n_slots);
    std::vector<std::vector<double>> maps(n_slots);
    std::vector<std::pair<int, int>> dims(n_slots);
    parallel_for(replicas, [&](int r) {
        ScenarioConfig cfg = proto;
        cfg.seed = replica_seed(base.seed, salt, r);
        const RunRecord rec = simulate(cfg);
        ExitLine line;
        line.width_m = width_discrete;
        line.start_step = cfg.warmup_steps;
        line.end_step = rec.steps_run;
        flows[std::size_t(r)] = bottleneck_flow(rec, line);
        maps[std::size_t(r)] = cumulative_mean_density(rec);
        dims[std::size_t(r)] = {rec.env.width, rec.env.height};
    });

    BottleneckCell cell;
    cell.width_m = width_m;
    cell.width_discrete_m = width_discrete;
    cell.dyad_fraction = dyad_fraction;
    cell.replicas = replicas;
    cell.per_replica = flows;
    for (const FlowStats& f : flows) {
        cell.mean.crossings += f.crossings;
        cell.mean.J += f.J;
        cell.mean.specific += f.specific;
    }
    if (replicas > 0) {
        cell.mean.crossings /= replicas;
        cell.mean.J /= replicas;
        cell.mean.specific /= replicas;
        cell.map_width = dims[0].first;
        cell.map_height = dims[0].second;
        cell.density_map.assign(maps[0].size(), 0.0);
        for (const auto& m : maps)
            for (std::size_t i = 0; i < m.size(); ++i) cell.density_map[i] += m[i];
        for (double& v : cell.density_map) v /= double(replicas);
    }
    return cell;
}

inline std::vector<BottleneckCell> run_bottleneck_campaign(const ScenarioConfig& base,
                                                           const std::vector<double>& widths,
                                                           const std::vector<double>& dyad_fractions,
                                                           int replicas) {
    std::vector<BottleneckCell> cells;
    std::uint64_t salt = 0;
    for (double f : dyad_fractions)
        for (double w : widths) {
            cells.push_back(run_bottleneck_cell(base, w, f, replicas, salt));
            ++salt;
        }
    return cells;
}

} // namespace groupflow
