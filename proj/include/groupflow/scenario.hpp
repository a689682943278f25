#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>
#include <vector>

#include "groupflow/config.hpp"
#include "groupflow/engine.hpp"
#include "groupflow/rng.hpp"
#include "groupflow/state.hpp"

namespace groupflow {

enum class ScenarioKind {
    CalibrationCorridor, // open corridor, 9 spawn areas, absorbing target
    PeriodicCorridor,    // toroidal corridor, constant +x drift goal
    BottleneckRoom,      // square room, centered opening, recirculating exit
};

inline const char* to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::CalibrationCorridor: return "calibration-corridor";
        case ScenarioKind::PeriodicCorridor: return "periodic-corridor";
        case ScenarioKind::BottleneckRoom: return "bottleneck-room";
    }
    return "?";
}

inline ScenarioKind scenario_kind_from(const std::string& name) {
    if (name == "calibration-corridor") return ScenarioKind::CalibrationCorridor;
    if (name == "periodic-corridor") return ScenarioKind::PeriodicCorridor;
    if (name == "bottleneck-room") return ScenarioKind::BottleneckRoom;
    throw Error("config-value", "unknown scenario kind '" + name + "'");
}

/// Declarative description of one experiment run. Serializes to the config
/// grammar and back without loss, so a written manifest rebuilds the exact
/// same initial state under the same seed.
struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::CalibrationCorridor;
    double dyad_fraction = 0.0;      // fraction of the population walking in dyads
    double target_density = 1.0;     // p/m^2, periodic corridor only
    double bottleneck_width_m = 4.0; // opening width, bottleneck room only
    int population = 54;
    Weights weights;
    long steps = 2000;
    long warmup_steps = 0;
    std::uint64_t seed = 1;

    // Discretization and free model constants (documented defaults).
    double cell_size_m = 0.4;
    double time_step_s = 0.3;
    double desired_speed = 1.6;     // m/s
    double obstacle_radius_m = 0.8; // wall repulsion reach
    double corridor_width_m = 3.0;
    double corridor_length_m = 24.0; // periodic corridor span
    double room_side_m = 10.0;       // bottleneck room interior side
    double door_depth_m = 0.8;       // exit opening depth (east wall thickness)

    /// Number of dyad members; pairs are exact, the remainder walks single.
    /// The epsilon guard absorbs representation error in fractions like 24/54.
    int dyad_members() const {
        const int pairs = int(std::floor(dyad_fraction * population / 2.0 + 1e-9));
        return 2 * pairs;
    }

    void validate() const {
        weights.validate();
        if (population < 0) throw Error("config-value", "population must be >= 0");
        if (dyad_fraction < 0.0 || dyad_fraction > 1.0)
            throw Error("config-value", "dyad_fraction must lie in [0,1]");
        if (steps < 0 || warmup_steps < 0)
            throw Error("config-value", "steps and warmup_steps must be >= 0");
        if (cell_size_m <= 0 || time_step_s <= 0)
            throw Error("config-value", "cell_size_m and time_step_s must be > 0");
        if (desired_speed < 0) throw Error("config-value", "desired_speed must be >= 0");
        if (bottleneck_width_m < 2.0 * cell_size_m)
            throw Error("config-value", "bottleneck_width_m must span at least two cells");
        if (door_depth_m < 0) throw Error("config-value", "door_depth_m must be >= 0");
    }

    static ScenarioConfig from_config(const Config& cfg) {
        ScenarioConfig out;
        out.kind = scenario_kind_from(cfg.get_string("scenario.kind"));
        out.population = int(cfg.get_int("scenario.population", out.defaults_population(out.kind)));
        out.dyad_fraction = cfg.get_double("scenario.dyad_fraction", 0.0);
        out.target_density = cfg.get_double("scenario.target_density", 1.0);
        out.bottleneck_width_m = cfg.get_double("scenario.bottleneck_width_m", 4.0);
        out.steps = cfg.get_int("scenario.steps", out.kind == ScenarioKind::CalibrationCorridor ? 2000 : 5000);
        out.warmup_steps = cfg.get_int("scenario.warmup_steps", out.kind == ScenarioKind::CalibrationCorridor ? 0 : 2000);
        out.seed = cfg.get_uint64("scenario.seed", 1);
        out.cell_size_m = cfg.get_double("scenario.cell_size_m", 0.4);
        out.time_step_s = cfg.get_double("scenario.time_step_s", 0.3);
        out.desired_speed = cfg.get_double("scenario.desired_speed", 1.6);
        out.obstacle_radius_m = cfg.get_double("scenario.obstacle_radius_m", 0.8);
        out.corridor_width_m = cfg.get_double("scenario.corridor_width_m", 3.0);
        out.corridor_length_m = cfg.get_double("scenario.corridor_length_m", 24.0);
        out.room_side_m = cfg.get_double("scenario.room_side_m", 10.0);
        out.door_depth_m = cfg.get_double("scenario.door_depth_m", 0.8);

        Weights w;
        w.kappa_g = cfg.get_double("weights.kappa_g", w.kappa_g);
        w.kappa_ob = cfg.get_double("weights.kappa_ob", w.kappa_ob);
        w.kappa_s = cfg.get_double("weights.kappa_s", w.kappa_s);
        w.kappa_c = cfg.get_double("weights.kappa_c", w.kappa_c);
        w.kappa_d = cfg.get_double("weights.kappa_d", w.kappa_d);
        w.kappa_ov = cfg.get_double("weights.kappa_ov", w.kappa_ov);
        w.delta = cfg.get_double("weights.delta_m", w.delta);
        out.weights = w;

        out.validate();
        return out;
    }

    void write_to(ConfigWriter& w) const {
        w.section("scenario");
        w.set("kind", std::string(to_string(kind)));
        w.set("population", long(population));
        w.set("dyad_fraction", dyad_fraction);
        w.set("target_density", target_density);
        w.set("bottleneck_width_m", bottleneck_width_m);
        w.set("steps", steps);
        w.set("warmup_steps", warmup_steps);
        w.set("seed", seed);
        w.set("cell_size_m", cell_size_m);
        w.set("time_step_s", time_step_s);
        w.set("desired_speed", desired_speed);
        w.set("obstacle_radius_m", obstacle_radius_m);
        w.set("corridor_width_m", corridor_width_m);
        w.set("corridor_length_m", corridor_length_m);
        w.set("room_side_m", room_side_m);
        w.set("door_depth_m", door_depth_m);
        w.section("weights");
        w.set("kappa_g", weights.kappa_g);
        w.set("kappa_ob", weights.kappa_ob);
        w.set("kappa_s", weights.kappa_s);
        w.set("kappa_c", weights.kappa_c);
        w.set("kappa_d", weights.kappa_d);
        w.set("kappa_ov", weights.kappa_ov);
        w.set("delta_m", weights.delta);
    }

    std::string to_config_text() const {
        ConfigWriter w;
        write_to(w);
        return w.text();
    }

private:
    static long defaults_population(ScenarioKind k) {
        switch (k) {
            case ScenarioKind::CalibrationCorridor: return 54;
            case ScenarioKind::PeriodicCorridor: return 72;
            case ScenarioKind::BottleneckRoom: return 400;
        }
        return 0;
    }
};

namespace detail {

inline constexpr std::uint64_t kSpawnStream = 0x737061776e; // rng stream tag: placement

/// Appends a freshly spawned agent and marks its cell occupied.
inline void emit_agent(SimState& state, Vec2i cell, AgentClass cls, int group_id,
                       double desired_speed) {
    Agent a;
    a.id = int(state.agents.size());
    a.pos = cell;
    a.vel = {0, 0};
    a.heading = {0, 0};
    a.desired_speed = desired_speed;
    a.group_id = group_id;
    a.cls = cls;
    state.agents.push_back(a);
    assert(state.occupancy[std::size_t(state.env.index(cell))] == -1);
    state.occupancy[std::size_t(state.env.index(cell))] = std::int32_t(a.id);
}

inline bool cell_free(const SimState& state, Vec2i c) {
    return state.env.in_bounds(c) && state.env.walkable(c) &&
           state.env.kind_at(c) != CellKind::Target &&
           state.occupancy[std::size_t(state.env.index(c))] < 0;
}

/// Picks a partner cell Moore-adjacent to `c`, preferring lateral (same
/// column) neighbors so freshly spawned dyads start out line abreast.
inline bool partner_cell(const SimState& state, Vec2i c, Vec2i& out) {
    const Vec2i preferred[] = {{0, 1}, {0, -1}, {1, 0}, {-1, 0}, {1, 1}, {-1, 1}, {1, -1}, {-1, -1}};
    for (Vec2i off : preferred) {
        Vec2i n{c.x + off.x, c.y + off.y};
        if (!state.env.wrap(n)) continue;
        if (cell_free(state, n)) {
            out = n;
            return true;
        }
    }
    return false;
}

/// Random placement of `population` agents with the first `members` of them
/// paired into adjacent dyads. Shared by the periodic corridor and the
/// bottleneck room.
inline void spawn_randomly(SimState& state, Rng& rng, int population, int members,
                           double desired_speed) {
    const int n = state.env.cell_count();
    int free_cells = 0;
    for (int idx = 0; idx < n; ++idx)
        if (cell_free(state, state.env.cell_of(idx))) ++free_cells;
    if (population > free_cells)
        throw Error("over-capacity", "population " + std::to_string(population) +
                                         " exceeds " + std::to_string(free_cells) + " free cells");

    auto draw_free = [&](bool need_partner, Vec2i& cell, Vec2i& partner) -> bool {
        for (int attempt = 0; attempt < 2000; ++attempt) {
            const Vec2i c = state.env.cell_of(int(rng.below(std::size_t(n))));
            if (!cell_free(state, c)) continue;
            if (!need_partner) {
                cell = c;
                return true;
            }
            if (partner_cell(state, c, partner)) {
                cell = c;
                return true;
            }
        }
        // Dense grid: deterministic scan instead of more rejection sampling.
        for (int idx = 0; idx < n; ++idx) {
            const Vec2i c = state.env.cell_of(idx);
            if (!cell_free(state, c)) continue;
            if (!need_partner) {
                cell = c;
                return true;
            }
            if (partner_cell(state, c, partner)) {
                cell = c;
                return true;
            }
        }
        return false;
    };

    const int pairs = members / 2;
    for (int p = 0; p < pairs; ++p) {
        Vec2i a{}, b{};
        if (!draw_free(true, a, b))
            throw Error("spawn-overflow", "no adjacent free cell pair left for a dyad");
        const int gid = int(state.groups.size());
        emit_agent(state, a, AgentClass::DyadMember, gid, desired_speed);
        emit_agent(state, b, AgentClass::DyadMember, gid, desired_speed);
        state.groups.push_back(Group{gid, {int(state.agents.size()) - 2, int(state.agents.size()) - 1}});
    }
    for (int s = 0; s < population - members; ++s) {
        Vec2i c{}, unused{};
        if (!draw_free(false, c, unused))
            throw Error("spawn-overflow", "no free cell left for a single");
        emit_agent(state, c, AgentClass::Single, -1, desired_speed);
    }
}

/// Common SimState scaffolding once the environment grid is in place.
inline SimState init_state(Environment env, const ScenarioConfig& cfg) {
    env.validate();
    SimState st;
    st.env = std::move(env);
    st.weights = cfg.weights;
    st.time_step_s = cfg.time_step_s;
    st.obstacle_radius_m = cfg.obstacle_radius_m;
    st.seed = cfg.seed;
    st.obstacle_proximity = build_obstacle_proximity(st.env);
    st.occupancy.assign(std::size_t(st.env.cell_count()), -1);
    return st;
}

inline std::vector<Vec2i> target_cells(const Environment& env) {
    std::vector<Vec2i> out;
    for (int idx = 0; idx < env.cell_count(); ++idx)
        if (env.kinds[std::size_t(idx)] == CellKind::Target) out.push_back(env.cell_of(idx));
    return out;
}

} // namespace detail

/// Calibration corridor (open, absorbing): 14 m of walkable span per the
/// paper's 2 m buffer + 10 m measurement + 2 m tail split, with the 3x3
/// grid of start areas spread over the first 5.2 m. Start areas are spaced
/// two cells apart in x and one row apart in y so that the nine 6-person
/// waves depart without compressing into each other; dyads then carry their
/// initial side-by-side arrangement into the measured span instead of being
/// scrambled by a release jam. The measurement span starts 2 m in and
/// overlaps the rear start areas; departure motion is part of the measured
/// statistics, as in the experiment. 3 m nominal width rounds to 8 walkable
/// rows.
///
///   x: |wall|areas 1-3|gap|areas 4-6|gap|areas 7-9|...|target 35|wall|
inline SimState build_calibration_corridor(const ScenarioConfig& cfg) {
    cfg.validate();
    const double cs = cfg.cell_size_m;
    const int rows = int(std::lround(cfg.corridor_width_m / cs)); // walkable rows
    // Each start area is 3 occupied columns at stride 2 (span 5); under the
    // frozen-occupancy parallel update an agent can only advance into a cell
    // that was free last step, so sustained marching needs one empty column
    // of headway. Packing columns shoulder-to-shoulder would stall the rear
    // columns at release and scramble the dyads standing there.
    const int area_span = 5, area_stride = 2, band_gap = 2;
    const int spawn_cols = 3 * area_span + 2 * band_gap;
    const int corridor_cols = int(std::lround(14.0 / cs)); // buffer + measurement + tail
    const int width = corridor_cols + 2;
    const int height = rows + 2;
    if (spawn_cols >= corridor_cols)
        throw Error("invalid-geometry", "corridor too short for the spawn block");

    Environment env = Environment::make(width, height, cs);
    for (int x = 0; x < width; ++x) {
        env.kinds[std::size_t(env.index(x, 0))] = CellKind::Obstacle;
        env.kinds[std::size_t(env.index(x, height - 1))] = CellKind::Obstacle;
    }
    for (int y = 1; y <= rows; ++y) {
        env.kinds[std::size_t(env.index(0, y))] = CellKind::Obstacle;
        env.kinds[std::size_t(env.index(width - 1, y))] = CellKind::Obstacle;
        env.kinds[std::size_t(env.index(width - 2, y))] = CellKind::Target;
    }

    struct Area {
        int x0, x1, y0, y1, stride; // inclusive cell ranges; occupied columns every `stride`
        std::vector<Vec2i> cells() const {
            std::vector<Vec2i> out;
            for (int x = x0; x <= x1; x += stride)
                for (int y = y0; y <= y1; ++y) out.push_back({x, y});
            return out;
        }
    };
    std::vector<Area> areas;
    // Two-row stacks clear of the wall rows when the corridor is wide enough
    // (8 rows: 2-3 / 4-5 / 6-7). The rows touching a wall carry the full
    // obstacle penalty; anyone spawned there immediately dodges inward,
    // which would scramble a dyad standing against the wall. Narrower
    // corridors fall back to a contiguous three-way split.
    int y_lo[3], y_hi[3];
    if (rows >= 8) {
        const int first = 1 + (rows - 6) / 2;
        for (int s = 0; s < 3; ++s) {
            y_lo[s] = first + 2 * s;
            y_hi[s] = y_lo[s] + 1;
        }
    } else {
        int y_edges[4];
        y_edges[0] = 1;
        y_edges[3] = rows + 1;
        y_edges[1] = 1 + (rows + 1) / 3;
        y_edges[2] = rows + 1 - (rows + 1) / 3;
        for (int s = 0; s < 3; ++s) {
            y_lo[s] = y_edges[s];
            y_hi[s] = y_edges[s + 1] - 1;
        }
    }
    for (int yi = 0; yi < 3; ++yi)
        for (int xi = 0; xi < 3; ++xi) {
            const int x0 = 1 + xi * (area_span + band_gap);
            areas.push_back({x0, x0 + area_span - 1, y_lo[yi], y_hi[yi], area_stride});
        }
    for (std::size_t a = 0; a < areas.size(); ++a)
        for (Vec2i c : areas[a].cells())
            env.spawn_ids[std::size_t(env.index(c))] = std::int8_t(a);

    SimState st = detail::init_state(std::move(env), cfg);
    st.goal = GoalField::from_distance(build_distance_field(st.env, detail::target_cells(st.env)));
    st.exit_policy = {ExitMode::Absorb, 0, -1};

    // Quotas: population dealt round-robin over the 9 areas, dyads first so
    // each pair lands inside one area on laterally adjacent cells.
    const int population = cfg.population;
    const int members = cfg.dyad_members();
    const int pairs = members / 2;
    std::vector<int> quota(areas.size(), 0);
    for (int i = 0; i < population; ++i) quota[std::size_t(i) % areas.size()] += 1;
    for (std::size_t a = 0; a < areas.size(); ++a) {
        if (quota[a] > int(areas[a].cells().size()))
            throw Error("spawn-overflow", "area " + std::to_string(a) + " quota " +
                                              std::to_string(quota[a]) + " exceeds its " +
                                              std::to_string(areas[a].cells().size()) + " cells");
    }
    std::vector<int> area_pairs(areas.size(), 0);
    std::vector<int> slots(quota);
    for (int p = 0; p < pairs; ++p) {
        std::size_t a = std::size_t(p) % areas.size();
        std::size_t tried = 0;
        while (slots[a] < 2 && tried < areas.size()) {
            a = (a + 1) % areas.size();
            ++tried;
        }
        if (slots[a] < 2) throw Error("spawn-overflow", "no start area has room for a dyad");
        area_pairs[a] += 1;
        slots[a] -= 2;
    }

    for (std::size_t a = 0; a < areas.size(); ++a) {
        std::vector<Vec2i> cells = areas[a].cells(); // column-major: lateral neighbors adjacent
        std::vector<bool> taken(cells.size(), false);
        auto take_at = [&](std::size_t i) {
            taken[i] = true;
            return cells[i];
        };
        int placed = 0;
        for (int p = 0; p < area_pairs[a]; ++p) {
            // first free cell whose lateral neighbor is free, Moore fallback
            std::size_t first = cells.size(), second = cells.size();
            for (std::size_t i = 0; i < cells.size() && first == cells.size(); ++i) {
                if (taken[i]) continue;
                for (std::size_t j = 0; j < cells.size(); ++j) {
                    if (taken[j] || j == i) continue;
                    if (cells[j].x == cells[i].x && std::abs(cells[j].y - cells[i].y) == 1) {
                        first = i;
                        second = j;
                        break;
                    }
                }
            }
            if (first == cells.size()) {
                for (std::size_t i = 0; i < cells.size() && first == cells.size(); ++i) {
                    if (taken[i]) continue;
                    for (std::size_t j = 0; j < cells.size(); ++j) {
                        if (taken[j] || j == i) continue;
                        if (std::abs(cells[j].x - cells[i].x) <= 1 && std::abs(cells[j].y - cells[i].y) <= 1) {
                            first = i;
                            second = j;
                            break;
                        }
                    }
                }
            }
            if (first == cells.size())
                throw Error("spawn-overflow", "area " + std::to_string(a) + " cannot host an adjacent dyad");
            const int gid = int(st.groups.size());
            detail::emit_agent(st, take_at(first), AgentClass::DyadMember, gid, cfg.desired_speed);
            detail::emit_agent(st, take_at(second), AgentClass::DyadMember, gid, cfg.desired_speed);
            st.groups.push_back(Group{gid, {int(st.agents.size()) - 2, int(st.agents.size()) - 1}});
            placed += 2;
        }
        const int singles_here = quota[a] - placed;
        for (int s = 0; s < singles_here; ++s) {
            std::size_t i = 0;
            while (i < cells.size() && taken[i]) ++i;
            if (i == cells.size()) throw Error("spawn-overflow", "start area out of cells");
            detail::emit_agent(st, take_at(i), AgentClass::Single, -1, cfg.desired_speed);
        }
    }

    assert(int(st.agents.size()) == population);
    assert(2 * int(st.groups.size()) == members);
    st.rebuild_occupancy();
    return st;
}

/// Dyad-member count when the population is derived from density rather than
/// taken from cfg.population.
inline int scaled_members(const ScenarioConfig& cfg, int population) {
    const int pairs = int(std::floor(cfg.dyad_fraction * population / 2.0 + 1e-9));
    return 2 * pairs;
}

/// Toroidal corridor for fundamental-diagram campaigns: wraps in x, constant
/// +x drift goal, population = round(density x nominal corridor area).
inline SimState build_periodic_corridor(const ScenarioConfig& cfg) {
    cfg.validate();
    const double cs = cfg.cell_size_m;
    if (cfg.target_density > 1.0 / (cs * cs) + 1e-9)
        throw Error("over-capacity", "target_density " + format_double(cfg.target_density) +
                                         " exceeds one agent per cell");
    const int cols = int(std::lround(cfg.corridor_length_m / cs));
    const int rows = int(std::lround(cfg.corridor_width_m / cs));
    Environment env = Environment::make(cols, rows + 2, cs);
    env.periodic_x = true;
    for (int x = 0; x < cols; ++x) {
        env.kinds[std::size_t(env.index(x, 0))] = CellKind::Obstacle;
        env.kinds[std::size_t(env.index(x, rows + 1))] = CellKind::Obstacle;
    }

    SimState st = detail::init_state(std::move(env), cfg);
    st.goal = GoalField::drift_x();
    st.exit_policy = {ExitMode::None, 0, -1};

    const int population =
        int(std::lround(cfg.target_density * cfg.corridor_width_m * cfg.corridor_length_m));
    Rng rng(derive_seed(cfg.seed, detail::kSpawnStream));
    detail::spawn_randomly(st, rng, population, scaled_members(cfg, population), cfg.desired_speed);
    st.rebuild_occupancy();
    return st;
}

/// Square room with a centered opening through the east wall; agents crossing
/// the opening recirculate to the rear (west) strip, keeping density constant.
/// The east wall is door_depth_m thick, so the opening is a short channel
/// rather than a zero-depth slit: inside it agents march in lanes under the
/// one-cell-headway rule of the parallel update, which caps per-lane
/// throughput the way a real door jamb does.
inline SimState build_bottleneck_room(const ScenarioConfig& cfg) {
    cfg.validate();
    const double cs = cfg.cell_size_m;
    if (cfg.bottleneck_width_m > cfg.room_side_m + 1e-9)
        throw Error("invalid-geometry", "bottleneck width " + format_double(cfg.bottleneck_width_m) +
                                            " m exceeds the " + format_double(cfg.room_side_m) +
                                            " m room side");
    const int side = int(std::lround(cfg.room_side_m / cs)); // interior cells
    const int opening = int(std::lround(cfg.bottleneck_width_m / cs));
    const int depth = int(std::lround(cfg.door_depth_m / cs));
    const int width = side + 2 + depth;
    const int height = side + 2;
    Environment env = Environment::make(width, height, cs);
    for (int x = 0; x < width; ++x) {
        env.kinds[std::size_t(env.index(x, 0))] = CellKind::Obstacle;
        env.kinds[std::size_t(env.index(x, height - 1))] = CellKind::Obstacle;
    }
    for (int y = 1; y <= side; ++y) {
        env.kinds[std::size_t(env.index(0, y))] = CellKind::Obstacle;
        for (int x = side + 1; x < width; ++x)
            env.kinds[std::size_t(env.index(x, y))] = CellKind::Obstacle;
    }
    const int y_open = 1 + (side - opening) / 2;
    for (int y = y_open; y < y_open + opening; ++y) {
        for (int x = side + 1; x < width - 1; ++x)
            env.kinds[std::size_t(env.index(x, y))] = CellKind::Walkable;
        env.kinds[std::size_t(env.index(width - 1, y))] = CellKind::Target;
    }

    SimState st = detail::init_state(std::move(env), cfg);
    st.goal = GoalField::from_distance(build_distance_field(st.env, detail::target_cells(st.env)));
    st.exit_policy = {ExitMode::Recirculate, 1, 2};

    Rng rng(derive_seed(cfg.seed, detail::kSpawnStream));
    detail::spawn_randomly(st, rng, cfg.population, cfg.dyad_members(), cfg.desired_speed);
    st.rebuild_occupancy();
    return st;
}

inline SimState build_scenario(const ScenarioConfig& cfg) {
    switch (cfg.kind) {
        case ScenarioKind::CalibrationCorridor: return build_calibration_corridor(cfg);
        case ScenarioKind::PeriodicCorridor: return build_periodic_corridor(cfg);
        case ScenarioKind::BottleneckRoom: return build_bottleneck_room(cfg);
    }
    throw Error("config-value", "unhandled scenario kind");
}

/// Measurement rectangle (meters) the paper's statistics are computed over.
/// Calibration: the 10 m span after the 2 m buffer. Periodic: an 8 m span
/// mid-corridor. Bottleneck: the room interior.
inline Rect measurement_rect_m(const ScenarioConfig& cfg) {
    const double cs = cfg.cell_size_m;
    const int rows = int(std::lround(cfg.corridor_width_m / cs));
    switch (cfg.kind) {
        case ScenarioKind::CalibrationCorridor: {
            const int x_begin = 1 + int(std::lround(2.0 / cs)); // 2 m buffer after the west wall
            const double x0 = x_begin * cs;
            return Rect{x0, cs, x0 + 10.0, cs * (rows + 1)};
        }
        case ScenarioKind::PeriodicCorridor: {
            const double x0 = (cfg.corridor_length_m - 8.0) / 2.0;
            return Rect{x0, cs, x0 + 8.0, cs * (rows + 1)};
        }
        case ScenarioKind::BottleneckRoom: {
            const int side = int(std::lround(cfg.room_side_m / cs));
            return Rect{cs, cs, cs * (side + 1), cs * (side + 1)};
        }
    }
    return Rect{};
}

} // namespace groupflow
