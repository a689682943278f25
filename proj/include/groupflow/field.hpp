#pragma once

#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "groupflow/geometry.hpp"

namespace groupflow {

enum class FieldSemantics : std::uint8_t { GoalDistance, ObstacleProximity };

/// Per-cell scalar values in meters. Unreachable cells and obstacles carry
/// the +infinity marker.
struct ScalarField {
    static constexpr double kUnreachable = std::numeric_limits<double>::infinity();

    int width = 0;
    int height = 0;
    FieldSemantics semantics = FieldSemantics::GoalDistance;
    std::vector<double> values;

    double at(int x, int y) const { return values[std::size_t(y) * width + x]; }
    double at(Vec2i c) const { return at(c.x, c.y); }
    static bool unreachable(double v) { return v == kUnreachable; }
};

namespace detail {

// Dijkstra over the 8-connected cell graph. Distances are carried as
// (orthogonal, diagonal) step counts and scored as
// cell_size * (orth + sqrt(2) * diag), so equal paths produce bit-identical
// doubles no matter the relaxation order. For step counts bounded by grid
// size, distinct (orth, diag) pairs are separated by far more than one ulp,
// which makes the double comparison below exact.
struct StepCount {
    std::int32_t orth = 0;
    std::int32_t diag = 0;
};

inline double step_value(StepCount s, double cell_size) {
    return cell_size * (double(s.orth) + kSqrt2 * double(s.diag));
}

inline std::vector<double> octile_dijkstra(const Environment& env,
                                           std::span<const Vec2i> sources) {
    const int n = env.cell_count();
    std::vector<double> dist(std::size_t(n), ScalarField::kUnreachable);
    std::vector<StepCount> steps;
    steps.resize(std::size_t(n));

    struct QueueEntry {
        double value;
        int cell;
        StepCount steps;
        bool operator>(const QueueEntry& o) const { return value > o.value; }
    };
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<QueueEntry>> queue;

    for (Vec2i s : sources) {
        Vec2i c = s;
        if (!env.wrap(c)) continue;
        const int idx = env.index(c);
        if (dist[std::size_t(idx)] != 0.0) {
            dist[std::size_t(idx)] = 0.0;
            steps[std::size_t(idx)] = {};
            queue.push({0.0, idx, {}});
        }
    }

    while (!queue.empty()) {
        const QueueEntry top = queue.top();
        queue.pop();
        if (top.value > dist[std::size_t(top.cell)]) continue; // stale
        const Vec2i cell = env.cell_of(top.cell);

        for (Vec2i off : kMooreOffsets) {
            if (off.x == 0 && off.y == 0) continue;
            Vec2i nb = cell + off;
            if (!env.wrap(nb)) continue;
            if (env.kind_at(nb) == CellKind::Obstacle) continue; // relaxation never enters obstacles
            const bool diagonal = off.x != 0 && off.y != 0;
            StepCount ns = top.steps;
            (diagonal ? ns.diag : ns.orth) += 1;
            const double nv = step_value(ns, env.cell_size);
            const int nidx = env.index(nb);
            if (nv < dist[std::size_t(nidx)]) {
                dist[std::size_t(nidx)] = nv;
                steps[std::size_t(nidx)] = ns;
                queue.push({nv, nidx, ns});
            }
        }
    }
    return dist;
}

} // namespace detail

/// Shortest-path distance in meters from every walkable cell to the nearest
/// source. Orthogonal steps cost cell_size, diagonal steps sqrt(2)*cell_size;
/// obstacles are impassable and periodic wrap flags are honored. Walkable
/// cells with no path keep the +infinity marker.
inline ScalarField build_distance_field(const Environment& env, std::span<const Vec2i> sources) {
    std::vector<Vec2i> walkable_sources;
    for (Vec2i s : sources) {
        Vec2i c = s;
        if (env.wrap(c) && env.kind_at(c) != CellKind::Obstacle) walkable_sources.push_back(c);
    }
    if (walkable_sources.empty())
        throw Error("empty-sources", "distance field needs at least one walkable source");

    ScalarField field;
    field.width = env.width;
    field.height = env.height;
    field.semantics = FieldSemantics::GoalDistance;
    field.values = detail::octile_dijkstra(env, walkable_sources);
    return field;
}

/// Octile distance in meters from every cell to the nearest obstacle cell,
/// measured through walkable cells. A grid without obstacles yields the
/// +infinity marker everywhere (no repulsion anywhere).
inline ScalarField build_obstacle_proximity(const Environment& env) {
    std::vector<Vec2i> obstacle_cells;
    for (int i = 0; i < env.cell_count(); ++i) {
        if (env.kinds[std::size_t(i)] == CellKind::Obstacle) obstacle_cells.push_back(env.cell_of(i));
    }
    ScalarField field;
    field.width = env.width;
    field.height = env.height;
    field.semantics = FieldSemantics::ObstacleProximity;
    if (obstacle_cells.empty()) {
        field.values.assign(std::size_t(env.cell_count()), ScalarField::kUnreachable);
    } else {
        field.values = detail::octile_dijkstra(env, obstacle_cells);
    }
    return field;
}

/// Guidance field for goal attraction. Either a distance-to-target field or,
/// for toroidal corridors where distance to a target is ill-defined, a
/// constant drift that rewards movement in +x.
struct GoalField {
    enum class Kind : std::uint8_t { Distance, DriftX };

    Kind kind = Kind::Distance;
    ScalarField distance; // valid when kind == Distance

    /// Pseudo-distance of a candidate cell as seen from `from`, in meters.
    /// Lower is more attractive. For the drift field this is just
    /// -dx * cell_size of the (wrapped) move offset.
    double pseudo_distance(const Environment& env, Vec2i from, Vec2i to) const {
        if (kind == Kind::DriftX) {
            const Vec2d d = env.wrap_delta(to_vec2d(to), to_vec2d(from));
            return -d.x * env.cell_size;
        }
        Vec2i c = to;
        if (!env.wrap(c)) return ScalarField::kUnreachable;
        return distance.at(c);
    }

    static GoalField drift_x() {
        GoalField g;
        g.kind = Kind::DriftX;
        return g;
    }

    static GoalField from_distance(ScalarField f) {
        GoalField g;
        g.kind = Kind::Distance;
        g.distance = std::move(f);
        return g;
    }
};

} // namespace groupflow
