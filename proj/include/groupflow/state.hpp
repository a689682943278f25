#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

#include "groupflow/agent.hpp"
#include "groupflow/field.hpp"
#include "groupflow/geometry.hpp"
#include "groupflow/weights.hpp"

namespace groupflow {

/// What happens when an agent steps onto a target cell.
enum class ExitMode : std::uint8_t {
    None,        // targets are plain walkable cells (periodic drift corridors)
    Absorb,      // agent leaves the simulation (open corridor)
    Recirculate, // agent is logged and re-injected at the rear spawn strip
};

struct ExitPolicy {
    ExitMode mode = ExitMode::None;
    int strip_x0 = 0; // rear re-entry strip, inclusive cell columns
    int strip_x1 = -1;
};

struct CrossingEvent {
    int agent_id = -1;
    long step = 0;
    Vec2i cell{};
};

/// Full simulation state. Plain data; step() advances it in place.
struct SimState {
    Environment env;
    GoalField goal;
    ScalarField obstacle_proximity;
    std::vector<Agent> agents; // indexed by agent id
    std::vector<Group> groups; // indexed by group id
    Weights weights;           // base weights; balancing derives per-agent effective ones
    double time_step_s = 0.3;
    double obstacle_radius_m = 0.8; // repulsion reaches this far from a wall
    std::uint64_t seed = 1;
    long step_count = 0;
    ExitPolicy exit_policy;
    std::vector<CrossingEvent> crossings;      // appended by step()
    std::vector<Vec2i> last_reentry;           // per agent; (-1,-1) = never re-entered
    std::vector<Vec2i> last_disp;              // per agent, realized displacement of the last step
    std::vector<std::int32_t> occupancy;       // cell -> agent index, -1 empty; see rebuild_occupancy

    double v_max() const { return env.cell_size / time_step_s; }

    int active_count() const {
        int n = 0;
        for (const Agent& a : agents) n += a.active ? 1 : 0;
        return n;
    }

    /// Number of active members of a group (absorbed partners drop out).
    int active_members(const Group& g) const {
        int n = 0;
        for (int idx : g.members) n += agents[std::size_t(idx)].active ? 1 : 0;
        return n;
    }

    /// Whether the agent's moves should include the cohesion term and the
    /// dispersion-gated weight balancing: it belongs to a group with at least
    /// two active members that is not mid-rejoin after an exit split.
    bool cohesion_engaged(const Agent& a) const {
        if (a.group_id < 0) return false;
        const Group& g = groups[std::size_t(a.group_id)];
        return !g.rejoining && active_members(g) >= 2;
    }

    void rebuild_occupancy() {
        occupancy.assign(std::size_t(env.cell_count()), -1);
        for (std::size_t i = 0; i < agents.size(); ++i) {
            if (!agents[i].active) continue;
            const int idx = env.index(agents[i].pos);
            assert(occupancy[std::size_t(idx)] == -1 && "exclusion principle violated");
            occupancy[std::size_t(idx)] = std::int32_t(i);
        }
    }

    std::int32_t occupant(Vec2i c) const { return occupancy[std::size_t(env.index(c))]; }

    bool occupied_by_other(Vec2i c, int self_index) const {
        const std::int32_t o = occupant(c);
        return o >= 0 && o != self_index;
    }

    /// True when the cell holds an agent outside `group_id` (ungrouped agents
    /// count as outside every group).
    bool occupied_by_non_group(Vec2i c, int self_index, int group_id) const {
        const std::int32_t o = occupant(c);
        if (o < 0 || o == self_index) return false;
        return group_id < 0 || agents[std::size_t(o)].group_id != group_id;
    }
};

} // namespace groupflow
