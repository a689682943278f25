#pragma once

#include "groupflow/engine.hpp"
#include "groupflow/scenario.hpp"

namespace groupflow::test {

/// Open box with drift-x guidance: every cell walkable, no obstacles. The
/// proximity field is all-infinity, so the obstacle term is identically zero.
inline SimState open_state(int w, int h, bool periodic_x = false, double cell_size = 0.4) {
    SimState s;
    s.env = Environment::make(w, h, cell_size);
    s.env.periodic_x = periodic_x;
    s.obstacle_proximity = build_obstacle_proximity(s.env);
    s.goal = GoalField::drift_x();
    return s;
}

inline int add_agent(SimState& s, Vec2i pos, int group = -1) {
    Agent a;
    a.id = int(s.agents.size());
    a.pos = pos;
    a.group_id = group;
    a.cls = group >= 0 ? AgentClass::DyadMember : AgentClass::Single;
    s.agents.push_back(a);
    return a.id;
}

inline int add_dyad(SimState& s, Vec2i first, Vec2i second) {
    const int g = int(s.groups.size());
    Group group;
    group.id = g;
    group.members = {add_agent(s, first, g), add_agent(s, second, g)};
    s.groups.push_back(group);
    return g;
}

/// Environment with random obstacles; guarantees at least one walkable cell.
inline Environment random_env(Rng& rng, int w, int h, double obstacle_fraction,
                              bool periodic_x = false) {
    Environment env = Environment::make(w, h, 0.4);
    env.periodic_x = periodic_x;
    for (int i = 0; i < env.cell_count(); ++i) {
        if (rng.uniform01() < obstacle_fraction) env.kinds[std::size_t(i)] = CellKind::Obstacle;
    }
    bool any = false;
    for (CellKind k : env.kinds) any = any || k == CellKind::Walkable;
    if (!any) env.kinds[0] = CellKind::Walkable;
    return env;
}

inline std::vector<Vec2i> walkable_cells(const Environment& env) {
    std::vector<Vec2i> out;
    for (int i = 0; i < env.cell_count(); ++i) {
        if (env.kinds[std::size_t(i)] == CellKind::Walkable) out.push_back(env.cell_of(i));
    }
    return out;
}

} // namespace groupflow::test
