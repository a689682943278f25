#pragma once

#include <cstdint>
#include <vector>

#include "groupflow/geometry.hpp"

namespace groupflow {

enum class AgentClass : std::uint8_t { Single = 0, DyadMember = 1 };

struct Agent {
    int id = -1;
    Vec2i pos{};
    Vec2i vel{};     // last realized displacement, cells per step, each axis in {-1,0,1}
    Vec2i heading{}; // last nonzero displacement direction; {0,0} = no history
    double desired_speed = 1.6; // m/s
    int group_id = -1;          // -1 = ungrouped
    AgentClass cls = AgentClass::Single;
    bool active = true; // false once absorbed by a target
};

/// A social group. All shipped scenarios use dyads (two members) but the
/// engine handles any size >= 2.
struct Group {
    int id = -1;
    std::vector<int> members; // agent indices
    // True after an exit crossing has split the group across a recirculating
    // boundary. Cohesion and weight gating stay off until the members regain
    // contact (dispersion back within delta); otherwise the member still
    // heading for the exit would be pulled backward through the door toward
    // its re-injected partner.
    bool rejoining = false;
};

} // namespace groupflow
