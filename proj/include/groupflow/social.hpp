#pragma once

#include <algorithm>
#include <cmath>

#include "groupflow/state.hpp"

namespace groupflow {

/// One-step position forecast: pos + vel, componentwise. Deliberately not
/// clamped to walkable cells; it only ever appears inside distance
/// expressions, where periodic wrapping absorbs out-of-range coordinates.
inline Vec2d predict_position(const Agent& a) {
    return {double(a.pos.x + a.vel.x), double(a.pos.y + a.vel.y)};
}

/// Cohesion attractiveness of candidate cell c for a grouped agent, in [-1,1].
///
/// Averages, over the other members, how much moving to c shortens the
/// distance to their predicted positions compared to staying put. The raw
/// mean lies in [-sqrt(2)*cell_size, +sqrt(2)*cell_size] because c is at most
/// one diagonal step away, so the affine map onto [-1,1] reduces to dividing
/// by sqrt(2)*cell_size.
inline double cohesion_value(Vec2i c, const Agent& agent, const SimState& state) {
    if (agent.group_id < 0)
        throw Error("not-grouped", "cohesion_value needs a grouped agent");
    const Group& group = state.groups[std::size_t(agent.group_id)];

    const Vec2d own = to_vec2d(agent.pos);
    const Vec2d cand = to_vec2d(c);
    double sum = 0.0;
    int others = 0;
    for (int idx : group.members) {
        const Agent& partner = state.agents[std::size_t(idx)];
        if (partner.id == agent.id || !partner.active) continue;
        const Vec2d predicted = predict_position(partner);
        sum += state.env.distance_m(own, predicted) - state.env.distance_m(cand, predicted);
        ++others;
    }
    if (others == 0)
        throw Error("not-grouped", "group has no other active members");

    const double mean = sum / double(others);
    const double value = mean / (kSqrt2 * state.env.cell_size);
    return std::clamp(value, -1.0, 1.0);
}

/// Instantaneous dispersion of a group: mean member distance from the group
/// centroid, in meters. On periodic axes members are first folded into the
/// minimum image around the first member so the centroid is well defined.
inline double group_dispersion(const Group& group, const SimState& state) {
    Vec2d anchor{};
    std::vector<Vec2d> offsets;
    offsets.reserve(group.members.size());
    bool first = true;
    for (int idx : group.members) {
        const Agent& member = state.agents[std::size_t(idx)];
        if (!member.active) continue;
        if (first) {
            anchor = to_vec2d(member.pos);
            offsets.push_back({0.0, 0.0});
            first = false;
        } else {
            offsets.push_back(state.env.wrap_delta(to_vec2d(member.pos), anchor));
        }
    }
    if (offsets.size() < 2) return 0.0;

    Vec2d centroid{};
    for (const Vec2d& o : offsets) {
        centroid.x += o.x;
        centroid.y += o.y;
    }
    centroid.x /= double(offsets.size());
    centroid.y /= double(offsets.size());

    double mean_dist = 0.0;
    for (const Vec2d& o : offsets) mean_dist += (o - centroid).norm();
    mean_dist /= double(offsets.size());
    return mean_dist * state.env.cell_size;
}

} // namespace groupflow
