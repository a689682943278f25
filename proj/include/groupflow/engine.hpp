#pragma once

#include <algorithm>
#include <cassert>
#include <vector>

#include "groupflow/rng.hpp"
#include "groupflow/utility.hpp"

namespace groupflow {

struct MoveProposal {
    int agent_index = -1;
    Vec2i from{};
    Vec2i to{};
};

/// Parallel-update conflict resolution: when several agents propose the same
/// cell, one wins uniformly at random and the losers keep their current
/// cells. Contested cells are processed in ascending cell index so the rng
/// draw sequence only depends on the proposal set. Returns the final cell
/// per proposal, same order as the input.
inline std::vector<Vec2i> resolve_conflicts(const Environment& env,
                                            const std::vector<MoveProposal>& proposals,
                                            Rng& rng) {
    std::vector<Vec2i> finals(proposals.size());
    for (std::size_t i = 0; i < proposals.size(); ++i) finals[i] = proposals[i].to;

    // (target cell index, proposal index), grouped by cell
    thread_local std::vector<std::pair<int, int>> by_cell;
    by_cell.clear();
    by_cell.reserve(proposals.size());
    for (std::size_t i = 0; i < proposals.size(); ++i)
        by_cell.emplace_back(env.index(proposals[i].to), int(i));
    std::sort(by_cell.begin(), by_cell.end());

    std::size_t begin = 0;
    while (begin < by_cell.size()) {
        std::size_t end = begin + 1;
        while (end < by_cell.size() && by_cell[end].first == by_cell[begin].first) ++end;
        const std::size_t contenders = end - begin;
        if (contenders >= 2) {
            const std::size_t winner = begin + rng.below(contenders);
            for (std::size_t k = begin; k < end; ++k) {
                if (k == winner) continue;
                const int p = by_cell[k].second;
                finals[std::size_t(p)] = proposals[std::size_t(p)].from;
            }
        }
        begin = end;
    }
    return finals;
}

namespace detail {

// Fixed-order scan of the free cells of the rear re-entry strip. Widens the
// strip eastwards if it happens to be full.
inline void free_strip_cells(const SimState& state, std::vector<Vec2i>& out) {
    out.clear();
    int x1 = state.exit_policy.strip_x1;
    while (out.empty() && x1 < state.env.width) {
        for (int y = 0; y < state.env.height; ++y) {
            for (int x = state.exit_policy.strip_x0; x <= x1; ++x) {
                const Vec2i c{x, y};
                if (!state.env.walkable(c)) continue;
                if (state.occupant(c) >= 0) continue;
                out.push_back(c);
            }
        }
        ++x1;
    }
}

inline Vec2i pick_reentry_cell(const SimState& state, const Agent& agent,
                               std::vector<Vec2i>& scratch, Rng& rng) {
    free_strip_cells(state, scratch);
    assert(!scratch.empty() && "no free cell anywhere in the environment");

    // Dyad members rejoin near their partner's latest re-entry point when the
    // partner has crossed before them; everyone else picks a random strip cell.
    if (agent.group_id >= 0) {
        const Group& group = state.groups[std::size_t(agent.group_id)];
        for (int idx : group.members) {
            if (state.agents[std::size_t(idx)].id == agent.id) continue;
            const Vec2i anchor = state.last_reentry[std::size_t(idx)];
            if (anchor.x < 0) continue;
            double best = ScalarField::kUnreachable;
            Vec2i best_cell = scratch.front();
            for (Vec2i c : scratch) {
                const double d = state.env.distance_m(to_vec2d(c), to_vec2d(anchor));
                if (d < best) {
                    best = d;
                    best_cell = c;
                }
            }
            return best_cell;
        }
    }
    return scratch[rng.below(scratch.size())];
}

} // namespace detail

/// Advances the simulation by one step, in place.
///
/// Every active agent computes its effective weights from the group
/// dispersion, samples a move from the softmax over candidate utilities
/// (gated by the desired-speed participation probability), then all moves are
/// committed in parallel with uniform random conflict resolution. Agents that
/// land on a target cell are absorbed or re-injected according to the exit
/// policy. All randomness flows from the single rng passed in.
inline void step(SimState& state, Rng& rng) {
    state.rebuild_occupancy();
    if (state.last_disp.size() != state.agents.size())
        state.last_disp.assign(state.agents.size(), Vec2i{});
    if (state.last_reentry.size() != state.agents.size())
        state.last_reentry.assign(state.agents.size(), Vec2i{-1, -1});

    // Groups split by a recirculating exit re-engage cohesion once their
    // members are back within the gate's contact range.
    for (Group& group : state.groups) {
        if (!group.rejoining) continue;
        if (state.active_members(group) < 2 ||
            group_dispersion(group, state) <= state.weights.delta)
            group.rejoining = false;
    }

    const double vmax = state.v_max();

    thread_local std::vector<Candidate> candidates;
    thread_local std::vector<ComponentValues> components;
    thread_local std::vector<double> utilities;
    thread_local std::vector<double> probs;
    thread_local std::vector<MoveProposal> proposals;
    thread_local std::vector<Vec2i> strip_scratch;
    proposals.clear();

    for (std::size_t i = 0; i < state.agents.size(); ++i) {
        const Agent& agent = state.agents[i];
        if (!agent.active) continue;

        const bool participates = rng.bernoulli(std::min(1.0, agent.desired_speed / vmax));
        Vec2i target = agent.pos;
        if (participates) {
            const bool grouped = state.cohesion_engaged(agent);
            Weights effective = state.weights;
            if (grouped) {
                const double dispersion =
                    group_dispersion(state.groups[std::size_t(agent.group_id)], state);
                effective = balance_weights(state.weights, dispersion);
            }

            enumerate_candidates(state, int(i), candidates);
            component_values_for_candidates(state, int(i), candidates, components);
            utilities.resize(candidates.size());
            for (std::size_t k = 0; k < candidates.size(); ++k)
                utilities[k] = utility(components[k], effective, candidates[k].move_len, grouped);
            softmax(utilities, probs);

            double u = rng.uniform01();
            std::size_t pick = probs.size() - 1;
            for (std::size_t k = 0; k < probs.size(); ++k) {
                if (u < probs[k]) {
                    pick = k;
                    break;
                }
                u -= probs[k];
            }
            target = candidates[pick].cell;
        }
        proposals.push_back({int(i), agent.pos, target});
    }

    const std::vector<Vec2i> finals = resolve_conflicts(state.env, proposals, rng);

    // Commit in two passes: vacate first, then occupy, so a mover's old cell
    // never shadows another mover's new cell.
    for (std::size_t p = 0; p < proposals.size(); ++p) {
        if (finals[p] != proposals[p].from)
            state.occupancy[std::size_t(state.env.index(proposals[p].from))] = -1;
    }
    for (std::size_t p = 0; p < proposals.size(); ++p) {
        Agent& agent = state.agents[std::size_t(proposals[p].agent_index)];
        const Vec2i final_cell = finals[p];
        const Vec2d delta = state.env.wrap_delta(to_vec2d(final_cell), to_vec2d(proposals[p].from));
        const Vec2i disp{int(std::lround(delta.x)), int(std::lround(delta.y))};
        if (final_cell != proposals[p].from) {
            assert(state.occupancy[std::size_t(state.env.index(final_cell))] == -1);
            state.occupancy[std::size_t(state.env.index(final_cell))] = proposals[p].agent_index;
            agent.pos = final_cell;
        }
        agent.vel = disp;
        state.last_disp[std::size_t(proposals[p].agent_index)] = disp;
        if (disp.x != 0 || disp.y != 0) agent.heading = disp;
    }

    // Exit policy, in agent order.
    const long this_step = state.step_count + 1;
    if (state.exit_policy.mode != ExitMode::None) {
        for (std::size_t p = 0; p < proposals.size(); ++p) {
            Agent& agent = state.agents[std::size_t(proposals[p].agent_index)];
            if (!agent.active) continue;
            if (state.env.kind_at(agent.pos) != CellKind::Target) continue;
            state.crossings.push_back({agent.id, this_step, agent.pos});
            state.occupancy[std::size_t(state.env.index(agent.pos))] = -1;
            if (state.exit_policy.mode == ExitMode::Absorb) {
                agent.active = false;
            } else {
                const Vec2i reentry = detail::pick_reentry_cell(state, agent, strip_scratch, rng);
                agent.pos = reentry;
                agent.vel = {0, 0};
                agent.heading = {0, 0};
                state.last_reentry[std::size_t(proposals[p].agent_index)] = reentry;
                state.occupancy[std::size_t(state.env.index(reentry))] = proposals[p].agent_index;
                // The jump across the room splits the group; suspend cohesion
                // until the members find each other again.
                if (agent.group_id >= 0)
                    state.groups[std::size_t(agent.group_id)].rejoining = true;
            }
        }
    }

    state.step_count = this_step;
}

} // namespace groupflow
