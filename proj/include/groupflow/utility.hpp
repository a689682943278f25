#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "groupflow/social.hpp"
#include "groupflow/state.hpp"

namespace groupflow {

/// One move option of an agent: a walkable, unoccupied Moore cell (the own
/// cell always qualifies). move_len is the utility divisor: 1 for stay and
/// orthogonal moves, sqrt(2) for diagonal ones.
struct Candidate {
    Vec2i cell{};
    Vec2i offset{};
    double move_len = 1.0;
};

struct ComponentValues {
    double g = 0.0;  // goal attraction
    double ob = 0.0; // obstacle repulsion
    double s = 0.0;  // distance keeping from other pedestrians
    double c = 0.0;  // group cohesion
    double d = 0.0;  // direction inertia
    double ov = 0.0; // counter-flow overlap; identically 0 in uni-directional runs
};

/// Fills `out` with the agent's move candidates: the own cell plus every
/// walkable Moore neighbor not occupied by another agent. Occupied cells are
/// removed outright rather than penalized, so e^U never has to absorb a
/// -infinity.
inline void enumerate_candidates(const SimState& state, int agent_index,
                                 std::vector<Candidate>& out) {
    out.clear();
    const Agent& agent = state.agents[std::size_t(agent_index)];
    for (Vec2i off : kMooreOffsets) {
        Vec2i cell = agent.pos + off;
        if (!state.env.wrap(cell)) continue;
        if (state.env.kind_at(cell) == CellKind::Obstacle) continue;
        if (state.occupied_by_other(cell, agent_index)) continue;
        const bool diagonal = off.x != 0 && off.y != 0;
        out.push_back({cell, off, diagonal ? kSqrt2 : 1.0});
    }
}

namespace detail {

// Obstacle repulsion from the proximity field: -1 when the cell is Moore-
// adjacent to an obstacle, rising linearly to 0 at the repulsion radius.
inline double obstacle_component(const SimState& state, Vec2i cell) {
    const double p = state.obstacle_proximity.at(cell);
    if (ScalarField::unreachable(p)) return 0.0;
    const double adjacent = kSqrt2 * state.env.cell_size;
    const double radius = state.obstacle_radius_m;
    if (p <= adjacent + 1e-9) return -1.0;
    if (p >= radius) return 0.0;
    return -(radius - p) / (radius - adjacent);
}

// Proxemics: -1 on a cell occupied by a non-group agent, -0.5 when
// orthogonally adjacent to one, 0 otherwise.
inline double separation_component(const SimState& state, Vec2i cell, int agent_index,
                                   int group_id) {
    if (state.occupied_by_non_group(cell, agent_index, group_id)) return -1.0;
    for (Vec2i off : kOrthOffsets) {
        Vec2i nb = cell + off;
        if (!state.env.wrap(nb)) continue;
        if (state.occupied_by_non_group(nb, agent_index, group_id)) return -0.5;
    }
    return 0.0;
}

// Direction inertia: +1 when the move repeats the last nonzero direction,
// -1 when it reverses it, 0 for everything else (including stay and agents
// with no movement history).
inline double inertia_component(const Agent& agent, Vec2i offset) {
    if (offset.x == 0 && offset.y == 0) return 0.0;
    const Vec2i h = agent.heading;
    if (h.x == 0 && h.y == 0) return 0.0;
    if (offset == h) return 1.0;
    if (offset.x == -h.x && offset.y == -h.y) return -1.0;
    return 0.0;
}

// Goal attraction for one cell given the neighborhood's finite pseudo-
// distance range: the minimum-distance cell scores +1, the maximum -1.
inline double goal_component(double pseudo, double dmin, double dmax) {
    if (ScalarField::unreachable(pseudo)) return -1.0;
    const double span = dmax - dmin;
    if (!(span > 1e-12)) return 0.0; // flat neighborhood (or no finite range)
    return (dmax + dmin - 2.0 * pseudo) / span;
}

} // namespace detail

/// Per-candidate components for a whole candidate set in one pass. The goal
/// term is rescaled over this candidate set's pseudo-distance range. Partner
/// predictions for the cohesion term are collected once, not per candidate;
/// the arithmetic matches cohesion_value() exactly.
inline void component_values_for_candidates(const SimState& state, int agent_index,
                                            const std::vector<Candidate>& candidates,
                                            std::vector<ComponentValues>& out) {
    out.resize(candidates.size());
    const Agent& agent = state.agents[std::size_t(agent_index)];

    double dmin = ScalarField::kUnreachable;
    double dmax = -ScalarField::kUnreachable;
    thread_local std::vector<double> pseudo;
    pseudo.resize(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        pseudo[i] = state.goal.pseudo_distance(state.env, agent.pos, candidates[i].cell);
        if (!ScalarField::unreachable(pseudo[i])) {
            dmin = std::min(dmin, pseudo[i]);
            dmax = std::max(dmax, pseudo[i]);
        }
    }
    if (!(dmax >= dmin)) { dmin = 0.0; dmax = 0.0; } // no finite distance at all

    const bool grouped = state.cohesion_engaged(agent);

    struct PartnerTerm {
        Vec2d predicted;
        double own_distance; // ||x_a - predicted||
    };
    thread_local std::vector<PartnerTerm> partners;
    if (grouped) {
        partners.clear();
        const Vec2d own = to_vec2d(agent.pos);
        for (int idx : state.groups[std::size_t(agent.group_id)].members) {
            const Agent& partner = state.agents[std::size_t(idx)];
            if (partner.id == agent.id || !partner.active) continue;
            const Vec2d predicted = predict_position(partner);
            partners.push_back({predicted, state.env.distance_m(own, predicted)});
        }
    }

    for (std::size_t i = 0; i < candidates.size(); ++i) {
        ComponentValues& v = out[i];
        v.g = detail::goal_component(pseudo[i], dmin, dmax);
        v.ob = detail::obstacle_component(state, candidates[i].cell);
        v.s = detail::separation_component(state, candidates[i].cell, agent_index, agent.group_id);
        if (grouped && !partners.empty()) {
            const Vec2d cand = to_vec2d(candidates[i].cell);
            double sum = 0.0;
            for (const PartnerTerm& p : partners)
                sum += p.own_distance - state.env.distance_m(cand, p.predicted);
            const double mean = sum / double(partners.size());
            v.c = std::clamp(mean / (kSqrt2 * state.env.cell_size), -1.0, 1.0);
        } else {
            v.c = 0.0;
        }
        v.d = detail::inertia_component(agent, candidates[i].offset);
        v.ov = 0.0;
    }
}

/// Components of a single Moore cell (own cell included). The goal rescale
/// uses the agent's actual candidate set; cells outside it (e.g. occupied
/// ones, queried for the proxemics rule) still get consistent values, with g
/// clamped into [-1,1].
inline ComponentValues component_values(Vec2i c, const Agent& agent, const SimState& state) {
    const auto it = std::find_if(state.agents.begin(), state.agents.end(),
                                 [&](const Agent& a) { return a.id == agent.id; });
    const int agent_index = int(it - state.agents.begin());

    std::vector<Candidate> candidates;
    enumerate_candidates(state, agent_index, candidates);

    double dmin = ScalarField::kUnreachable;
    double dmax = -ScalarField::kUnreachable;
    for (const Candidate& cand : candidates) {
        const double p = state.goal.pseudo_distance(state.env, agent.pos, cand.cell);
        if (!ScalarField::unreachable(p)) {
            dmin = std::min(dmin, p);
            dmax = std::max(dmax, p);
        }
    }
    if (!(dmax >= dmin)) { dmin = 0.0; dmax = 0.0; }

    const bool grouped = state.cohesion_engaged(agent);

    ComponentValues v;
    const double pseudo = state.goal.pseudo_distance(state.env, agent.pos, c);
    v.g = std::clamp(detail::goal_component(pseudo, dmin, dmax), -1.0, 1.0);
    v.ob = detail::obstacle_component(state, c);
    v.s = detail::separation_component(state, c, agent_index, agent.group_id);
    v.c = grouped ? cohesion_value(c, agent, state) : 0.0;
    v.d = detail::inertia_component(agent, c - agent.pos);
    v.ov = 0.0;
    return v;
}

/// Weighted aggregation of the component vector, divided by the elementary
/// move length. Ungrouped agents contribute no cohesion term.
inline double utility(const ComponentValues& v, const Weights& w, double move_len, bool grouped) {
    const double num = w.kappa_g * v.g + w.kappa_ob * v.ob + w.kappa_s * v.s +
                       (grouped ? w.kappa_c * v.c : 0.0) + w.kappa_d * v.d + w.kappa_ov * v.ov;
    return num / move_len;
}

/// Convenience single-cell form mirroring the aggregation contract.
inline double utility(Vec2i c, const Agent& agent, const SimState& state,
                      const Weights& effective) {
    const ComponentValues v = component_values(c, agent, state);
    const Vec2i off = c - agent.pos;
    const bool diagonal = off.x != 0 && off.y != 0;
    const bool grouped = state.cohesion_engaged(agent);
    return utility(v, effective, diagonal ? kSqrt2 : 1.0, grouped);
}

/// Softmax over utilities: P(c) = e^{U(c)} / sum e^{U(c')}. The max is
/// subtracted before exponentiation, which also makes the distribution
/// exactly invariant under a constant shift of all utilities.
inline void softmax(const std::vector<double>& utilities, std::vector<double>& probs) {
    probs.resize(utilities.size());
    double umax = -ScalarField::kUnreachable;
    for (double u : utilities) umax = std::max(umax, u);
    double total = 0.0;
    for (std::size_t i = 0; i < utilities.size(); ++i) {
        probs[i] = std::exp(utilities[i] - umax);
        total += probs[i];
    }
    for (double& p : probs) p /= total;
}

struct MoveOption {
    Vec2i cell{};
    double probability = 0.0;
};

/// The full move distribution of one agent over its candidate cells.
/// Probabilities are strictly positive and sum to 1.
inline std::vector<MoveOption> move_distribution(const Agent& agent, const SimState& state) {
    const auto it = std::find_if(state.agents.begin(), state.agents.end(),
                                 [&](const Agent& a) { return a.id == agent.id; });
    const int agent_index = int(it - state.agents.begin());

    std::vector<Candidate> candidates;
    enumerate_candidates(state, agent_index, candidates);
    std::vector<ComponentValues> components;
    component_values_for_candidates(state, agent_index, candidates, components);

    const bool grouped = state.cohesion_engaged(agent);

    double dispersion = 0.0;
    Weights effective = state.weights;
    if (grouped) {
        dispersion = group_dispersion(state.groups[std::size_t(agent.group_id)], state);
        effective = balance_weights(state.weights, dispersion);
    }

    std::vector<double> utilities(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i)
        utilities[i] = utility(components[i], effective, candidates[i].move_len, grouped);

    std::vector<double> probs;
    softmax(utilities, probs);

    std::vector<MoveOption> result(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i)
        result[i] = {candidates[i].cell, probs[i]};
    return result;
}

} // namespace groupflow
