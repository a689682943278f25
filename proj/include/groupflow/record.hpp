#pragma once

#include <cstdint>
#include <vector>

#include "groupflow/scenario.hpp"

namespace groupflow {

/// One agent's state in a per-step snapshot.
struct AgentSample {
    std::int32_t id = -1;
    std::int32_t group = -1; // -1 = single
    Vec2i pos{};             // cell after the step
    Vec2i disp{};            // realized displacement of the step, in cells
    AgentClass cls = AgentClass::Single;
};

/// Full trajectory log of one simulation run: a snapshot of every active
/// agent after every step, plus the exit-crossing events. frames[t] describes
/// the state after step t+1; steps t+1 <= warmup_steps are excluded from all
/// published statistics.
struct RunRecord {
    ScenarioConfig cfg; // config echo
    Environment env;
    long steps_run = 0;
    std::vector<std::vector<AgentSample>> frames;
    std::vector<CrossingEvent> crossings;

    double dt() const { return cfg.time_step_s; }
    double cell_size() const { return env.cell_size; }

    /// Steps with published data: (warmup_steps, steps_run].
    long included_steps() const {
        return steps_run > cfg.warmup_steps ? steps_run - cfg.warmup_steps : 0;
    }

    const std::vector<AgentSample>& frame_of_step(long step) const {
        return frames[std::size_t(step - 1)];
    }
};

namespace detail {

inline constexpr std::uint64_t kRunStream = 0x73746570; // rng stream tag: stepping

} // namespace detail

/// Builds the scenario and advances it cfg.steps times (stopping early once
/// everyone has been absorbed), logging a snapshot after each step.
/// Deterministic: identical cfg (seed included) yields an identical record.
inline RunRecord simulate(const ScenarioConfig& cfg) {
    SimState st = build_scenario(cfg);
    Rng rng(derive_seed(cfg.seed, detail::kRunStream));

    RunRecord rec;
    rec.cfg = cfg;
    rec.env = st.env;
    rec.frames.reserve(std::size_t(cfg.steps));

    for (long t = 0; t < cfg.steps; ++t) {
        if (st.active_count() == 0) break;
        step(st, rng);
        std::vector<AgentSample> frame;
        frame.reserve(st.agents.size());
        for (std::size_t i = 0; i < st.agents.size(); ++i) {
            const Agent& a = st.agents[i];
            if (!a.active) continue;
            AgentSample s;
            s.id = a.id;
            s.group = a.group_id;
            s.pos = a.pos;
            s.disp = st.last_disp[i];
            s.cls = a.cls;
            frame.push_back(s);
        }
        rec.frames.push_back(std::move(frame));
    }
    rec.steps_run = long(rec.frames.size());
    rec.crossings = st.crossings;
    return rec;
}

/// FNV-1a over every sample and crossing, for bit-identity comparisons of
/// whole trajectories without storing both sides.
inline std::uint64_t trajectory_digest(const RunRecord& rec) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(std::uint64_t(rec.steps_run));
    for (const auto& frame : rec.frames) {
        mix(frame.size());
        for (const AgentSample& s : frame) {
            mix(std::uint64_t(std::uint32_t(s.id)));
            mix(std::uint64_t(std::uint32_t(s.group)));
            mix(std::uint64_t(std::uint32_t(s.pos.x)) << 32 | std::uint32_t(s.pos.y));
            mix(std::uint64_t(std::uint32_t(s.disp.x)) << 32 | std::uint32_t(s.disp.y));
            mix(std::uint64_t(s.cls == AgentClass::DyadMember));
        }
    }
    mix(rec.crossings.size());
    for (const CrossingEvent& c : rec.crossings) {
        mix(std::uint64_t(std::uint32_t(c.agent_id)));
        mix(std::uint64_t(c.step));
        mix(std::uint64_t(std::uint32_t(c.cell.x)) << 32 | std::uint32_t(c.cell.y));
    }
    return h;
}

} // namespace groupflow
