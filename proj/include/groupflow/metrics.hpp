#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "groupflow/record.hpp"

namespace groupflow {

namespace detail {

/// Elementary move length in cells; displacements never exceed one cell per
/// axis, so the only lengths are 0, 1 and sqrt(2) (kept exact for
/// reproducibility instead of going through sqrt).
inline double disp_len_cells(Vec2i d) {
    const int manhattan = std::abs(d.x) + std::abs(d.y);
    return manhattan == 2 ? kSqrt2 : double(manhattan);
}

inline bool sample_inside(const Environment& env, const AgentSample& s, const Rect& rect_m) {
    const Vec2d p = env.center_m(s.pos);
    return rect_m.contains(p.x, p.y);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Measurement-area entry/exit events

struct AreaEvent {
    int agent_id = -1;
    long enter_step = 0;
    long exit_step = -1; // last step inside; -1 = still inside at record end
};

struct MeasurementArea {
    Rect rect_m;
    std::vector<AreaEvent> events;
};

/// Pairs up entry/exit events over the whole record (bookkeeping covers all
/// steps, including warmup). An agent can produce several events when it
/// leaves and re-enters, e.g. by wrapping around a torus.
inline MeasurementArea measure_area(const RunRecord& rec, Rect rect_m) {
    MeasurementArea area;
    area.rect_m = rect_m;
    std::vector<long> entered;   // per agent id; -1 = currently outside
    std::vector<long> last_seen; // last step the agent was observed inside
    for (long t = 1; t <= rec.steps_run; ++t) {
        for (const AgentSample& s : rec.frame_of_step(t)) {
            const std::size_t id = std::size_t(s.id);
            if (id >= entered.size()) {
                entered.resize(id + 1, -1);
                last_seen.resize(id + 1, -1);
            }
            const bool inside = detail::sample_inside(rec.env, s, rect_m);
            if (inside) {
                if (entered[id] < 0) entered[id] = t;
                last_seen[id] = t;
            } else if (entered[id] >= 0) {
                area.events.push_back({int(id), entered[id], last_seen[id]});
                entered[id] = -1;
            }
        }
    }
    // Agents absorbed mid-run vanish from later frames: close their events at
    // the last step they were observed inside. Agents still inside at the
    // final step stay flagged as open.
    for (std::size_t id = 0; id < entered.size(); ++id) {
        if (entered[id] < 0) continue;
        if (last_seen[id] == rec.steps_run)
            area.events.push_back({int(id), entered[id], -1}); // open at record end
        else
            area.events.push_back({int(id), entered[id], last_seen[id]});
    }
    return area;
}

// ---------------------------------------------------------------------------
// Fundamental diagram

struct FdPoint {
    long window_start = 0; // first step of the window
    double density = 0;    // p/m^2
    double speed = 0;      // m/s
    double flow = 0;       // p/(m s)
};

/// One (density, speed, flow) point per `window_steps` window of post-warmup
/// steps. Density is the mean instantaneous count over the area; speed the
/// mean realized displacement per second of agents inside; flow their
/// product. Windows without a single inside-sample are skipped.
inline std::vector<FdPoint> fundamental_diagram(const RunRecord& rec, Rect area_m,
                                                long window_steps) {
    if (window_steps <= 0) throw Error("config-value", "window_steps must be > 0");
    std::vector<FdPoint> points;
    const double per_step_speed = rec.cell_size() / rec.dt();
    for (long w0 = rec.cfg.warmup_steps + 1; w0 + window_steps - 1 <= rec.steps_run;
         w0 += window_steps) {
        long count_sum = 0;
        double speed_sum = 0;
        long speed_n = 0;
        for (long t = w0; t < w0 + window_steps; ++t) {
            for (const AgentSample& s : rec.frame_of_step(t)) {
                if (!detail::sample_inside(rec.env, s, area_m)) continue;
                ++count_sum;
                speed_sum += detail::disp_len_cells(s.disp) * per_step_speed;
                ++speed_n;
            }
        }
        if (speed_n == 0) continue;
        FdPoint p;
        p.window_start = w0;
        p.density = (double(count_sum) / double(window_steps)) / area_m.area();
        p.speed = speed_sum / double(speed_n);
        p.flow = p.density * p.speed;
        points.push_back(p);
    }
    return points;
}

// ---------------------------------------------------------------------------
// Class-stratified speeds

/// Sums of per-agent mean speeds, mergeable across replicas.
struct SpeedSums {
    double single_sum = 0;
    long single_n = 0;
    double dyad_sum = 0;
    long dyad_n = 0;

    void add(const SpeedSums& o) {
        single_sum += o.single_sum;
        single_n += o.single_n;
        dyad_sum += o.dyad_sum;
        dyad_n += o.dyad_n;
    }
};

struct ClassSpeeds {
    std::optional<double> singles;
    std::optional<double> dyads;
    std::optional<double> population; // every agent regardless of class
};

inline ClassSpeeds to_class_speeds(const SpeedSums& s) {
    ClassSpeeds out;
    if (s.single_n > 0) out.singles = s.single_sum / double(s.single_n);
    if (s.dyad_n > 0) out.dyads = s.dyad_sum / double(s.dyad_n);
    if (s.single_n + s.dyad_n > 0)
        out.population = (s.single_sum + s.dyad_sum) / double(s.single_n + s.dyad_n);
    return out;
}

/// Per-agent mean speed over post-warmup samples inside the area, summed by
/// class. Agents with no inside-sample contribute nothing.
inline SpeedSums class_speed_sums(const RunRecord& rec, Rect area_m) {
    struct Accum {
        double sum = 0;
        long n = 0;
        AgentClass cls = AgentClass::Single;
    };
    std::vector<Accum> per_agent;
    const double per_step_speed = rec.cell_size() / rec.dt();
    for (long t = rec.cfg.warmup_steps + 1; t <= rec.steps_run; ++t) {
        for (const AgentSample& s : rec.frame_of_step(t)) {
            if (!detail::sample_inside(rec.env, s, area_m)) continue;
            if (std::size_t(s.id) >= per_agent.size()) per_agent.resize(std::size_t(s.id) + 1);
            Accum& a = per_agent[std::size_t(s.id)];
            a.sum += detail::disp_len_cells(s.disp) * per_step_speed;
            a.n += 1;
            a.cls = s.cls;
        }
    }
    SpeedSums sums;
    for (const Accum& a : per_agent) {
        if (a.n == 0) continue;
        const double mean = a.sum / double(a.n);
        if (a.cls == AgentClass::DyadMember) {
            sums.dyad_sum += mean;
            sums.dyad_n += 1;
        } else {
            sums.single_sum += mean;
            sums.single_n += 1;
        }
    }
    return sums;
}

/// Mean of per-agent mean speeds by class; absent classes are omitted.
inline ClassSpeeds speed_by_class(const RunRecord& rec, Rect area_m) {
    return to_class_speeds(class_speed_sums(rec, area_m));
}

// ---------------------------------------------------------------------------
// Dyad relative-position histogram

/// Square 2D histogram with odd bin count so one bin is centered on the
/// origin; cell-quantized offsets (multiples of the cell size) then never
/// land on bin edges.
struct Histogram2D {
    double bin_m = 0.2;
    int bins = 21;
    std::vector<double> mass; // row-major [iy * bins + ix]; counts until normalize()

    static Histogram2D make(double bin_m, int bins) {
        Histogram2D h;
        h.bin_m = bin_m;
        h.bins = bins;
        h.mass.assign(std::size_t(bins) * std::size_t(bins), 0.0);
        return h;
    }

    double min_m() const { return -0.5 * bins * bin_m; }

    double& at(int ix, int iy) { return mass[std::size_t(iy) * std::size_t(bins) + std::size_t(ix)]; }
    double at(int ix, int iy) const {
        return mass[std::size_t(iy) * std::size_t(bins) + std::size_t(ix)];
    }

    /// Adds one sample; offsets outside the covered square are dropped.
    bool accumulate(double dx_m, double dy_m) {
        const int ix = int(std::floor((dx_m - min_m()) / bin_m));
        const int iy = int(std::floor((dy_m - min_m()) / bin_m));
        if (ix < 0 || ix >= bins || iy < 0 || iy >= bins) return false;
        at(ix, iy) += 1.0;
        return true;
    }

    double total() const {
        double t = 0;
        for (double v : mass) t += v;
        return t;
    }

    void normalize() {
        const double t = total();
        if (t <= 0) return;
        for (double& v : mass) v /= t;
    }

    Vec2d center(int ix, int iy) const {
        return {min_m() + (ix + 0.5) * bin_m, min_m() + (iy + 0.5) * bin_m};
    }

    /// Highest-mass bin; ties resolved by scan order (lowest iy, then ix).
    std::pair<int, int> mode() const {
        int best_ix = 0, best_iy = 0;
        double best = -1.0;
        for (int iy = 0; iy < bins; ++iy)
            for (int ix = 0; ix < bins; ++ix)
                if (at(ix, iy) > best) {
                    best = at(ix, iy);
                    best_ix = ix;
                    best_iy = iy;
                }
        return {best_ix, best_iy};
    }

    void add(const Histogram2D& o) {
        if (o.bins != bins || o.bin_m != bin_m)
            throw Error("histogram-mismatch", "cannot merge histograms with different binning");
        for (std::size_t i = 0; i < mass.size(); ++i) mass[i] += o.mass[i];
    }
};

/// Accumulates raw partner-offset counts into `hist` (offsets in meters, +x =
/// flow axis; both orderings of each pair are counted so the histogram is
/// point-symmetric). Returns the number of samples binned. Both partners must
/// be inside the area at the same post-warmup step to contribute.
inline long relative_position_counts(const RunRecord& rec, Rect area_m, Histogram2D& hist) {
    long added = 0;
    std::vector<int> seen_at;    // per group id: last step index observed
    std::vector<AgentSample> first_member;
    for (long t = rec.cfg.warmup_steps + 1; t <= rec.steps_run; ++t) {
        for (const AgentSample& s : rec.frame_of_step(t)) {
            if (s.group < 0) continue;
            if (!detail::sample_inside(rec.env, s, area_m)) continue;
            const std::size_t g = std::size_t(s.group);
            if (g >= seen_at.size()) {
                seen_at.resize(g + 1, -1);
                first_member.resize(g + 1);
            }
            if (seen_at[g] == int(t)) {
                const AgentSample& a = first_member[g];
                const Vec2d off =
                    rec.env.wrap_delta(to_vec2d(s.pos), to_vec2d(a.pos)); // cells, min-image
                const double dx = off.x * rec.cell_size();
                const double dy = off.y * rec.cell_size();
                if (hist.accumulate(dx, dy)) ++added;
                if (hist.accumulate(-dx, -dy)) ++added;
            } else {
                seen_at[g] = int(t);
                first_member[g] = s;
            }
        }
    }
    return added;
}

/// Normalized PMF of dyad partner offsets in the flow frame (+x =
/// longitudinal). 0.2 m bins spanning about [-2, 2] m on both axes.
inline Histogram2D relative_position_histogram(const RunRecord& rec, Rect area_m,
                                               double bin_m = 0.2, int bins = 21) {
    Histogram2D hist = Histogram2D::make(bin_m, bins);
    const long added = relative_position_counts(rec, area_m, hist);
    if (added == 0)
        throw Error("no-dyads", "record holds no dyad pair inside the measurement area");
    hist.normalize();
    return hist;
}

// ---------------------------------------------------------------------------
// Cumulative mean density map

/// Per-cell occupancy frequency over post-warmup steps, in p/m^2. A cell
/// occupied every included step scores 1/cell_area (6.25 p/m^2 at 0.4 m).
inline std::vector<double> cumulative_mean_density(const RunRecord& rec) {
    std::vector<double> grid(std::size_t(rec.env.cell_count()), 0.0);
    const long included = rec.included_steps();
    if (included == 0) return grid;
    for (long t = rec.cfg.warmup_steps + 1; t <= rec.steps_run; ++t)
        for (const AgentSample& s : rec.frame_of_step(t))
            grid[std::size_t(rec.env.index(s.pos))] += 1.0;
    const double cell_area = rec.cell_size() * rec.cell_size();
    for (double& v : grid) v /= double(included) * cell_area;
    return grid;
}

// ---------------------------------------------------------------------------
// Bottleneck outflow

struct ExitLine {
    double width_m = 0;  // opening width the specific flow is normalized by
    long start_step = 0; // window (start, end] in steps
    long end_step = 0;
};

struct FlowStats {
    double crossings = 0; // N
    double J = 0;         // p/s
    double specific = 0;  // p/(m s)
};

/// J = N / t over the steady-state window; specific flow divides by the
/// opening width.
inline FlowStats bottleneck_flow(const RunRecord& rec, const ExitLine& line) {
    if (line.end_step <= line.start_step)
        throw Error("empty-window", "bottleneck flow window has no steps");
    if (line.width_m <= 0) throw Error("config-value", "exit line width must be > 0");
    long n = 0;
    for (const CrossingEvent& c : rec.crossings)
        if (c.step > line.start_step && c.step <= line.end_step) ++n;
    const double t_seconds = double(line.end_step - line.start_step) * rec.dt();
    FlowStats out;
    out.crossings = double(n);
    out.J = double(n) / t_seconds;
    out.specific = out.J / line.width_m;
    return out;
}

} // namespace groupflow
