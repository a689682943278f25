#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "groupflow/error.hpp"

namespace groupflow {

inline constexpr double kSqrt2 = 1.4142135623730951;

struct Vec2i {
    int x = 0;
    int y = 0;

    friend constexpr bool operator==(Vec2i a, Vec2i b) { return a.x == b.x && a.y == b.y; }
    friend constexpr bool operator!=(Vec2i a, Vec2i b) { return !(a == b); }
    friend constexpr Vec2i operator+(Vec2i a, Vec2i b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2i operator-(Vec2i a, Vec2i b) { return {a.x - b.x, a.y - b.y}; }
};

struct Vec2d {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2d operator+(Vec2d a, Vec2d b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2d operator-(Vec2d a, Vec2d b) { return {a.x - b.x, a.y - b.y}; }
    double norm() const { return std::sqrt(x * x + y * y); }
};

inline constexpr Vec2d to_vec2d(Vec2i v) { return {double(v.x), double(v.y)}; }

/// Axis-aligned rectangle in meters, half-open: [x0,x1) x [y0,y1).
struct Rect {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    bool contains(double px, double py) const {
        return px >= x0 && px < x1 && py >= y0 && py < y1;
    }
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
};

enum class CellKind : std::uint8_t {
    Walkable = 0,
    Obstacle = 1,
    Target = 2, // walkable; stepping onto it triggers the exit policy
};

/// The 9-cell Moore neighborhood offsets, own cell included, in a fixed order.
inline constexpr std::array<Vec2i, 9> kMooreOffsets = {{
    {-1, -1}, {0, -1}, {1, -1},
    {-1, 0},  {0, 0},  {1, 0},
    {-1, 1},  {0, 1},  {1, 1},
}};

inline constexpr std::array<Vec2i, 4> kOrthOffsets = {{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

/// Rectangular cell grid with obstacles, targets and spawn areas.
/// Row-major storage, index = y * width + x. Periodic flags make distance and
/// neighborhood computations wrap modulo the grid dimensions.
struct Environment {
    int width = 0;
    int height = 0;
    double cell_size = 0.4; // meters per cell side
    bool periodic_x = false;
    bool periodic_y = false;
    std::vector<CellKind> kinds;
    std::vector<std::int8_t> spawn_ids; // -1 = not a spawn cell

    static Environment make(int w, int h, double cell_size = 0.4) {
        Environment env;
        env.width = w;
        env.height = h;
        env.cell_size = cell_size;
        env.kinds.assign(std::size_t(w) * h, CellKind::Walkable);
        env.spawn_ids.assign(std::size_t(w) * h, -1);
        return env;
    }

    int cell_count() const { return width * height; }
    int index(int x, int y) const { return y * width + x; }
    int index(Vec2i c) const { return c.y * width + c.x; }
    Vec2i cell_of(int idx) const { return {idx % width, idx / width}; }

    bool in_bounds(Vec2i c) const {
        return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
    }

    /// Wraps periodic axes in place. Returns false if the cell falls off a
    /// non-periodic axis.
    bool wrap(Vec2i& c) const {
        if (periodic_x) {
            c.x = ((c.x % width) + width) % width;
        } else if (c.x < 0 || c.x >= width) {
            return false;
        }
        if (periodic_y) {
            c.y = ((c.y % height) + height) % height;
        } else if (c.y < 0 || c.y >= height) {
            return false;
        }
        return true;
    }

    CellKind kind_at(Vec2i c) const { return kinds[std::size_t(index(c))]; }
    void set_kind(Vec2i c, CellKind k) { kinds[std::size_t(index(c))] = k; }

    bool walkable(Vec2i c) const {
        if (!wrap(c)) return false;
        return kind_at(c) != CellKind::Obstacle;
    }

    /// Minimum-image difference a - b in cell units; periodic axes fold into
    /// [-dim/2, dim/2]. Accepts out-of-range coordinates (e.g. predicted
    /// positions beyond the grid edge).
    Vec2d wrap_delta(Vec2d a, Vec2d b) const {
        Vec2d d{a.x - b.x, a.y - b.y};
        if (periodic_x) d.x -= width * std::round(d.x / width);
        if (periodic_y) d.y -= height * std::round(d.y / height);
        return d;
    }

    /// Euclidean minimum-image distance between two points, in meters.
    double distance_m(Vec2d a, Vec2d b) const {
        const Vec2d d = wrap_delta(a, b);
        return std::sqrt(d.x * d.x + d.y * d.y) * cell_size;
    }

    /// Cell center in meters.
    Vec2d center_m(Vec2i c) const {
        return {(c.x + 0.5) * cell_size, (c.y + 0.5) * cell_size};
    }

    void validate() const {
        if (cell_size <= 0.0) throw Error("invalid-geometry", "cell_size must be > 0");
        if (width <= 0 || height <= 0) throw Error("invalid-geometry", "empty grid");
        for (int i = 0; i < cell_count(); ++i) {
            if (spawn_ids[std::size_t(i)] >= 0 && kinds[std::size_t(i)] == CellKind::Obstacle)
                throw Error("invalid-geometry", "spawn cell is not walkable");
        }
    }
};

} // namespace groupflow
