// SPDX-License-Identifier: Apache-2.0
//
// irsnav - radio-map based robot path planning with intelligent reflecting surfaces
// Copyright (C) 2026 The irsnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef IRSNAV_GEOMETRY_HPP
#define IRSNAV_GEOMETRY_HPP

#include "irsnav/errors.hpp"

#include <algorithm>
#include <cmath>
#include <compare>
#include <limits>
#include <ostream>
#include <span>
#include <string>

namespace irsnav {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend Point3 operator+(const Point3 &a, const Point3 &b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Point3 operator-(const Point3 &a, const Point3 &b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Point3 operator*(double s, const Point3 &a) { return {s * a.x, s * a.y, s * a.z}; }
    friend bool operator==(const Point3 &, const Point3 &) = default;

    friend std::ostream &operator<<(std::ostream &os, const Point3 &p) {
        return os << '(' << p.x << ", " << p.y << ", " << p.z << ')';
    }
};

inline double dot(const Point3 &a, const Point3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Point3 cross(const Point3 &a, const Point3 &b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Point3 &a) { return std::sqrt(dot(a, a)); }
inline double distance(const Point3 &a, const Point3 &b) { return norm(a - b); }
inline bool is_finite(const Point3 &p) {
    return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

/// Axis-aligned box standing on the floor: footprint centered at (center_x, center_y),
/// spanning z in [0, height]. Footprint and volume are closed sets.
struct ObstacleBox {
    double center_x = 0.0;
    double center_y = 0.0;
    double size_x = 0.0;
    double size_y = 0.0;
    double height = 0.0;

    double x_min() const { return center_x - 0.5 * size_x; }
    double x_max() const { return center_x + 0.5 * size_x; }
    double y_min() const { return center_y - 0.5 * size_y; }
    double y_max() const { return center_y + 0.5 * size_y; }

    bool footprint_contains(double x, double y) const {
        return x >= x_min() && x <= x_max() && y >= y_min() && y <= y_max();
    }

    friend bool operator==(const ObstacleBox &, const ObstacleBox &) = default;
};

inline void validate(const ObstacleBox &box) {
    if (!(box.size_x > 0.0 && box.size_y > 0.0 && box.height > 0.0))
        throw ParameterError("obstacle sizes and height must be positive");
    if (!std::isfinite(box.center_x) || !std::isfinite(box.center_y) || !std::isfinite(box.size_x) ||
        !std::isfinite(box.size_y) || !std::isfinite(box.height))
        throw ParameterError("obstacle parameters must be finite");
}

/// 1-based cell index, i along x and j along y.
struct CellIndex {
    int i = 1;
    int j = 1;

    friend auto operator<=>(const CellIndex &, const CellIndex &) = default;

    friend std::ostream &operator<<(std::ostream &os, const CellIndex &c) {
        return os << '(' << c.i << ", " << c.j << ')';
    }
};

/// Uniform grid over the horizontal region. q0 is the center of cell (1, 1) at robot height.
struct GridSpec {
    Point3 q0;
    double delta = 1.0;
    int nx = 1; // X
    int ny = 1; // Y

    std::size_t cell_count() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
    double x_min() const { return q0.x - 0.5 * delta; }
    double y_min() const { return q0.y - 0.5 * delta; }
    double x_max() const { return x_min() + nx * delta; }
    double y_max() const { return y_min() + ny * delta; }

    bool contains(const CellIndex &c) const { return c.i >= 1 && c.i <= nx && c.j >= 1 && c.j <= ny; }

    /// Row-major offset of a cell, rows running along i.
    std::size_t offset(const CellIndex &c) const {
        return static_cast<std::size_t>(c.i - 1) * static_cast<std::size_t>(ny) + static_cast<std::size_t>(c.j - 1);
    }
    CellIndex cell_at(std::size_t offset) const {
        return {static_cast<int>(offset / static_cast<std::size_t>(ny)) + 1,
                static_cast<int>(offset % static_cast<std::size_t>(ny)) + 1};
    }

    friend bool operator==(const GridSpec &, const GridSpec &) = default;
};

/// Grid tiling the rectangle [x_min, x_max] x [y_min, y_max] with cells of size delta.
inline GridSpec make_grid(double x_min, double x_max, double y_min, double y_max, double delta, double height) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw ParameterError("cell size must be positive");
    if (!(x_max > x_min) || !(y_max > y_min)) throw ParameterError("region extents must be increasing");
    GridSpec g;
    g.delta = delta;
    g.nx = static_cast<int>(std::lround((x_max - x_min) / delta));
    g.ny = static_cast<int>(std::lround((y_max - y_min) / delta));
    if (g.nx < 1 || g.ny < 1) throw ParameterError("region is smaller than one cell");
    g.q0 = {x_min + 0.5 * delta, y_min + 0.5 * delta, height};
    return g;
}

inline Point3 cell_center(const GridSpec &grid, CellIndex c) {
    if (!grid.contains(c))
        throw BoundsError("cell (" + std::to_string(c.i) + ", " + std::to_string(c.j) + ") outside " +
                          std::to_string(grid.nx) + "x" + std::to_string(grid.ny) + " grid");
    return {grid.q0.x + (c.i - 1) * grid.delta, grid.q0.y + (c.j - 1) * grid.delta, grid.q0.z};
}

namespace detail {

// Index along one axis for offset u = (coord - lower edge) / delta. Points on a shared
// cell boundary go to the lower index.
inline int axis_index(double u, int count) {
    constexpr double snap = 1e-9;
    const double nearest = std::round(u);
    if (std::abs(u - nearest) < snap) u = nearest;
    int idx = static_cast<int>(std::ceil(u));
    return std::clamp(idx, 1, count);
}

} // namespace detail

/// Cell containing the horizontal position of p. Boundary ties go to the lower index.
inline CellIndex cell_of(const GridSpec &grid, const Point3 &p) {
    const double tol = 1e-9 * grid.delta;
    if (!(p.x >= grid.x_min() - tol && p.x <= grid.x_max() + tol && p.y >= grid.y_min() - tol &&
          p.y <= grid.y_max() + tol))
        throw OutOfRegionError("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                               ") lies outside the grid region");
    return {detail::axis_index((p.x - grid.x_min()) / grid.delta, grid.nx),
            detail::axis_index((p.y - grid.y_min()) / grid.delta, grid.ny)};
}

inline bool in_any_footprint(std::span<const ObstacleBox> obstacles, const Point3 &p) {
    return std::any_of(obstacles.begin(), obstacles.end(),
                       [&](const ObstacleBox &b) { return b.footprint_contains(p.x, p.y); });
}

/// Slab test of the open segment a-b against the closed box volume. Grazing contact counts.
inline bool segment_hits_box(const ObstacleBox &box, const Point3 &a, const Point3 &b) {
    const double lo[3] = {box.x_min(), box.y_min(), 0.0};
    const double hi[3] = {box.x_max(), box.y_max(), box.height};
    const double origin[3] = {a.x, a.y, a.z};
    const double dir[3] = {b.x - a.x, b.y - a.y, b.z - a.z};

    double t_enter = -std::numeric_limits<double>::infinity();
    double t_exit = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
        if (dir[k] == 0.0) {
            if (origin[k] < lo[k] || origin[k] > hi[k]) return false;
            continue;
        }
        double t0 = (lo[k] - origin[k]) / dir[k];
        double t1 = (hi[k] - origin[k]) / dir[k];
        if (t0 > t1) std::swap(t0, t1);
        t_enter = std::max(t_enter, t0);
        t_exit = std::min(t_exit, t1);
        if (t_enter > t_exit) return false;
    }
    return t_enter < 1.0 && t_exit > 0.0;
}

inline bool segment_blocked(std::span<const ObstacleBox> obstacles, const Point3 &a, const Point3 &b) {
    return std::any_of(obstacles.begin(), obstacles.end(),
                       [&](const ObstacleBox &box) { return segment_hits_box(box, a, b); });
}

} // namespace irsnav

#endif // IRSNAV_GEOMETRY_HPP
