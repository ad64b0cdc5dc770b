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

#ifndef IRSNAV_SCENARIO_HPP
#define IRSNAV_SCENARIO_HPP

#include "irsnav/errors.hpp"
#include "irsnav/geometry.hpp"
#include "irsnav/units.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace irsnav {

/// IRS panel made of nx * nz sub-surfaces, each a block of sub_nx * sub_nz elements
/// sharing one phase shift. "x" runs horizontally along the panel, "z" vertically.
struct IrsLayout {
    int nx = 10;
    int nz = 6;
    int sub_nx = 5;
    int sub_nz = 4;
    double element_spacing = 0.0; // meters

    int subsurface_count() const { return nx * nz; }
    int elements_per_subsurface() const { return sub_nx * sub_nz; }
    int element_count() const { return subsurface_count() * elements_per_subsurface(); }

    friend bool operator==(const IrsLayout &, const IrsLayout &) = default;
};

inline void validate(const IrsLayout &layout) {
    if (layout.nx < 1 || layout.nz < 1 || layout.sub_nx < 1 || layout.sub_nz < 1)
        throw ParameterError("IRS layout counts must be at least 1");
    if (!(layout.element_spacing > 0.0) || !std::isfinite(layout.element_spacing))
        throw ParameterError("IRS element spacing must be positive");
}

struct Scenario {
    Point3 ap{0.0, 10.0, 2.0};
    Point3 irs{0.0, -10.0, 2.0};
    Point3 irs_normal{0.0, 1.0, 0.0}; // points into the room
    std::vector<ObstacleBox> obstacles;
    GridSpec grid;
    Point3 start;
    Point3 goal;
    double v_max = 1.0;         // m/s
    double carrier_hz = 2.0e9;  // Hz
    double rician_k = 1.0;      // linear, applied to every unblocked link
    IrsLayout irs_layout;
    double gamma_bar_db = -63.0;

    double robot_height() const { return grid.q0.z; }
    double wavelength() const { return irsnav::wavelength(carrier_hz); }
};

inline bool in_obstacle_footprint(const Scenario &scene, const Point3 &p) {
    return in_any_footprint(scene.obstacles, p);
}

inline bool segment_blocked(const Scenario &scene, const Point3 &a, const Point3 &b) {
    return segment_blocked(scene.obstacles, a, b);
}

inline void validate(const Scenario &scene) {
    for (const Point3 *p : {&scene.ap, &scene.irs, &scene.irs_normal, &scene.start, &scene.goal})
        if (!is_finite(*p)) throw ParameterError("scenario coordinates must be finite");
    if (norm(scene.irs_normal) == 0.0) throw ParameterError("IRS normal must be non-zero");
    for (const auto &box : scene.obstacles) validate(box);
    if (!(scene.grid.delta > 0.0) || scene.grid.nx < 1 || scene.grid.ny < 1)
        throw ParameterError("grid must have positive cell size and at least one cell");
    if (!(scene.v_max > 0.0)) throw ParameterError("maximum speed must be positive");
    if (!(scene.carrier_hz > 0.0)) throw ParameterError("carrier frequency must be positive");
    if (!(scene.rician_k >= 0.0)) throw ParameterError("Rician factor must be non-negative");
    validate(scene.irs_layout);
    if (in_obstacle_footprint(scene, scene.start)) throw InfeasibleLocationError("start lies inside an obstacle");
    if (in_obstacle_footprint(scene, scene.goal)) throw InfeasibleLocationError("goal lies inside an obstacle");
    cell_of(scene.grid, scene.start);
    cell_of(scene.grid, scene.goal);
}

/// The 20 m x 20 m indoor-factory scene: AP and IRS on opposite walls, five 4x4x1.3 m
/// obstacles, 0.5 m cells, 3 dB Rician factor, 2 GHz carrier, 1200 IRS elements.
inline Scenario factory_scenario() {
    Scenario s;
    s.ap = {0.0, 10.0, 2.0};
    s.irs = {0.0, -10.0, 2.0};
    s.irs_normal = {0.0, 1.0, 0.0};
    for (auto [cx, cy] : {std::pair{-5.0, -5.0}, {5.0, -5.0}, {0.0, 0.0}, {-3.0, 4.0}, {3.0, 4.0}})
        s.obstacles.push_back({cx, cy, 4.0, 4.0, 1.3});
    s.grid = make_grid(-10.0, 10.0, -10.0, 10.0, 0.5, 1.0);
    s.start = {-10.0, 0.0, 1.0};
    s.goal = {10.0, 0.0, 1.0};
    s.v_max = 1.0;
    s.carrier_hz = 2.0e9;
    s.rician_k = std::pow(10.0, 0.3);
    s.irs_layout = {10, 6, 5, 4, 0.5 * irsnav::wavelength(2.0e9)};
    s.gamma_bar_db = -63.0;
    return s;
}

/// Returns a copy with the IRS grown (or shrunk) vertically to hold `elements` elements.
/// `elements` must be a multiple of nx * elements-per-subsurface.
inline Scenario with_element_count(Scenario scene, int elements) {
    const int column = scene.irs_layout.nx * scene.irs_layout.elements_per_subsurface();
    if (elements < column || elements % column != 0)
        throw ParameterError("element count " + std::to_string(elements) + " is not a positive multiple of " +
                             std::to_string(column));
    scene.irs_layout.nz = elements / column;
    return scene;
}

namespace detail {

inline void append_hex(std::string &out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a;", v);
    out += buf;
}

inline std::uint64_t fnv1a(const std::string &bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace detail

/// Canonical byte string of everything the radio map depends on. Endpoints and motion
/// settings are excluded. Without the IRS the map is the direct path loss, so the panel
/// and the Rician factor drop out too.
inline std::string map_inputs(const Scenario &s, bool include_irs = true) {
    std::string out;
    for (const Point3 *p : {&s.ap, &s.grid.q0})
        for (double v : {p->x, p->y, p->z}) detail::append_hex(out, v);
    detail::append_hex(out, s.grid.delta);
    out += std::to_string(s.grid.nx) + ";" + std::to_string(s.grid.ny) + ";";
    for (const auto &b : s.obstacles)
        for (double v : {b.center_x, b.center_y, b.size_x, b.size_y, b.height}) detail::append_hex(out, v);
    detail::append_hex(out, s.carrier_hz);
    if (!include_irs) return out;
    for (const Point3 *p : {&s.irs, &s.irs_normal})
        for (double v : {p->x, p->y, p->z}) detail::append_hex(out, v);
    detail::append_hex(out, s.rician_k);
    const auto &l = s.irs_layout;
    out += std::to_string(l.nx) + ";" + std::to_string(l.nz) + ";" + std::to_string(l.sub_nx) + ";" +
           std::to_string(l.sub_nz) + ";";
    detail::append_hex(out, l.element_spacing);
    return out;
}

} // namespace irsnav

#endif // IRSNAV_SCENARIO_HPP
