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

#ifndef IRSNAV_CONFIG_HPP
#define IRSNAV_CONFIG_HPP

#include "irsnav/detail/text.hpp"
#include "irsnav/errors.hpp"
#include "irsnav/geometry.hpp"
#include "irsnav/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace irsnav {

// Scenario files are "key = value" lines; '#' starts a comment. Lengths in meters,
// frequency in Hz, gains in dB unless the key says otherwise. Vectors are comma separated.
//
//   room                    x_min, x_max, y_min, y_max     required
//   cell_size               delta                          required
//   robot_height            H0                             required
//   ap                      x, y, z                        required
//   irs                     x, y, z  (panel center)        required
//   irs_normal              x, y, z                        default 0, 1, 0
//   carrier_frequency       Hz                             required
//   rician_factor_db        dB      } exactly one          required
//   rician_factor           linear  }
//   irs_subsurfaces         nx, nz                         required
//   irs_subsurface_elements sub_nx, sub_nz                 required
//   irs_element_spacing     meters                         default half wavelength
//   start, goal             x, y, z (z = robot_height)     required
//   max_speed               m/s                            default 1
//   gamma_bar_db            dB                             default -63
//   obstacle                cx, cy, size_x, size_y, height repeatable

namespace detail {

struct ConfigEntry {
    std::string value;
    std::size_t line = 0;
};

class ConfigReader {
public:
    explicit ConfigReader(const std::string &text) {
        const auto lines = split_lines(text);
        for (std::size_t k = 0; k < lines.size(); ++k) {
            std::string line = lines[k];
            if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value'", k + 1);
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (!known_keys().contains(key)) throw ConfigError(key, "unknown key", k + 1);
            if (key != "obstacle" && entries_.contains(key)) throw ConfigError(key, "given more than once", k + 1);
            entries_.emplace(key, ConfigEntry{value, k + 1});
        }
    }

    bool has(const std::string &key) const { return entries_.contains(key); }

    std::vector<ConfigEntry> all(const std::string &key) const {
        std::vector<ConfigEntry> out;
        auto [lo, hi] = entries_.equal_range(key);
        for (auto it = lo; it != hi; ++it) out.push_back(it->second);
        return out;
    }

    const ConfigEntry &get(const std::string &key) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) throw ConfigError(key, "missing required key");
        return it->second;
    }

    std::vector<double> numbers(const std::string &key, const ConfigEntry &e, std::size_t count,
                                const std::vector<std::string> &names) const {
        const auto parts = split(e.value, ',');
        if (parts.size() < count)
            throw ConfigError(key, "missing " + names[parts.size()] + " (expected " + join(names) + ")", e.line);
        if (parts.size() > count) throw ConfigError(key, "too many values (expected " + join(names) + ")", e.line);
        std::vector<double> out;
        for (std::size_t k = 0; k < count; ++k) {
            try {
                out.push_back(parse_double(parts[k], e.line, 0));
            } catch (const ParseError &) {
                throw ConfigError(key, names[k] + " is not a number: '" + parts[k] + "'", e.line);
            }
            if (!std::isfinite(out.back())) throw ConfigError(key, names[k] + " must be finite", e.line);
        }
        return out;
    }

    std::vector<double> numbers(const std::string &key, std::size_t count, const std::vector<std::string> &names) const {
        return numbers(key, get(key), count, names);
    }

    double number(const std::string &key) const { return numbers(key, 1, {key})[0]; }

    int integer(const std::string &key, const ConfigEntry &e, double v) const {
        if (v != std::floor(v) || v < 1 || v > 1e6) throw ConfigError(key, "expected a positive integer", e.line);
        return static_cast<int>(v);
    }

private:
    static const std::set<std::string> &known_keys() {
        static const std::set<std::string> keys{
            "room", "cell_size", "robot_height", "ap", "irs", "irs_normal", "carrier_frequency", "rician_factor_db",
            "rician_factor", "irs_subsurfaces", "irs_subsurface_elements", "irs_element_spacing", "start", "goal",
            "max_speed", "gamma_bar_db", "obstacle"};
        return keys;
    }

    static std::string join(const std::vector<std::string> &names) {
        std::string out;
        for (const auto &n : names) out += (out.empty() ? "" : ", ") + n;
        return out;
    }

    std::multimap<std::string, ConfigEntry> entries_;
};

inline Point3 to_point(const std::vector<double> &v) { return {v[0], v[1], v[2]}; }

} // namespace detail

inline Scenario parse_scenario(const std::string &text) {
    const detail::ConfigReader cfg(text);
    Scenario s;
    s.obstacles.clear();

    const double height = cfg.number("robot_height");
    const auto room = cfg.numbers("room", 4, {"x_min", "x_max", "y_min", "y_max"});
    const double delta = cfg.number("cell_size");
    if (!(delta > 0.0)) throw ConfigError("cell_size", "must be positive", cfg.get("cell_size").line);
    try {
        s.grid = make_grid(room[0], room[1], room[2], room[3], delta, height);
    } catch (const ParameterError &e) {
        throw ConfigError("room", e.what(), cfg.get("room").line);
    }

    const std::vector<std::string> xyz{"x", "y", "z"};
    s.ap = detail::to_point(cfg.numbers("ap", 3, xyz));
    s.irs = detail::to_point(cfg.numbers("irs", 3, xyz));
    s.irs_normal = cfg.has("irs_normal") ? detail::to_point(cfg.numbers("irs_normal", 3, xyz)) : Point3{0.0, 1.0, 0.0};
    if (norm(s.irs_normal) == 0.0) throw ConfigError("irs_normal", "must be non-zero", cfg.get("irs_normal").line);

    s.carrier_hz = cfg.number("carrier_frequency");
    if (!(s.carrier_hz > 0.0)) throw ConfigError("carrier_frequency", "must be positive", cfg.get("carrier_frequency").line);

    if (cfg.has("rician_factor_db") == cfg.has("rician_factor"))
        throw ConfigError("rician_factor_db", "give exactly one of rician_factor_db or rician_factor");
    if (cfg.has("rician_factor_db")) {
        s.rician_k = std::pow(10.0, cfg.number("rician_factor_db") / 10.0);
    } else {
        s.rician_k = cfg.number("rician_factor");
        if (s.rician_k < 0.0) throw ConfigError("rician_factor", "must be non-negative", cfg.get("rician_factor").line);
    }

    const auto &subs_entry = cfg.get("irs_subsurfaces");
    const auto subs = cfg.numbers("irs_subsurfaces", 2, {"nx", "nz"});
    const auto &elems_entry = cfg.get("irs_subsurface_elements");
    const auto elems = cfg.numbers("irs_subsurface_elements", 2, {"sub_nx", "sub_nz"});
    s.irs_layout.nx = cfg.integer("irs_subsurfaces", subs_entry, subs[0]);
    s.irs_layout.nz = cfg.integer("irs_subsurfaces", subs_entry, subs[1]);
    s.irs_layout.sub_nx = cfg.integer("irs_subsurface_elements", elems_entry, elems[0]);
    s.irs_layout.sub_nz = cfg.integer("irs_subsurface_elements", elems_entry, elems[1]);
    s.irs_layout.element_spacing = cfg.has("irs_element_spacing") ? cfg.number("irs_element_spacing") : 0.5 * s.wavelength();
    if (!(s.irs_layout.element_spacing > 0.0))
        throw ConfigError("irs_element_spacing", "must be positive", cfg.get("irs_element_spacing").line);

    for (const auto &e : cfg.all("obstacle")) {
        const auto v = cfg.numbers("obstacle", e, 5, {"center_x", "center_y", "size_x", "size_y", "height"});
        ObstacleBox box{v[0], v[1], v[2], v[3], v[4]};
        if (!(box.size_x > 0.0 && box.size_y > 0.0 && box.height > 0.0))
            throw ConfigError("obstacle", "sizes and height must be positive", e.line);
        s.obstacles.push_back(box);
    }

    for (const char *key : {"start", "goal"}) {
        const Point3 p = detail::to_point(cfg.numbers(key, 3, xyz));
        const std::size_t line = cfg.get(key).line;
        if (p.z != height) throw ConfigError(key, "z must equal robot_height", line);
        if (in_any_footprint(s.obstacles, p)) throw ConfigError(key, "lies inside an obstacle footprint", line);
        try {
            cell_of(s.grid, p);
        } catch (const OutOfRegionError &) {
            throw ConfigError(key, "lies outside the room", line);
        }
        (std::string(key) == "start" ? s.start : s.goal) = p;
    }

    s.v_max = cfg.has("max_speed") ? cfg.number("max_speed") : 1.0;
    if (!(s.v_max > 0.0)) throw ConfigError("max_speed", "must be positive", cfg.get("max_speed").line);
    s.gamma_bar_db = cfg.has("gamma_bar_db") ? cfg.number("gamma_bar_db") : -63.0;
    return s;
}

inline Scenario load_scenario(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

/// Writes a scenario in the configuration format; parse_scenario reads it back exactly.
inline std::string format_scenario(const Scenario &s) {
    using detail::format_double;
    auto vec = [](std::initializer_list<double> v) {
        std::string out;
        for (double x : v) out += (out.empty() ? "" : ", ") + format_double(x);
        return out;
    };
    std::ostringstream os;
    os << "room = " << vec({s.grid.x_min(), s.grid.x_max(), s.grid.y_min(), s.grid.y_max()}) << '\n'
       << "cell_size = " << format_double(s.grid.delta) << '\n'
       << "robot_height = " << format_double(s.robot_height()) << '\n'
       << "ap = " << vec({s.ap.x, s.ap.y, s.ap.z}) << '\n'
       << "irs = " << vec({s.irs.x, s.irs.y, s.irs.z}) << '\n'
       << "irs_normal = " << vec({s.irs_normal.x, s.irs_normal.y, s.irs_normal.z}) << '\n'
       << "carrier_frequency = " << format_double(s.carrier_hz) << '\n'
       << "rician_factor = " << format_double(s.rician_k) << '\n'
       << "irs_subsurfaces = " << s.irs_layout.nx << ", " << s.irs_layout.nz << '\n'
       << "irs_subsurface_elements = " << s.irs_layout.sub_nx << ", " << s.irs_layout.sub_nz << '\n'
       << "irs_element_spacing = " << format_double(s.irs_layout.element_spacing) << '\n'
       << "start = " << vec({s.start.x, s.start.y, s.start.z}) << '\n'
       << "goal = " << vec({s.goal.x, s.goal.y, s.goal.z}) << '\n'
       << "max_speed = " << format_double(s.v_max) << '\n'
       << "gamma_bar_db = " << format_double(s.gamma_bar_db) << '\n';
    for (const auto &b : s.obstacles)
        os << "obstacle = " << vec({b.center_x, b.center_y, b.size_x, b.size_y, b.height}) << '\n';
    return os.str();
}

} // namespace irsnav

#endif // IRSNAV_CONFIG_HPP
