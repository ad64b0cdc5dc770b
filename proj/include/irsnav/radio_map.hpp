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

#ifndef IRSNAV_RADIO_MAP_HPP
#define IRSNAV_RADIO_MAP_HPP

#include "irsnav/channel.hpp"
#include "irsnav/detail/parallel.hpp"
#include "irsnav/detail/text.hpp"
#include "irsnav/errors.hpp"
#include "irsnav/geometry.hpp"
#include "irsnav/phase.hpp"
#include "irsnav/scenario.hpp"
#include "irsnav/units.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace irsnav {

/// How the IRS contributes to the map: not at all, with continuous phases, or with
/// phases quantized to `levels` levels.
struct MapMode {
    enum class Kind { no_irs, continuous, discrete };

    Kind kind = Kind::continuous;
    int levels = 0;

    static MapMode no_irs() { return {Kind::no_irs, 0}; }
    static MapMode continuous() { return {Kind::continuous, 0}; }
    static MapMode discrete(int levels) {
        if (levels < 2 || !is_power_of_two(levels))
            throw ParameterError("discrete mode needs a power-of-two level count >= 2, got " + std::to_string(levels));
        return {Kind::discrete, levels};
    }

    bool uses_irs() const { return kind != Kind::no_irs; }

    std::string name() const {
        switch (kind) {
        case Kind::no_irs: return "no_irs";
        case Kind::continuous: return "continuous";
        case Kind::discrete: return "discrete:" + std::to_string(levels);
        }
        return "?";
    }

    friend bool operator==(const MapMode &, const MapMode &) = default;
};

/// Accepts "no_irs", "continuous", "discrete:L" and the shorthand "<b>bit" (L = 2^b).
inline MapMode parse_mode(const std::string &text) {
    if (text == "no_irs" || text == "none") return MapMode::no_irs();
    if (text == "continuous") return MapMode::continuous();
    try {
        if (text.rfind("discrete:", 0) == 0) return MapMode::discrete(std::stoi(text.substr(9)));
        if (text.size() > 3 && text.substr(text.size() - 3) == "bit") {
            const int bits = std::stoi(text.substr(0, text.size() - 3));
            if (bits < 1 || bits > 16) throw ParameterError("bit count out of range");
            return MapMode::discrete(1 << bits);
        }
    } catch (const std::logic_error &) {
    }
    throw ParameterError("unknown mode '" + text + "' (expected no_irs, continuous, discrete:L or <b>bit)");
}

/// Channel power gain per cell, row-major with rows along i. The dB value of each cell
/// is the stored representation and the linear value is derived from it, so the CSV
/// round trip (which carries dB) reproduces both exactly. Obstacle cells hold -inf in both.
struct RadioMap {
    GridSpec grid;
    std::vector<double> values;    // linear
    std::vector<double> values_db; // dB
    MapMode mode;
    std::string fingerprint;

    void reset(const GridSpec &g) {
        grid = g;
        values.assign(g.cell_count(), -std::numeric_limits<double>::infinity());
        values_db.assign(g.cell_count(), -std::numeric_limits<double>::infinity());
    }
    void set_db(std::size_t k, double db) {
        values_db.at(k) = db;
        values[k] = db == -std::numeric_limits<double>::infinity() ? db : from_db(db);
    }

    double at(CellIndex c) const { return values.at(grid.offset(c)); }
    double db_at(CellIndex c) const { return values_db.at(grid.offset(c)); }
};

inline constexpr double obstacle_value = -std::numeric_limits<double>::infinity();

/// Map from per-cell linear gains (obstacles as -inf); used for synthetic maps.
inline RadioMap make_map(const GridSpec &grid, const std::vector<double> &linear, MapMode mode = MapMode::continuous()) {
    if (linear.size() != grid.cell_count())
        throw ShapeError("expected " + std::to_string(grid.cell_count()) + " cell values, got " + std::to_string(linear.size()));
    RadioMap map;
    map.reset(grid);
    map.mode = mode;
    for (std::size_t k = 0; k < linear.size(); ++k)
        map.set_db(k, linear[k] == obstacle_value ? obstacle_value : to_db(linear[k]));
    return map;
}

inline std::string map_fingerprint(const Scenario &scene, const MapMode &mode) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(detail::fnv1a(map_inputs(scene, mode.uses_irs()) + "|" + mode.name())));
    return buf;
}

/// Map value at one location for a mode.
inline double cell_gain(const ChannelModel &model, const Point3 &q, const MapMode &mode) {
    if (!mode.uses_irs()) {
        const LinkStats direct = model.link(q, Endpoint::ap);
        const double los = std::sqrt(direct.eta * direct.rician_k);
        return los * los + direct.eta;
    }
    const LosChannel los = model.los(q);
    return achieved_gain(los, mode.kind == MapMode::Kind::continuous ? 0 : mode.levels);
}

/// Evaluates every cell center independently. Rows may be computed concurrently; the
/// result is identical for any thread count.
inline RadioMap build_map(const Scenario &scene, const MapMode &mode, unsigned threads = detail::default_thread_count()) {
    RadioMap map;
    map.grid = scene.grid;
    map.mode = mode;
    map.fingerprint = map_fingerprint(scene, mode);
    map.reset(scene.grid);
    const ChannelModel model(scene);
    detail::parallel_for(
        static_cast<std::size_t>(scene.grid.nx),
        [&](std::size_t row) {
            for (int j = 1; j <= scene.grid.ny; ++j) {
                const CellIndex c{static_cast<int>(row) + 1, j};
                const Point3 q = cell_center(scene.grid, c);
                if (in_obstacle_footprint(scene, q)) continue;
                map.set_db(scene.grid.offset(c), to_db(cell_gain(model, q, mode)));
            }
        },
        threads);
    return map;
}

/// Cells whose map value reaches the threshold. Comparison happens in the linear domain
/// against the threshold converted once; obstacle cells are never feasible.
struct FeasibleMap {
    GridSpec grid;
    std::vector<std::uint8_t> flags;
    double gamma_bar_db = 0.0;

    bool at(CellIndex c) const { return grid.contains(c) && flags[grid.offset(c)] != 0; }
    std::size_t count() const { return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), 1)); }
};

inline FeasibleMap feasible_map(const RadioMap &map, double gamma_bar_db) {
    FeasibleMap out;
    out.grid = map.grid;
    out.gamma_bar_db = gamma_bar_db;
    out.flags.assign(map.values.size(), 0);
    if (std::isnan(gamma_bar_db)) throw ParameterError("threshold must not be NaN");
    const double threshold = from_db(gamma_bar_db); // 0 for -inf, inf for +inf
    for (std::size_t k = 0; k < map.values.size(); ++k) {
        const double v = map.values[k];
        if (v == obstacle_value) continue;
        out.flags[k] = v >= threshold ? 1 : 0;
    }
    return out;
}

struct MapSummary {
    std::size_t free_cells = 0;
    double min_db = 0.0;
    double max_db = 0.0;
    double median_db = 0.0;
};

inline MapSummary summarize(const RadioMap &map) {
    std::vector<double> db;
    for (double v : map.values_db)
        if (v != obstacle_value) db.push_back(v);
    MapSummary s;
    s.free_cells = db.size();
    if (db.empty()) return s;
    std::sort(db.begin(), db.end());
    s.min_db = db.front();
    s.max_db = db.back();
    const std::size_t mid = db.size() / 2;
    s.median_db = db.size() % 2 ? db[mid] : 0.5 * (db[mid - 1] + db[mid]);
    return s;
}

// ---------------------------------------------------------------------------------------
// CSV map format:
//
//   # irsnav radio map
//   # version=1
//   # X=40
//   # Y=40
//   # delta=0.5
//   # q0=-9.75,-9.75,1
//   # mode=continuous
//   # fingerprint=0123456789abcdef
//   <X rows of Y comma separated dB values, row i holds cells (i, 1..Y), "-inf" for obstacles>
//
// A feasible map uses the same header plus "# gamma_bar_db=<dB>" and 0/1 entries.

namespace detail {

inline void write_grid_header(std::ostream &os, const char *title, const GridSpec &g, const MapMode &mode,
                              const std::string &fingerprint) {
    os << "# " << title << "\n# version=1\n# X=" << g.nx << "\n# Y=" << g.ny << "\n# delta=" << format_double(g.delta)
       << "\n# q0=" << format_double(g.q0.x) << ',' << format_double(g.q0.y) << ',' << format_double(g.q0.z)
       << "\n# mode=" << mode.name() << "\n# fingerprint=" << fingerprint << '\n';
}

struct GridHeader {
    GridSpec grid;
    MapMode mode;
    std::string fingerprint;
    std::optional<double> gamma_bar_db;
    std::size_t data_line = 0; // first line after the header
};

inline GridHeader read_grid_header(const std::vector<std::string> &lines) {
    std::map<std::string, std::pair<std::string, std::size_t>> meta;
    std::size_t k = 0;
    for (; k < lines.size() && !lines[k].empty() && lines[k][0] == '#'; ++k) {
        const std::string body = trim(lines[k].substr(1));
        const auto eq = body.find('=');
        if (eq == std::string::npos) continue; // title or comment
        meta[trim(body.substr(0, eq))] = {trim(body.substr(eq + 1)), k + 1};
    }
    auto require = [&](const std::string &key) -> const std::pair<std::string, std::size_t> & {
        auto it = meta.find(key);
        if (it == meta.end()) throw ParseError("missing header key '" + key + "'", k + 1);
        return it->second;
    };
    GridHeader h;
    const auto &version = require("version");
    if (version.first != "1") throw ParseError("unsupported version '" + version.first + "'", version.second, 1);
    const auto &x = require("X");
    const auto &y = require("Y");
    h.grid.nx = static_cast<int>(parse_integer(x.first, x.second, 1));
    h.grid.ny = static_cast<int>(parse_integer(y.first, y.second, 1));
    if (h.grid.nx < 1 || h.grid.ny < 1) throw ParseError("grid dimensions must be positive", x.second);
    const auto &delta = require("delta");
    h.grid.delta = parse_double(delta.first, delta.second, 1);
    if (!(h.grid.delta > 0.0)) throw ParseError("delta must be positive", delta.second);
    const auto &q0 = require("q0");
    const auto parts = split(q0.first, ',');
    if (parts.size() != 3) throw ParseError("q0 needs three coordinates", q0.second);
    h.grid.q0 = {parse_double(parts[0], q0.second, 1), parse_double(parts[1], q0.second, 1),
                 parse_double(parts[2], q0.second, 1)};
    const auto &mode = require("mode");
    try {
        h.mode = parse_mode(mode.first);
    } catch (const ParameterError &e) {
        throw ParseError(e.what(), mode.second);
    }
    h.fingerprint = require("fingerprint").first;
    if (auto it = meta.find("gamma_bar_db"); it != meta.end())
        h.gamma_bar_db = parse_double(it->second.first, it->second.second, 1);
    h.data_line = k;
    return h;
}

// Data rows after the header: exactly nx rows of ny fields each.
template <typename Parse>
void read_grid_rows(const std::vector<std::string> &lines, const GridHeader &h, Parse &&parse_field) {
    std::size_t row = 0;
    std::size_t k = h.data_line;
    for (; k < lines.size(); ++k) {
        if (trim(lines[k]).empty()) continue;
        if (row == static_cast<std::size_t>(h.grid.nx))
            throw ParseError("more data rows than X=" + std::to_string(h.grid.nx), k + 1, 1);
        std::size_t col = 1;
        std::size_t field = 0;
        std::size_t start = 0;
        const std::string &line = lines[k];
        while (true) {
            const std::size_t comma = line.find(',', start);
            const std::string token = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            if (field == static_cast<std::size_t>(h.grid.ny))
                throw ParseError("more than Y=" + std::to_string(h.grid.ny) + " values in row", k + 1, col);
            parse_field(row * static_cast<std::size_t>(h.grid.ny) + field, trim(token), k + 1, col);
            ++field;
            if (comma == std::string::npos) break;
            start = comma + 1;
            col = start + 1;
        }
        if (field != static_cast<std::size_t>(h.grid.ny))
            throw ParseError("expected " + std::to_string(h.grid.ny) + " values, found " + std::to_string(field), k + 1,
                             line.size() + 1);
        ++row;
    }
    if (row != static_cast<std::size_t>(h.grid.nx))
        throw ParseError("expected " + std::to_string(h.grid.nx) + " data rows, found " + std::to_string(row), k + 1);
}

} // namespace detail

inline void export_map(std::ostream &os, const RadioMap &map) {
    detail::write_grid_header(os, "irsnav radio map", map.grid, map.mode, map.fingerprint);
    for (int i = 1; i <= map.grid.nx; ++i) {
        for (int j = 1; j <= map.grid.ny; ++j) {
            if (j > 1) os << ',';
            const double v = map.db_at({i, j});
            os << (v == obstacle_value ? std::string("-inf") : detail::format_double(v));
        }
        os << '\n';
    }
}

inline std::string export_map(const RadioMap &map) {
    std::ostringstream os;
    export_map(os, map);
    return os.str();
}

inline RadioMap import_map(const std::string &text) {
    const auto lines = detail::split_lines(text);
    const auto header = detail::read_grid_header(lines);
    RadioMap map;
    map.grid = header.grid;
    map.mode = header.mode;
    map.fingerprint = header.fingerprint;
    map.reset(header.grid);
    detail::read_grid_rows(lines, header, [&](std::size_t k, const std::string &token, std::size_t line, std::size_t col) {
        if (token == "-inf") return;
        const double db = detail::parse_double(token, line, col);
        if (!std::isfinite(db)) throw ParseError("map values must be finite or -inf", line, col);
        map.set_db(k, db);
    });
    return map;
}

inline void export_feasible_map(std::ostream &os, const FeasibleMap &feasible, const MapMode &mode,
                                const std::string &fingerprint) {
    detail::write_grid_header(os, "irsnav feasible map", feasible.grid, mode, fingerprint);
    os << "# gamma_bar_db=" << detail::format_double(feasible.gamma_bar_db) << '\n';
    for (int i = 1; i <= feasible.grid.nx; ++i) {
        for (int j = 1; j <= feasible.grid.ny; ++j) os << (j > 1 ? "," : "") << (feasible.at({i, j}) ? '1' : '0');
        os << '\n';
    }
}

inline FeasibleMap import_feasible_map(const std::string &text) {
    const auto lines = detail::split_lines(text);
    const auto header = detail::read_grid_header(lines);
    if (!header.gamma_bar_db) throw ParseError("missing header key 'gamma_bar_db'", header.data_line + 1);
    FeasibleMap out;
    out.grid = header.grid;
    out.gamma_bar_db = *header.gamma_bar_db;
    out.flags.assign(out.grid.cell_count(), 0);
    detail::read_grid_rows(lines, header, [&](std::size_t k, const std::string &token, std::size_t line, std::size_t col) {
        if (token != "0" && token != "1") throw ParseError("expected 0 or 1, got '" + token + "'", line, col);
        out.flags[k] = token == "1" ? 1 : 0;
    });
    return out;
}

/// Binary PGM heatmap, x to the right and y upwards. Finite dB values are min-max
/// scaled to 1..255; obstacle cells are black.
inline void export_heatmap(std::ostream &os, const RadioMap &map) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : map.values_db)
        if (v != obstacle_value) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    os << "P5\n" << map.grid.nx << ' ' << map.grid.ny << "\n255\n";
    for (int j = map.grid.ny; j >= 1; --j)
        for (int i = 1; i <= map.grid.nx; ++i) {
            const double v = map.db_at({i, j});
            unsigned char px = 0;
            if (v != obstacle_value)
                px = hi > lo ? static_cast<unsigned char>(1 + std::lround(254.0 * (v - lo) / (hi - lo))) : 255;
            os.put(static_cast<char>(px));
        }
}

} // namespace irsnav

#endif // IRSNAV_RADIO_MAP_HPP
