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

#ifndef IRSNAV_PLANNER_HPP
#define IRSNAV_PLANNER_HPP

#include "irsnav/detail/text.hpp"
#include "irsnav/errors.hpp"
#include "irsnav/geometry.hpp"
#include "irsnav/radio_map.hpp"
#include "irsnav/scenario.hpp"
#include "irsnav/units.hpp"

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

namespace irsnav {

/// Length of a grid path in cell units: orth + diag * sqrt(2). Ordering is exact, so
/// equal-length paths compare equal regardless of the order steps were summed in.
struct GridLength {
    std::int64_t orth = 0;
    std::int64_t diag = 0;

    double cells() const { return static_cast<double>(orth) + static_cast<double>(diag) * std::numbers::sqrt2; }
    double meters(double delta) const { return cells() * delta; }

    friend GridLength operator+(GridLength a, GridLength b) { return {a.orth + b.orth, a.diag + b.diag}; }
    friend bool operator==(const GridLength &, const GridLength &) = default;

    friend std::strong_ordering operator<=>(const GridLength &a, const GridLength &b) {
        // Compare x = a.orth - b.orth against y * sqrt(2), y = b.diag - a.diag.
        const std::int64_t x = a.orth - b.orth;
        const std::int64_t y = b.diag - a.diag;
        if (x == 0 && y == 0) return std::strong_ordering::equal;
        if (x >= 0 && y <= 0) return std::strong_ordering::greater;
        if (x <= 0 && y >= 0) return std::strong_ordering::less;
        const bool x_dominates = x * x > 2 * y * y; // never equal for integers
        if (x > 0) return x_dominates ? std::strong_ordering::greater : std::strong_ordering::less;
        return x_dominates ? std::strong_ordering::less : std::strong_ordering::greater;
    }
};

inline constexpr GridLength orth_step{1, 0};
inline constexpr GridLength diag_step{0, 1};

/// Diagonal moves either follow the plain sqrt(2)*delta neighbourhood or, in strict mode,
/// also need one of the two orthogonally shared cells to be feasible.
enum class Adjacency { standard, strict };

/// Undirected 8-connected graph over the feasible cells of a grid. Vertices are addressed
/// by the cell's row-major offset.
struct GridGraph {
    struct Edge {
        std::size_t to;
        GridLength weight;
    };

    GridSpec grid;
    std::vector<std::uint8_t> is_vertex;
    std::vector<std::vector<Edge>> adjacency;

    bool contains(CellIndex c) const { return grid.contains(c) && is_vertex[grid.offset(c)] != 0; }
    std::size_t vertex_count() const {
        return static_cast<std::size_t>(std::count(is_vertex.begin(), is_vertex.end(), 1));
    }
    std::size_t edge_count() const {
        std::size_t twice = 0;
        for (const auto &list : adjacency) twice += list.size();
        return twice / 2;
    }
};

inline GridGraph build_graph(const FeasibleMap &feasible, Adjacency mode = Adjacency::standard) {
    GridGraph g;
    g.grid = feasible.grid;
    g.is_vertex = feasible.flags;
    g.adjacency.resize(feasible.flags.size());
    for (int i = 1; i <= g.grid.nx; ++i)
        for (int j = 1; j <= g.grid.ny; ++j) {
            const CellIndex c{i, j};
            if (!feasible.at(c)) continue;
            auto &edges = g.adjacency[g.grid.offset(c)];
            // Neighbours in lexicographic order.
            for (int di = -1; di <= 1; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const CellIndex n{i + di, j + dj};
                    if (!feasible.at(n)) continue;
                    const bool diagonal = di != 0 && dj != 0;
                    if (diagonal && mode == Adjacency::strict && !feasible.at({i + di, j}) && !feasible.at({i, j + dj}))
                        continue;
                    edges.push_back({g.grid.offset(n), diagonal ? diag_step : orth_step});
                }
        }
    return g;
}

struct PlannedPath {
    std::vector<CellIndex> cells;
    std::vector<Point3> waypoints;
    GridLength length;
    double total_distance = 0.0; // meters
    double travel_time = 0.0;    // seconds at constant maximum speed
    double gamma_bar_db = 0.0;
    MapMode mode;
    double start_snap = 0.0; // horizontal distance from the requested start to its cell center
    double goal_snap = 0.0;
};

/// Minimum-length path by Dijkstra. Among equal-length candidates the predecessor with
/// the lexicographically smallest cell wins, so results are reproducible.
inline PlannedPath shortest_path(const GridGraph &graph, CellIndex start, CellIndex goal, double v_max) {
    if (!(v_max > 0.0)) throw ParameterError("maximum speed must be positive");
    if (!graph.contains(start))
        throw InfeasiblePlanError(PlanFailure::infeasible_start, "start cell (" + std::to_string(start.i) + ", " +
                                                                     std::to_string(start.j) + ") is not feasible");
    if (!graph.contains(goal))
        throw InfeasiblePlanError(PlanFailure::infeasible_goal, "goal cell (" + std::to_string(goal.i) + ", " +
                                                                    std::to_string(goal.j) + ") is not feasible");

    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    const std::size_t n = graph.adjacency.size();
    std::vector<std::optional<GridLength>> dist(n);
    std::vector<std::size_t> pred(n, none);
    std::vector<std::uint8_t> settled(n, 0);

    using Entry = std::pair<GridLength, std::size_t>; // offset order == lexicographic cell order
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    const std::size_t s = graph.grid.offset(start);
    const std::size_t t = graph.grid.offset(goal);
    dist[s] = GridLength{};
    queue.push({GridLength{}, s});
    while (!queue.empty()) {
        const auto [d, u] = queue.top();
        queue.pop();
        if (settled[u]) continue;
        settled[u] = 1;
        if (u == t) break;
        for (const auto &e : graph.adjacency[u]) {
            if (settled[e.to]) continue;
            const GridLength candidate = d + e.weight;
            if (!dist[e.to] || candidate < *dist[e.to]) {
                dist[e.to] = candidate;
                pred[e.to] = u;
                queue.push({candidate, e.to});
            } else if (candidate == *dist[e.to] && u < pred[e.to]) {
                pred[e.to] = u;
            }
        }
    }
    if (!settled[t])
        throw InfeasiblePlanError(PlanFailure::no_path, "no feasible path connects the start and goal cells");

    PlannedPath path;
    for (std::size_t v = t; v != none; v = pred[v]) path.cells.push_back(graph.grid.cell_at(v));
    std::reverse(path.cells.begin(), path.cells.end());
    for (const auto &c : path.cells) path.waypoints.push_back(cell_center(graph.grid, c));
    path.length = *dist[t];
    path.total_distance = path.length.meters(graph.grid.delta);
    path.travel_time = path.total_distance / v_max;
    return path;
}

/// True when a path exists between the two cells over the flagged cells.
inline bool connected(const GridGraph &graph, CellIndex start, CellIndex goal) {
    if (!graph.contains(start) || !graph.contains(goal)) return false;
    std::vector<std::uint8_t> seen(graph.adjacency.size(), 0);
    std::vector<std::size_t> stack{graph.grid.offset(start)};
    seen[stack.back()] = 1;
    const std::size_t target = graph.grid.offset(goal);
    while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        if (u == target) return true;
        for (const auto &e : graph.adjacency[u])
            if (!seen[e.to]) {
                seen[e.to] = 1;
                stack.push_back(e.to);
            }
    }
    return false;
}

/// Plans on a map for a threshold: thresholds the map, builds the graph, snaps the
/// scenario endpoints to their cells and runs the shortest-path search.
inline PlannedPath plan_path(const RadioMap &map, const Scenario &scene, double gamma_bar_db,
                             Adjacency adjacency = Adjacency::standard) {
    const GridGraph graph = build_graph(feasible_map(map, gamma_bar_db), adjacency);
    const CellIndex start = cell_of(map.grid, scene.start);
    const CellIndex goal = cell_of(map.grid, scene.goal);
    PlannedPath path = shortest_path(graph, start, goal, scene.v_max);
    path.gamma_bar_db = gamma_bar_db;
    path.mode = map.mode;
    auto horizontal = [](const Point3 &a, const Point3 &b) { return std::hypot(a.x - b.x, a.y - b.y); };
    path.start_snap = horizontal(scene.start, path.waypoints.front());
    path.goal_snap = horizontal(scene.goal, path.waypoints.back());
    return path;
}

/// Largest threshold (dB) at which start and goal are still connected, found by bisection
/// over the distinct cell values. Empty when no threshold admits a path.
inline std::optional<double> max_feasible_gamma(const RadioMap &map, CellIndex start, CellIndex goal,
                                                Adjacency adjacency = Adjacency::standard) {
    std::vector<double> levels;
    for (double v : map.values_db)
        if (v != obstacle_value) levels.push_back(v);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    auto feasible_at = [&](double gamma_db) {
        return connected(build_graph(feasible_map(map, gamma_db), adjacency), start, goal);
    };
    if (levels.empty() || !feasible_at(levels.front())) return std::nullopt;
    std::size_t lo = 0, hi = levels.size(); // feasible at lo, infeasible at hi (or past the end)
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (feasible_at(levels[mid])) lo = mid;
        else hi = mid;
    }
    return levels[lo];
}

// ---------------------------------------------------------------------------------------
// Independent re-check of a planned path against the map.

struct PathReport {
    enum class Violation { none, empty, wrong_start, wrong_goal, off_grid, below_threshold, not_adjacent };

    Violation violation = Violation::none;
    std::size_t index = 0; // waypoint index of the first violation
    std::string message;

    bool ok() const { return violation == Violation::none; }
};

inline PathReport validate_path(const PlannedPath &path, const RadioMap &map, double gamma_bar_db, CellIndex start,
                                CellIndex goal) {
    using V = PathReport::Violation;
    auto fail = [](V v, std::size_t idx, std::string msg) { return PathReport{v, idx, std::move(msg)}; };
    if (path.waypoints.empty()) return fail(V::empty, 0, "path has no waypoints");
    const double threshold = from_db(gamma_bar_db);
    const double max_step = std::numbers::sqrt2 * map.grid.delta * (1.0 + 1e-9);
    const std::size_t last = path.waypoints.size() - 1;
    for (std::size_t k = 0; k <= last; ++k) {
        const Point3 &p = path.waypoints[k];
        CellIndex c;
        try {
            c = cell_of(map.grid, p);
        } catch (const OutOfRegionError &) {
            return fail(V::off_grid, k, "waypoint " + std::to_string(k) + " lies outside the grid");
        }
        if (distance(p, cell_center(map.grid, c)) > 1e-9 * map.grid.delta)
            return fail(V::off_grid, k, "waypoint " + std::to_string(k) + " is not a cell center");
        if (k == 0 && c != start) return fail(V::wrong_start, k, "path does not begin at the start cell");
        if (k == last && c != goal) return fail(V::wrong_goal, k, "path does not end at the goal cell");
        const double v = map.at(c);
        if (v == obstacle_value || !(v >= threshold))
            return fail(V::below_threshold, k,
                        "waypoint " + std::to_string(k) + " has gain " + detail::format_double(map.db_at(c)) +
                            " dB below the threshold " + detail::format_double(gamma_bar_db) + " dB");
        if (k > 0 && distance(p, path.waypoints[k - 1]) > max_step)
            return fail(V::not_adjacent, k, "waypoints " + std::to_string(k - 1) + " and " + std::to_string(k) + " are not adjacent");
    }
    return {};
}

// ---------------------------------------------------------------------------------------
// Path CSV:
//
//   # irsnav path
//   # version=1
//   # mode=continuous
//   # gamma_bar_db=-63
//   # X=40
//   # Y=40
//   # delta=0.5
//   # q0=-9.75,-9.75,1
//   # total_distance=21.5
//   # travel_time=21.5
//   index,x,y,value_db,cumulative_distance
//   0,-9.75,-0.25,-62.32,0
//   ...

inline void export_path(std::ostream &os, const PlannedPath &path, const RadioMap &map) {
    using detail::format_double;
    os << "# irsnav path\n# version=1\n# mode=" << path.mode.name() << "\n# gamma_bar_db=" << format_double(path.gamma_bar_db)
       << "\n# X=" << map.grid.nx << "\n# Y=" << map.grid.ny << "\n# delta=" << format_double(map.grid.delta)
       << "\n# q0=" << format_double(map.grid.q0.x) << ',' << format_double(map.grid.q0.y) << ','
       << format_double(map.grid.q0.z) << "\n# total_distance=" << format_double(path.total_distance)
       << "\n# travel_time=" << format_double(path.travel_time) << "\nindex,x,y,value_db,cumulative_distance\n";
    GridLength so_far;
    for (std::size_t k = 0; k < path.cells.size(); ++k) {
        if (k > 0) {
            const bool diagonal = path.cells[k].i != path.cells[k - 1].i && path.cells[k].j != path.cells[k - 1].j;
            const bool stay = path.cells[k] == path.cells[k - 1];
            if (!stay) so_far = so_far + (diagonal ? diag_step : orth_step);
        }
        const Point3 &p = path.waypoints[k];
        os << k << ',' << format_double(p.x) << ',' << format_double(p.y) << ','
           << format_double(map.db_at(path.cells[k])) << ',' << format_double(so_far.meters(map.grid.delta)) << '\n';
    }
}

inline std::string export_path(const PlannedPath &path, const RadioMap &map) {
    std::ostringstream os;
    export_path(os, path, map);
    return os.str();
}

/// A path CSV read back: the path plus the per-waypoint map values it recorded.
struct PathRecord {
    PlannedPath path;
    GridSpec grid;
    std::vector<double> value_db;
    std::vector<double> cumulative_distance;
};

inline PathRecord import_path(const std::string &text) {
    const auto lines = detail::split_lines(text);
    std::map<std::string, std::pair<std::string, std::size_t>> meta;
    std::size_t k = 0;
    for (; k < lines.size() && !lines[k].empty() && lines[k][0] == '#'; ++k) {
        const std::string body = detail::trim(lines[k].substr(1));
        const auto eq = body.find('=');
        if (eq != std::string::npos) meta[detail::trim(body.substr(0, eq))] = {detail::trim(body.substr(eq + 1)), k + 1};
    }
    auto require = [&](const std::string &key) -> const std::pair<std::string, std::size_t> & {
        auto it = meta.find(key);
        if (it == meta.end()) throw ParseError("missing header key '" + key + "'", k + 1);
        return it->second;
    };
    if (require("version").first != "1") throw ParseError("unsupported version", require("version").second);
    PathRecord rec;
    try {
        rec.path.mode = parse_mode(require("mode").first);
    } catch (const ParameterError &e) {
        throw ParseError(e.what(), require("mode").second);
    }
    auto number = [&](const std::string &key) { return detail::parse_double(require(key).first, require(key).second, 1); };
    rec.path.gamma_bar_db = number("gamma_bar_db");
    rec.grid.nx = static_cast<int>(detail::parse_integer(require("X").first, require("X").second, 1));
    rec.grid.ny = static_cast<int>(detail::parse_integer(require("Y").first, require("Y").second, 1));
    rec.grid.delta = number("delta");
    if (rec.grid.nx < 1 || rec.grid.ny < 1 || !(rec.grid.delta > 0.0)) throw ParseError("invalid grid header", require("X").second);
    const auto q0 = detail::split(require("q0").first, ',');
    if (q0.size() != 3) throw ParseError("q0 needs three coordinates", require("q0").second);
    const std::size_t q0_line = require("q0").second;
    rec.grid.q0 = {detail::parse_double(q0[0], q0_line, 1), detail::parse_double(q0[1], q0_line, 1),
                   detail::parse_double(q0[2], q0_line, 1)};
    rec.path.total_distance = number("total_distance");
    rec.path.travel_time = number("travel_time");

    if (k >= lines.size() || detail::trim(lines[k]) != "index,x,y,value_db,cumulative_distance")
        throw ParseError("expected column header 'index,x,y,value_db,cumulative_distance'", k + 1, 1);
    for (++k; k < lines.size(); ++k) {
        if (detail::trim(lines[k]).empty()) continue;
        const auto fields = detail::split(lines[k], ',');
        if (fields.size() != 5)
            throw ParseError("expected 5 fields, found " + std::to_string(fields.size()), k + 1, lines[k].size() + 1);
        std::vector<std::size_t> cols{1};
        for (std::size_t pos = lines[k].find(','); pos != std::string::npos; pos = lines[k].find(',', pos + 1))
            cols.push_back(pos + 2);
        const auto index = detail::parse_integer(fields[0], k + 1, cols[0]);
        if (index != static_cast<long long>(rec.path.cells.size()))
            throw ParseError("waypoint index out of sequence", k + 1, cols[0]);
        const Point3 p{detail::parse_double(fields[1], k + 1, cols[1]), detail::parse_double(fields[2], k + 1, cols[2]),
                       rec.grid.q0.z};
        CellIndex c;
        try {
            c = cell_of(rec.grid, p);
        } catch (const OutOfRegionError &) {
            throw ParseError("waypoint outside the grid", k + 1, cols[1]);
        }
        rec.path.cells.push_back(c);
        rec.path.waypoints.push_back(p);
        rec.value_db.push_back(detail::parse_double(fields[3], k + 1, cols[3]));
        rec.cumulative_distance.push_back(detail::parse_double(fields[4], k + 1, cols[4]));
    }
    for (std::size_t w = 1; w < rec.path.cells.size(); ++w) {
        const auto &a = rec.path.cells[w - 1];
        const auto &b = rec.path.cells[w];
        if (a != b) rec.path.length = rec.path.length + (a.i != b.i && a.j != b.j ? diag_step : orth_step);
    }
    return rec;
}

} // namespace irsnav

#endif // IRSNAV_PLANNER_HPP
