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

#ifndef IRSNAV_EXPERIMENTS_HPP
#define IRSNAV_EXPERIMENTS_HPP

#include "irsnav/channel.hpp"
#include "irsnav/detail/text.hpp"
#include "irsnav/errors.hpp"
#include "irsnav/phase.hpp"
#include "irsnav/planner.hpp"
#include "irsnav/radio_map.hpp"
#include "irsnav/scenario.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace irsnav {

/// Replaces `path` with `content` in one step: the bytes go to a sibling temporary file
/// which is then renamed over the target.
inline void write_file_atomic(const std::filesystem::path &path, const std::string &content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::ios_base::failure("cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw std::ios_base::failure("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::ios_base::failure("cannot replace '" + path.string() + "': " + ec.message());
    }
}

inline std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---------------------------------------------------------------------------------------
// Map cache

/// Maps keyed by fingerprint. Optionally backed by a directory of map CSV files; since the
/// CSV round trip is exact, a map read from disk equals the one that was built.
class MapCache {
public:
    MapCache() = default;
    explicit MapCache(std::optional<std::filesystem::path> dir) : dir_(std::move(dir)) {
        if (dir_) std::filesystem::create_directories(*dir_);
    }

    /// Cache directory from IRSNAV_CACHE_DIR, memory only when unset or empty.
    static MapCache from_environment() {
        const char *dir = std::getenv("IRSNAV_CACHE_DIR");
        if (dir == nullptr || *dir == '\0') return MapCache{};
        return MapCache{std::filesystem::path(dir)};
    }

    const RadioMap &get(const Scenario &scene, const MapMode &mode, unsigned threads = detail::default_thread_count()) {
        const std::string key = map_fingerprint(scene, mode);
        std::lock_guard lock(mutex_);
        if (auto it = maps_.find(key); it != maps_.end()) {
            ++hits_;
            return it->second;
        }
        if (dir_) {
            const auto file = *dir_ / (key + ".csv");
            if (std::filesystem::exists(file)) {
                try {
                    RadioMap map = import_map(read_file(file));
                    if (map.fingerprint == key && map.grid == scene.grid) {
                        ++disk_hits_;
                        return maps_.emplace(key, std::move(map)).first->second;
                    }
                } catch (const ParseError &) {
                    // Unreadable cache entries are rebuilt and overwritten.
                }
            }
        }
        ++builds_;
        RadioMap map = build_map(scene, mode, threads);
        if (dir_) write_file_atomic(*dir_ / (key + ".csv"), export_map(map));
        return maps_.emplace(key, std::move(map)).first->second;
    }

    std::size_t hits() const { return hits_; }
    std::size_t disk_hits() const { return disk_hits_; }
    std::size_t builds() const { return builds_; }

private:
    std::optional<std::filesystem::path> dir_;
    std::map<std::string, RadioMap> maps_;
    std::mutex mutex_;
    std::size_t hits_ = 0, disk_hits_ = 0, builds_ = 0;
};

// ---------------------------------------------------------------------------------------
// Sweeps

enum class SweepVariable { gamma_bar, num_elements };

inline std::string to_string(SweepVariable v) { return v == SweepVariable::gamma_bar ? "gamma_bar_db" : "num_elements"; }

struct SweepSpec {
    SweepVariable variable = SweepVariable::gamma_bar;
    std::vector<double> values;
    std::vector<MapMode> modes;
};

/// Values must be non-empty and strictly monotone; element counts must be reachable by
/// stacking whole rows of sub-surfaces on the scene's panel.
inline void validate(const SweepSpec &spec, const Scenario &scene) {
    if (spec.values.empty()) throw ParameterError("sweep needs at least one value");
    if (spec.modes.empty()) throw ParameterError("sweep needs at least one mode");
    for (double v : spec.values)
        if (!std::isfinite(v)) throw ParameterError("sweep values must be finite");
    if (spec.values.size() > 1) {
        const bool up = spec.values[1] > spec.values[0];
        for (std::size_t k = 1; k < spec.values.size(); ++k)
            if (up ? !(spec.values[k] > spec.values[k - 1]) : !(spec.values[k] < spec.values[k - 1]))
                throw ParameterError("sweep values must be strictly monotone");
    }
    if (spec.variable == SweepVariable::num_elements) {
        const int row = scene.irs_layout.nx * scene.irs_layout.elements_per_subsurface();
        for (double v : spec.values)
            if (v != std::floor(v) || v < row || std::fmod(v, row) != 0.0)
                throw ParameterError("element count " + detail::format_double(v) + " is not a positive multiple of " +
                                     std::to_string(row));
    }
}

/// Evenly spaced values from `first` to `last` inclusive with spacing `step`.
inline std::vector<double> linear_range(double first, double last, double step) {
    if (!(step > 0.0)) throw ParameterError("range step must be positive");
    std::vector<double> out;
    const double span = last - first;
    const auto n = static_cast<long>(std::floor(std::abs(span) / step + 1e-9));
    for (long k = 0; k <= n; ++k) out.push_back(first + (span >= 0 ? 1.0 : -1.0) * static_cast<double>(k) * step);
    return out;
}

struct SweepRow {
    double value = 0.0;
    MapMode mode;
    std::optional<double> distance; // empty when infeasible
    std::optional<PlanFailure> failure;
    std::size_t waypoints = 0;
};

/// Largest threshold with a path, per mode (and per element count for element sweeps).
struct SweepThreshold {
    double value = 0.0; // element count, or NaN for threshold sweeps
    MapMode mode;
    std::optional<double> gamma_bar_db;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepRow> rows;
    std::vector<SweepThreshold> thresholds;
};

inline SweepResult run_sweep(const Scenario &scene, const SweepSpec &spec, MapCache &cache,
                             Adjacency adjacency = Adjacency::standard, unsigned threads = detail::default_thread_count()) {
    validate(spec, scene);
    SweepResult result;
    result.spec = spec;
    const CellIndex start = cell_of(scene.grid, scene.start);
    const CellIndex goal = cell_of(scene.grid, scene.goal);

    auto plan_row = [&](const RadioMap &map, const Scenario &s, double gamma, double value, const MapMode &mode) {
        SweepRow row{value, mode, std::nullopt, std::nullopt, 0};
        try {
            const PlannedPath path = plan_path(map, s, gamma, adjacency);
            row.distance = path.total_distance;
            row.waypoints = path.waypoints.size();
        } catch (const InfeasiblePlanError &e) {
            row.failure = e.reason();
        }
        return row;
    };

    if (spec.variable == SweepVariable::gamma_bar) {
        for (const auto &mode : spec.modes) {
            const RadioMap &map = cache.get(scene, mode, threads);
            for (double gamma : spec.values) result.rows.push_back(plan_row(map, scene, gamma, gamma, mode));
            result.thresholds.push_back({std::nan(""), mode, max_feasible_gamma(map, start, goal, adjacency)});
        }
    } else {
        for (const auto &mode : spec.modes)
            for (double m : spec.values) {
                const Scenario s = with_element_count(scene, static_cast<int>(m));
                const RadioMap &map = cache.get(s, mode, threads);
                result.rows.push_back(plan_row(map, s, scene.gamma_bar_db, m, mode));
                result.thresholds.push_back({m, mode, max_feasible_gamma(map, start, goal, adjacency)});
            }
    }
    return result;
}

/// Rows "variable,value,mode,distance" with "infeasible" in place of a distance, followed
/// by comment lines with the largest feasible threshold per mode.
inline std::string format_sweep(const SweepResult &result) {
    using detail::format_double;
    std::ostringstream os;
    os << "variable,value,mode,distance\n";
    const std::string var = to_string(result.spec.variable);
    for (const auto &row : result.rows)
        os << var << ',' << format_double(row.value) << ',' << row.mode.name() << ','
           << (row.distance ? format_double(*row.distance) : std::string("infeasible")) << '\n';
    for (const auto &t : result.thresholds) {
        os << "# max_feasible_gamma_bar_db";
        if (!std::isnan(t.value)) os << " num_elements=" << format_double(t.value);
        os << " mode=" << t.mode.name() << " value=" << (t.gamma_bar_db ? format_double(*t.gamma_bar_db) : "none") << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------------------
// Monte Carlo validation of the closed-form expected gain

enum class ProbeKind { los, nlos_direct, nlos_both, near_irs };

inline std::string to_string(ProbeKind k) {
    switch (k) {
    case ProbeKind::los: return "los";
    case ProbeKind::nlos_direct: return "nlos_direct";
    case ProbeKind::nlos_both: return "nlos_both";
    case ProbeKind::near_irs: return "near_irs";
    }
    return "?";
}

struct Probe {
    ProbeKind kind;
    CellIndex cell;
    Point3 point;
};

/// One free cell per probe class, picked deterministically: for the blockage classes the
/// first matching cell in row-major order, for near_irs the free cell closest to the IRS.
/// Classes without a matching cell are omitted.
inline std::vector<Probe> probe_cells(const Scenario &scene) {
    std::optional<Probe> found[3];
    std::optional<Probe> nearest;
    double nearest_dist = 0.0;
    for (int i = 1; i <= scene.grid.nx; ++i)
        for (int j = 1; j <= scene.grid.ny; ++j) {
            const CellIndex c{i, j};
            const Point3 q = cell_center(scene.grid, c);
            if (in_obstacle_footprint(scene, q)) continue;
            const bool direct_blocked = segment_blocked(scene, scene.ap, q);
            const bool irs_blocked = segment_blocked(scene, scene.irs, q);
            int cls = -1;
            if (!direct_blocked && !irs_blocked) cls = 0;
            else if (direct_blocked && !irs_blocked) cls = 1;
            else if (direct_blocked && irs_blocked) cls = 2;
            if (cls >= 0 && !found[cls]) found[cls] = Probe{static_cast<ProbeKind>(cls), c, q};
            const double d = distance(scene.irs, q);
            if (!nearest || d < nearest_dist) {
                nearest = Probe{ProbeKind::near_irs, c, q};
                nearest_dist = d;
            }
        }
    std::vector<Probe> out;
    for (const auto &p : found)
        if (p) out.push_back(*p);
    if (nearest) out.push_back(*nearest);
    return out;
}

struct ProbeResult {
    Probe probe;
    double closed_form = 0.0;
    MonteCarloEstimate estimate;
    double relative_error = 0.0;
    double sigma_bound = 0.0; // 3 standard errors, relative to the closed form
    bool pass = false;
};

struct ValidationReport {
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::vector<ProbeResult> probes;

    bool pass() const {
        for (const auto &p : probes)
            if (!p.pass) return false;
        return true;
    }
};

/// Compares the closed-form expected gain under optimal phases with a Monte Carlo mean at
/// every probe cell. A probe passes when the deviation is within three standard errors.
inline ValidationReport run_validation(const Scenario &scene, std::uint64_t samples, std::uint64_t seed,
                                       unsigned threads = detail::default_thread_count()) {
    if (samples < 10000) throw ParameterError("validation needs at least 10000 samples");
    const ChannelModel model(scene);
    ValidationReport report;
    report.samples = samples;
    report.seed = seed;
    std::uint64_t probe_index = 0;
    for (const auto &probe : probe_cells(scene)) {
        const ChannelContext ctx = model.context(probe.point);
        const LosChannel los = los_components(ctx);
        const PhaseConfig phases = optimal_phases(los);
        ProbeResult r;
        r.probe = probe;
        r.closed_form = expected_gain(los, phases);
        r.estimate = monte_carlo_gain(ctx, phases.thetas, samples, seed + 0x9e3779b97f4a7c15ULL * ++probe_index, threads);
        r.relative_error = std::abs(r.estimate.mean - r.closed_form) / r.closed_form;
        r.sigma_bound = 3.0 * r.estimate.std_error / r.closed_form;
        r.pass = r.relative_error <= r.sigma_bound;
        report.probes.push_back(r);
    }
    return report;
}

inline std::string format_validation(const ValidationReport &report) {
    using detail::format_double;
    std::ostringstream os;
    os << "# samples=" << report.samples << " seed=" << report.seed << '\n';
    os << "probe,i,j,x,y,closed_form_db,empirical_db,relative_error,bound_3sigma,result\n";
    char buf[64];
    auto fixed = [&](double v, const char *fmt) {
        std::snprintf(buf, sizeof buf, fmt, v);
        return std::string(buf);
    };
    for (const auto &p : report.probes)
        os << to_string(p.probe.kind) << ',' << p.probe.cell.i << ',' << p.probe.cell.j << ','
           << format_double(p.probe.point.x) << ',' << format_double(p.probe.point.y) << ','
           << fixed(to_db(p.closed_form), "%.6f") << ',' << fixed(to_db(p.estimate.mean), "%.6f") << ','
           << fixed(p.relative_error, "%.3e") << ',' << fixed(p.sigma_bound, "%.3e") << ','
           << (p.pass ? "PASS" : "FAIL") << '\n';
    return os.str();
}

} // namespace irsnav

#endif // IRSNAV_EXPERIMENTS_HPP
