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

#include "irsnav/irsnav.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

enum Exit : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_config = 2,
    exit_io = 3,
    exit_infeasible = 4,
    exit_validation = 5,
};

struct Common {
    std::string config;
    std::string mode = "continuous";
    int levels = 0;
    int elements = 0;
    std::string output;
    std::string out_dir;
    unsigned threads = 0;
};

irsnav::Scenario load(const Common &c) {
    irsnav::Scenario scene = irsnav::load_scenario(c.config);
    if (c.elements > 0) scene = irsnav::with_element_count(scene, c.elements);
    irsnav::validate(scene);
    return scene;
}

irsnav::MapMode mode_of(const Common &c) {
    if (c.levels > 0) {
        if (c.mode != "continuous" && c.mode != "discrete")
            throw irsnav::ParameterError("--levels only combines with --mode discrete");
        return irsnav::MapMode::discrete(c.levels);
    }
    if (c.mode == "discrete") throw irsnav::ParameterError("--mode discrete needs --levels");
    return irsnav::parse_mode(c.mode);
}

unsigned threads_of(const Common &c) { return c.threads > 0 ? c.threads : irsnav::detail::default_thread_count(); }

// Destination for an artifact: --output wins, else <out-dir>/<default_name>, else none.
std::optional<std::filesystem::path> destination(const Common &c, const std::string &default_name) {
    if (!c.output.empty()) return std::filesystem::path(c.output);
    if (!c.out_dir.empty()) {
        std::filesystem::create_directories(c.out_dir);
        return std::filesystem::path(c.out_dir) / default_name;
    }
    return std::nullopt;
}

std::string db(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

void add_common(CLI::App *cmd, Common &c, bool with_mode) {
    cmd->add_option("config", c.config, "Scenario configuration file")->required();
    if (with_mode) {
        cmd->add_option("--mode", c.mode, "no_irs, continuous, discrete:L or <b>bit")->capture_default_str();
        cmd->add_option("--levels", c.levels, "Phase levels L for discrete mode (power of two)");
    }
    cmd->add_option("--elements", c.elements, "Override the IRS element count M");
    cmd->add_option("-o,--output", c.output, "Output file");
    cmd->add_option("--out-dir", c.out_dir, "Directory for output files with default names");
    cmd->add_option("--threads", c.threads, "Worker threads (default: hardware concurrency)");
}

int cmd_map(const Common &c, const std::string &heatmap) {
    const irsnav::Scenario scene = load(c);
    const irsnav::MapMode mode = mode_of(c);
    irsnav::MapCache cache = irsnav::MapCache::from_environment();
    const irsnav::RadioMap &map = cache.get(scene, mode, threads_of(c));
    if (auto dest = destination(c, "map.csv")) irsnav::write_file_atomic(*dest, irsnav::export_map(map));
    std::string heat_path = heatmap;
    if (heat_path.empty() && !c.out_dir.empty()) heat_path = (std::filesystem::path(c.out_dir) / "map.pgm").string();
    if (!heat_path.empty()) {
        std::ostringstream os;
        irsnav::export_heatmap(os, map);
        irsnav::write_file_atomic(heat_path, os.str());
    }
    const irsnav::MapSummary s = irsnav::summarize(map);
    std::cout << "mode " << map.mode.name() << ", " << map.grid.nx << " x " << map.grid.ny << " cells, "
              << s.free_cells << " free\n"
              << "min " << db(s.min_db) << " dB, max " << db(s.max_db) << " dB, median " << db(s.median_db) << " dB\n"
              << "fingerprint " << map.fingerprint << '\n';
    return exit_ok;
}

int cmd_plan(const Common &c, std::optional<double> gamma, bool strict, const std::string &map_file) {
    const irsnav::Scenario scene = load(c);
    const irsnav::MapMode mode = mode_of(c);
    const double gamma_bar = gamma.value_or(scene.gamma_bar_db);
    const auto adjacency = strict ? irsnav::Adjacency::strict : irsnav::Adjacency::standard;

    std::optional<irsnav::RadioMap> imported;
    irsnav::MapCache cache = irsnav::MapCache::from_environment();
    const irsnav::RadioMap *map = nullptr;
    if (!map_file.empty()) {
        imported = irsnav::import_map(irsnav::read_file(map_file));
        if (imported->fingerprint != irsnav::map_fingerprint(scene, imported->mode))
            std::cerr << "warning: map '" << map_file << "' was built for a different scenario (fingerprint "
                      << imported->fingerprint << ")\n";
        map = &*imported;
    } else {
        map = &cache.get(scene, mode, threads_of(c));
    }

    try {
        const irsnav::PlannedPath path = irsnav::plan_path(*map, scene, gamma_bar, adjacency);
        if (auto dest = destination(c, "path.csv")) irsnav::write_file_atomic(*dest, irsnav::export_path(path, *map));
        double margin = std::numeric_limits<double>::infinity();
        for (const auto &cell : path.cells) margin = std::min(margin, map->db_at(cell) - gamma_bar);
        std::cout << "mode " << map->mode.name() << ", gamma_bar " << irsnav::detail::format_double(gamma_bar) << " dB\n"
                  << "distance " << irsnav::detail::format_double(path.total_distance) << " m, travel time "
                  << irsnav::detail::format_double(path.travel_time) << " s, " << path.waypoints.size()
                  << " waypoints\n"
                  << "feasibility margin " << db(margin) << " dB\n";
        if (path.start_snap > 0.0 || path.goal_snap > 0.0)
            std::cout << "endpoints snapped to cell centers by " << irsnav::detail::format_double(path.start_snap)
                      << " m and " << irsnav::detail::format_double(path.goal_snap) << " m\n";
        return exit_ok;
    } catch (const irsnav::InfeasiblePlanError &e) {
        const auto best = irsnav::max_feasible_gamma(*map, irsnav::cell_of(map->grid, scene.start),
                                                     irsnav::cell_of(map->grid, scene.goal), adjacency);
        std::cerr << "infeasible (" << irsnav::reason_code(e.reason()) << ") at gamma_bar "
                  << irsnav::detail::format_double(gamma_bar) << " dB: " << e.what() << '\n';
        if (best) std::cerr << "nearest feasible gamma_bar: " << irsnav::detail::format_double(*best) << " dB\n";
        else std::cerr << "no threshold admits a path\n";
        return exit_infeasible;
    }
}

std::vector<double> parse_values(const std::string &text) {
    // "first:step:last" or a comma separated list.
    const auto colon = irsnav::detail::split(text, ':');
    if (colon.size() == 3)
        return irsnav::linear_range(irsnav::detail::parse_double(colon[0], 0, 0), irsnav::detail::parse_double(colon[2], 0, 0),
                                    irsnav::detail::parse_double(colon[1], 0, 0));
    std::vector<double> out;
    for (const auto &part : irsnav::detail::split(text, ',')) out.push_back(irsnav::detail::parse_double(part, 0, 0));
    return out;
}

int cmd_sweep(const Common &c, const std::string &variable, const std::string &values, const std::string &modes,
              std::optional<double> gamma, bool strict) {
    irsnav::Scenario scene = load(c);
    if (gamma) scene.gamma_bar_db = *gamma;
    irsnav::SweepSpec spec;
    if (variable == "gamma_bar") spec.variable = irsnav::SweepVariable::gamma_bar;
    else if (variable == "num_elements") spec.variable = irsnav::SweepVariable::num_elements;
    else throw irsnav::ParameterError("--variable must be gamma_bar or num_elements");
    try {
        spec.values = parse_values(values);
    } catch (const irsnav::ParseError &e) {
        throw irsnav::ParameterError(std::string("--values: ") + e.what());
    }
    for (const auto &m : irsnav::detail::split(modes, ',')) spec.modes.push_back(irsnav::parse_mode(m));

    irsnav::MapCache cache = irsnav::MapCache::from_environment();
    const auto result = irsnav::run_sweep(scene, spec, cache, strict ? irsnav::Adjacency::strict : irsnav::Adjacency::standard,
                                          threads_of(c));
    const std::string text = irsnav::format_sweep(result);
    if (auto dest = destination(c, "sweep.csv")) irsnav::write_file_atomic(*dest, text);
    else std::cout << text;
    return exit_ok;
}

int cmd_validate(const Common &c, std::uint64_t samples, std::uint64_t seed) {
    const irsnav::Scenario scene = load(c);
    const auto report = irsnav::run_validation(scene, samples, seed, threads_of(c));
    const std::string text = irsnav::format_validation(report);
    if (auto dest = destination(c, "validation.csv")) irsnav::write_file_atomic(*dest, text);
    std::cout << text;
    return report.pass() ? exit_ok : exit_validation;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Radio-map based path planning with an intelligent reflecting surface"};
    app.require_subcommand(1);

    Common map_opts, plan_opts, sweep_opts, validate_opts;

    auto *map_cmd = app.add_subcommand("map", "Build a channel power gain map");
    add_common(map_cmd, map_opts, true);
    std::string heatmap;
    map_cmd->add_option("--heatmap", heatmap, "Also write a PGM heatmap to this file");

    auto *plan_cmd = app.add_subcommand("plan", "Plan a shortest path under a gain threshold");
    add_common(plan_cmd, plan_opts, true);
    std::optional<double> plan_gamma;
    bool plan_strict = false;
    std::string map_file;
    plan_cmd->add_option("--gamma", plan_gamma, "Threshold gamma_bar in dB (default: from the scenario)");
    plan_cmd->add_flag("--strict", plan_strict, "Forbid diagonal moves past infeasible corners");
    plan_cmd->add_option("--map", map_file, "Plan on a previously exported map instead of building one");

    auto *sweep_cmd = app.add_subcommand("sweep", "Distance versus threshold or element count");
    add_common(sweep_cmd, sweep_opts, false);
    std::string variable = "gamma_bar", values, modes = "no_irs,1bit,2bit,3bit,continuous";
    std::optional<double> sweep_gamma;
    bool sweep_strict = false;
    sweep_cmd->add_option("--variable", variable, "gamma_bar or num_elements")->capture_default_str();
    sweep_cmd->add_option("--values", values, "first:step:last or a comma separated list")->required();
    sweep_cmd->add_option("--modes", modes, "Comma separated modes")->capture_default_str();
    sweep_cmd->add_option("--gamma", sweep_gamma, "Threshold in dB for element sweeps (default: from the scenario)");
    sweep_cmd->add_flag("--strict", sweep_strict, "Forbid diagonal moves past infeasible corners");

    auto *validate_cmd = app.add_subcommand("validate", "Monte Carlo check of the expected gain at probe cells");
    add_common(validate_cmd, validate_opts, false);
    std::uint64_t samples = 100000, seed = 1;
    validate_cmd->add_option("--samples", samples, "Channel realizations per probe (>= 10000)")->capture_default_str();
    validate_cmd->add_option("--seed", seed, "Random seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (map_cmd->parsed()) return cmd_map(map_opts, heatmap);
        if (plan_cmd->parsed()) return cmd_plan(plan_opts, plan_gamma, plan_strict, map_file);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_opts, variable, values, modes, sweep_gamma, sweep_strict);
        if (validate_cmd->parsed()) return cmd_validate(validate_opts, samples, seed);
    } catch (const irsnav::ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const irsnav::InfeasibleLocationError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const irsnav::ParseError &e) {
        std::cerr << "malformed input: " << e.what() << '\n';
        return exit_io;
    } catch (const std::ios_base::failure &e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return exit_io;
    } catch (const std::filesystem::filesystem_error &e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return exit_io;
    } catch (const irsnav::Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}
