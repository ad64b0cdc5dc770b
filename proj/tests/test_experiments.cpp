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

#include "irsnav/experiments.hpp"

#include <gtest/gtest.h>

#include <filesystem>

#include <unistd.h>

using namespace irsnav;

namespace {

std::filesystem::path fresh_dir(const std::string &name) {
    const auto dir = std::filesystem::temp_directory_path() / ("irsnav_test_" + name + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST(LinearRange, InclusiveAndStable) {
    const auto v = linear_range(-66.0, -58.0, 0.1);
    ASSERT_EQ(v.size(), 81u);
    EXPECT_EQ(v.front(), -66.0);
    EXPECT_NEAR(v.back(), -58.0, 1e-12);
    EXPECT_EQ(linear_range(200, 2000, 200).size(), 10u);
    EXPECT_EQ(linear_range(5, 1, 2), (std::vector<double>{5, 3, 1}));
    EXPECT_THROW(linear_range(0, 1, 0), ParameterError);
}

TEST(SweepSpecCheck, Rejections) {
    const Scenario s = factory_scenario();
    SweepSpec spec{SweepVariable::gamma_bar, {}, {MapMode::continuous()}};
    EXPECT_THROW(validate(spec, s), ParameterError);
    spec.values = {-60, -61, -60};
    EXPECT_THROW(validate(spec, s), ParameterError);
    spec.values = {-60, -61};
    EXPECT_NO_THROW(validate(spec, s));
    spec.variable = SweepVariable::num_elements;
    spec.values = {200, 300};
    EXPECT_THROW(validate(spec, s), ParameterError);
    spec.values = {200, 400};
    EXPECT_NO_THROW(validate(spec, s));
    spec.modes.clear();
    EXPECT_THROW(validate(spec, s), ParameterError);
}

TEST(Sweep, ThresholdSweepIsMonotone) {
    MapCache cache(std::nullopt);
    const Scenario s = factory_scenario();
    const SweepSpec spec{SweepVariable::gamma_bar, linear_range(-66.0, -60.0, 0.25),
                         {MapMode::no_irs(), MapMode::discrete(2), MapMode::continuous()}};
    const SweepResult r = run_sweep(s, spec, cache);
    ASSERT_EQ(r.rows.size(), spec.values.size() * 3);
    ASSERT_EQ(r.thresholds.size(), 3u);
    for (std::size_t m = 0; m < 3; ++m) {
        double previous = 0.0;
        bool infeasible = false;
        for (std::size_t k = 0; k < spec.values.size(); ++k) {
            const SweepRow &row = r.rows[m * spec.values.size() + k];
            if (!row.distance) {
                infeasible = true;
                continue;
            }
            EXPECT_FALSE(infeasible) << "feasible again after an infeasible threshold";
            EXPECT_GE(*row.distance, previous);
            previous = *row.distance;
            // Feasible exactly up to the reported threshold.
            EXPECT_LE(row.value, *r.thresholds[m].gamma_bar_db);
        }
    }
    EXPECT_EQ(cache.builds(), 3u);
}

TEST(Sweep, FormatHasHeaderRowsAndThresholds) {
    MapCache cache(std::nullopt);
    const SweepSpec spec{SweepVariable::gamma_bar, {-63.0, -50.0}, {MapMode::continuous()}};
    const std::string text = format_sweep(run_sweep(factory_scenario(), spec, cache));
    EXPECT_EQ(text.rfind("variable,value,mode,distance\ngamma_bar_db,-63,continuous,", 0), 0u) << text;
    EXPECT_NE(text.find("gamma_bar_db,-50,continuous,infeasible\n"), std::string::npos) << text;
    EXPECT_NE(text.find("# max_feasible_gamma_bar_db mode=continuous value=-62.32"), std::string::npos) << text;
}

TEST(Sweep, ElementSweepReportsPerCount) {
    MapCache cache(std::nullopt);
    const SweepSpec spec{SweepVariable::num_elements, {400, 1200, 2000}, {MapMode::continuous()}};
    const SweepResult r = run_sweep(factory_scenario(), spec, cache);
    ASSERT_EQ(r.rows.size(), 3u);
    ASSERT_EQ(r.thresholds.size(), 3u);
    EXPECT_EQ(r.thresholds[1].value, 1200.0);
    for (const auto &row : r.rows) EXPECT_TRUE(row.distance.has_value());
    EXPECT_GE(*r.rows[0].distance, *r.rows[2].distance);
    EXPECT_EQ(cache.builds(), 3u);
}

TEST(Cache, MemoryAndDiskHitsGiveIdenticalResults) {
    const auto dir = fresh_dir("cache");
    const Scenario s = factory_scenario();
    const SweepSpec spec{SweepVariable::gamma_bar, linear_range(-64.0, -62.0, 0.5), {MapMode::discrete(4), MapMode::no_irs()}};

    MapCache cold(dir);
    const std::string first = format_sweep(run_sweep(s, spec, cold));
    EXPECT_EQ(cold.builds(), 2u);
    EXPECT_EQ(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator{}), 2);
    const std::string again = format_sweep(run_sweep(s, spec, cold));
    EXPECT_EQ(cold.hits(), 2u);
    EXPECT_EQ(again, first);

    MapCache warm(dir);
    const std::string second = format_sweep(run_sweep(s, spec, warm));
    EXPECT_EQ(warm.builds(), 0u);
    EXPECT_EQ(warm.disk_hits(), 2u);
    EXPECT_EQ(second, first);
    EXPECT_EQ(export_map(warm.get(s, MapMode::discrete(4))), export_map(build_map(s, MapMode::discrete(4))));
    std::filesystem::remove_all(dir);
}

TEST(Cache, CorruptFileIsRebuilt) {
    const auto dir = fresh_dir("corrupt");
    const Scenario s = factory_scenario();
    const std::string fp = map_fingerprint(s, MapMode::no_irs());
    write_file_atomic(dir / (fp + ".csv"), "garbage\n");
    MapCache cache(dir);
    EXPECT_NO_THROW(cache.get(s, MapMode::no_irs()));
    EXPECT_EQ(cache.builds(), 1u);
    EXPECT_EQ(read_file(dir / (fp + ".csv")), export_map(build_map(s, MapMode::no_irs())));
    std::filesystem::remove_all(dir);
}

TEST(Files, AtomicWriteReplacesWholeFile) {
    const auto dir = fresh_dir("atomic");
    const auto file = dir / "out.txt";
    write_file_atomic(file, "first version, longer\n");
    write_file_atomic(file, "second\n");
    EXPECT_EQ(read_file(file), "second\n");
    EXPECT_FALSE(std::filesystem::exists(dir / "out.txt.tmp"));
    EXPECT_THROW(read_file(dir / "missing.txt"), std::ios_base::failure);
    std::filesystem::remove_all(dir);
}

TEST(Validation, ProbeClassesArePresent) {
    const auto probes = probe_cells(factory_scenario());
    ASSERT_EQ(probes.size(), 4u);
    const Scenario s = factory_scenario();
    EXPECT_FALSE(segment_blocked(s, s.ap, probes[0].point));
    EXPECT_TRUE(segment_blocked(s, s.ap, probes[1].point));
    EXPECT_FALSE(segment_blocked(s, s.irs, probes[1].point));
    EXPECT_TRUE(segment_blocked(s, s.irs, probes[2].point));
    EXPECT_EQ(probes[3].kind, ProbeKind::near_irs);
}

TEST(Validation, DeterministicAndWithinBounds) {
    const Scenario s = factory_scenario();
    const ValidationReport a = run_validation(s, 20000, 9, 1);
    const ValidationReport b = run_validation(s, 20000, 9, 3);
    EXPECT_EQ(format_validation(a), format_validation(b));
    for (const auto &p : a.probes) EXPECT_LT(p.relative_error, 0.05) << to_string(p.probe.kind);
    EXPECT_NE(format_validation(a), format_validation(run_validation(s, 20000, 10, 1)));
    EXPECT_THROW(run_validation(s, 100, 1), ParameterError);
}
