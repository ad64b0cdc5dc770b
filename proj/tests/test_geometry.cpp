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

#include "irsnav/geometry.hpp"
#include "irsnav/scenario.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace irsnav;

namespace {

GridSpec factory_grid() { return make_grid(-10.0, 10.0, -10.0, 10.0, 0.5, 1.0); }

// Independent blockage oracle: sample the segment densely and test each point against the
// closed box. Only used on segments that are clearly inside or clearly outside.
bool sampled_blocked(const ObstacleBox &b, const Point3 &p, const Point3 &q, int steps = 20000) {
    for (int k = 1; k < steps; ++k) {
        const double t = static_cast<double>(k) / steps;
        const Point3 s = p + t * (q - p);
        if (s.x >= b.x_min() && s.x <= b.x_max() && s.y >= b.y_min() && s.y <= b.y_max() && s.z >= 0.0 &&
            s.z <= b.height)
            return true;
    }
    return false;
}

} // namespace

TEST(Grid, FactoryGridShape) {
    const GridSpec g = factory_grid();
    EXPECT_EQ(g.nx, 40);
    EXPECT_EQ(g.ny, 40);
    EXPECT_EQ(g.q0, (Point3{-9.75, -9.75, 1.0}));
    EXPECT_DOUBLE_EQ(g.delta, 0.5);
}

TEST(Grid, CellCenterExamples) {
    const GridSpec g = factory_grid();
    EXPECT_EQ(cell_center(g, {1, 1}), (Point3{-9.75, -9.75, 1.0}));
    EXPECT_EQ(cell_center(g, {2, 1}), (Point3{-9.25, -9.75, 1.0}));
    EXPECT_EQ(cell_center(g, {40, 20}), (Point3{9.75, -0.25, 1.0}));
}

TEST(Grid, CellCenterOutOfRangeThrows) {
    const GridSpec g = factory_grid();
    EXPECT_THROW(cell_center(g, {0, 1}), BoundsError);
    EXPECT_THROW(cell_center(g, {41, 1}), BoundsError);
    EXPECT_THROW(cell_center(g, {1, 41}), BoundsError);
}

TEST(Grid, CellOfExamples) {
    const GridSpec g = factory_grid();
    EXPECT_EQ(cell_of(g, cell_center(g, {7, 3})), (CellIndex{7, 3}));
    EXPECT_EQ(cell_of(g, g.q0 + Point3{0.24, 0.24, 0.0}), (CellIndex{1, 1}));
    EXPECT_EQ(cell_of(g, {-10.0, 0.0, 1.0}), (CellIndex{1, 20}));
    EXPECT_EQ(cell_of(g, {10.0, 0.0, 1.0}), (CellIndex{40, 20}));
    EXPECT_EQ(cell_of(g, {10.0, 10.0, 1.0}), (CellIndex{40, 40}));
}

TEST(Grid, CellOfOutsideThrows) {
    const GridSpec g = factory_grid();
    EXPECT_THROW(cell_of(g, {-10.1, 0.0, 1.0}), OutOfRegionError);
    EXPECT_THROW(cell_of(g, {0.0, 10.01, 1.0}), OutOfRegionError);
}

TEST(Grid, CellOfRoundTripsEveryCenter) {
    for (double delta : {0.5, 0.3, 0.1, 1.0 / 3.0}) {
        const GridSpec g = make_grid(-10.0, 10.0, -7.0, 5.0, delta, 1.0);
        for (int i = 1; i <= g.nx; ++i)
            for (int j = 1; j <= g.ny; ++j) ASSERT_EQ(cell_of(g, cell_center(g, {i, j})), (CellIndex{i, j}));
    }
}

TEST(Grid, InteriorBoundaryTieGoesToLowerIndex) {
    const GridSpec g = factory_grid();
    // x = -9.5 separates cells 1 and 2.
    EXPECT_EQ(cell_of(g, {-9.5, -9.6, 1.0}).i, 1);
    EXPECT_EQ(cell_of(g, {-9.4999, -9.6, 1.0}).i, 2);
}

TEST(Grid, OffsetIsRowMajor) {
    const GridSpec g = factory_grid();
    EXPECT_EQ(g.offset({1, 1}), 0u);
    EXPECT_EQ(g.offset({1, 2}), 1u);
    EXPECT_EQ(g.offset({2, 1}), 40u);
    for (std::size_t k = 0; k < g.cell_count(); k += 37) EXPECT_EQ(g.offset(g.cell_at(k)), k);
}

TEST(Grid, RejectsBadParameters) {
    EXPECT_THROW(make_grid(0.0, 1.0, 0.0, 1.0, 0.0, 1.0), ParameterError);
    EXPECT_THROW(make_grid(1.0, 0.0, 0.0, 1.0, 0.1, 1.0), ParameterError);
}

TEST(Footprint, Examples) {
    const Scenario s = factory_scenario();
    EXPECT_TRUE(in_obstacle_footprint(s, {0.0, 0.0, 1.0}));
    EXPECT_FALSE(in_obstacle_footprint(s, {-10.0, 0.0, 1.0}));
    EXPECT_TRUE(in_obstacle_footprint(s, {2.0, 4.0, 1.0}));  // edge of box at (3, 4)
    EXPECT_TRUE(in_obstacle_footprint(s, {1.0, 2.0, 1.0}));  // corner
    EXPECT_FALSE(in_obstacle_footprint(s, {0.0, 3.0, 1.0})); // corridor between boxes
    EXPECT_TRUE(in_obstacle_footprint(s, {0.0, 0.0, 50.0})); // height is ignored
}

TEST(Blockage, Examples) {
    const Scenario s = factory_scenario();
    EXPECT_FALSE(segment_blocked(s, s.ap, s.irs));
    EXPECT_TRUE(segment_blocked(s, {0.0, -3.0, 1.0}, s.ap));
    EXPECT_FALSE(segment_blocked(s, {-10.0, 0.0, 1.0}, s.ap));
}

TEST(Blockage, TouchingCountsAsBlocked) {
    const ObstacleBox b{0.0, 0.0, 2.0, 2.0, 1.0};
    // Runs exactly along the top face.
    EXPECT_TRUE(segment_hits_box(b, {-3.0, 0.0, 1.0}, {3.0, 0.0, 1.0}));
    // Passes just over it.
    EXPECT_FALSE(segment_hits_box(b, {-3.0, 0.0, 1.0 + 1e-9}, {3.0, 0.0, 1.0 + 1e-9}));
    // Grazes a vertical edge.
    EXPECT_TRUE(segment_hits_box(b, {-2.0, 0.0, 0.5}, {0.0, 2.0, 0.5}));
    // Ends right before the face: the open segment does not reach it.
    EXPECT_FALSE(segment_hits_box(b, {-3.0, 0.0, 0.5}, {-1.0 - 1e-9, 0.0, 0.5}));
}

TEST(Blockage, AgreesWithSampledOracle) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coord(-6.0, 6.0), zc(0.0, 3.0);
    const ObstacleBox b{0.3, -0.7, 3.0, 2.0, 1.3};
    int checked = 0;
    for (int k = 0; k < 3000; ++k) {
        const Point3 p{coord(rng), coord(rng), zc(rng)};
        const Point3 q{coord(rng), coord(rng), zc(rng)};
        if (b.footprint_contains(p.x, p.y) && p.z <= b.height) continue;
        if (b.footprint_contains(q.x, q.y) && q.z <= b.height) continue;
        // Skip near-grazing segments where a sampled oracle cannot decide reliably.
        const ObstacleBox grown{b.center_x, b.center_y, b.size_x + 0.02, b.size_y + 0.02, b.height + 0.01};
        const ObstacleBox shrunk{b.center_x, b.center_y, b.size_x - 0.02, b.size_y - 0.02, b.height - 0.01};
        const bool outer = sampled_blocked(grown, p, q, 4000);
        const bool inner = sampled_blocked(shrunk, p, q, 4000);
        if (outer != inner) continue;
        ASSERT_EQ(segment_hits_box(b, p, q), inner) << p << " -> " << q;
        ++checked;
    }
    EXPECT_GT(checked, 2000);
}

TEST(Blockage, Symmetric) {
    const Scenario s = factory_scenario();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> c(-10.0, 10.0), z(0.0, 2.5);
    for (int k = 0; k < 2000; ++k) {
        const Point3 a{c(rng), c(rng), z(rng)}, b{c(rng), c(rng), z(rng)};
        ASSERT_EQ(segment_blocked(s, a, b), segment_blocked(s, b, a));
    }
}

TEST(Blockage, AboveAllObstaclesIsClear) {
    const Scenario s = factory_scenario();
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> c(-10.0, 10.0), z(1.3 + 1e-6, 4.0);
    for (int k = 0; k < 2000; ++k) ASSERT_FALSE(segment_blocked(s, {c(rng), c(rng), z(rng)}, {c(rng), c(rng), z(rng)}));
}

TEST(Blockage, ShrinkingObstaclesNeverBlocks) {
    const Scenario s = factory_scenario();
    std::vector<ObstacleBox> small;
    for (const auto &b : s.obstacles) small.push_back({b.center_x, b.center_y, b.size_x * 0.7, b.size_y * 0.9, b.height * 0.8});
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> c(-10.0, 10.0), z(0.0, 2.5);
    for (int k = 0; k < 5000; ++k) {
        const Point3 a{c(rng), c(rng), z(rng)}, b{c(rng), c(rng), z(rng)};
        if (!segment_blocked(s, a, b)) {
            ASSERT_FALSE(segment_blocked(small, a, b));
        }
    }
}

TEST(Scenario, FactoryIsValid) {
    const Scenario s = factory_scenario();
    EXPECT_NO_THROW(validate(s));
    EXPECT_EQ(s.obstacles.size(), 5u);
    EXPECT_EQ(s.irs_layout.element_count(), 1200);
    EXPECT_EQ(s.irs_layout.subsurface_count(), 60);
    EXPECT_EQ(s.irs_layout.elements_per_subsurface(), 20);
    EXPECT_NEAR(s.rician_k, 1.9952623149688795, 1e-15);
}

TEST(Scenario, ValidateRejects) {
    Scenario s = factory_scenario();
    s.start = {0.0, 0.0, 1.0};
    EXPECT_THROW(validate(s), InfeasibleLocationError);
    s = factory_scenario();
    s.v_max = 0.0;
    EXPECT_THROW(validate(s), ParameterError);
    s = factory_scenario();
    s.rician_k = -1.0;
    EXPECT_THROW(validate(s), ParameterError);
    s = factory_scenario();
    s.carrier_hz = 0.0;
    EXPECT_THROW(validate(s), ParameterError);
    s = factory_scenario();
    s.goal = {20.0, 0.0, 1.0};
    EXPECT_THROW(validate(s), Error);
}

TEST(Scenario, ElementCountOverride) {
    const Scenario s = factory_scenario();
    EXPECT_EQ(with_element_count(s, 200).irs_layout.nz, 1);
    EXPECT_EQ(with_element_count(s, 2000).irs_layout.nz, 10);
    EXPECT_EQ(with_element_count(s, 2000).irs_layout.element_count(), 2000);
    EXPECT_THROW(with_element_count(s, 300), ParameterError);
    EXPECT_THROW(with_element_count(s, 0), ParameterError);
}
