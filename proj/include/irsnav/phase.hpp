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

#ifndef IRSNAV_PHASE_HPP
#define IRSNAV_PHASE_HPP

#include "irsnav/channel.hpp"
#include "irsnav/errors.hpp"
#include "irsnav/units.hpp"

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

namespace irsnav {

/// Sub-surface phase shifts in [0, 2pi). levels == 0 marks continuous phases; otherwise
/// every entry is a multiple of 2pi / levels. Amplitudes are fixed to one.
struct PhaseConfig {
    std::vector<double> thetas;
    int levels = 0;

    bool continuous() const { return levels == 0; }
    std::size_t size() const { return thetas.size(); }
};

inline double expected_gain(const LosChannel &los, const PhaseConfig &phases) {
    return expected_gain(los, std::span<const double>(phases.thetas));
}

/// Phases that co-phase every cascade term with the direct term. With no direct LoS the
/// terms are aligned to phase zero; sub-surfaces with a zero cascade get phase zero.
inline PhaseConfig optimal_phases(const LosChannel &los) {
    if (los.cascade.empty()) throw ParameterError("at least one sub-surface is required");
    const double reference = los.direct == cdouble{} ? 0.0 : std::arg(los.direct);
    PhaseConfig out;
    out.thetas.reserve(los.cascade.size());
    for (const auto &w : los.cascade)
        out.thetas.push_back(w == cdouble{} ? 0.0 : wrap_phase(reference - std::arg(w)));
    return out;
}

inline bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

/// Nearest level of {0, d, ..., (L-1) d}, d = 2pi / L, under the circular distance.
/// Equidistant levels resolve to the smaller index.
inline double quantize_phase(double theta, int levels) {
    const double step = two_pi / levels;
    const double t = wrap_phase(theta);
    const int lower = std::min(static_cast<int>(std::floor(t / step)), levels - 1);
    const int upper = (lower + 1) % levels;
    const double d_lower = circular_distance(t, lower * step);
    const double d_upper = circular_distance(t, upper * step);
    int best;
    if (d_lower < d_upper) best = lower;
    else if (d_upper < d_lower) best = upper;
    else best = std::min(lower, upper);
    return best * step;
}

inline PhaseConfig quantize_phases(const PhaseConfig &optimal, int levels) {
    if (levels < 2) throw ParameterError("phase resolution needs at least 2 levels, got " + std::to_string(levels));
    if (!is_power_of_two(levels))
        throw ParameterError("phase levels must be a power of two, got " + std::to_string(levels));
    PhaseConfig out;
    out.levels = levels;
    out.thetas.reserve(optimal.thetas.size());
    for (double t : optimal.thetas) out.thetas.push_back(quantize_phase(t, levels));
    return out;
}

/// Closed-form maximum (|direct| + ||cascade||_1)^2 + tau.
inline double max_expected_gain(const LosChannel &los) {
    double amplitude = std::abs(los.direct);
    for (const auto &w : los.cascade) amplitude += std::abs(w);
    return amplitude * amplitude + los.tau;
}

/// Gain reached with continuous phases (levels == 0) or with the optimal phases
/// quantized to `levels` levels.
inline double achieved_gain(const LosChannel &los, int levels) {
    if (levels == 0) return max_expected_gain(los);
    return expected_gain(los, quantize_phases(optimal_phases(los), levels));
}

} // namespace irsnav

#endif // IRSNAV_PHASE_HPP
