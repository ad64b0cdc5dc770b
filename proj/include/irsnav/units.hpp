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

#ifndef IRSNAV_UNITS_HPP
#define IRSNAV_UNITS_HPP

#include <cmath>
#include <limits>
#include <numbers>

namespace irsnav {

inline constexpr double speed_of_light = 299792458.0; // m/s
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Power ratio in dB. Zero maps to -inf, and so does the -inf obstacle sentinel.
inline double to_db(double linear) {
    if (!(linear > 0.0)) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(linear);
}

inline double from_db(double db) {
    if (db == -std::numeric_limits<double>::infinity()) return 0.0;
    return std::pow(10.0, db / 10.0);
}

/// Path loss in dB (positive) to a linear power gain below one.
inline double loss_db_to_gain(double loss_db) { return std::pow(10.0, -loss_db / 10.0); }

inline double wavelength(double carrier_hz) { return speed_of_light / carrier_hz; }

/// Wraps an angle into [0, 2pi).
inline double wrap_phase(double angle) {
    double r = std::fmod(angle, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0;
    return r;
}

/// Distance between two angles on the circle, in [0, pi].
inline double circular_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), two_pi);
    return d > std::numbers::pi ? two_pi - d : d;
}

} // namespace irsnav

#endif // IRSNAV_UNITS_HPP
