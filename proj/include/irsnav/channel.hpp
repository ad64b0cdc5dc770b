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

#ifndef IRSNAV_CHANNEL_HPP
#define IRSNAV_CHANNEL_HPP

#include "irsnav/detail/parallel.hpp"
#include "irsnav/errors.hpp"
#include "irsnav/geometry.hpp"
#include "irsnav/scenario.hpp"
#include "irsnav/units.hpp"

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace irsnav {

using cdouble = std::complex<double>;

// ---------------------------------------------------------------------------------------
// Path loss, 3GPP indoor factory with sparse clutter and high base station (InF-SH).
// Distances in meters, carrier in Hz (the formulas consume GHz). Results in dB.

inline double path_loss_los_db(double d, double carrier_hz) {
    if (!(d > 0.0)) throw DomainError("path loss distance must be positive");
    return 31.84 + 21.5 * std::log10(d) + 19.0 * std::log10(carrier_hz / 1e9);
}

inline double path_loss_nlos_db(double d, double carrier_hz) {
    if (!(d > 0.0)) throw DomainError("path loss distance must be positive");
    const double nlos = 32.4 + 23.0 * std::log10(d) + 20.0 * std::log10(carrier_hz / 1e9);
    return std::max(path_loss_los_db(d, carrier_hz), nlos);
}

/// Large-scale statistics of one link. path_loss is a linear power gain (< 1 in practice).
struct LinkStats {
    double path_loss = 0.0;
    double rician_k = 0.0;
    double eta = 0.0; // path_loss / (rician_k + 1), the diffuse power

    bool line_of_sight() const { return rician_k > 0.0; }
};

inline LinkStats make_link_stats(double path_loss, double rician_k) {
    return {path_loss, rician_k, path_loss / (rician_k + 1.0)};
}

/// A blocked link is Rayleigh (K = 0) with NLoS path loss; otherwise Rician with the
/// scene's factor and LoS path loss.
inline LinkStats link_stats_between(const Scenario &scene, const Point3 &a, const Point3 &b) {
    const double d = distance(a, b);
    if (segment_blocked(scene, a, b)) return make_link_stats(loss_db_to_gain(path_loss_nlos_db(d, scene.carrier_hz)), 0.0);
    return make_link_stats(loss_db_to_gain(path_loss_los_db(d, scene.carrier_hz)), scene.rician_k);
}

enum class Endpoint { ap, irs };

inline LinkStats link_stats(const Scenario &scene, const Point3 &q, Endpoint endpoint) {
    if (in_obstacle_footprint(scene, q)) throw InfeasibleLocationError("user location lies inside an obstacle");
    return link_stats_between(scene, q, endpoint == Endpoint::ap ? scene.ap : scene.irs);
}

inline LinkStats ap_irs_link(const Scenario &scene) { return link_stats_between(scene, scene.ap, scene.irs); }

// ---------------------------------------------------------------------------------------
// IRS element geometry.

/// Element positions ordered sub-surface by sub-surface, so elements
/// [n * per_sub, (n + 1) * per_sub) share phase shift n.
struct IrsPanel {
    std::vector<Point3> elements;
    int per_subsurface = 1;

    int subsurface_count() const { return static_cast<int>(elements.size()) / per_subsurface; }
};

/// Uniform rectangular panel centered on the IRS reference point, lying in the plane
/// orthogonal to the normal. Panel columns run horizontally, rows vertically.
inline IrsPanel make_panel(const Scenario &scene) {
    const IrsLayout &layout = scene.irs_layout;
    const Point3 n = (1.0 / norm(scene.irs_normal)) * scene.irs_normal;
    Point3 u = cross(n, Point3{0.0, 0.0, 1.0});
    if (norm(u) < 1e-12) u = {1.0, 0.0, 0.0};
    u = (1.0 / norm(u)) * u;
    const Point3 v = cross(u, n);

    const int cols = layout.nx * layout.sub_nx;
    const int rows = layout.nz * layout.sub_nz;
    const double s = layout.element_spacing;

    IrsPanel panel;
    panel.per_subsurface = layout.elements_per_subsurface();
    panel.elements.reserve(static_cast<std::size_t>(layout.element_count()));
    for (int sz = 0; sz < layout.nz; ++sz)
        for (int sx = 0; sx < layout.nx; ++sx)
            for (int ez = 0; ez < layout.sub_nz; ++ez)
                for (int ex = 0; ex < layout.sub_nx; ++ex) {
                    const double col = sx * layout.sub_nx + ex - 0.5 * (cols - 1);
                    const double row = sz * layout.sub_nz + ez - 0.5 * (rows - 1);
                    panel.elements.push_back(scene.irs + (col * s) * u + (row * s) * v);
                }
    return panel;
}

// ---------------------------------------------------------------------------------------
// Per-location channel description.

/// Everything that determines the channel at one user location: link statistics and the
/// unit-modulus LoS phasors of the direct link, of every IRS-user element link and of
/// every AP-IRS element link.
struct ChannelContext {
    LinkStats ap_user;
    LinkStats irs_user;
    LinkStats ap_irs;
    cdouble direct_phasor;            // h-bar
    std::vector<cdouble> user_phasor; // r-bar, one per element
    std::vector<cdouble> ap_phasor;   // g-bar, one per element
    int per_subsurface = 1;

    int element_count() const { return static_cast<int>(user_phasor.size()); }
    int subsurface_count() const { return element_count() / per_subsurface; }
};

/// Deterministic (LoS) part of the effective channel, in the form it enters
/// c = h^H + r^H Theta g. `direct` is the scaled direct LoS term conj(h-tilde) and
/// cascade[n] sums conj(r-tilde_m) * g-tilde_m over the elements of sub-surface n.
/// `tau` is the phase-independent diffuse power.
struct LosChannel {
    cdouble direct;
    std::vector<cdouble> cascade;
    double tau = 0.0;

    std::size_t subsurface_count() const { return cascade.size(); }
};

inline cdouble los_phasor(double dist, double lambda) { return std::polar(1.0, -two_pi * dist / lambda); }

inline LosChannel los_components(const ChannelContext &ctx) {
    LosChannel los;
    los.direct = std::conj(std::sqrt(ctx.ap_user.eta * ctx.ap_user.rician_k) * ctx.direct_phasor);
    const double user_scale = std::sqrt(ctx.irs_user.eta * ctx.irs_user.rician_k);
    const double ap_scale = std::sqrt(ctx.ap_irs.eta * ctx.ap_irs.rician_k);
    const int n_sub = ctx.subsurface_count();
    los.cascade.assign(static_cast<std::size_t>(n_sub), cdouble{});
    for (int n = 0; n < n_sub; ++n) {
        cdouble acc{};
        for (int k = 0; k < ctx.per_subsurface; ++k) {
            const auto m = static_cast<std::size_t>(n * ctx.per_subsurface + k);
            acc += std::conj(user_scale * ctx.user_phasor[m]) * (ap_scale * ctx.ap_phasor[m]);
        }
        los.cascade[static_cast<std::size_t>(n)] = acc;
    }
    const double m_total = static_cast<double>(ctx.element_count());
    los.tau = ctx.ap_user.eta + ctx.ap_irs.eta * ctx.irs_user.eta *
                                    (ctx.irs_user.rician_k + ctx.ap_irs.rician_k + 1.0) * m_total;
    return los;
}

/// Expected effective channel power gain for sub-surface phase shifts `thetas`
/// (unit amplitude): |direct + sum_n cascade_n e^{j theta_n}|^2 + tau.
inline double expected_gain(const LosChannel &los, std::span<const double> thetas) {
    if (thetas.size() != los.cascade.size())
        throw ShapeError("expected " + std::to_string(los.cascade.size()) + " phase shifts, got " +
                         std::to_string(thetas.size()));
    cdouble sum = los.direct;
    for (std::size_t n = 0; n < thetas.size(); ++n) sum += los.cascade[n] * std::polar(1.0, thetas[n]);
    return std::norm(sum) + los.tau;
}

/// Precomputes the panel and the AP-IRS link of a scene so that per-location channel
/// queries are cheap. Immutable after construction.
class ChannelModel {
public:
    explicit ChannelModel(Scenario scene) : scene_(std::move(scene)), panel_(make_panel(scene_)) {
        lambda_ = scene_.wavelength();
        ap_irs_ = ap_irs_link(scene_);
        ap_phasor_.reserve(panel_.elements.size());
        for (const auto &p : panel_.elements) ap_phasor_.push_back(los_phasor(distance(scene_.ap, p), lambda_));
    }

    const Scenario &scene() const { return scene_; }
    const IrsPanel &panel() const { return panel_; }
    const LinkStats &ap_irs() const { return ap_irs_; }

    LinkStats link(const Point3 &q, Endpoint endpoint) const { return link_stats(scene_, q, endpoint); }

    ChannelContext context(const Point3 &q) const {
        ChannelContext ctx;
        ctx.ap_user = link(q, Endpoint::ap);
        ctx.irs_user = link(q, Endpoint::irs);
        ctx.ap_irs = ap_irs_;
        ctx.direct_phasor = los_phasor(distance(scene_.ap, q), lambda_);
        ctx.user_phasor.reserve(panel_.elements.size());
        for (const auto &p : panel_.elements) ctx.user_phasor.push_back(los_phasor(distance(p, q), lambda_));
        ctx.ap_phasor = ap_phasor_;
        ctx.per_subsurface = panel_.per_subsurface;
        return ctx;
    }

    LosChannel los(const Point3 &q) const { return los_components(context(q)); }

private:
    Scenario scene_;
    IrsPanel panel_;
    double lambda_ = 0.0;
    LinkStats ap_irs_;
    std::vector<cdouble> ap_phasor_;
};

inline LosChannel los_components(const Scenario &scene, const Point3 &q) { return ChannelModel(scene).los(q); }

// ---------------------------------------------------------------------------------------
// Random channel realizations.

/// Draws realizations of c = h^H + r^H Theta g with independent CN(0, 1) diffuse parts.
/// Owns its generator; one sampler per execution context.
class ChannelSampler {
public:
    ChannelSampler(const ChannelContext &ctx, std::span<const double> thetas, std::uint64_t seed)
        : ChannelSampler(ctx, thetas, std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}) {}

    ChannelSampler(const ChannelContext &ctx, std::span<const double> thetas, std::seed_seq &&seq)
        : per_subsurface_(static_cast<std::size_t>(ctx.per_subsurface)), rng_(seq), normal_(0.0, std::sqrt(0.5)) {
        if (thetas.size() != static_cast<std::size_t>(ctx.subsurface_count()))
            throw ShapeError("expected " + std::to_string(ctx.subsurface_count()) + " phase shifts, got " +
                             std::to_string(thetas.size()));
        reflect_.reserve(thetas.size());
        for (double t : thetas) reflect_.push_back(std::polar(1.0, t));
        const auto &am = ctx.ap_user;
        h_los_ = std::sqrt(am.eta * am.rician_k) * ctx.direct_phasor;
        h_diffuse_ = std::sqrt(am.eta);
        const double r_los = std::sqrt(ctx.irs_user.eta * ctx.irs_user.rician_k);
        const double g_los = std::sqrt(ctx.ap_irs.eta * ctx.ap_irs.rician_k);
        r_diffuse_ = std::sqrt(ctx.irs_user.eta);
        g_diffuse_ = std::sqrt(ctx.ap_irs.eta);
        r_los_.reserve(ctx.user_phasor.size());
        g_los_.reserve(ctx.ap_phasor.size());
        for (const auto &p : ctx.user_phasor) r_los_.push_back(r_los * p);
        for (const auto &p : ctx.ap_phasor) g_los_.push_back(g_los * p);
    }

    cdouble operator()() {
        const cdouble h = h_los_ + h_diffuse_ * draw();
        cdouble c = std::conj(h);
        const std::size_t per = per_subsurface_;
        for (std::size_t n = 0; n < reflect_.size(); ++n) {
            cdouble acc{};
            for (std::size_t m = n * per; m < (n + 1) * per; ++m) {
                const cdouble r = r_los_[m] + r_diffuse_ * draw();
                const cdouble g = g_los_[m] + g_diffuse_ * draw();
                acc += std::conj(r) * g;
            }
            c += acc * reflect_[n];
        }
        return c;
    }

private:
    cdouble draw() {
        const double re = normal_(rng_);
        const double im = normal_(rng_);
        return {re, im};
    }

    std::size_t per_subsurface_;
    boost::random::mt19937_64 rng_;
    boost::random::normal_distribution<double> normal_;
    std::vector<cdouble> reflect_;
    cdouble h_los_;
    double h_diffuse_ = 0.0;
    double r_diffuse_ = 0.0;
    double g_diffuse_ = 0.0;
    std::vector<cdouble> r_los_;
    std::vector<cdouble> g_los_;
};

/// One realization for a given seed.
inline cdouble sample_effective_channel(const ChannelContext &ctx, std::span<const double> thetas, std::uint64_t seed) {
    ChannelSampler sampler(ctx, thetas, seed);
    return sampler();
}

struct MonteCarloEstimate {
    std::uint64_t samples = 0;
    double mean = 0.0;      // empirical mean of |c|^2
    double std_dev = 0.0;   // sample standard deviation of |c|^2
    double std_error = 0.0; // std_dev / sqrt(samples)
};

inline constexpr std::uint64_t monte_carlo_batch = 1u << 16;

/// Empirical mean of |c|^2. Samples are split into fixed batches, each with its own
/// generator seeded from (seed, batch index); batches are reduced in order, so the
/// result does not depend on the thread count.
inline MonteCarloEstimate monte_carlo_gain(const ChannelContext &ctx, std::span<const double> thetas,
                                           std::uint64_t samples, std::uint64_t seed,
                                           unsigned threads = detail::default_thread_count()) {
    if (samples == 0) throw ParameterError("sample count must be positive");
    const std::uint64_t batches = (samples + monte_carlo_batch - 1) / monte_carlo_batch;
    struct Partial {
        double sum = 0.0;
        double sum_sq = 0.0;
    };
    std::vector<Partial> partial(batches);
    detail::parallel_for(
        batches,
        [&](std::size_t b) {
            ChannelSampler sampler(ctx, thetas,
                                   std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                                                 static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)});
            const std::uint64_t begin = b * monte_carlo_batch;
            const std::uint64_t end = std::min(samples, begin + monte_carlo_batch);
            Partial p;
            for (std::uint64_t s = begin; s < end; ++s) {
                const double power = std::norm(sampler());
                p.sum += power;
                p.sum_sq += power * power;
            }
            partial[b] = p;
        },
        threads);
    double sum = 0.0, sum_sq = 0.0;
    for (const auto &p : partial) {
        sum += p.sum;
        sum_sq += p.sum_sq;
    }
    MonteCarloEstimate est;
    est.samples = samples;
    const double n = static_cast<double>(samples);
    est.mean = sum / n;
    const double var = samples > 1 ? std::max(0.0, (sum_sq - n * est.mean * est.mean) / (n - 1.0)) : 0.0;
    est.std_dev = std::sqrt(var);
    est.std_error = est.std_dev / std::sqrt(n);
    return est;
}

} // namespace irsnav

#endif // IRSNAV_CHANNEL_HPP
