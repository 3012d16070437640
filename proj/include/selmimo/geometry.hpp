// SPDX-License-Identifier: Apache-2.0
//
// selmimo - selective uplink training simulator for massive MIMO
// Copyright (C) 2026 The selmimo authors
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

#ifndef SELMIMO_GEOMETRY_HPP
#define SELMIMO_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "config.hpp"
#include "rng.hpp"

namespace selmimo
{

/// One realization of user positions around the base station at the origin.
/// Positions are static for the duration of an episode.
struct UserDrop
{
    std::vector<std::array<double, 2>> positions; // km
    std::vector<double> distances;                // km, Euclidean norm of position
    std::vector<double> variances;                // per-entry channel power v_k

    int n_users() const { return static_cast<int>(distances.size()); }
};

/// Large-scale channel power (d/d0)^(-exponent).
inline double large_scale_variance(double distance, double ref_distance, double exponent)
{
    if (!(distance > 0.0))
        throw std::domain_error("large_scale_variance: distance must be > 0");
    if (!(ref_distance > 0.0))
        throw std::domain_error("large_scale_variance: reference distance must be > 0");
    return std::pow(distance / ref_distance, -exponent);
}

/// Received SNR in dB at distance d under the configured path-loss law.
inline double snr_db(double distance, const SystemConfig &cfg)
{
    if (!(distance > 0.0))
        throw std::domain_error("snr_db: distance must be > 0");
    return cfg.snr0_db - 10.0 * cfg.path_loss_exponent * std::log10(distance / cfg.ref_distance);
}

/// Temporal correlation coefficient under the Jakes model:
/// J0(2 pi f_D interval). May be negative for large arguments; the
/// simulator itself only accepts c in [0, 1].
inline double temporal_correlation_jakes(double f_doppler, double interval)
{
    return std::cyl_bessel_j(0.0, 2.0 * 3.14159265358979323846 * f_doppler * interval);
}

/// Users closer than this to the base station are pushed out to this radius
/// so that v_k stays bounded. 1 m, i.e. irrelevant at cell scale.
inline constexpr double min_user_distance_km = 1e-3;

/// Draws K user positions i.i.d. uniform over the disk of radius
/// cell_radius. Distances and variances are filled per the path-loss law.
inline UserDrop sample_user_drop(const SystemConfig &cfg, RngStream &stream,
                                 double min_distance = min_user_distance_km)
{
    cfg.validate();
    constexpr double two_pi = 6.283185307179586476925286766559;

    UserDrop drop;
    drop.positions.resize(cfg.n_users);
    drop.distances.resize(cfg.n_users);
    drop.variances.resize(cfg.n_users);

    for (int k = 0; k < cfg.n_users; ++k)
    {
        // sqrt of a uniform radius fraction gives an exactly uniform density
        double r = cfg.cell_radius * std::sqrt(stream.uniform());
        const double theta = two_pi * stream.uniform();
        if (r < min_distance)
            r = min_distance;

        drop.positions[k] = {r * std::cos(theta), r * std::sin(theta)};
        drop.distances[k] = r;
        drop.variances[k] = large_scale_variance(r, cfg.ref_distance, cfg.path_loss_exponent);
    }
    return drop;
}

} // namespace selmimo

#endif
