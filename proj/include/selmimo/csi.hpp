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

#ifndef SELMIMO_CSI_HPP
#define SELMIMO_CSI_HPP

#include <armadillo>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "channel.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "rng.hpp"

namespace selmimo
{

// Scalar variance bookkeeping shared by estimation, prediction and the
// selection scores. The complementary variance is always formed by
// subtraction from the prior v, which keeps v_hat + v_tilde == v exact in
// floating point across arbitrarily long episodes.

/// Error variance after training with tau pilot symbols: v / (1 + tau*v).
inline double training_error_variance(double v, int tau)
{
    return v / (1.0 + static_cast<double>(tau) * v);
}

struct VariancePair
{
    double v_hat;   // variance of the obtained channel
    double v_tilde; // variance of the residual error
};

inline VariancePair trained_variances(double v, int tau)
{
    const double v_tilde = training_error_variance(v, tau);
    return {v - v_tilde, v_tilde};
}

inline VariancePair predicted_variances(double v, double c, double prev_v_hat)
{
    const double v_hat = c * c * prev_v_hat;
    return {v_hat, v - v_hat};
}

/// Orthogonal pilot rows, one per trained user in selection order.
/// rows * rows^H = tau * I holds to machine precision.
struct PilotMatrix
{
    arma::cx_mat rows; // |S| x tau
    int tau = 0;

    int n_trained() const { return static_cast<int>(rows.n_rows); }
};

/// First n_selected rows of the tau-point discrete Fourier matrix.
/// Entries have unit modulus and the rows are exactly orthogonal.
inline PilotMatrix build_pilot_matrix(int n_selected, int tau)
{
    if (n_selected < 1)
        throw std::invalid_argument("build_pilot_matrix: need at least one trained user");
    if (n_selected > tau)
        throw infeasible_error("build_pilot_matrix: cannot fit " + std::to_string(n_selected) +
                               " orthogonal pilots into " + std::to_string(tau) + " symbols");

    constexpr double two_pi = 6.283185307179586476925286766559;
    PilotMatrix p;
    p.tau = tau;
    p.rows.set_size(n_selected, tau);
    for (int m = 0; m < n_selected; ++m)
        for (int n = 0; n < tau; ++n)
            p.rows(m, n) = std::polar(1.0, -two_pi * static_cast<double>(m) * static_cast<double>(n) /
                                               static_cast<double>(tau));

    const arma::cx_mat gram = p.rows * p.rows.t();
    const double err = arma::abs(gram - static_cast<double>(tau) *
                                            arma::eye<arma::cx_mat>(n_selected, n_selected))
                           .max();
    if (err > 1e-9 * static_cast<double>(tau))
        throw std::logic_error("build_pilot_matrix: orthogonality check failed");
    return p;
}

/// Received training block Y = H_S X_S + noise, N x tau.
struct TrainingObservation
{
    arma::cx_mat y;
};

enum class CsiSource : unsigned char
{
    trained,
    predicted
};

/// Obtained channel and its per-user variance bookkeeping.
/// All entries of user k's column share one (v_hat, v_tilde) pair.
struct CsiState
{
    arma::cx_mat h_hat;  // N x K obtained channel
    arma::vec v_hat;     // variance of the obtained channel per user
    arma::vec v_tilde;   // residual error variance per user
    std::vector<CsiSource> last_source;
    int block_index = -1;

    int n_antennas() const { return static_cast<int>(h_hat.n_rows); }
    int n_users() const { return static_cast<int>(v_hat.n_elem); }
};

/// State before any training: nothing is known, the full channel power
/// counts as error.
inline CsiState make_initial_csi(const UserDrop &drop, int n_antennas)
{
    const int n_users = drop.n_users();
    CsiState csi;
    csi.h_hat.zeros(n_antennas, n_users);
    csi.v_hat.zeros(n_users);
    csi.v_tilde.set_size(n_users);
    for (int k = 0; k < n_users; ++k)
        csi.v_tilde(k) = drop.variances[k];
    csi.last_source.assign(static_cast<std::size_t>(n_users), CsiSource::predicted);
    csi.block_index = -1;
    return csi;
}

/// Training observation with a caller-supplied noise matrix (test hook).
inline TrainingObservation simulate_training_with_noise(const ChannelState &channel,
                                                        std::span<const int> selected,
                                                        const PilotMatrix &pilots,
                                                        arma::cx_mat noise)
{
    if (static_cast<int>(selected.size()) != pilots.n_trained())
        throw std::invalid_argument("simulate_training: selection size does not match pilot rows");
    if (noise.n_rows != channel.h.n_rows || static_cast<int>(noise.n_cols) != pilots.tau)
        throw std::invalid_argument("simulate_training: noise dimensions must be N x tau");

    TrainingObservation obs;
    obs.y = std::move(noise);
    if (!selected.empty())
    {
        arma::uvec cols(selected.size());
        for (std::size_t j = 0; j < selected.size(); ++j)
            cols(j) = static_cast<arma::uword>(selected[j]);
        obs.y += channel.h.cols(cols) * pilots.rows;
    }
    return obs;
}

/// Received training block with unit-variance complex Gaussian noise.
/// Unselected users stay silent during the training phase.
inline TrainingObservation simulate_training(const ChannelState &channel, std::span<const int> selected,
                                             const PilotMatrix &pilots, RngStream &stream)
{
    arma::cx_mat noise(channel.h.n_rows, static_cast<arma::uword>(pilots.tau));
    for (arma::uword c = 0; c < noise.n_cols; ++c)
        for (arma::uword r = 0; r < noise.n_rows; ++r)
            noise(r, c) = stream.complex_normal(1.0);
    return simulate_training_with_noise(channel, selected, pilots, std::move(noise));
}

/// Pilot-matched filtering with normalization: (1/sqrt(tau)) * Y * x_k^H.
/// Yields sqrt(tau) * h_k plus effective noise with unit per-entry variance.
inline arma::cx_vec matched_filter(const TrainingObservation &obs, const arma::cx_rowvec &pilot_row, int tau)
{
    if (static_cast<int>(pilot_row.n_elem) != tau || static_cast<int>(obs.y.n_cols) != tau)
        throw std::invalid_argument("matched_filter: pilot length must equal tau");
    return (obs.y * pilot_row.t()) / std::sqrt(static_cast<double>(tau));
}

struct ScalarEstimate
{
    arma::cx_vec h_hat;
    double v_hat;
    double v_tilde;
};

/// Scalar MMSE estimate from the normalized observation r = sqrt(tau) h + n:
/// h_hat = sqrt(tau) v / (tau v + 1) * r, with the matching variance split.
inline ScalarEstimate mmse_estimate(const arma::cx_vec &r, double v, int tau)
{
    if (v < 0.0)
        throw std::invalid_argument("mmse_estimate: variance must be non-negative");
    if (tau < 1)
        throw std::invalid_argument("mmse_estimate: tau must be >= 1");
    const double tau_d = static_cast<double>(tau);
    const double coefficient = std::sqrt(tau_d) * v / (tau_d * v + 1.0);
    const VariancePair vp = trained_variances(v, tau);
    return {coefficient * r, vp.v_hat, vp.v_tilde};
}

/// Linear prediction for an untrained user: carry the previous obtained
/// channel forward scaled by the correlation coefficient.
inline ScalarEstimate predict(const arma::cx_vec &prev_h_hat, double prev_v_hat, double v, double c)
{
    const VariancePair vp = predicted_variances(v, c, prev_v_hat);
    return {c * prev_h_hat, vp.v_hat, vp.v_tilde};
}

/// One block of CSI bookkeeping: selected users are re-estimated from the
/// training observation, all others are predicted. Variance conservation
/// v_hat + v_tilde = v holds for every user.
inline CsiState advance_csi(const CsiState &prev, std::span<const int> selected, const TrainingObservation &obs,
                            const PilotMatrix &pilots, const UserDrop &drop, double c, int tau)
{
    const int n_users = prev.n_users();
    if (static_cast<int>(selected.size()) > pilots.n_trained())
        throw std::invalid_argument("advance_csi: selected user without a pilot row");
    if (!selected.empty() && pilots.tau != tau)
        throw std::invalid_argument("advance_csi: pilot length does not match tau");

    CsiState next = prev;
    next.block_index = prev.block_index + 1;

    std::vector<char> is_trained(static_cast<std::size_t>(n_users), 0);
    if (!selected.empty())
    {
        // batched matched filter over all trained users: (1/sqrt(tau)) Y X^H
        const arma::cx_mat filtered =
            (obs.y * pilots.rows.t()) / std::sqrt(static_cast<double>(tau));
        for (std::size_t j = 0; j < selected.size(); ++j)
        {
            const int k = selected[j];
            if (k < 0 || k >= n_users)
                throw std::invalid_argument("advance_csi: user index out of range");
            const double v = drop.variances[k];
            const double tau_d = static_cast<double>(tau);
            const double coefficient = std::sqrt(tau_d) * v / (tau_d * v + 1.0);
            const VariancePair vp = trained_variances(v, tau);
            next.h_hat.col(static_cast<arma::uword>(k)) = coefficient * filtered.col(j);
            next.v_hat(static_cast<arma::uword>(k)) = vp.v_hat;
            next.v_tilde(static_cast<arma::uword>(k)) = vp.v_tilde;
            next.last_source[static_cast<std::size_t>(k)] = CsiSource::trained;
            is_trained[static_cast<std::size_t>(k)] = 1;
        }
    }

    for (int k = 0; k < n_users; ++k)
    {
        if (is_trained[static_cast<std::size_t>(k)])
            continue;
        const VariancePair vp = predicted_variances(drop.variances[k], c, prev.v_hat(static_cast<arma::uword>(k)));
        next.h_hat.col(static_cast<arma::uword>(k)) = c * prev.h_hat.col(static_cast<arma::uword>(k));
        next.v_hat(static_cast<arma::uword>(k)) = vp.v_hat;
        next.v_tilde(static_cast<arma::uword>(k)) = vp.v_tilde;
        next.last_source[static_cast<std::size_t>(k)] = CsiSource::predicted;
    }
    return next;
}

/// Variance-only version of advance_csi: identical (v_hat, v_tilde, source)
/// bookkeeping without touching the channel estimates. Used where only
/// tracked statistics matter (selection scoring, deterministic-equivalent
/// sweeps).
inline CsiState advance_csi_variances(const CsiState &prev, std::span<const int> selected, const UserDrop &drop,
                                      double c, int tau)
{
    const int n_users = prev.n_users();
    CsiState next = prev;
    next.block_index = prev.block_index + 1;

    std::vector<char> is_trained(static_cast<std::size_t>(n_users), 0);
    for (const int k : selected)
    {
        if (k < 0 || k >= n_users)
            throw std::invalid_argument("advance_csi_variances: user index out of range");
        const VariancePair vp = trained_variances(drop.variances[k], tau);
        next.v_hat(static_cast<arma::uword>(k)) = vp.v_hat;
        next.v_tilde(static_cast<arma::uword>(k)) = vp.v_tilde;
        next.last_source[static_cast<std::size_t>(k)] = CsiSource::trained;
        is_trained[static_cast<std::size_t>(k)] = 1;
    }
    for (int k = 0; k < n_users; ++k)
    {
        if (is_trained[static_cast<std::size_t>(k)])
            continue;
        const VariancePair vp = predicted_variances(drop.variances[k], c, prev.v_hat(static_cast<arma::uword>(k)));
        next.v_hat(static_cast<arma::uword>(k)) = vp.v_hat;
        next.v_tilde(static_cast<arma::uword>(k)) = vp.v_tilde;
        next.last_source[static_cast<std::size_t>(k)] = CsiSource::predicted;
    }
    return next;
}

} // namespace selmimo

#endif
