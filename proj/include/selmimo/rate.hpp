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

#ifndef SELMIMO_RATE_HPP
#define SELMIMO_RATE_HPP

#include <armadillo>
#include <cmath>
#include <span>
#include <stdexcept>

#include "config.hpp"
#include "csi.hpp"
#include "errors.hpp"

namespace selmimo
{

/// Additive noise plus aggregate CSI-error power. The receiver treats the
/// residual estimation/prediction error as extra white Gaussian noise.
struct EquivalentNoise
{
    double beta;        // total residual error power, sum of v_tilde
    double noise_power; // 1 + beta
};

/// Equivalent noise when all users transmit data.
inline EquivalentNoise equivalent_noise(const CsiState &csi)
{
    double beta = 0.0;
    for (arma::uword k = 0; k < csi.v_tilde.n_elem; ++k)
        beta += csi.v_tilde(k);
    return {beta, 1.0 + beta};
}

/// Equivalent noise when only the given users transmit data (user
/// scheduling): silent users contribute no residual interference.
inline EquivalentNoise equivalent_noise(const CsiState &csi, std::span<const int> served)
{
    double beta = 0.0;
    for (const int k : served)
        beta += csi.v_tilde(static_cast<arma::uword>(k));
    return {beta, 1.0 + beta};
}

namespace detail
{

/// log det via Cholesky of a Hermitian positive definite matrix.
inline double logdet_hpd(const arma::cx_mat &g)
{
    arma::cx_mat r;
    if (!arma::chol(r, g))
        throw std::runtime_error("logdet_hpd: Cholesky factorization failed");
    double val = 0.0;
    for (arma::uword i = 0; i < r.n_rows; ++i)
        val += std::log(r(i, i).real());
    return 2.0 * val;
}

} // namespace detail

/// One Monte Carlo sample of the per-user achievable rate, in nats:
/// (1 - tau/T0) * (1/K) * logdet(I + H_hat H_hat^H / noise_power).
/// Uses the Gram form on the smaller dimension; the N x N and K x K forms
/// agree by the determinant identity det(I + AB) = det(I + BA).
inline double block_rate_sample(const arma::cx_mat &h_hat, const EquivalentNoise &noise, int tau, int block_length,
                                int n_users)
{
    if (tau < 0 || tau > block_length)
        throw std::invalid_argument("block_rate_sample: tau must lie in [0, T0]");
    if (!h_hat.is_finite())
        throw std::invalid_argument("block_rate_sample: non-finite channel estimate");
    if (tau == block_length || h_hat.n_cols == 0)
        return 0.0;

    const double scale = 1.0 / noise.noise_power;
    arma::cx_mat gram;
    if (h_hat.n_cols <= h_hat.n_rows)
        gram = arma::eye<arma::cx_mat>(h_hat.n_cols, h_hat.n_cols) + scale * (h_hat.t() * h_hat);
    else
        gram = arma::eye<arma::cx_mat>(h_hat.n_rows, h_hat.n_rows) + scale * (h_hat * h_hat.t());

    const double prefactor = 1.0 - static_cast<double>(tau) / static_cast<double>(block_length);
    return prefactor * detail::logdet_hpd(gram) / static_cast<double>(n_users);
}

/// Inputs of the deterministic-equivalent rate approximation: obtained
/// channel variances normalized by the equivalent noise power.
struct DetEqProblem
{
    arma::vec v_bar; // v_hat_k / (1 + beta), zero for silent users
    int n_antennas = 0;
    int n_users = 0;
    int tau = 0;
    int block_length = 0;
};

inline DetEqProblem normalized_variances(const CsiState &csi, int tau, int block_length)
{
    const EquivalentNoise noise = equivalent_noise(csi);
    DetEqProblem p;
    p.v_bar = csi.v_hat / noise.noise_power;
    p.n_antennas = csi.n_antennas();
    p.n_users = csi.n_users();
    p.tau = tau;
    p.block_length = block_length;
    return p;
}

/// Variant for user scheduling: only served users enter the noise power
/// and keep a nonzero normalized variance.
inline DetEqProblem normalized_variances(const CsiState &csi, std::span<const int> served, int tau, int block_length)
{
    const EquivalentNoise noise = equivalent_noise(csi, served);
    DetEqProblem p;
    p.v_bar.zeros(csi.v_hat.n_elem);
    for (const int k : served)
        p.v_bar(static_cast<arma::uword>(k)) = csi.v_hat(static_cast<arma::uword>(k)) / noise.noise_power;
    p.n_antennas = csi.n_antennas();
    p.n_users = csi.n_users();
    p.tau = tau;
    p.block_length = block_length;
    return p;
}

struct FixedPointResult
{
    double t = 0.0;    // common diagonal entry of the resolvent matrix
    int iterations = 0;
    double residual = 0.0; // |f(t) - t| at the returned iterate
};

/// Solves the scalar fixed-point equation behind the deterministic
/// equivalent:  t = K / (1 + sum_k v_bar_k / (1 + (N/K) v_bar_k t)).
/// With equal per-antenna variances the full matrix equation collapses to
/// this scalar; iteration from t = 1 converges monotonically.
inline FixedPointResult solve_fixed_point(const DetEqProblem &problem, double tol = 1e-10, int max_iter = 1000)
{
    if (!(tol > 0.0))
        throw std::invalid_argument("solve_fixed_point: tolerance must be > 0");
    const double k_users = static_cast<double>(problem.n_users);
    const double ratio = static_cast<double>(problem.n_antennas) / k_users;

    const auto step = [&](double t) {
        double s = 0.0;
        for (arma::uword k = 0; k < problem.v_bar.n_elem; ++k)
        {
            const double vb = problem.v_bar(k);
            s += vb / (1.0 + ratio * vb * t);
        }
        return k_users / (1.0 + s);
    };

    double t = 1.0;
    for (int it = 1; it <= max_iter; ++it)
    {
        const double t_next = step(t);
        if (std::abs(t_next - t) <= tol)
        {
            FixedPointResult result;
            result.t = t_next;
            result.iterations = it;
            result.residual = std::abs(step(t_next) - t_next);
            return result;
        }
        t = t_next;
    }
    throw convergence_error("solve_fixed_point: no convergence within " + std::to_string(max_iter) + " iterations",
                            t, max_iter);
}

/// Deterministic-equivalent approximation of the per-user achievable rate,
/// in nats.
inline double det_eq_rate(const DetEqProblem &problem, const FixedPointResult &fp)
{
    if (!(fp.t > 0.0) || !std::isfinite(fp.t))
        throw std::invalid_argument("det_eq_rate: fixed point must be positive and finite");

    const double k_users = static_cast<double>(problem.n_users);
    const double n_antennas = static_cast<double>(problem.n_antennas);
    const double ratio = n_antennas / k_users;

    double sum_log = 0.0;
    double sum_frac = 0.0;
    for (arma::uword k = 0; k < problem.v_bar.n_elem; ++k)
    {
        const double x = ratio * problem.v_bar(k) * fp.t;
        sum_log += std::log1p(x);
        sum_frac += x / (1.0 + x);
    }
    const double value = sum_log - n_antennas * std::log(fp.t / k_users) - sum_frac;
    const double prefactor = 1.0 - static_cast<double>(problem.tau) / static_cast<double>(problem.block_length);
    return prefactor * value / k_users;
}

/// Rates are tracked in nats internally; conversion happens at reporting.
inline double convert_rate(double nats, RateUnit unit)
{
    constexpr double ln2 = 0.69314718055994530941723212145818;
    return unit == RateUnit::nats ? nats : nats / ln2;
}

} // namespace selmimo

#endif
