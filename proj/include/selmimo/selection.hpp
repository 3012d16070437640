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

#ifndef SELMIMO_SELECTION_HPP
#define SELMIMO_SELECTION_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "csi.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "rng.hpp"

namespace selmimo
{

/// Per-block training policies. DUS picks the users whose training would
/// reduce the CSI error the most; RUS picks uniformly at random; US trains
/// and serves only the users closest to the base station; FT trains all.
enum class Policy
{
    DUS,
    RUS,
    US,
    FT
};

inline std::string to_string(Policy p)
{
    switch (p)
    {
    case Policy::DUS: return "DUS";
    case Policy::RUS: return "RUS";
    case Policy::US:  return "US";
    case Policy::FT:  return "FT";
    }
    return "?";
}

inline Policy parse_policy(std::string_view s)
{
    if (s == "DUS" || s == "dus")
        return Policy::DUS;
    if (s == "RUS" || s == "rus")
        return Policy::RUS;
    if (s == "US" || s == "us")
        return Policy::US;
    if (s == "FT" || s == "ft")
        return Policy::FT;
    throw config_error("unknown policy '" + std::string(s) + "' (expected DUS, RUS, US or FT)");
}

/// Trained user set for one block, 0-based indices in selection order.
struct SelectionOutcome
{
    std::vector<int> trained;
    Policy policy = Policy::DUS;
};

/// Per-user error variances behind the dynamic selection rule:
/// beta_t  - error variance if the user is trained this block,
/// beta_p  - error variance if the user is predicted instead,
/// delta   - beta_p - beta_t, the error reduction training would buy.
struct SelectionScore
{
    arma::vec beta_t;
    arma::vec beta_p;
    arma::vec delta;

    int n_users() const { return static_cast<int>(delta.n_elem); }
};

/// Scores each user from the previous block's tracked variances.
inline SelectionScore score_users(const CsiState &csi, const UserDrop &drop, double c, int tau)
{
    if (tau < 1)
        throw std::invalid_argument("score_users: tau must be >= 1");
    const int n_users = csi.n_users();
    SelectionScore score;
    score.beta_t.set_size(n_users);
    score.beta_p.set_size(n_users);
    score.delta.set_size(n_users);
    for (int k = 0; k < n_users; ++k)
    {
        const double v = drop.variances[k];
        score.beta_t(k) = training_error_variance(v, tau);
        score.beta_p(k) = predicted_variances(v, c, csi.v_hat(static_cast<arma::uword>(k))).v_tilde;
        score.delta(k) = score.beta_p(k) - score.beta_t(k);
    }
    return score;
}

/// Dynamic user selection: all users when they fit into the training
/// length, otherwise the tau users with the largest error reduction.
/// Ties break towards the smaller user index; output is ordered by
/// descending delta.
inline SelectionOutcome select_dus(const SelectionScore &score, int tau, int n_users)
{
    SelectionOutcome out;
    out.policy = Policy::DUS;
    if (n_users <= tau)
    {
        out.trained.resize(n_users);
        std::iota(out.trained.begin(), out.trained.end(), 0);
        return out;
    }
    std::vector<int> order(static_cast<std::size_t>(n_users));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&score](int a, int b) {
        const double da = score.delta(a), db = score.delta(b);
        if (da != db)
            return da > db;
        return a < b;
    });
    out.trained.assign(order.begin(), order.begin() + tau);
    return out;
}

/// Uniform random subset of size min(tau, K), drawn without replacement.
inline SelectionOutcome select_random(int n_users, int tau, RngStream &stream)
{
    const int m = std::min(tau, n_users);
    std::vector<int> pool(static_cast<std::size_t>(n_users));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < m; ++i)
    {
        const auto j = i + static_cast<int>(stream.uniform_index(static_cast<std::uint64_t>(n_users - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(m));
    return {std::move(pool), Policy::RUS};
}

/// The min(tau, K) users closest to the base station, ties towards the
/// smaller index.
inline SelectionOutcome select_closest(const UserDrop &drop, int tau)
{
    const int n_users = drop.n_users();
    const int m = std::min(tau, n_users);
    std::vector<int> order(static_cast<std::size_t>(n_users));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&drop](int a, int b) {
        if (drop.distances[a] != drop.distances[b])
            return drop.distances[a] < drop.distances[b];
        return a < b;
    });
    order.resize(static_cast<std::size_t>(m));
    return {std::move(order), Policy::US};
}

/// Full training. Requires tau >= K so that every user gets an orthogonal
/// pilot row.
inline SelectionOutcome select_all(int n_users, int tau)
{
    if (tau < n_users)
        throw infeasible_error("full training needs tau >= n_users (tau=" + std::to_string(tau) +
                               ", n_users=" + std::to_string(n_users) + ")");
    SelectionOutcome out;
    out.policy = Policy::FT;
    out.trained.resize(static_cast<std::size_t>(n_users));
    std::iota(out.trained.begin(), out.trained.end(), 0);
    return out;
}

/// Equivalent-noise-power objective of a candidate training set:
/// 1 + sum of beta_t over trained users + sum of beta_p over the rest.
/// Summation runs in user-index order so equal sets give equal doubles.
inline double selection_objective(const SelectionScore &score, std::span<const int> trained)
{
    const int n_users = score.n_users();
    std::vector<char> in_set(static_cast<std::size_t>(n_users), 0);
    for (const int k : trained)
        in_set[static_cast<std::size_t>(k)] = 1;
    double objective = 1.0;
    for (int k = 0; k < n_users; ++k)
        objective += in_set[static_cast<std::size_t>(k)] ? score.beta_t(k) : score.beta_p(k);
    return objective;
}

struct OracleResult
{
    SelectionOutcome outcome;
    double objective;
};

/// Exhaustive minimization of the equivalent-noise objective over all
/// training sets of size <= tau. Only strictly better subsets replace the
/// incumbent, so ties resolve to the earliest mask (the empty set first).
/// Exponential in K; guarded.
inline OracleResult brute_force_oracle(const SelectionScore &score, int tau, int n_users)
{
    if (n_users > 20)
        throw std::invalid_argument("brute_force_oracle: K > 20 is not tractable");

    const std::uint32_t n_masks = 1u << n_users;
    double best_objective = 0.0;
    std::uint32_t best_mask = 0;
    bool have_best = false;

    for (std::uint32_t mask = 0; mask < n_masks; ++mask)
    {
        if (std::popcount(mask) > tau)
            continue;
        double objective = 1.0;
        for (int k = 0; k < n_users; ++k)
            objective += (mask >> k) & 1u ? score.beta_t(k) : score.beta_p(k);
        if (!have_best || objective < best_objective)
        {
            best_objective = objective;
            best_mask = mask;
            have_best = true;
        }
    }

    OracleResult result;
    result.objective = best_objective;
    result.outcome.policy = Policy::DUS;
    for (int k = 0; k < n_users; ++k)
        if ((best_mask >> k) & 1u)
            result.outcome.trained.push_back(k);
    return result;
}

} // namespace selmimo

#endif
