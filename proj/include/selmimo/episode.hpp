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

#ifndef SELMIMO_EPISODE_HPP
#define SELMIMO_EPISODE_HPP

#include <numeric>
#include <vector>

#include "channel.hpp"
#include "config.hpp"
#include "csi.hpp"
#include "rate.hpp"
#include "rng.hpp"
#include "selection.hpp"

namespace selmimo
{

/// Accounting for one selective block of an episode. Rates are in nats.
struct BlockRecord
{
    int block_index = 0;
    std::vector<int> trained;
    double beta = 0.0;       // residual error power entering the equivalent noise
    double mc_rate = 0.0;    // one Monte Carlo achievable-rate sample
    double deteq_rate = 0.0; // deterministic-equivalent rate from tracked variances
};

/// One episode: warm-up block plus J-1 selective blocks. Only the
/// selective blocks enter the rate averages.
struct EpisodeResult
{
    std::vector<BlockRecord> blocks;
    double mean_mc_rate = 0.0;
    double mean_deteq_rate = 0.0;
    std::vector<arma::cx_mat> channel_trajectory; // filled when requested
};

struct EpisodeOptions
{
    bool compute_mc = true;           // false: variance tracking + det-eq only
    bool zero_training_noise = false; // debug hook: noiseless observations
    bool record_channels = false;     // keep the true channel trajectory
};

/// Identifies the substreams of one episode within a larger experiment.
struct StreamContext
{
    std::uint64_t seed = 0;
    std::uint64_t drop_index = 0;
    std::uint64_t realization_index = 0;
};

namespace detail
{

inline SelectionOutcome select_for_policy(Policy policy, const CsiState &csi, const UserDrop &drop,
                                          double c, int tau, const StreamContext &ctx, std::uint64_t block)
{
    const int n_users = drop.n_users();
    if (tau == 0 && policy != Policy::FT)
        return {{}, policy}; // pure prediction block

    switch (policy)
    {
    case Policy::DUS:
        return select_dus(score_users(csi, drop, c, tau), tau, n_users);
    case Policy::RUS:
    {
        RngStream stream = derive_stream(ctx.seed, {StreamPurpose::selection, ctx.drop_index,
                                                    ctx.realization_index, block});
        return select_random(n_users, tau, stream);
    }
    case Policy::US:
        return select_closest(drop, tau);
    case Policy::FT:
        return select_all(n_users, tau);
    }
    return {{}, policy};
}

} // namespace detail

/// Runs one episode: full training at pilot length K in the warm-up block,
/// then J-1 selective blocks at the common training length tau. Every block
/// contributes one Monte Carlo rate sample and one deterministic-equivalent
/// value; the warm-up block is excluded from the averages.
///
/// All randomness comes from substreams derived from (seed, drop index,
/// realization index, block), so different policies evaluated at the same
/// context see identical channels, noise and geometry.
inline EpisodeResult run_episode(const SystemConfig &cfg, const UserDrop &drop, Policy policy, int tau,
                                 const StreamContext &ctx, const EpisodeOptions &options = {})
{
    cfg.validate();
    if (tau < 0 || tau > cfg.block_length)
        throw std::invalid_argument("run_episode: tau must lie in [0, T0]");
    if (drop.n_users() != cfg.n_users)
        throw std::invalid_argument("run_episode: drop size does not match config");
    if (policy == Policy::FT && tau < cfg.n_users)
        throw infeasible_error("full training needs tau >= n_users (tau=" + std::to_string(tau) +
                               ", n_users=" + std::to_string(cfg.n_users) + ")");

    const int n_users = cfg.n_users;
    const int n_antennas = cfg.n_antennas;
    const int n_blocks = cfg.n_blocks;
    const int block_length = cfg.block_length;
    const double c = cfg.temporal_corr;

    std::vector<int> all_users(static_cast<std::size_t>(n_users));
    std::iota(all_users.begin(), all_users.end(), 0);

    EpisodeResult result;
    result.blocks.reserve(static_cast<std::size_t>(n_blocks - 1));

    CsiState csi = make_initial_csi(drop, n_antennas);
    ChannelState channel;

    auto train = [&](const std::vector<int> &selected, const PilotMatrix &pilots, int pilot_len,
                     std::uint64_t block) {
        if (options.compute_mc)
        {
            TrainingObservation obs;
            if (options.zero_training_noise)
            {
                obs = simulate_training_with_noise(channel, selected, pilots,
                                                   arma::zeros<arma::cx_mat>(n_antennas, pilot_len));
            }
            else
            {
                RngStream noise = derive_stream(ctx.seed, {StreamPurpose::training_noise, ctx.drop_index,
                                                           ctx.realization_index, block});
                obs = simulate_training(channel, selected, pilots, noise);
            }
            csi = advance_csi(csi, selected, obs, pilots, drop, c, pilot_len);
        }
        else
        {
            csi = advance_csi_variances(csi, selected, drop, c, pilot_len);
        }
    };

    // warm-up: full training with pilot length K, excluded from averaging
    if (options.compute_mc)
    {
        RngStream init = derive_stream(ctx.seed, {StreamPurpose::channel, ctx.drop_index,
                                                  ctx.realization_index, 0});
        channel = init_channel(drop, n_antennas, init);
        if (options.record_channels)
            result.channel_trajectory.push_back(channel.h);
    }
    const PilotMatrix warmup_pilots = build_pilot_matrix(n_users, n_users);
    train(all_users, warmup_pilots, n_users, 0);

    PilotMatrix selective_pilots;
    if (tau >= 1)
        selective_pilots = build_pilot_matrix(std::min(tau, n_users), tau);

    for (int b = 1; b < n_blocks; ++b)
    {
        const auto block = static_cast<std::uint64_t>(b);
        if (options.compute_mc)
        {
            RngStream innovation = derive_stream(ctx.seed, {StreamPurpose::channel, ctx.drop_index,
                                                            ctx.realization_index, block});
            channel = evolve_channel(channel, c, drop, innovation);
            if (options.record_channels)
                result.channel_trajectory.push_back(channel.h);
        }

        SelectionOutcome selection = detail::select_for_policy(policy, csi, drop, c, tau, ctx, block);
        if (!selection.trained.empty())
            train(selection.trained, selective_pilots, tau, block);
        else
            csi = options.compute_mc ? advance_csi(csi, {}, TrainingObservation{}, PilotMatrix{}, drop, c, tau)
                                     : advance_csi_variances(csi, {}, drop, c, tau);

        // user scheduling serves only the trained subset, everyone else
        // serves all users; the rate stays normalized by the full K
        const bool subset_served = policy == Policy::US;
        const std::vector<int> &served = subset_served ? selection.trained : all_users;

        BlockRecord record;
        record.block_index = b;
        record.trained = selection.trained;

        const EquivalentNoise noise = equivalent_noise(csi, served);
        record.beta = noise.beta;

        if (options.compute_mc)
        {
            if (subset_served)
            {
                arma::uvec cols(served.size());
                for (std::size_t j = 0; j < served.size(); ++j)
                    cols(j) = static_cast<arma::uword>(served[j]);
                record.mc_rate = block_rate_sample(csi.h_hat.cols(cols), noise, tau, block_length, n_users);
            }
            else
            {
                record.mc_rate = block_rate_sample(csi.h_hat, noise, tau, block_length, n_users);
            }
        }

        const DetEqProblem problem = subset_served ? normalized_variances(csi, served, tau, block_length)
                                                   : normalized_variances(csi, tau, block_length);
        const FixedPointResult fp = solve_fixed_point(problem);
        record.deteq_rate = det_eq_rate(problem, fp);

        result.blocks.push_back(std::move(record));
    }

    double mc_sum = 0.0, deteq_sum = 0.0;
    for (const BlockRecord &record : result.blocks)
    {
        mc_sum += record.mc_rate;
        deteq_sum += record.deteq_rate;
    }
    const auto n_selective = static_cast<double>(result.blocks.size());
    result.mean_mc_rate = mc_sum / n_selective;
    result.mean_deteq_rate = deteq_sum / n_selective;
    return result;
}

} // namespace selmimo

#endif
