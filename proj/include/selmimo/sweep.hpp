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

#ifndef SELMIMO_SWEEP_HPP
#define SELMIMO_SWEEP_HPP

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "episode.hpp"
#include "parallel.hpp"

namespace selmimo
{

/// What to sweep: policies x training lengths (or user counts), averaged
/// over independent user drops and channel realizations.
struct SweepSpec
{
    SystemConfig config;
    std::vector<Policy> policies;
    std::vector<int> tau_grid; // training lengths; FT rows are skipped below K
    std::vector<int> k_grid;   // user counts for density sweeps
    int n_drops = 1;
    int n_realizations = 1;
    int n_threads = 1;

    void validate(bool need_k_grid = false) const
    {
        config.validate();
        if (policies.empty())
            throw config_error("sweep: policy list is empty");
        if (tau_grid.empty())
            throw config_error("sweep: tau grid is empty");
        for (const int tau : tau_grid)
            if (tau < 0 || tau > config.block_length)
                throw config_error("sweep: tau " + std::to_string(tau) + " outside [0, T0]");
        if (need_k_grid)
        {
            if (k_grid.empty())
                throw config_error("sweep: k grid is empty");
            for (const int k : k_grid)
                if (k < 1)
                    throw config_error("sweep: k grid entries must be >= 1");
        }
        if (n_drops < 1 || n_realizations < 1)
            throw config_error("sweep: drops and realizations must be >= 1");
        if (n_threads < 1)
            throw config_error("sweep: threads must be >= 1");
    }
};

/// One table row. Aggregated rates are in nats; conversion to the
/// configured unit happens when the table is written.
struct SweepRow
{
    Policy policy = Policy::DUS;
    int tau = 0;
    int k_users = 0;
    int n_antennas = 0;
    int block_length = 0;
    double mc_rate_mean = 0.0;
    double mc_rate_stderr = 0.0;
    double deteq_rate_mean = 0.0;
    int n_drops = 0;
    int n_realizations = 0;
    bool is_tau_star = false;
    std::vector<double> episode_mc_means; // per-episode means, (drop, realization) order
};

struct SweepResult
{
    std::vector<SweepRow> rows;
    RateUnit unit = RateUnit::nats;
};

namespace detail
{

struct Aggregate
{
    double mean = 0.0;
    double stderr_of_mean = 0.0;
};

inline Aggregate aggregate(const std::vector<double> &samples)
{
    Aggregate a;
    const auto n = static_cast<double>(samples.size());
    double sum = 0.0;
    for (const double x : samples)
        sum += x;
    a.mean = sum / n;
    if (samples.size() >= 2)
    {
        double ss = 0.0;
        for (const double x : samples)
            ss += (x - a.mean) * (x - a.mean);
        a.stderr_of_mean = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    return a;
}

inline std::vector<UserDrop> sample_drops(const SystemConfig &cfg, int n_drops)
{
    std::vector<UserDrop> drops;
    drops.reserve(static_cast<std::size_t>(n_drops));
    for (int d = 0; d < n_drops; ++d)
    {
        RngStream stream = derive_stream(cfg.rng_seed,
                                         {StreamPurpose::user_drop, static_cast<std::uint64_t>(d), 0, 0});
        drops.push_back(sample_user_drop(cfg, stream));
    }
    return drops;
}

/// Marks the argmax of the det-eq column within [begin, end); ties go to
/// the earliest row, i.e. the smallest tau.
inline void mark_tau_star(std::vector<SweepRow> &rows, std::size_t begin, std::size_t end)
{
    if (begin >= end)
        return;
    std::size_t best = begin;
    for (std::size_t i = begin + 1; i < end; ++i)
        if (rows[i].deteq_rate_mean > rows[best].deteq_rate_mean)
            best = i;
    rows[best].is_tau_star = true;
}

} // namespace detail

/// Rate vs. training length at fixed K. Every (policy, tau) cell is
/// averaged over n_drops x n_realizations episodes with matched substreams,
/// so policies are compared on identical channels and geometry. Full
/// training rows exist only for tau >= K.
inline SweepResult sweep_tau(const SweepSpec &spec)
{
    spec.validate();
    const SystemConfig &cfg = spec.config;

    struct Cell
    {
        Policy policy;
        int tau;
    };
    std::vector<Cell> cells;
    for (const Policy policy : spec.policies)
        for (const int tau : spec.tau_grid)
        {
            if (policy == Policy::FT && tau < cfg.n_users)
                continue;
            cells.push_back({policy, tau});
        }

    const std::vector<UserDrop> drops = detail::sample_drops(cfg, spec.n_drops);
    const std::size_t n_episodes = static_cast<std::size_t>(spec.n_drops) * spec.n_realizations;

    std::vector<std::vector<double>> mc(cells.size(), std::vector<double>(n_episodes));
    std::vector<std::vector<double>> deteq(cells.size(), std::vector<double>(n_episodes));

    parallel_for(cells.size() * n_episodes, spec.n_threads, [&](std::size_t task) {
        const std::size_t cell_index = task / n_episodes;
        const std::size_t episode_index = task % n_episodes;
        const auto drop_index = episode_index / static_cast<std::size_t>(spec.n_realizations);
        const auto realization = episode_index % static_cast<std::size_t>(spec.n_realizations);
        const Cell &cell = cells[cell_index];
        const StreamContext ctx{cfg.rng_seed, drop_index, realization};
        const EpisodeResult episode = run_episode(cfg, drops[drop_index], cell.policy, cell.tau, ctx);
        mc[cell_index][episode_index] = episode.mean_mc_rate;
        deteq[cell_index][episode_index] = episode.mean_deteq_rate;
    });

    SweepResult result;
    result.unit = cfg.rate_unit;
    result.rows.reserve(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i)
    {
        const detail::Aggregate mc_agg = detail::aggregate(mc[i]);
        const detail::Aggregate deteq_agg = detail::aggregate(deteq[i]);
        SweepRow row;
        row.policy = cells[i].policy;
        row.tau = cells[i].tau;
        row.k_users = cfg.n_users;
        row.n_antennas = cfg.n_antennas;
        row.block_length = cfg.block_length;
        row.mc_rate_mean = mc_agg.mean;
        row.mc_rate_stderr = mc_agg.stderr_of_mean;
        row.deteq_rate_mean = deteq_agg.mean;
        row.n_drops = spec.n_drops;
        row.n_realizations = spec.n_realizations;
        row.episode_mc_means = std::move(mc[i]);
        result.rows.push_back(std::move(row));
    }

    // tau* per policy block (rows are grouped by policy, tau ascending)
    std::size_t begin = 0;
    while (begin < result.rows.size())
    {
        std::size_t end = begin;
        while (end < result.rows.size() && result.rows[end].policy == result.rows[begin].policy)
            ++end;
        detail::mark_tau_star(result.rows, begin, end);
        begin = end;
    }
    return result;
}

/// Rate vs. user density. Two phases per (policy, K): first the common
/// training length is chosen offline as the tau with the best
/// deterministic-equivalent rate averaged over drops (cheap, variance
/// bookkeeping only), then Monte Carlo episodes run at that tau.
inline SweepResult sweep_density(const SweepSpec &spec)
{
    spec.validate(true);

    struct Cell
    {
        Policy policy;
        int k_users;
        int tau_star = 0;
    };
    std::vector<Cell> cells;
    for (const Policy policy : spec.policies)
        for (const int k : spec.k_grid)
            cells.push_back({policy, k, 0});

    // phase 1: offline tau search on the det-eq objective
    for (Cell &cell : cells)
    {
        SystemConfig cfg = spec.config;
        cfg.n_users = cell.k_users;
        cfg.validate();

        std::vector<int> candidates;
        for (const int tau : spec.tau_grid)
        {
            if (cell.policy == Policy::FT && tau < cfg.n_users)
                continue;
            candidates.push_back(tau);
        }
        if (candidates.empty())
            throw infeasible_error("sweep_density: no feasible tau for policy " + to_string(cell.policy) +
                                   " at K=" + std::to_string(cell.k_users));

        const std::vector<UserDrop> drops = detail::sample_drops(cfg, spec.n_drops);
        std::vector<double> deteq_mean(candidates.size());

        parallel_for(candidates.size(), spec.n_threads, [&](std::size_t i) {
            EpisodeOptions options;
            options.compute_mc = false;
            double sum = 0.0;
            for (int d = 0; d < spec.n_drops; ++d)
            {
                const StreamContext ctx{cfg.rng_seed, static_cast<std::uint64_t>(d), 0};
                sum += run_episode(cfg, drops[static_cast<std::size_t>(d)], cell.policy, candidates[i], ctx,
                                   options)
                           .mean_deteq_rate;
            }
            deteq_mean[i] = sum / spec.n_drops;
        });

        std::size_t best = 0;
        for (std::size_t i = 1; i < candidates.size(); ++i)
            if (deteq_mean[i] > deteq_mean[best])
                best = i; // ties keep the smaller tau
        cell.tau_star = candidates[best];
    }

    // phase 2: Monte Carlo at the chosen tau
    SweepResult result;
    result.unit = spec.config.rate_unit;
    result.rows.reserve(cells.size());

    const std::size_t n_episodes = static_cast<std::size_t>(spec.n_drops) * spec.n_realizations;
    for (const Cell &cell : cells)
    {
        SystemConfig cfg = spec.config;
        cfg.n_users = cell.k_users;

        const std::vector<UserDrop> drops = detail::sample_drops(cfg, spec.n_drops);
        std::vector<double> mc(n_episodes), deteq(n_episodes);

        parallel_for(n_episodes, spec.n_threads, [&](std::size_t episode_index) {
            const auto drop_index = episode_index / static_cast<std::size_t>(spec.n_realizations);
            const auto realization = episode_index % static_cast<std::size_t>(spec.n_realizations);
            const StreamContext ctx{cfg.rng_seed, drop_index, realization};
            const EpisodeResult episode =
                run_episode(cfg, drops[drop_index], cell.policy, cell.tau_star, ctx);
            mc[episode_index] = episode.mean_mc_rate;
            deteq[episode_index] = episode.mean_deteq_rate;
        });

        const detail::Aggregate mc_agg = detail::aggregate(mc);
        const detail::Aggregate deteq_agg = detail::aggregate(deteq);
        SweepRow row;
        row.policy = cell.policy;
        row.tau = cell.tau_star;
        row.k_users = cell.k_users;
        row.n_antennas = cfg.n_antennas;
        row.block_length = cfg.block_length;
        row.mc_rate_mean = mc_agg.mean;
        row.mc_rate_stderr = mc_agg.stderr_of_mean;
        row.deteq_rate_mean = deteq_agg.mean;
        row.n_drops = spec.n_drops;
        row.n_realizations = spec.n_realizations;
        row.is_tau_star = true;
        row.episode_mc_means = std::move(mc);
        result.rows.push_back(std::move(row));
    }
    return result;
}

namespace detail
{

inline std::string format_double(double value)
{
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

} // namespace detail

inline const char *csv_header()
{
    return "policy,tau,k_users,n_antennas,block_length,mc_rate_mean,mc_rate_stderr,"
           "deteq_rate_mean,n_drops,n_realizations,is_tau_star";
}

/// Writes the sweep table as CSV. Rates are converted to the configured
/// unit here; everything upstream is in nats.
inline void write_csv(std::ostream &out, const SweepResult &result)
{
    out << csv_header() << '\n';
    for (const SweepRow &row : result.rows)
    {
        out << to_string(row.policy) << ',' << row.tau << ',' << row.k_users << ',' << row.n_antennas << ','
            << row.block_length << ',' << detail::format_double(convert_rate(row.mc_rate_mean, result.unit))
            << ',' << detail::format_double(convert_rate(row.mc_rate_stderr, result.unit)) << ','
            << detail::format_double(convert_rate(row.deteq_rate_mean, result.unit)) << ',' << row.n_drops
            << ',' << row.n_realizations << ',' << (row.is_tau_star ? 1 : 0) << '\n';
    }
}

} // namespace selmimo

#endif
