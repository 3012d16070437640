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

#ifndef SELMIMO_CHANNEL_HPP
#define SELMIMO_CHANNEL_HPP

#include <armadillo>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "geometry.hpp"
#include "rng.hpp"

namespace selmimo
{

/// True channel matrix for one fading block: N antennas x K users.
/// Column k has per-entry variance v_k under the generative model.
struct ChannelState
{
    arma::cx_mat h;
    int block_index = 0;
};

/// Draws the stationary channel: h_ik ~ CN(0, v_k), independent entries.
inline ChannelState init_channel(const UserDrop &drop, int n_antennas, RngStream &stream)
{
    const int n_users = drop.n_users();
    ChannelState state;
    state.h.set_size(n_antennas, n_users);
    state.block_index = 0;
    for (int k = 0; k < n_users; ++k)
    {
        const double v = drop.variances[k];
        for (int i = 0; i < n_antennas; ++i)
            state.h(i, k) = stream.complex_normal(v);
    }
    return state;
}

/// First-order Gauss-Markov step: h <- c*h + z with z ~ CN(0, (1-c^2) v_k).
/// The per-entry marginal variance stays v_k for every block.
inline ChannelState evolve_channel(const ChannelState &prev, double c, const UserDrop &drop, RngStream &stream)
{
    if (!(c >= 0.0 && c <= 1.0))
        throw std::invalid_argument("evolve_channel: c must lie in [0, 1]");
    if (static_cast<int>(prev.h.n_cols) != drop.n_users())
        throw std::invalid_argument("evolve_channel: drop size does not match channel");

    const double innovation_scale = 1.0 - c * c;
    ChannelState next;
    next.h.set_size(prev.h.n_rows, prev.h.n_cols);
    next.block_index = prev.block_index + 1;
    for (arma::uword k = 0; k < prev.h.n_cols; ++k)
    {
        const double vz = innovation_scale * drop.variances[k];
        for (arma::uword i = 0; i < prev.h.n_rows; ++i)
            next.h(i, k) = c * prev.h(i, k) + stream.complex_normal(vz);
    }
    return next;
}

// Debug dump of a channel trajectory. Layout: three little-endian uint32
// (n_antennas, n_users, n_blocks), then per block the matrix entries in
// row-major order as little-endian complex doubles (re, im).

inline void write_channel_dump(std::ostream &out, std::span<const arma::cx_mat> blocks)
{
    if (blocks.empty())
        throw std::invalid_argument("write_channel_dump: no blocks");
    const auto n_rows = static_cast<std::uint32_t>(blocks[0].n_rows);
    const auto n_cols = static_cast<std::uint32_t>(blocks[0].n_cols);
    const auto n_blocks = static_cast<std::uint32_t>(blocks.size());

    auto put_u32 = [&out](std::uint32_t v) { out.write(reinterpret_cast<const char *>(&v), 4); };
    put_u32(n_rows);
    put_u32(n_cols);
    put_u32(n_blocks);

    for (const auto &m : blocks)
    {
        if (m.n_rows != n_rows || m.n_cols != n_cols)
            throw std::invalid_argument("write_channel_dump: inconsistent block dimensions");
        for (std::uint32_t i = 0; i < n_rows; ++i)
            for (std::uint32_t k = 0; k < n_cols; ++k)
            {
                const double re = m(i, k).real();
                const double im = m(i, k).imag();
                out.write(reinterpret_cast<const char *>(&re), 8);
                out.write(reinterpret_cast<const char *>(&im), 8);
            }
    }
}

inline std::vector<arma::cx_mat> read_channel_dump(std::istream &in)
{
    auto get_u32 = [&in]() {
        std::uint32_t v = 0;
        in.read(reinterpret_cast<char *>(&v), 4);
        return v;
    };
    const std::uint32_t n_rows = get_u32();
    const std::uint32_t n_cols = get_u32();
    const std::uint32_t n_blocks = get_u32();
    if (!in)
        throw std::runtime_error("read_channel_dump: truncated header");

    std::vector<arma::cx_mat> blocks(n_blocks);
    for (auto &m : blocks)
    {
        m.set_size(n_rows, n_cols);
        for (std::uint32_t i = 0; i < n_rows; ++i)
            for (std::uint32_t k = 0; k < n_cols; ++k)
            {
                double re = 0.0, im = 0.0;
                in.read(reinterpret_cast<char *>(&re), 8);
                in.read(reinterpret_cast<char *>(&im), 8);
                m(i, k) = {re, im};
            }
    }
    if (!in)
        throw std::runtime_error("read_channel_dump: truncated payload");
    return blocks;
}

} // namespace selmimo

#endif
