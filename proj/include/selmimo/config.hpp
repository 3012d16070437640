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

#ifndef SELMIMO_CONFIG_HPP
#define SELMIMO_CONFIG_HPP

#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace selmimo
{

enum class RateUnit
{
    nats,
    bits
};

inline std::string to_string(RateUnit u) { return u == RateUnit::nats ? "nats" : "bits"; }

inline RateUnit parse_rate_unit(std::string_view s)
{
    if (s == "nats")
        return RateUnit::nats;
    if (s == "bits")
        return RateUnit::bits;
    throw config_error("rate_unit must be 'nats' or 'bits', got '" + std::string(s) + "'");
}

/// Full scenario description. Defaults follow the reference simulation
/// setup: a 100-antenna base station, 40 users in a 1 km cell, 60-use
/// fading blocks grouped in episodes of 11, correlation 0.9881.
struct SystemConfig
{
    int n_antennas = 100;
    int n_users = 40;
    int block_length = 60; // channel uses per fading block (T0)
    int n_blocks = 11;     // blocks per episode; the first is warm-up
    double temporal_corr = 0.9881;
    double snr0_db = 0.0;       // received SNR at the reference distance
    double cell_radius = 1.0;   // km
    double ref_distance = 1.0;  // km
    double path_loss_exponent = 4.0;
    std::uint64_t rng_seed = 1;
    RateUnit rate_unit = RateUnit::nats;

    /// User density: users per channel use of one block.
    double alpha() const { return static_cast<double>(n_users) / static_cast<double>(block_length); }

    void validate() const
    {
        if (n_antennas < 1)
            throw config_error("n_antennas must be >= 1");
        if (n_users < 1)
            throw config_error("n_users must be >= 1");
        if (block_length < 1)
            throw config_error("block_length must be >= 1");
        if (n_blocks < 2)
            throw config_error("n_blocks must be >= 2");
        if (!(temporal_corr >= 0.0 && temporal_corr <= 1.0))
            throw config_error("temporal_corr must lie in [0, 1]");
        if (!(cell_radius > 0.0))
            throw config_error("cell_radius must be > 0");
        if (!(ref_distance > 0.0))
            throw config_error("ref_distance must be > 0");
        if (!(path_loss_exponent > 0.0))
            throw config_error("path_loss_exponent must be > 0");
    }
};

namespace detail
{

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

inline double parse_double(std::string_view key, std::string_view value)
{
    try
    {
        std::size_t pos = 0;
        const double d = std::stod(std::string(value), &pos);
        if (pos != value.size())
            throw config_error("trailing characters");
        return d;
    }
    catch (const config_error &)
    {
        throw config_error("invalid numeric value for '" + std::string(key) + "': '" + std::string(value) + "'");
    }
    catch (const std::exception &)
    {
        throw config_error("invalid numeric value for '" + std::string(key) + "': '" + std::string(value) + "'");
    }
}

inline long long parse_integer(std::string_view key, std::string_view value)
{
    try
    {
        std::size_t pos = 0;
        const long long v = std::stoll(std::string(value), &pos);
        if (pos != value.size())
            throw config_error("trailing characters");
        return v;
    }
    catch (const std::exception &)
    {
        throw config_error("invalid integer value for '" + std::string(key) + "': '" + std::string(value) + "'");
    }
}

inline std::uint64_t parse_u64(std::string_view key, std::string_view value)
{
    try
    {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(std::string(value), &pos);
        if (pos != value.size())
            throw config_error("trailing characters");
        return static_cast<std::uint64_t>(v);
    }
    catch (const std::exception &)
    {
        throw config_error("invalid unsigned value for '" + std::string(key) + "': '" + std::string(value) + "'");
    }
}

} // namespace detail

/// Parses the flat key-value scenario format. One `key = value` pair per
/// line, `#` starts a comment, blank lines are ignored. Every key maps to a
/// SystemConfig field; unknown keys are rejected.
inline SystemConfig parse_scenario(std::istream &in)
{
    SystemConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        std::string_view sv(line);
        if (const auto hash = sv.find('#'); hash != std::string_view::npos)
            sv = sv.substr(0, hash);
        sv = detail::trim(sv);
        if (sv.empty())
            continue;

        const auto eq = sv.find('=');
        if (eq == std::string_view::npos)
            throw config_error("scenario line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key(detail::trim(sv.substr(0, eq)));
        const std::string_view value = detail::trim(sv.substr(eq + 1));
        if (key.empty() || value.empty())
            throw config_error("scenario line " + std::to_string(line_no) + ": empty key or value");

        if (key == "n_antennas")
            cfg.n_antennas = static_cast<int>(detail::parse_integer(key, value));
        else if (key == "n_users")
            cfg.n_users = static_cast<int>(detail::parse_integer(key, value));
        else if (key == "block_length")
            cfg.block_length = static_cast<int>(detail::parse_integer(key, value));
        else if (key == "n_blocks")
            cfg.n_blocks = static_cast<int>(detail::parse_integer(key, value));
        else if (key == "temporal_corr")
            cfg.temporal_corr = detail::parse_double(key, value);
        else if (key == "snr0_db")
            cfg.snr0_db = detail::parse_double(key, value);
        else if (key == "cell_radius")
            cfg.cell_radius = detail::parse_double(key, value);
        else if (key == "ref_distance")
            cfg.ref_distance = detail::parse_double(key, value);
        else if (key == "path_loss_exponent")
            cfg.path_loss_exponent = detail::parse_double(key, value);
        else if (key == "rng_seed")
            cfg.rng_seed = detail::parse_u64(key, value);
        else if (key == "rate_unit")
            cfg.rate_unit = parse_rate_unit(value);
        else
            throw config_error("scenario line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

inline SystemConfig load_scenario(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open scenario file '" + path + "'");
    return parse_scenario(in);
}

} // namespace selmimo

#endif
