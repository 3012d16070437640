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

#ifndef SELMIMO_ERRORS_HPP
#define SELMIMO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace selmimo
{

// Error categories that the CLI maps onto process exit codes:
// config_error -> 2, infeasible_error -> 3, convergence_error -> 4.
// Plain contract violations use the standard library exception types.

/// Invalid scenario file, flag value or parameter combination.
class config_error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// A policy/training-length combination that cannot be run (e.g. full
/// training with fewer pilot symbols than users).
class infeasible_error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Iterative solver failed to reach the requested tolerance. Carries the
/// last iterate so callers can inspect how far the iteration got.
class convergence_error : public std::runtime_error
{
  public:
    convergence_error(const std::string &message, double last_iterate, int iterations)
        : std::runtime_error(message), last_iterate_(last_iterate), iterations_(iterations)
    {
    }

    double last_iterate() const { return last_iterate_; }
    int iterations() const { return iterations_; }

  private:
    double last_iterate_;
    int iterations_;
};

} // namespace selmimo

#endif
