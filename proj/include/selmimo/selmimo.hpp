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

#ifndef SELMIMO_SELMIMO_HPP
#define SELMIMO_SELMIMO_HPP

#include "channel.hpp"
#include "config.hpp"
#include "csi.hpp"
#include "episode.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "parallel.hpp"
#include "rate.hpp"
#include "rng.hpp"
#include "selection.hpp"
#include "sweep.hpp"

#endif
