// Copyright 2026 The Embezzle Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EMBEZZLE_PROBES_HPP
#define EMBEZZLE_PROBES_HPP

#include <cstdint>
#include <random>
#include <vector>
#include <vector>

#include "embezzle/lazy_state.hpp"

namespace embezzle {

/// Deterministic uniform double in [0, 1) from a 64-bit engine (portable across
/// standard libraries, unlike std::uniform_real_distribution).
inline double unit_uniform(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Normalized random state with up to `max_terms` basis components on `sites`.
LazyProductState random_state(const std::vector<SiteId> &sites, std::mt19937_64 &rng, std::size_t max_terms = 8);

/// `count` seeded random probes on `sites`.
std::vector<LazyProductState> probe_battery(const std::vector<SiteId> &sites, std::size_t count, std::uint64_t seed,
                                            std::size_t max_terms = 8);

/// Every computational basis state of `sites`; empty if there are more than `limit`.
std::vector<LazyProductState> basis_battery(const std::vector<SiteId> &sites, std::size_t limit = 4096);

/// Basis battery when small enough, otherwise seeded random probes, plus `extra` random probes.
std::vector<LazyProductState> spanning_probes(const std::vector<SiteId> &sites, std::uint64_t seed,
                                              std::size_t limit = 1024, std::size_t extra = 8);

}  // namespace embezzle

#endif
