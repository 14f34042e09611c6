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

#include "embezzle/probes.hpp"

#include <cmath>
#include <numbers>

namespace embezzle {

LazyProductState random_state(const std::vector<SiteId> &sites, std::mt19937_64 &rng, std::size_t max_terms) {
    std::vector<SiteId> owned(sites.begin(), sites.end());
    const std::uint64_t total = product_of_dims(owned);
    std::size_t terms = std::min<std::uint64_t>(max_terms, total);
    AmplitudeMap amps;
    while (amps.size() < terms) {
        Labels key(owned.size());
        for (std::size_t i = 0; i < owned.size(); ++i) {
            key[i] = static_cast<std::uint32_t>(rng() % owned[i].dim);
        }
        // Box-Muller on a fresh pair gives a Gaussian complex amplitude.
        double u1 = 1.0 - unit_uniform(rng);
        double u2 = unit_uniform(rng);
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * std::numbers::pi * u2;
        amps[key] = Complex(r * std::cos(theta), r * std::sin(theta));
    }
    return LazyProductState::from_amplitudes(std::move(owned), amps, true);
}

std::vector<LazyProductState> probe_battery(const std::vector<SiteId> &sites, std::size_t count, std::uint64_t seed,
                                            std::size_t max_terms) {
    std::mt19937_64 rng(seed);
    std::vector<LazyProductState> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(random_state(sites, rng, max_terms));
    }
    return out;
}

std::vector<LazyProductState> basis_battery(const std::vector<SiteId> &sites, std::size_t limit) {
    std::vector<SiteId> owned(sites.begin(), sites.end());
    const std::uint64_t total = product_of_dims(owned);
    std::vector<LazyProductState> out;
    if (total > limit) {
        return out;
    }
    Labels key(owned.size(), 0);
    for (std::uint64_t n = 0; n < total; ++n) {
        std::uint64_t rest = n;
        for (std::size_t i = owned.size(); i-- > 0;) {
            key[i] = static_cast<std::uint32_t>(rest % owned[i].dim);
            rest /= owned[i].dim;
        }
        out.push_back(LazyProductState::basis(owned, key));
    }
    return out;
}

std::vector<LazyProductState> spanning_probes(const std::vector<SiteId> &sites, std::uint64_t seed, std::size_t limit,
                                              std::size_t extra) {
    auto out = basis_battery(sites, limit);
    if (out.empty()) {
        out = probe_battery(sites, limit / 16 + 1, seed ^ 0x9e3779b97f4a7c15ULL);
    }
    auto more = probe_battery(sites, extra, seed);
    out.insert(out.end(), more.begin(), more.end());
    return out;
}

}  // namespace embezzle
