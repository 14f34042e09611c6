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

#ifndef EMBEZZLE_SCHMIDT_HPP
#define EMBEZZLE_SCHMIDT_HPP

#include <string>
#include <vector>

#include "embezzle/lazy_state.hpp"

namespace embezzle {

struct SchmidtSpectrum {
    std::vector<double> coefficients;  // descending, non-negative
    std::string cut = "A|B";

    double squared_sum() const;
    /// Largest entrywise difference; missing entries count as zero.
    double max_difference(const SchmidtSpectrum &other) const;
};

/// Singular values of the A-versus-B coefficient matrix of the explicit sites.
///
/// Copy tails are product factors across the cut and are left out, so two
/// states are comparable when they are materialized to the same frontiers.
SchmidtSpectrum schmidt_spectrum(const LazyProductState &s);

}  // namespace embezzle

#endif
