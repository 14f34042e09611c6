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

#ifndef EMBEZZLE_UNIVERSAL_HPP
#define EMBEZZLE_UNIVERSAL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "embezzle/certify.hpp"

namespace embezzle {

/// Positive integer numerators over a common denominator, descending.
struct RationalVector {
    std::vector<std::int64_t> numerators;
    std::int64_t denominator = 1;

    /// Sum of squared numerators equals the squared denominator, in integers.
    bool normalized() const;
    TargetState target() const;
    std::string to_string() const;
};

struct RationalSchmidtFamily {
    std::vector<RationalVector> members;
    std::uint32_t max_dim = 2;
    std::int64_t max_denominator = 2;

    std::vector<TargetState> targets() const;
};

/// Every primitive positive rational unit vector of dimension 2..max_dim with
/// denominator at most max_denominator, ordered by (dimension, coefficients).
RationalSchmidtFamily enumerate_rational_family(std::uint32_t max_dim, std::int64_t max_denominator);

constexpr std::size_t kDefaultAmplitudeBudget = std::size_t{1} << 20;

/// Member i, copy n lives on (P, cat, group i, index n), or on (group n - 1, index i + 1) once interleaved.
struct CompositeCatalyst {
    std::vector<TargetState> members;
    std::uint32_t copies = 1;
    LazyProductState state;
    bool interleaved = false;

    SiteId site(Party p, std::uint32_t member, std::uint32_t copy) const;
};

CompositeCatalyst build_composite_catalyst(const RationalSchmidtFamily &family, std::uint32_t copies,
                                           std::size_t budget = kDefaultAmplitudeBudget);
CompositeCatalyst build_composite_catalyst(const std::vector<TargetState> &members, std::uint32_t copies,
                                           std::size_t budget = kDefaultAmplitudeBudget);

/// The (member, copy) <-> (copy, member) relabeling restricted to one party.
SiteMap interleave_map(const CompositeCatalyst &c, Party p);
/// Both parties' relabelings together.
SiteMap interleave_map(const CompositeCatalyst &c);
/// Applies the relabeling; applying it twice restores the original tagging.
CompositeCatalyst interleave_reindex(const CompositeCatalyst &c);

/// Level-n lifted generators of one member, placed where the (possibly interleaved) catalyst keeps them.
ObservableFamily member_family(const CompositeCatalyst &c, std::uint32_t member, std::uint32_t level);

struct SimultaneousReport {
    std::vector<CertificationReport> members;
    double cross_commutator = 0.0;
    double cross_product_dev = 0.0;
    double tolerance = 1e-12;
    bool pass = false;
};

/// Per-member certification at levels 1..depth plus cross-member commutativity
/// and product structure. ConfigError when depth exceeds the copies.
SimultaneousReport check_simultaneous_containment(const CompositeCatalyst &c, std::uint32_t depth,
                                                  double tolerance = 1e-12);

/// Max difference between expectations through n hotel shifts and through the
/// direct copy-n placement, over all generator products, members and levels.
double embedding_consistency(const CompositeCatalyst &c, std::uint32_t depth);

/// member,target,level,expectation_dev rows.
// Largest change of any member-family expectation under interleave_reindex.
double interleave_invariance(const CompositeCatalyst &c, std::uint32_t depth);

std::string deviation_csv(const SimultaneousReport &r);

}  // namespace embezzle

#endif
