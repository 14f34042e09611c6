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

#ifndef EMBEZZLE_LAZY_STATE_HPP
#define EMBEZZLE_LAZY_STATE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "embezzle/site.hpp"
#include "embezzle/site_operator.hpp"

namespace embezzle {

/// One basis label per explicit site, in site order.
using Labels = std::vector<std::uint32_t>;
using AmplitudeMap = std::map<Labels, Complex>;

/// Implicit copies of a two-site pair state on catalyst-copy registers of one group.
///
/// Copy t of the tail lives on (A, cat, group, frontier_a + t) and
/// (B, cat, group, frontier_b + t). Everything below the frontiers is explicit
/// (or |0>), everything at or above them holds the pair state.
struct CopyTail {
    std::uint32_t group = 0;
    std::uint32_t dim = 2;
    /// (label on A, label on B) -> amplitude, sorted by labels.
    std::vector<std::tuple<std::uint32_t, std::uint32_t, Complex>> pair;
    std::uint32_t frontier_a = 1;
    std::uint32_t frontier_b = 1;

    std::uint32_t frontier(Party p) const { return p == Party::A ? frontier_a : frontier_b; }
    std::int64_t offset() const { return static_cast<std::int64_t>(frontier_a) - static_cast<std::int64_t>(frontier_b); }
    bool covers(const SiteId &s) const {
        return s.role == Role::catalyst_copy && s.group == group && s.index >= frontier(s.party);
    }
    bool same_pair_state(const CopyTail &o, double tol = 1e-14) const;
};

/// Vector in an infinite tensor product of qudits: a sparse amplitude map over
/// finitely many explicit sites, |0> on every other site, and optionally
/// lazily-materialized copies of a pair state on catalyst registers.
///
/// Values are immutable; every operation returns a new state.
class LazyProductState {
   public:
    /// The reference vector: no explicit sites, amplitude 1.
    LazyProductState();

    /// `amplitudes` keys follow the order of `sites` as given.
    static LazyProductState from_amplitudes(std::vector<SiteId> sites, const AmplitudeMap &amplitudes,
                                            bool normalize = true);
    static LazyProductState basis(std::vector<SiteId> sites, const Labels &labels);

    const std::vector<SiteId> &sites() const { return sites_; }
    const AmplitudeMap &amplitudes() const { return amplitudes_; }
    const std::vector<CopyTail> &copy_tails() const { return tails_; }
    const CopyTail *copy_tail(std::uint32_t group) const;

    std::size_t nnz() const { return amplitudes_.size(); }
    bool has_site(const SiteId &s) const;
    std::optional<std::size_t> position(const SiteId &s) const;
    /// Explicit site matching `s` by identity, carrying its stored dim.
    std::optional<SiteId> find_site(const SiteId &s) const;
    double norm_squared() const;
    LazyProductState normalized() const;

    /// Makes `s` explicit without changing the vector.
    LazyProductState materialized(const SiteId &s) const;
    LazyProductState materialized(std::span<const SiteId> sites) const;
    /// Materializes tail copies until both frontiers of `group` reach at least the given values.
    LazyProductState materialized_copies(std::uint32_t group, std::uint32_t frontier_a, std::uint32_t frontier_b) const;
    /// Attaches an implicit copy tail. Explicit catalyst sites of the group must lie below the frontiers.
    LazyProductState with_copy_tail(CopyTail tail) const;

    friend LazyProductState tensor_states(const LazyProductState &a, const LazyProductState &b);
    friend LazyProductState apply_site_map(const LazyProductState &s, const SiteMap &map);
    friend LazyProductState apply_operator(const SiteOperator &op, const LazyProductState &s);

   private:
    LazyProductState(std::vector<SiteId> sites, AmplitudeMap amplitudes, std::vector<CopyTail> tails)
        : sites_(std::move(sites)), amplitudes_(std::move(amplitudes)), tails_(std::move(tails)) {}

    LazyProductState materialize_one_copy(std::size_t tail_index) const;

    std::vector<SiteId> sites_;
    AmplitudeMap amplitudes_;
    std::vector<CopyTail> tails_;
};

/// Product of states on disjoint site sets. SiteCollision when a site is shared.
LazyProductState tensor_states(const LazyProductState &a, const LazyProductState &b);
/// (op (x) 1)|s>, materializing support sites on demand; no renormalization.
LazyProductState apply_operator(const SiteOperator &op, const LazyProductState &s);
/// Relabels sites through an injective map (the spatial action of a relabeling isometry).
LazyProductState apply_site_map(const LazyProductState &s, const SiteMap &map);
/// Locality-preserving relabel; PartyViolation if a site crosses the A|B cut.
LazyProductState permute_sites(const LazyProductState &s, const SiteMap &map);

/// <a|b>, conjugate-linear in the first argument. States whose copy tails
/// disagree are orthogonal.
Complex inner_product(const LazyProductState &a, const LazyProductState &b);
/// || a - b ||.
double distance(const LazyProductState &a, const LazyProductState &b);
/// <s| op |s>.
Complex expectation(const LazyProductState &s, const SiteOperator &op);

/// Brings both states onto the same explicit sites and tail frontiers.
/// Returns nullopt when their copy tails are incompatible.
std::optional<std::pair<LazyProductState, LazyProductState>> align(const LazyProductState &a,
                                                                   const LazyProductState &b);

}  // namespace embezzle

#endif
