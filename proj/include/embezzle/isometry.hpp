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

#ifndef EMBEZZLE_ISOMETRY_HPP
#define EMBEZZLE_ISOMETRY_HPP

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "embezzle/lazy_state.hpp"
#include "embezzle/site.hpp"
#include "embezzle/site_operator.hpp"

namespace embezzle {

/// Isometry built from site relabelings and local operator cores, applied in order.
///
/// Relabelings shift tail indices and move registers in and out of the implicit
/// reference tail; cores are finite matrices on named registers. Composition
/// concatenates steps, so it is associative by construction.
class StructuredIsometry {
   public:
    using Step = std::variant<SiteMap, SiteOperator>;

    StructuredIsometry() = default;
    static StructuredIsometry relabeling(SiteMap map, std::string name);
    static StructuredIsometry local_core(SiteOperator core, std::string name);
    static StructuredIsometry from_parts(std::string name, std::vector<Step> steps, std::vector<SiteId> materialize,
                                         std::vector<SiteId> retire, std::vector<SiteId> requires_fresh);

    const std::string &name() const { return name_; }
    const std::vector<Step> &steps() const { return steps_; }
    /// Registers created from the tail, registers absorbed into it, and registers
    /// that must be in the reference state on input.
    const std::vector<SiteId> &materialize() const { return materialize_; }
    const std::vector<SiteId> &retire() const { return retire_; }
    const std::vector<SiteId> &requires_fresh() const { return requires_fresh_; }

    bool is_relabel_only() const;
    bool acts_only_on(Party p) const;

    /// Schrödinger picture: V|x>.
    LazyProductState apply(const LazyProductState &x) const;
    /// Heisenberg picture: V^dagger op V, on the input space.
    SiteOperator conjugate(const SiteOperator &op) const;

    StructuredIsometry renamed(std::string name) const;

    /// outer o inner (inner acts first). SiteSpaceMismatch when `outer` needs a
    /// fresh register that `inner` leaves occupied.
    friend StructuredIsometry compose(const StructuredIsometry &outer, const StructuredIsometry &inner);

   private:
    friend StructuredIsometry pull_out(Party, const SiteId &, std::uint32_t);
    friend StructuredIsometry push_in(Party, const SiteId &, std::uint32_t);

    std::string name_ = "identity";
    std::vector<Step> steps_;
    std::vector<SiteId> materialize_;
    std::vector<SiteId> retire_;
    std::vector<SiteId> requires_fresh_;
};

StructuredIsometry compose(const StructuredIsometry &outer, const StructuredIsometry &inner);
StructuredIsometry compose(std::initializer_list<StructuredIsometry> outer_to_inner);

/// W: pulls tail register 0 of the party's ancilla `pool` into `out` and shifts
/// the rest of the pool down by one.
StructuredIsometry pull_out(Party party, const SiteId &out, std::uint32_t pool = 0);
/// Reverse W: moves `reg` to index 0 of the ancilla `pool`, shifting the pool up.
StructuredIsometry push_in(Party party, const SiteId &reg, std::uint32_t pool = 0);
/// Exchanges two registers of equal dimension. Crossing the A|B cut needs
/// `cross_bipartition`; it is still a pure relabeling.
StructuredIsometry swap(const SiteId &r1, const SiteId &r2, bool cross_bipartition = false);
/// Tensor-factor reordering such as S_A, S_B: with named registers this is the identity.
StructuredIsometry factor_reorder(std::string name);

/// Max over probe pairs (including i == j) of |<Vx, Vy> - <x, y>|.
double verify_isometry(const StructuredIsometry &v, std::span<const LazyProductState> probes);

/// <0|_site op |0>_site as an operator on the remaining support.
SiteOperator reduce_on_reference(const SiteOperator &op, const SiteId &site);

}  // namespace embezzle

#endif
