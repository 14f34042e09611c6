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

#ifndef EMBEZZLE_SITE_HPP
#define EMBEZZLE_SITE_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace embezzle {

enum class Party : std::uint8_t { A, B };
enum class Role : std::uint8_t { catalyst_copy, ancilla, output };

std::string to_string(Party p);
std::string to_string(Role r);
Party other(Party p);

/// A named qudit register. Identity and ordering use (party, role, group, index);
/// `dim` travels with the register and is checked wherever two descriptions meet.
///
/// `group` separates independent pools of the same role: members of a composite
/// catalyst, or ancilla pools added by successive protocol conversions.
struct SiteId {
    Party party = Party::A;
    Role role = Role::catalyst_copy;
    std::uint32_t group = 0;
    std::uint32_t index = 0;
    std::uint32_t dim = 2;

    auto key() const { return std::tie(party, role, group, index); }

    friend bool operator==(const SiteId &a, const SiteId &b) { return a.key() == b.key(); }
    friend std::strong_ordering operator<=>(const SiteId &a, const SiteId &b) { return a.key() <=> b.key(); }

    SiteId with_index(std::uint32_t i) const {
        SiteId s = *this;
        s.index = i;
        return s;
    }
    SiteId with_dim(std::uint32_t d) const {
        SiteId s = *this;
        s.dim = d;
        return s;
    }
};

inline SiteId catalyst_site(Party p, std::uint32_t copy, std::uint32_t dim, std::uint32_t group = 0) {
    return SiteId{p, Role::catalyst_copy, group, copy, dim};
}
inline SiteId ancilla_site(Party p, std::uint32_t index, std::uint32_t dim, std::uint32_t pool = 0) {
    return SiteId{p, Role::ancilla, pool, index, dim};
}
inline SiteId output_site(Party p, std::uint32_t index, std::uint32_t dim, std::uint32_t group = 0) {
    return SiteId{p, Role::output, group, index, dim};
}

std::string to_string(const SiteId &s);

/// Shifts the index of every site matching (party, role, group) with index >= threshold.
struct ShiftRule {
    Party party = Party::A;
    Role role = Role::ancilla;
    std::uint32_t group = 0;
    std::uint32_t threshold = 0;
    std::int64_t offset = 0;

    bool matches(const SiteId &s) const {
        return s.party == party && s.role == role && s.group == group && s.index >= threshold;
    }
    bool operator==(const ShiftRule &) const = default;
};

/// Injective relabeling of the (infinite) universe of sites: a finite table of
/// explicit moves, then shift rules, then identity. Table entries take precedence.
///
/// A site is in the domain when it round-trips through `preimage`; sites outside
/// the domain (for example the fresh register a pull-out writes into) must be in
/// the reference state when the map is applied to a vector.
class SiteMap {
   public:
    SiteMap() = default;

    SiteMap &map(const SiteId &from, const SiteId &to);
    SiteMap &shift(const ShiftRule &rule);

    SiteId operator()(const SiteId &s) const;
    std::optional<SiteId> preimage(const SiteId &s) const;
    bool in_domain(const SiteId &s) const;
    bool in_image(const SiteId &s) const { return preimage(s).has_value(); }

    SiteMap inverse() const;
    bool is_identity() const { return table_.empty() && rules_.empty(); }
    /// True when no table entry or rule moves a site across the A|B cut.
    bool is_party_preserving() const;
    /// True when every table entry and rule only touches sites of `p`.
    bool acts_only_on(Party p) const;

    const std::vector<std::pair<SiteId, SiteId>> &table() const { return table_; }
    const std::vector<ShiftRule> &rules() const { return rules_; }

    bool operator==(const SiteMap &) const = default;

   private:
    std::vector<std::pair<SiteId, SiteId>> table_;
    std::vector<ShiftRule> rules_;
};

}  // namespace embezzle

#endif
