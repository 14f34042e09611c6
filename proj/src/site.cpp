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

#include "embezzle/site.hpp"

#include "embezzle/errors.hpp"

namespace embezzle {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::SiteCollision: return "SiteCollision";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::PartyViolation: return "PartyViolation";
        case ErrorKind::SiteSpaceMismatch: return "SiteSpaceMismatch";
        case ErrorKind::CatalystShapeError: return "CatalystShapeError";
        case ErrorKind::DimensionError: return "DimensionError";
        case ErrorKind::LocalityViolation: return "LocalityViolation";
        case ErrorKind::CommutationViolation: return "CommutationViolation";
        case ErrorKind::MorphismTypeError: return "MorphismTypeError";
        case ErrorKind::SizeBudgetExceeded: return "SizeBudgetExceeded";
        case ErrorKind::InvalidTarget: return "InvalidTarget";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ConfigError: return "ConfigError";
        case ErrorKind::FormMismatch: return "FormMismatch";
    }
    return "Unknown";
}

std::string to_string(Party p) { return p == Party::A ? "A" : "B"; }

std::string to_string(Role r) {
    switch (r) {
        case Role::catalyst_copy: return "cat";
        case Role::ancilla: return "anc";
        case Role::output: return "out";
    }
    return "?";
}

Party other(Party p) { return p == Party::A ? Party::B : Party::A; }

std::string to_string(const SiteId &s) {
    return to_string(s.party) + ":" + to_string(s.role) + ":" + std::to_string(s.group) + ":" +
           std::to_string(s.index) + "/" + std::to_string(s.dim);
}

SiteMap &SiteMap::map(const SiteId &from, const SiteId &to) {
    for (const auto &[f, t] : table_) {
        if (f == from) {
            throw Error(ErrorKind::SiteCollision, "site " + to_string(from) + " mapped twice");
        }
        if (t == to) {
            throw Error(ErrorKind::SiteCollision, "two sites mapped onto " + to_string(to));
        }
    }
    table_.emplace_back(from, to);
    return *this;
}

SiteMap &SiteMap::shift(const ShiftRule &rule) {
    if (rule.offset < 0 && static_cast<std::int64_t>(rule.threshold) + rule.offset < 0) {
        throw Error(ErrorKind::SiteSpaceMismatch, "shift rule would produce a negative index");
    }
    rules_.push_back(rule);
    return *this;
}

SiteId SiteMap::operator()(const SiteId &s) const {
    for (const auto &[from, to] : table_) {
        if (from == s) {
            return to.with_dim(s.dim);
        }
    }
    for (const auto &rule : rules_) {
        if (rule.matches(s)) {
            return s.with_index(static_cast<std::uint32_t>(static_cast<std::int64_t>(s.index) + rule.offset));
        }
    }
    return s;
}

std::optional<SiteId> SiteMap::preimage(const SiteId &s) const {
    std::vector<SiteId> candidates;
    for (const auto &[from, to] : table_) {
        if (to == s) {
            candidates.push_back(from.with_dim(s.dim));
        }
    }
    for (const auto &rule : rules_) {
        if (s.party == rule.party && s.role == rule.role && s.group == rule.group) {
            std::int64_t i = static_cast<std::int64_t>(s.index) - rule.offset;
            if (i >= 0) {
                candidates.push_back(s.with_index(static_cast<std::uint32_t>(i)));
            }
        }
    }
    candidates.push_back(s);
    for (const auto &c : candidates) {
        if ((*this)(c) == s) {
            return c;
        }
    }
    return std::nullopt;
}

bool SiteMap::in_domain(const SiteId &s) const {
    auto back = preimage((*this)(s));
    return back.has_value() && *back == s;
}

SiteMap SiteMap::inverse() const {
    SiteMap inv;
    for (const auto &[from, to] : table_) {
        inv.table_.emplace_back(to, from);
    }
    for (const auto &rule : rules_) {
        ShiftRule r = rule;
        r.threshold = static_cast<std::uint32_t>(static_cast<std::int64_t>(rule.threshold) + rule.offset);
        r.offset = -rule.offset;
        inv.rules_.push_back(r);
    }
    return inv;
}

bool SiteMap::is_party_preserving() const {
    for (const auto &[from, to] : table_) {
        if (from.party != to.party) {
            return false;
        }
    }
    return true;
}

bool SiteMap::acts_only_on(Party p) const {
    for (const auto &[from, to] : table_) {
        if (from.party != p || to.party != p) {
            return false;
        }
    }
    for (const auto &rule : rules_) {
        if (rule.party != p) {
            return false;
        }
    }
    return true;
}

}  // namespace embezzle
