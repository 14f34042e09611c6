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

#include "embezzle/lazy_state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "embezzle/errors.hpp"

namespace embezzle {

namespace {

struct Merged {
    std::vector<SiteId> sites;
    // For each merged position: (0 = left, 1 = right, index into that side).
    std::vector<std::pair<int, std::size_t>> source;
};

Merged merge_disjoint(std::span<const SiteId> a, std::span<const SiteId> b) {
    Merged m;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i] < b[j])) {
            m.source.emplace_back(0, i);
            m.sites.push_back(a[i++]);
        } else if (i == a.size() || b[j] < a[i]) {
            m.source.emplace_back(1, j);
            m.sites.push_back(b[j++]);
        } else {
            throw Error(ErrorKind::SiteCollision, "site " + to_string(a[i]) + " present in both states");
        }
    }
    return m;
}

std::pair<std::vector<SiteId>, AmplitudeMap> tensor_core(std::span<const SiteId> a_sites, const AmplitudeMap &a,
                                                         std::span<const SiteId> b_sites, const AmplitudeMap &b) {
    Merged m = merge_disjoint(a_sites, b_sites);
    AmplitudeMap out;
    Labels key(m.sites.size());
    for (const auto &[ka, va] : a) {
        for (const auto &[kb, vb] : b) {
            Complex v = va * vb;
            if (std::abs(v) < kPruneThreshold) {
                continue;
            }
            for (std::size_t p = 0; p < m.source.size(); ++p) {
                const auto &[side, idx] = m.source[p];
                key[p] = side == 0 ? ka[idx] : kb[idx];
            }
            out.emplace(key, v);
        }
    }
    return {std::move(m.sites), std::move(out)};
}

void prune(AmplitudeMap &amps) {
    std::erase_if(amps, [](const auto &kv) { return std::abs(kv.second) < kPruneThreshold; });
}

AmplitudeMap zero_state() { return AmplitudeMap{{Labels{}, Complex(1.0)}}; }

}  // namespace

bool CopyTail::same_pair_state(const CopyTail &o, double tol) const {
    if (dim != o.dim || pair.size() != o.pair.size()) {
        return false;
    }
    for (std::size_t i = 0; i < pair.size(); ++i) {
        const auto &[a1, b1, v1] = pair[i];
        const auto &[a2, b2, v2] = o.pair[i];
        if (a1 != a2 || b1 != b2 || std::abs(v1 - v2) > tol) {
            return false;
        }
    }
    return true;
}

LazyProductState::LazyProductState() : amplitudes_(zero_state()) {}

LazyProductState LazyProductState::from_amplitudes(std::vector<SiteId> sites, const AmplitudeMap &amplitudes,
                                                   bool normalize) {
    std::vector<std::size_t> order(sites.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sites[a] < sites[b]; });
    std::vector<SiteId> sorted(sites.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        sorted[i] = sites[order[i]];
        if (i > 0 && sorted[i] == sorted[i - 1]) {
            throw Error(ErrorKind::SiteCollision, "site " + to_string(sorted[i]) + " listed twice");
        }
        if (sorted[i].dim == 0) {
            throw Error(ErrorKind::DimensionMismatch, "site " + to_string(sorted[i]) + " has zero dimension");
        }
    }
    AmplitudeMap amps;
    Labels key(sites.size());
    for (const auto &[labels, v] : amplitudes) {
        if (labels.size() != sites.size()) {
            throw Error(ErrorKind::DimensionMismatch, "amplitude key has " + std::to_string(labels.size()) +
                                                          " labels for " + std::to_string(sites.size()) + " sites");
        }
        for (std::size_t i = 0; i < order.size(); ++i) {
            key[i] = labels[order[i]];
            if (key[i] >= sorted[i].dim) {
                throw Error(ErrorKind::DimensionMismatch, "label " + std::to_string(key[i]) + " out of range for " +
                                                              to_string(sorted[i]));
            }
        }
        if (std::abs(v) >= kPruneThreshold) {
            amps[key] += v;
        }
    }
    prune(amps);
    LazyProductState s(std::move(sorted), std::move(amps), {});
    return normalize ? s.normalized() : s;
}

LazyProductState LazyProductState::basis(std::vector<SiteId> sites, const Labels &labels) {
    return from_amplitudes(std::move(sites), AmplitudeMap{{labels, Complex(1.0)}}, false);
}

const CopyTail *LazyProductState::copy_tail(std::uint32_t group) const {
    for (const auto &t : tails_) {
        if (t.group == group) {
            return &t;
        }
    }
    return nullptr;
}

std::optional<std::size_t> LazyProductState::position(const SiteId &s) const {
    auto it = std::lower_bound(sites_.begin(), sites_.end(), s);
    if (it == sites_.end() || !(*it == s)) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - sites_.begin());
}

bool LazyProductState::has_site(const SiteId &s) const { return position(s).has_value(); }

std::optional<SiteId> LazyProductState::find_site(const SiteId &s) const {
    auto p = position(s);
    if (!p) {
        return std::nullopt;
    }
    return sites_[*p];
}

double LazyProductState::norm_squared() const {
    double n = 0.0;
    for (const auto &[k, v] : amplitudes_) {
        n += std::norm(v);
    }
    return n;
}

LazyProductState LazyProductState::normalized() const {
    double n = std::sqrt(norm_squared());
    if (n == 0.0) {
        throw Error(ErrorKind::InvalidTarget, "cannot normalize the zero vector");
    }
    LazyProductState out = *this;
    for (auto &[k, v] : out.amplitudes_) {
        v /= n;
    }
    return out;
}

LazyProductState LazyProductState::materialize_one_copy(std::size_t tail_index) const {
    const CopyTail &t = tails_[tail_index];
    SiteId a = catalyst_site(Party::A, t.frontier_a, t.dim, t.group);
    SiteId b = catalyst_site(Party::B, t.frontier_b, t.dim, t.group);
    AmplitudeMap pair;
    for (const auto &[la, lb, v] : t.pair) {
        pair.emplace(Labels{la, lb}, v);
    }
    std::vector<SiteId> pair_sites{a, b};
    auto [sites, amps] = tensor_core(sites_, amplitudes_, pair_sites, pair);
    std::vector<CopyTail> tails = tails_;
    tails[tail_index].frontier_a += 1;
    tails[tail_index].frontier_b += 1;
    return LazyProductState(std::move(sites), std::move(amps), std::move(tails));
}

LazyProductState LazyProductState::materialized(const SiteId &s) const {
    if (auto existing = find_site(s)) {
        if (existing->dim != s.dim) {
            throw Error(ErrorKind::DimensionMismatch,
                        "site " + to_string(s) + " is explicit with dim " + std::to_string(existing->dim));
        }
        return *this;
    }
    for (std::size_t i = 0; i < tails_.size(); ++i) {
        if (tails_[i].covers(s)) {
            if (tails_[i].dim != s.dim) {
                throw Error(ErrorKind::DimensionMismatch, "copy tail has dim " + std::to_string(tails_[i].dim) +
                                                              ", site " + to_string(s));
            }
            LazyProductState out = *this;
            while (!out.has_site(s)) {
                out = out.materialize_one_copy(i);
            }
            return out;
        }
    }
    std::vector<SiteId> one{s};
    auto [sites, amps] = tensor_core(sites_, amplitudes_, one, AmplitudeMap{{Labels{0}, Complex(1.0)}});
    return LazyProductState(std::move(sites), std::move(amps), tails_);
}

LazyProductState LazyProductState::materialized(std::span<const SiteId> sites) const {
    LazyProductState out = *this;
    for (const auto &s : sites) {
        out = out.materialized(s);
    }
    return out;
}

LazyProductState LazyProductState::materialized_copies(std::uint32_t group, std::uint32_t frontier_a,
                                                       std::uint32_t frontier_b) const {
    LazyProductState out = *this;
    for (std::size_t i = 0; i < out.tails_.size(); ++i) {
        if (out.tails_[i].group != group) {
            continue;
        }
        while (out.tails_[i].frontier_a < frontier_a || out.tails_[i].frontier_b < frontier_b) {
            out = out.materialize_one_copy(i);
        }
    }
    return out;
}

LazyProductState LazyProductState::with_copy_tail(CopyTail tail) const {
    std::sort(tail.pair.begin(), tail.pair.end(), [](const auto &x, const auto &y) {
        return std::tie(std::get<0>(x), std::get<1>(x)) < std::tie(std::get<0>(y), std::get<1>(y));
    });
    std::erase_if(tail.pair, [](const auto &p) { return std::abs(std::get<2>(p)) < kPruneThreshold; });
    double n = 0.0;
    for (const auto &[a, b, v] : tail.pair) {
        if (a >= tail.dim || b >= tail.dim) {
            throw Error(ErrorKind::DimensionMismatch, "copy tail label out of range");
        }
        n += std::norm(v);
    }
    if (std::abs(n - 1.0) > 1e-12) {
        throw Error(ErrorKind::InvalidTarget, "copy tail pair state is not normalized");
    }
    // |00> copies are indistinguishable from the reference tail.
    if (tail.pair.size() == 1 && std::get<0>(tail.pair[0]) == 0 && std::get<1>(tail.pair[0]) == 0 &&
        std::abs(std::get<2>(tail.pair[0]) - Complex(1.0)) < 1e-15) {
        return *this;
    }
    if (copy_tail(tail.group) != nullptr) {
        throw Error(ErrorKind::SiteCollision, "group " + std::to_string(tail.group) + " already has a copy tail");
    }
    for (const auto &s : sites_) {
        if (tail.covers(s)) {
            throw Error(ErrorKind::CatalystShapeError, "explicit site " + to_string(s) + " lies inside the copy tail");
        }
    }
    LazyProductState out = *this;
    out.tails_.push_back(std::move(tail));
    std::sort(out.tails_.begin(), out.tails_.end(), [](const auto &x, const auto &y) { return x.group < y.group; });
    return out;
}

LazyProductState tensor_states(const LazyProductState &a, const LazyProductState &b) {
    for (const auto &ta : a.tails_) {
        if (b.copy_tail(ta.group) != nullptr) {
            throw Error(ErrorKind::SiteCollision, "both states carry a copy tail for group " + std::to_string(ta.group));
        }
        for (const auto &s : b.sites_) {
            if (ta.covers(s)) {
                throw Error(ErrorKind::SiteCollision, "site " + to_string(s) + " lies in the other state's copy tail");
            }
        }
    }
    for (const auto &tb : b.tails_) {
        for (const auto &s : a.sites_) {
            if (tb.covers(s)) {
                throw Error(ErrorKind::SiteCollision, "site " + to_string(s) + " lies in the other state's copy tail");
            }
        }
    }
    auto [sites, amps] = tensor_core(a.sites_, a.amplitudes_, b.sites_, b.amplitudes_);
    std::vector<CopyTail> tails = a.tails_;
    tails.insert(tails.end(), b.tails_.begin(), b.tails_.end());
    std::sort(tails.begin(), tails.end(), [](const auto &x, const auto &y) { return x.group < y.group; });
    return LazyProductState(std::move(sites), std::move(amps), std::move(tails));
}

LazyProductState apply_operator(const SiteOperator &op, const LazyProductState &s) {
    LazyProductState base = s.materialized(op.support());
    const auto &support = op.support();
    std::vector<std::size_t> pos;
    std::vector<std::uint64_t> strides(support.size(), 1);
    for (std::size_t k = support.size(); k-- > 1;) {
        strides[k - 1] = strides[k] * support[k].dim;
    }
    for (const auto &site : support) {
        pos.push_back(*base.position(site));
    }
    // Column-wise nonzero structure of the operator.
    const Matrix &m = op.matrix();
    std::vector<std::vector<std::pair<std::uint64_t, Complex>>> columns(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            if (m(r, c) != Complex(0.0)) {
                columns[static_cast<std::size_t>(c)].emplace_back(static_cast<std::uint64_t>(r), m(r, c));
            }
        }
    }
    AmplitudeMap out;
    for (const auto &[key, amp] : base.amplitudes_) {
        std::uint64_t col = 0;
        for (std::size_t k = 0; k < pos.size(); ++k) {
            col += key[pos[k]] * strides[k];
        }
        Labels next = key;
        for (const auto &[row, v] : columns[col]) {
            for (std::size_t k = 0; k < pos.size(); ++k) {
                next[pos[k]] = static_cast<std::uint32_t>((row / strides[k]) % support[k].dim);
            }
            out[next] += v * amp;
        }
    }
    prune(out);
    return LazyProductState(base.sites_, std::move(out), base.tails_);
}

LazyProductState apply_site_map(const LazyProductState &s, const SiteMap &map) {
    LazyProductState base = s;
    std::vector<CopyTail> tails = base.tails_;
    // Copy tails: materialize until every moved tail register is explicit or the
    // remaining tail shifts uniformly under a single rule.
    for (const auto &t : s.tails_) {
        std::uint32_t need[2] = {t.frontier_a, t.frontier_b};
        for (Party p : {Party::A, Party::B}) {
            auto &n = need[p == Party::A ? 0 : 1];
            int rule_count = 0;
            for (const auto &rule : map.rules()) {
                if (rule.party == p && rule.role == Role::catalyst_copy && rule.group == t.group) {
                    n = std::max(n, rule.threshold);
                    ++rule_count;
                }
            }
            if (rule_count > 1) {
                throw Error(ErrorKind::SiteSpaceMismatch, "several shift rules act on one copy tail");
            }
            for (const auto &[from, to] : map.table()) {
                if (from.party == p && from.role == Role::catalyst_copy && from.group == t.group) {
                    n = std::max(n, from.index + 1);
                }
            }
        }
        base = base.materialized_copies(t.group, need[0], need[1]);
    }
    tails = base.tails_;
    for (auto &t : tails) {
        for (Party p : {Party::A, Party::B}) {
            for (const auto &rule : map.rules()) {
                if (rule.party == p && rule.role == Role::catalyst_copy && rule.group == t.group) {
                    auto &f = p == Party::A ? t.frontier_a : t.frontier_b;
                    f = static_cast<std::uint32_t>(static_cast<std::int64_t>(f) + rule.offset);
                }
            }
        }
    }

    // Explicit sites outside the map's domain must be in |0>; they are dropped.
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < base.sites_.size(); ++i) {
        if (map.in_domain(base.sites_[i])) {
            keep.push_back(i);
            continue;
        }
        for (const auto &[key, v] : base.amplitudes_) {
            if (key[i] != 0) {
                throw Error(ErrorKind::SiteSpaceMismatch,
                            "site " + to_string(base.sites_[i]) + " is occupied but outside the isometry's input space");
            }
        }
    }
    std::vector<SiteId> mapped;
    mapped.reserve(keep.size());
    for (auto i : keep) {
        mapped.push_back(map(base.sites_[i]));
    }
    std::vector<std::size_t> order(mapped.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mapped[a] < mapped[b]; });
    std::vector<SiteId> sites(mapped.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        sites[i] = mapped[order[i]];
        if (i > 0 && sites[i] == sites[i - 1]) {
            throw Error(ErrorKind::SiteCollision, "relabel maps two sites onto " + to_string(sites[i]));
        }
    }
    for (const auto &t : tails) {
        for (const auto &site : sites) {
            if (t.covers(site)) {
                throw Error(ErrorKind::SiteCollision, "relabel moves " + to_string(site) + " into a copy tail");
            }
        }
    }
    // Implicit |0> registers moved into a copy tail would contradict the tail.
    for (const auto &[from, to] : map.table()) {
        if (base.has_site(from)) {
            continue;
        }
        for (const auto &t : tails) {
            if (t.covers(to)) {
                throw Error(ErrorKind::SiteSpaceMismatch, "reference register moved into a copy tail");
            }
        }
    }
    AmplitudeMap amps;
    Labels next(sites.size());
    for (const auto &[key, v] : base.amplitudes_) {
        for (std::size_t i = 0; i < order.size(); ++i) {
            next[i] = key[keep[order[i]]];
        }
        amps.emplace(next, v);
    }
    std::sort(tails.begin(), tails.end(), [](const auto &x, const auto &y) { return x.group < y.group; });
    return LazyProductState(std::move(sites), std::move(amps), std::move(tails));
}

LazyProductState permute_sites(const LazyProductState &s, const SiteMap &map) {
    if (!map.is_party_preserving()) {
        throw Error(ErrorKind::PartyViolation, "relabel moves a site across the A|B cut");
    }
    for (const auto &site : s.sites()) {
        if (map(site).party != site.party) {
            throw Error(ErrorKind::PartyViolation, "relabel moves " + to_string(site) + " across the A|B cut");
        }
    }
    return apply_site_map(s, map);
}

std::optional<std::pair<LazyProductState, LazyProductState>> align(const LazyProductState &a,
                                                                   const LazyProductState &b) {
    LazyProductState x = a;
    LazyProductState y = b;
    for (const auto &ta : a.copy_tails()) {
        const CopyTail *tb = b.copy_tail(ta.group);
        if (tb == nullptr || !ta.same_pair_state(*tb) || ta.offset() != tb->offset()) {
            return std::nullopt;
        }
        std::uint32_t fa = std::max(ta.frontier_a, tb->frontier_a);
        std::uint32_t fb = std::max(ta.frontier_b, tb->frontier_b);
        x = x.materialized_copies(ta.group, fa, fb);
        y = y.materialized_copies(ta.group, fa, fb);
    }
    for (const auto &tb : b.copy_tails()) {
        if (a.copy_tail(tb.group) == nullptr) {
            return std::nullopt;
        }
    }
    auto joint = union_support(x.sites(), y.sites());
    x = x.materialized(joint);
    y = y.materialized(joint);
    return std::make_pair(std::move(x), std::move(y));
}

namespace {

bool same_layout(const LazyProductState &a, const LazyProductState &b) {
    if (a.sites() != b.sites() || a.copy_tails().size() != b.copy_tails().size()) return false;
    for (std::size_t i = 0; i < a.sites().size(); ++i) {
        if (a.sites()[i].dim != b.sites()[i].dim) return false;
    }
    for (const auto &ta : a.copy_tails()) {
        const CopyTail *tb = b.copy_tail(ta.group);
        if (tb == nullptr || tb->frontier_a != ta.frontier_a || tb->frontier_b != ta.frontier_b ||
            !ta.same_pair_state(*tb)) {
            return false;
        }
    }
    return true;
}

double canonical_sum(std::vector<double> &terms) {
    std::sort(terms.begin(), terms.end());
    double sum = 0.0;
    for (double t : terms) sum += t;
    return sum;
}

}  // namespace

Complex inner_product(const LazyProductState &a, const LazyProductState &b) {
    std::optional<std::pair<LazyProductState, LazyProductState>> aligned;
    if (!same_layout(a, b)) {
        aligned = align(a, b);
        if (!aligned) return Complex(0.0);
    }
    const auto &ma = aligned ? aligned->first.amplitudes() : a.amplitudes();
    const auto &mb = aligned ? aligned->second.amplitudes() : b.amplitudes();
    std::vector<double> re;
    std::vector<double> im;
    auto ia = ma.begin();
    auto ib = mb.begin();
    while (ia != ma.end() && ib != mb.end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            Complex t = std::conj(ia->second) * ib->second;
            re.push_back(t.real());
            im.push_back(t.imag());
            ++ia;
            ++ib;
        }
    }
    // Summation order independent of site labels, so relabelings are exact.
    return Complex(canonical_sum(re), canonical_sum(im));
}

double distance(const LazyProductState &a, const LazyProductState &b) {
    std::optional<std::pair<LazyProductState, LazyProductState>> aligned;
    if (!same_layout(a, b)) {
        aligned = align(a, b);
        if (!aligned) return std::sqrt(a.norm_squared() + b.norm_squared());
    }
    const auto &ma = aligned ? aligned->first.amplitudes() : a.amplitudes();
    const auto &mb = aligned ? aligned->second.amplitudes() : b.amplitudes();
    double sum = 0.0;
    auto ia = ma.begin();
    auto ib = mb.begin();
    while (ia != ma.end() || ib != mb.end()) {
        if (ib == mb.end() || (ia != ma.end() && ia->first < ib->first)) {
            sum += std::norm(ia->second);
            ++ia;
        } else if (ia == ma.end() || ib->first < ia->first) {
            sum += std::norm(ib->second);
            ++ib;
        } else {
            sum += std::norm(ia->second - ib->second);
            ++ia;
            ++ib;
        }
    }
    return std::sqrt(sum);
}

Complex expectation(const LazyProductState &s, const SiteOperator &op) {
    return inner_product(s, apply_operator(op, s));
}

}  // namespace embezzle
