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

#include "embezzle/isometry.hpp"

#include <algorithm>

#include "embezzle/errors.hpp"

namespace embezzle {

namespace {

bool contains(const std::vector<SiteId> &v, const SiteId &s) { return std::find(v.begin(), v.end(), s) != v.end(); }

std::vector<SiteId> minus(const std::vector<SiteId> &a, const std::vector<SiteId> &b) {
    std::vector<SiteId> out;
    for (const auto &s : a) {
        if (!contains(b, s)) out.push_back(s);
    }
    return out;
}

std::vector<SiteId> unite(std::vector<SiteId> a, const std::vector<SiteId> &b) {
    for (const auto &s : b) {
        if (!contains(a, s)) a.push_back(s);
    }
    return a;
}

}  // namespace

StructuredIsometry StructuredIsometry::relabeling(SiteMap map, std::string name) {
    StructuredIsometry v;
    v.name_ = std::move(name);
    if (!map.is_identity()) {
        v.steps_.emplace_back(std::move(map));
    }
    return v;
}

StructuredIsometry StructuredIsometry::local_core(SiteOperator core, std::string name) {
    StructuredIsometry v;
    v.name_ = std::move(name);
    v.steps_.emplace_back(std::move(core));
    return v;
}

StructuredIsometry StructuredIsometry::from_parts(std::string name, std::vector<Step> steps,
                                                  std::vector<SiteId> materialize, std::vector<SiteId> retire,
                                                  std::vector<SiteId> requires_fresh) {
    StructuredIsometry v;
    v.name_ = std::move(name);
    v.steps_ = std::move(steps);
    v.materialize_ = std::move(materialize);
    v.retire_ = std::move(retire);
    v.requires_fresh_ = std::move(requires_fresh);
    return v;
}

StructuredIsometry StructuredIsometry::renamed(std::string name) const {
    StructuredIsometry v = *this;
    v.name_ = std::move(name);
    return v;
}

bool StructuredIsometry::is_relabel_only() const {
    return std::all_of(steps_.begin(), steps_.end(), [](const Step &s) { return std::holds_alternative<SiteMap>(s); });
}

bool StructuredIsometry::acts_only_on(Party p) const {
    for (const auto &step : steps_) {
        if (const auto *m = std::get_if<SiteMap>(&step)) {
            if (!m->acts_only_on(p)) return false;
        } else if (!std::get<SiteOperator>(step).acts_only_on(p)) {
            return false;
        }
    }
    return true;
}

LazyProductState StructuredIsometry::apply(const LazyProductState &x) const {
    LazyProductState s = x;
    for (const auto &step : steps_) {
        if (const auto *m = std::get_if<SiteMap>(&step)) {
            s = apply_site_map(s, *m);
        } else {
            s = apply_operator(std::get<SiteOperator>(step), s);
        }
    }
    return s;
}

SiteOperator reduce_on_reference(const SiteOperator &op, const SiteId &site) {
    const auto &support = op.support();
    auto it = std::find(support.begin(), support.end(), site);
    if (it == support.end()) {
        return op;
    }
    const std::size_t k = static_cast<std::size_t>(it - support.begin());
    std::vector<SiteId> rest;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (i != k) rest.push_back(support[i]);
    }
    std::vector<std::uint64_t> strides(support.size(), 1);
    for (std::size_t i = support.size(); i-- > 1;) {
        strides[i - 1] = strides[i] * support[i].dim;
    }
    const auto dim = product_of_dims(rest);
    // Flat index in the full support with `site` at label 0.
    std::vector<Eigen::Index> full(dim);
    for (std::uint64_t flat = 0; flat < dim; ++flat) {
        std::uint64_t rem = flat;
        std::uint64_t f = 0;
        for (std::size_t i = support.size(); i-- > 0;) {
            if (i == k) continue;
            f += (rem % support[i].dim) * strides[i];
            rem /= support[i].dim;
        }
        full[flat] = static_cast<Eigen::Index>(f);
    }
    Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::uint64_t r = 0; r < dim; ++r) {
        for (std::uint64_t c = 0; c < dim; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = op.matrix()(full[r], full[c]);
        }
    }
    return SiteOperator(std::move(rest), std::move(m));
}

SiteOperator StructuredIsometry::conjugate(const SiteOperator &op) const {
    SiteOperator out = op;
    for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
        if (const auto *m = std::get_if<SiteMap>(&*it)) {
            // Registers outside the relabel's image hold |0> after V.
            for (const auto &s : std::vector<SiteId>(out.support())) {
                if (!m->in_image(s)) {
                    out = reduce_on_reference(out, s);
                }
            }
            std::vector<SiteId> support;
            for (const auto &s : out.support()) {
                support.push_back(*m->preimage(s));
            }
            out = SiteOperator(std::move(support), out.matrix());
        } else {
            const auto &core = std::get<SiteOperator>(*it);
            out = (core.adjoint() * out * core).trimmed();
        }
    }
    return out;
}

StructuredIsometry compose(const StructuredIsometry &outer, const StructuredIsometry &inner) {
    for (const auto &s : outer.requires_fresh_) {
        if (contains(inner.materialize_, s)) {
            throw Error(ErrorKind::SiteSpaceMismatch, outer.name_ + " needs " + to_string(s) + " fresh but " +
                                                          inner.name_ + " leaves it occupied");
        }
    }
    StructuredIsometry v;
    v.name_ = outer.name_ + "*" + inner.name_;
    v.steps_ = inner.steps_;
    v.steps_.insert(v.steps_.end(), outer.steps_.begin(), outer.steps_.end());
    v.materialize_ = unite(minus(inner.materialize_, outer.retire_), outer.materialize_);
    v.retire_ = unite(inner.retire_, minus(outer.retire_, inner.materialize_));
    v.requires_fresh_ = unite(inner.requires_fresh_, minus(outer.requires_fresh_, inner.retire_));
    return v;
}

StructuredIsometry compose(std::initializer_list<StructuredIsometry> outer_to_inner) {
    if (outer_to_inner.size() == 0) {
        return StructuredIsometry();
    }
    auto it = std::rbegin(outer_to_inner);
    StructuredIsometry acc = *it++;
    for (; it != std::rend(outer_to_inner); ++it) {
        acc = compose(*it, acc);
    }
    return acc;
}

StructuredIsometry pull_out(Party party, const SiteId &out, std::uint32_t pool) {
    if (out.party != party) {
        throw Error(ErrorKind::PartyViolation, "pull-out register " + to_string(out) + " belongs to the other party");
    }
    SiteMap m;
    m.map(ancilla_site(party, 0, out.dim, pool), out);
    m.shift({party, Role::ancilla, pool, 1, -1});
    auto v = StructuredIsometry::relabeling(std::move(m), "pull_out_" + to_string(party));
    v.materialize_ = {out};
    v.requires_fresh_ = {out};
    return v;
}

StructuredIsometry push_in(Party party, const SiteId &reg, std::uint32_t pool) {
    if (reg.party != party) {
        throw Error(ErrorKind::PartyViolation, "push-in register " + to_string(reg) + " belongs to the other party");
    }
    SiteMap m;
    m.map(reg, ancilla_site(party, 0, reg.dim, pool));
    m.shift({party, Role::ancilla, pool, 0, +1});
    auto v = StructuredIsometry::relabeling(std::move(m), "push_in_" + to_string(party));
    v.retire_ = {reg};
    return v;
}

StructuredIsometry swap(const SiteId &r1, const SiteId &r2, bool cross_bipartition) {
    if (r1.dim != r2.dim) {
        throw Error(ErrorKind::DimensionMismatch, "swap of " + to_string(r1) + " and " + to_string(r2));
    }
    if (r1.party != r2.party && !cross_bipartition) {
        throw Error(ErrorKind::PartyViolation, "swap across the A|B cut must be flagged cross-bipartition");
    }
    SiteMap m;
    if (!(r1 == r2)) {
        m.map(r1, r2);
        m.map(r2, r1);
    }
    return StructuredIsometry::relabeling(std::move(m), "swap(" + to_string(r1) + "," + to_string(r2) + ")");
}

StructuredIsometry factor_reorder(std::string name) { return StructuredIsometry::relabeling(SiteMap(), std::move(name)); }

double verify_isometry(const StructuredIsometry &v, std::span<const LazyProductState> probes) {
    std::vector<LazyProductState> images;
    images.reserve(probes.size());
    for (const auto &p : probes) {
        images.push_back(v.apply(p));
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        for (std::size_t j = i; j < probes.size(); ++j) {
            Complex before = inner_product(probes[i], probes[j]);
            Complex after = inner_product(images[i], images[j]);
            worst = std::max(worst, std::abs(after - before));
        }
    }
    return worst;
}

}  // namespace embezzle
