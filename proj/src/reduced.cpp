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

#include "embezzle/reduced.hpp"

#include <algorithm>
#include <map>

#include "embezzle/errors.hpp"

namespace embezzle {

namespace {

std::vector<std::uint64_t> strides_of(const std::vector<SiteId> &sites) {
    std::vector<std::uint64_t> st(sites.size(), 1);
    for (std::size_t i = sites.size(); i-- > 1;) st[i - 1] = st[i] * sites[i].dim;
    return st;
}

}  // namespace

ReducedState::ReducedState(std::vector<SiteId> sites, Matrix rho) : sites_(std::move(sites)), rho_(std::move(rho)) {
    if (static_cast<std::uint64_t>(rho_.rows()) != product_of_dims(sites_)) {
        throw Error(ErrorKind::DimensionMismatch, "reduced state matrix does not match its registers");
    }
}

ReducedState ReducedState::of(const LazyProductState &s, std::vector<SiteId> sites, std::uint64_t max_dim) {
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
    const std::uint64_t dim = product_of_dims(sites);
    if (dim > max_dim) {
        throw Error(ErrorKind::SizeBudgetExceeded,
                    "reduced state on " + std::to_string(dim) + " dimensions exceeds " + std::to_string(max_dim));
    }
    LazyProductState m = s.materialized(std::span<const SiteId>(sites));
    std::vector<std::size_t> kept;
    for (const auto &site : sites) {
        auto found = m.find_site(site);
        if (found->dim != site.dim) {
            throw Error(ErrorKind::DimensionMismatch, "register " + to_string(site) + " has dimension " +
                                                          std::to_string(found->dim));
        }
        kept.push_back(*m.position(site));
    }
    std::vector<bool> is_kept(m.sites().size(), false);
    for (auto k : kept) is_kept[k] = true;
    auto st = strides_of(sites);
    // Group amplitudes by the labels of the traced-out registers.
    std::map<Labels, std::vector<std::pair<Eigen::Index, Complex>>> groups;
    for (const auto &[labels, v] : m.amplitudes()) {
        Labels rest;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (!is_kept[i]) rest.push_back(labels[i]);
        }
        std::uint64_t idx = 0;
        for (std::size_t k = 0; k < kept.size(); ++k) idx += labels[kept[k]] * st[k];
        groups[rest].emplace_back(static_cast<Eigen::Index>(idx), v);
    }
    Matrix rho = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto &[rest, col] : groups) {
        for (const auto &[r, a] : col) {
            for (const auto &[c, b] : col) rho(r, c) += a * std::conj(b);
        }
    }
    return ReducedState(std::move(sites), std::move(rho));
}

ReducedState ReducedState::contract(const SiteOperator &op) const {
    std::vector<std::size_t> in_op, rest;
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        const auto &sup = op.support();
        auto it = std::find(sup.begin(), sup.end(), sites_[i]);
        (it == sup.end() ? rest : in_op).push_back(i);
    }
    if (in_op.size() != op.support().size()) {
        throw Error(ErrorKind::SiteSpaceMismatch, "operator acts outside the reduced registers");
    }
    auto st = strides_of(sites_);
    std::vector<SiteId> rest_sites;
    for (auto i : rest) rest_sites.push_back(sites_[i]);
    auto offsets = [&](const std::vector<std::size_t> &which) {
        std::vector<SiteId> sub;
        for (auto i : which) sub.push_back(sites_[i]);
        const auto n = product_of_dims(sub);
        std::vector<Eigen::Index> off(n);
        for (std::uint64_t flat = 0; flat < n; ++flat) {
            std::uint64_t r = flat, o = 0;
            for (std::size_t k = which.size(); k-- > 0;) {
                o += (r % sites_[which[k]].dim) * st[which[k]];
                r /= sites_[which[k]].dim;
            }
            off[flat] = static_cast<Eigen::Index>(o);
        }
        return off;
    };
    auto op_off = offsets(in_op);
    auto rest_off = offsets(rest);
    const auto &o = op.matrix();
    const auto nr = static_cast<Eigen::Index>(rest_off.size());
    Matrix out = Matrix::Zero(nr, nr);
    for (Eigen::Index s = 0; s < o.rows(); ++s) {
        for (Eigen::Index t = 0; t < o.cols(); ++t) {
            const Complex w = o(s, t);
            if (w == Complex(0.0)) continue;
            // (O rho)_{(s,r),(s,c)} summed over s: O_{s,t} rho_{(t,r),(s,c)}.
            for (Eigen::Index r = 0; r < nr; ++r) {
                for (Eigen::Index c = 0; c < nr; ++c) {
                    out(r, c) += w * rho_(op_off[t] + rest_off[r], op_off[s] + rest_off[c]);
                }
            }
        }
    }
    return ReducedState(std::move(rest_sites), std::move(out));
}

}  // namespace embezzle
