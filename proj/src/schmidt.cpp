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

#include "embezzle/schmidt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

namespace embezzle {

double SchmidtSpectrum::squared_sum() const {
    double s = 0.0;
    for (double c : coefficients) {
        s += c * c;
    }
    return s;
}

double SchmidtSpectrum::max_difference(const SchmidtSpectrum &other) const {
    const std::size_t n = std::max(coefficients.size(), other.coefficients.size());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = i < coefficients.size() ? coefficients[i] : 0.0;
        double y = i < other.coefficients.size() ? other.coefficients[i] : 0.0;
        d = std::max(d, std::abs(x - y));
    }
    return d;
}

SchmidtSpectrum schmidt_spectrum(const LazyProductState &s) {
    std::vector<std::size_t> a_pos, b_pos;
    for (std::size_t i = 0; i < s.sites().size(); ++i) {
        (s.sites()[i].party == Party::A ? a_pos : b_pos).push_back(i);
    }
    // Rows are A sub-keys, columns B sub-keys; the coefficient matrix splits into
    // connected blocks, each decomposed on its own.
    std::map<Labels, std::size_t> rows, cols;
    struct Entry {
        std::size_t row, col;
        Complex v;
    };
    std::vector<Entry> entries;
    Labels ka(a_pos.size()), kb(b_pos.size());
    for (const auto &[key, v] : s.amplitudes()) {
        for (std::size_t i = 0; i < a_pos.size(); ++i) ka[i] = key[a_pos[i]];
        for (std::size_t i = 0; i < b_pos.size(); ++i) kb[i] = key[b_pos[i]];
        auto r = rows.try_emplace(ka, rows.size()).first->second;
        auto c = cols.try_emplace(kb, cols.size()).first->second;
        entries.push_back({r, c, v});
    }
    const std::size_t nr = rows.size();
    std::vector<std::size_t> parent(nr + cols.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto &e : entries) {
        auto x = find(e.row), y = find(nr + e.col);
        if (x != y) parent[x] = y;
    }
    std::map<std::size_t, std::vector<const Entry *>> blocks;
    for (const auto &e : entries) {
        blocks[find(e.row)].push_back(&e);
    }
    SchmidtSpectrum out;
    for (const auto &[root, block] : blocks) {
        std::map<std::size_t, Eigen::Index> br, bc;
        for (const auto *e : block) {
            br.try_emplace(e->row, static_cast<Eigen::Index>(br.size()));
            bc.try_emplace(e->col, static_cast<Eigen::Index>(bc.size()));
        }
        if (br.size() == 1 && bc.size() == 1) {
            out.coefficients.push_back(std::abs(block.front()->v));
            continue;
        }
        Matrix m = Matrix::Zero(static_cast<Eigen::Index>(br.size()), static_cast<Eigen::Index>(bc.size()));
        for (const auto *e : block) {
            m(br[e->row], bc[e->col]) = e->v;
        }
        Eigen::BDCSVD<Matrix> svd(m);
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
            out.coefficients.push_back(svd.singularValues()(i));
        }
    }
    std::erase_if(out.coefficients, [](double c) { return c < 1e-13; });
    std::sort(out.coefficients.begin(), out.coefficients.end(), std::greater<>());
    return out;
}

}  // namespace embezzle
