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

// Test-only helpers: dense reference computations independent of the sparse
// state machinery.

#ifndef EMBEZZLE_TESTS_TEST_UTIL_HPP
#define EMBEZZLE_TESTS_TEST_UTIL_HPP

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "embezzle/lazy_state.hpp"

namespace embezzle::testing {

/// Dense amplitude vector of `s` over the full basis of `sites` (sorted), first site
/// most significant. Sites of `s` not listed must be in |0>.
inline Eigen::VectorXcd dense(const LazyProductState &s, const std::vector<SiteId> &sites) {
    std::uint64_t total = 1;
    for (const auto &site : sites) total *= site.dim;
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(total));
    for (const auto &[key, amp] : s.amplitudes()) {
        std::uint64_t flat = 0;
        std::size_t k = 0;
        for (const auto &site : sites) {
            std::uint32_t label = 0;
            for (std::size_t i = 0; i < s.sites().size(); ++i) {
                if (s.sites()[i] == site) label = key[i];
            }
            flat = flat * site.dim + label;
            ++k;
        }
        for (std::size_t i = 0; i < s.sites().size(); ++i) {
            bool listed = false;
            for (const auto &site : sites) listed = listed || site == s.sites()[i];
            if (!listed && key[i] != 0) {
                ADD_FAILURE() << "unlisted site carries a nonzero label";
            }
        }
        v(static_cast<Eigen::Index>(flat)) += amp;
    }
    return v;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Eigen::MatrixXcd random_unitary(int n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    return qr.householderQ();
}

inline Eigen::MatrixXcd random_matrix(int n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
    return m;
}

/// Σ x_i |i>|i> on the two given sites.
inline LazyProductState diagonal_pair(const SiteId &a, const SiteId &b, const std::vector<double> &x) {
    AmplitudeMap amps;
    for (std::uint32_t i = 0; i < x.size(); ++i) amps[{i, i}] = x[i];
    return LazyProductState::from_amplitudes({a, b}, amps, false);
}

}  // namespace embezzle::testing

#endif
