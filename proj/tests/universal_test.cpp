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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "embezzle/errors.hpp"
#include "embezzle/probes.hpp"
#include "embezzle/universal.hpp"
#include "test_util.hpp"

using namespace embezzle;

namespace {

template <typename Fn>
void expect_error(ErrorKind kind, Fn &&fn) {
    try {
        fn();
        ADD_FAILURE() << "expected " << to_string(kind);
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), kind) << e.what();
    }
}

std::vector<TargetState> three_members() { return enumerate_rational_family(3, 7).targets(); }

}  // namespace

TEST(RationalFamily, includes_pythagorean_pair_and_excludes_zeros) {
    auto fam = enumerate_rational_family(2, 5);
    ASSERT_EQ(fam.members.size(), 1u);
    EXPECT_EQ(fam.members[0].numerators, (std::vector<std::int64_t>{4, 3}));
    EXPECT_EQ(fam.members[0].denominator, 5);
    for (const auto &m : enumerate_rational_family(4, 12).members) {
        EXPECT_TRUE(m.normalized());
        for (auto a : m.numerators) EXPECT_GE(a, 1);
    }
}

TEST(RationalFamily, count_matches_brute_force_triples) {
    for (std::int64_t q : {5, 13, 25, 50}) {
        std::size_t brute = 0;
        for (std::int64_t c = 1; c <= q; ++c)
            for (std::int64_t a = 1; a < c; ++a)
                for (std::int64_t b = 1; b <= a; ++b)
                    if (a * a + b * b == c * c && std::gcd(std::gcd(a, b), c) == 1) ++brute;
        EXPECT_EQ(enumerate_rational_family(2, q).members.size(), brute) << q;
    }
    EXPECT_EQ(enumerate_rational_family(2, 13).members.size(), 2u);
}

TEST(RationalFamily, ordered_and_distinct) {
    auto fam = enumerate_rational_family(3, 9);
    auto ts = fam.targets();
    for (std::size_t i = 1; i < ts.size(); ++i) {
        ASSERT_LE(ts[i - 1].coefficients().size(), ts[i].coefficients().size());
        if (ts[i - 1].coefficients().size() == ts[i].coefficients().size()) {
            EXPECT_LT(ts[i - 1].coefficients(), ts[i].coefficients());
        }
    }
    auto three = three_members();
    ASSERT_EQ(three.size(), 3u);
    EXPECT_EQ(enumerate_rational_family(2, 13).members[1].to_string(), "12/13,5/13");
    EXPECT_EQ(fam.members[1].to_string(), "2/3,2/3,1/3");
}

TEST(CompositeCatalyst, single_member_matches_hotel) {
    auto c = build_composite_catalyst(std::vector<TargetState>{TargetState::bell()}, 2);
    auto h = build_hotel_catalyst(TargetState::bell(), 2);
    EXPECT_EQ(c.state.sites(), h.sites());
    EXPECT_EQ(c.state.amplitudes(), h.amplitudes());
}

TEST(CompositeCatalyst, two_member_expansion) {
    auto c = build_composite_catalyst({TargetState::bell(), TargetState::parse("3/5,4/5")}, 1);
    ASSERT_EQ(c.state.nnz(), 4u);
    std::multiset<long> scaled;
    for (const auto &[k, v] : c.state.amplitudes()) scaled.insert(std::lround(v.real() * 5.0 * std::sqrt(2.0)));
    EXPECT_EQ(scaled, (std::multiset<long>{3, 3, 4, 4}));
}

TEST(CompositeCatalyst, member_marginal_spectra) {
    auto members = three_members();
    auto c = build_composite_catalyst(members, 2);
    for (std::uint32_t i = 0; i < members.size(); ++i) {
        auto rho = ReducedState::of(c.state, {c.site(Party::A, i, 2), c.site(Party::B, i, 2)});
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
        // Pure marginal: one eigenvalue 1; its vector carries the member's spectrum.
        EXPECT_NEAR(es.eigenvalues().maxCoeff(), 1.0, 1e-12);
        LazyProductState pair = members[i].on(c.site(Party::A, i, 2), c.site(Party::B, i, 2));
        EXPECT_LE(schmidt_spectrum(pair).max_difference(members[i].schmidt()), 1e-12);
    }
}

TEST(CompositeCatalyst, budget) {
    expect_error(ErrorKind::SizeBudgetExceeded,
                 [] { (void)build_composite_catalyst(three_members(), 3, 1000); });
    EXPECT_NO_THROW((void)build_composite_catalyst(three_members(), 3));
}

TEST(Interleave, identity_involution_and_expectations) {
    auto one = build_composite_catalyst(std::vector<TargetState>{TargetState::bell()}, 1);
    EXPECT_TRUE(interleave_map(one).is_identity());

    auto c = build_composite_catalyst({TargetState::bell(), TargetState::parse("3/5,4/5")}, 2);
    auto once = interleave_reindex(c);
    auto twice = interleave_reindex(once);
    EXPECT_EQ(twice.state.sites(), c.state.sites());
    EXPECT_EQ(twice.state.amplitudes(), c.state.amplitudes());
    EXPECT_EQ(schmidt_spectrum(once.state).max_difference(schmidt_spectrum(c.state)), 0.0);

    std::mt19937_64 rng(3);
    SiteMap m = interleave_map(c);
    for (int t = 0; t < 10; ++t) {
        SiteOperator op({c.site(Party::A, 1, 2), c.site(Party::B, 0, 1)}, embezzle::testing::random_matrix(4, rng));
        EXPECT_NEAR(std::abs(expectation(c.state, op) - expectation(once.state, permute_sites(op, m))), 0.0, 1e-12);
    }
    // The joint relabeling factors into party-local ones.
    SiteMap ma = interleave_map(c, Party::A), mb = interleave_map(c, Party::B);
    EXPECT_TRUE(ma.acts_only_on(Party::A));
    EXPECT_TRUE(mb.acts_only_on(Party::B));
    auto split = permute_sites(permute_sites(c.state, ma), mb);
    EXPECT_EQ(split.amplitudes(), once.state.amplitudes());
}

TEST(Simultaneous, two_members_three_copies) {
    auto c = build_composite_catalyst({TargetState::bell(), TargetState::parse("3/5,4/5")}, 3);
    auto r = check_simultaneous_containment(c, 2);
    EXPECT_TRUE(r.pass);
    ASSERT_EQ(r.members.size(), 2u);
    for (const auto &m : r.members) EXPECT_LE(m.max_expectation_dev, 1e-12);
    EXPECT_LE(r.cross_product_dev, 1e-12);
    EXPECT_EQ(r.cross_commutator, 0.0);
}

TEST(Simultaneous, single_member_reduces_to_level_suite) {
    auto g = TargetState::parse("3/5,4/5");
    auto c = build_composite_catalyst(std::vector<TargetState>{g}, 3);
    auto r = check_simultaneous_containment(c, 3);
    auto direct = certify_levels(c.state, AlgebraMorphism::hotel(Party::A, 2), AlgebraMorphism::hotel(Party::B, 2), g, 3);
    ASSERT_EQ(r.members.size(), 1u);
    EXPECT_EQ(r.members[0].expectation_dev, direct.expectation_dev);
    EXPECT_EQ(r.members[0].commutator, direct.commutator);
    EXPECT_EQ(r.members[0].pass, direct.pass);
}

TEST(Simultaneous, corrupted_member_fails_in_isolation) {
    auto members = three_members();
    auto c = build_composite_catalyst(members, 3);
    auto corrupted = members;
    corrupted[1] = TargetState::parse("6/7,3/7,2/7");
    auto bad = build_composite_catalyst(corrupted, 3);
    bad.members = members;
    auto r = check_simultaneous_containment(bad, 3);
    EXPECT_FALSE(r.pass);
    EXPECT_TRUE(r.members[0].pass);
    EXPECT_FALSE(r.members[1].pass);
    EXPECT_GE(r.members[1].max_expectation_dev, 0.1);
    EXPECT_TRUE(r.members[2].pass);
    EXPECT_NE(deviation_csv(r).find("1,\"0.66666666666666663,0.66666666666666663,0.33333333333333331\",1,"),
              std::string::npos);
}

TEST(Simultaneous, interleaved_catalyst_still_passes) {
    auto c = interleave_reindex(build_composite_catalyst(three_members(), 3));
    auto r = check_simultaneous_containment(c, 3);
    EXPECT_TRUE(r.pass);
    EXPECT_LE(interleave_invariance(c, 3), 1e-12);
    expect_error(ErrorKind::ConfigError, [&] { (void)check_simultaneous_containment(c, 4); });
}

// Property: recursive shifts and direct placement agree, before and after interleaving.
TEST(Simultaneous, sequential_and_direct_embeddings_agree) {
    for (std::uint32_t copies = 1; copies <= 3; ++copies) {
        auto c = build_composite_catalyst(three_members(), copies);
        EXPECT_LE(embedding_consistency(c, copies), 1e-12);
        EXPECT_LE(embedding_consistency(interleave_reindex(c), copies), 1e-12);
    }
}

// Property: growing the grid never changes existing expectations.
TEST(Simultaneous, lazy_growth_keeps_expectations) {
    auto small = build_composite_catalyst(three_members(), 2);
    auto large = build_composite_catalyst(three_members(), 3);
    for (std::uint32_t i = 0; i < 3; ++i) {
        for (std::uint32_t n = 1; n <= 2; ++n) {
            auto fam = member_family(small, i, n);
            for (std::size_t a = 0; a < fam.alice_ops.size(); ++a) {
                SiteOperator op = fam.alice_ops[a] * fam.bob_ops[(a * 7) % fam.bob_ops.size()];
                EXPECT_NEAR(std::abs(expectation(small.state, op) - expectation(large.state, op)), 0.0, 1e-12);
            }
        }
    }
}
