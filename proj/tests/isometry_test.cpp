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
#include <random>

#include "embezzle/errors.hpp"
#include "embezzle/isometry.hpp"
#include "embezzle/probes.hpp"
#include "test_util.hpp"

using namespace embezzle;
using embezzle::testing::dense;
using embezzle::testing::diagonal_pair;
using embezzle::testing::kron;

namespace {

SiteId anc(Party p, std::uint32_t k, std::uint32_t d = 2) { return ancilla_site(p, k, d); }
SiteId out(Party p, std::uint32_t k = 0, std::uint32_t d = 2) { return output_site(p, k, d); }

std::vector<SiteId> probe_sites() {
    return {anc(Party::A, 0), anc(Party::A, 1), anc(Party::A, 2, 3), anc(Party::B, 0), catalyst_site(Party::A, 1, 2),
            catalyst_site(Party::B, 1, 2)};
}

template <typename Fn>
void expect_error(ErrorKind kind, Fn &&fn) {
    try {
        fn();
        ADD_FAILURE() << "expected " << to_string(kind);
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), kind) << e.what();
    }
}

}  // namespace

TEST(PullOut, reference_vector_is_unchanged) {
    auto w = pull_out(Party::A, out(Party::A));
    auto s = w.apply(LazyProductState());
    EXPECT_EQ(s.amplitudes(), LazyProductState().amplitudes());
    EXPECT_NEAR(std::abs(inner_product(s, LazyProductState::basis({out(Party::A)}, {0})) - Complex(1.0)), 0.0, 0.0);
}

TEST(PullOut, basis_vector_splits_first_register) {
    // |e> with e = (1, 0, 1) on the ancilla pool.
    auto e = LazyProductState::basis({anc(Party::A, 0), anc(Party::A, 1), anc(Party::A, 2)}, {1, 0, 1});
    auto s = pull_out(Party::A, out(Party::A)).apply(e);
    auto expect = LazyProductState::basis({out(Party::A), anc(Party::A, 0), anc(Party::A, 1)}, {1, 0, 1});
    EXPECT_EQ(distance(s, expect), 0.0);
}

TEST(PullOut, twice_equals_two_site_extraction) {
    std::mt19937_64 rng(17);
    auto x = random_state({anc(Party::A, 0), anc(Party::A, 1), anc(Party::A, 2), anc(Party::B, 0)}, rng, 16);
    auto w1 = pull_out(Party::A, out(Party::A, 0));
    auto w2 = pull_out(Party::A, out(Party::A, 1));
    auto twice = compose(w2, w1).apply(x);
    SiteMap m;
    m.map(anc(Party::A, 0), out(Party::A, 0)).map(anc(Party::A, 1), out(Party::A, 1));
    m.shift({Party::A, Role::ancilla, 0, 2, -2});
    auto once = StructuredIsometry::relabeling(m, "W2").apply(x);
    EXPECT_LE(distance(twice, once), 1e-12);
}

TEST(PullOut, fresh_register_conflict) {
    auto w = pull_out(Party::A, out(Party::A));
    expect_error(ErrorKind::SiteSpaceMismatch, [&] { (void)compose(w, w); });
}

TEST(PushIn, party_violation) {
    expect_error(ErrorKind::PartyViolation, [] { (void)push_in(Party::A, out(Party::B)); });
}

TEST(PushIn, basis_vector_joins_tail) {
    auto e = LazyProductState::basis({anc(Party::B, 0), anc(Party::B, 1), out(Party::B)}, {1, 1, 0});
    auto s = push_in(Party::B, out(Party::B)).apply(e);
    auto expect = LazyProductState::basis({anc(Party::B, 0), anc(Party::B, 1), anc(Party::B, 2)}, {0, 1, 1});
    EXPECT_EQ(distance(s, expect), 0.0);
}

TEST(PushIn, excited_register_reads_minus_one) {
    auto s = push_in(Party::A, out(Party::A)).apply(LazyProductState::basis({out(Party::A)}, {1}));
    EXPECT_NEAR(expectation(s, SiteOperator::on(anc(Party::A, 0), gates::pauli_z())).real(), -1.0, 1e-15);
    EXPECT_NEAR(expectation(s, SiteOperator::on(anc(Party::A, 1), gates::pauli_z())).real(), 1.0, 1e-15);
}

TEST(PushIn, inverts_pull_out_exhaustively) {
    auto roundtrip = compose(push_in(Party::A, out(Party::A)), pull_out(Party::A, out(Party::A)));
    std::vector<SiteId> sites{anc(Party::A, 0), anc(Party::A, 1, 3), anc(Party::B, 0)};
    auto basis = basis_battery(sites);
    ASSERT_EQ(basis.size(), 12u);
    for (const auto &e : basis) {
        EXPECT_EQ(distance(roundtrip.apply(e), e), 0.0);
    }
    EXPECT_TRUE(roundtrip.materialize().empty());
    EXPECT_TRUE(roundtrip.retire().empty());
}

TEST(Swap, self_inverse_and_dimension_check) {
    SiteId r1 = anc(Party::A, 0), r2 = anc(Party::A, 1);
    auto s = swap(r1, r2);
    auto ss = compose(s, s);
    for (const auto &e : basis_battery({r1, r2, anc(Party::A, 2)})) {
        EXPECT_EQ(distance(ss.apply(e), e), 0.0);
    }
    expect_error(ErrorKind::DimensionMismatch, [] { (void)swap(anc(Party::A, 0), anc(Party::A, 1, 3)); });
    expect_error(ErrorKind::PartyViolation, [] { (void)swap(anc(Party::A, 0), anc(Party::B, 0)); });
}

TEST(Swap, exchanges_halves_within_party) {
    SiteId r1 = anc(Party::A, 0), r2 = anc(Party::A, 1);
    auto x = LazyProductState::from_amplitudes({r1, r2}, {{{0, 1}, Complex(0.6)}, {{1, 0}, Complex(0.8)}});
    auto y = swap(r1, r2).apply(x);
    auto expect = LazyProductState::from_amplitudes({r1, r2}, {{{1, 0}, Complex(0.6)}, {{0, 1}, Complex(0.8)}});
    EXPECT_LE(distance(y, expect), 1e-15);
}

TEST(Swap, cross_cut_keeps_local_expectations) {
    std::mt19937_64 rng(8);
    SiteId ra = out(Party::A, 0), rb = out(Party::B, 0);
    std::vector<SiteId> sites{ra, rb, anc(Party::A, 0), anc(Party::B, 0)};
    auto x = random_state(sites, rng, 16);
    auto s = swap(ra, rb, true);
    auto y = s.apply(x);
    for (int trial = 0; trial < 5; ++trial) {
        SiteOperator op({anc(Party::A, 0)}, embezzle::testing::random_matrix(2, rng));
        EXPECT_NEAR(std::abs(expectation(x, op) - expectation(y, op)), 0.0, 1e-12);
    }
    EXPECT_EQ(verify_isometry(s, probe_battery(sites, 20, 1, 8)), 0.0);
}

TEST(Compose, identity_is_neutral) {
    auto w = pull_out(Party::B, out(Party::B));
    auto probes = probe_battery(probe_sites(), 10, 3, 8);
    for (const auto &p : probes) {
        EXPECT_EQ(distance(compose(StructuredIsometry(), w).apply(p), w.apply(p)), 0.0);
        EXPECT_EQ(distance(compose(w, StructuredIsometry()).apply(p), w.apply(p)), 0.0);
    }
}

TEST(Compose, chain_matches_sequential_application) {
    std::mt19937_64 rng(4);
    SiteId o = out(Party::A);
    auto wa = pull_out(Party::A, o);
    auto ua = StructuredIsometry::local_core(
        SiteOperator({o, catalyst_site(Party::A, 1, 2)}, embezzle::testing::random_unitary(4, rng)), "U");
    auto sa = factor_reorder("reorder_A");
    auto chain = compose({sa, ua, wa});
    std::vector<SiteId> sites{anc(Party::A, 0), anc(Party::A, 1), catalyst_site(Party::A, 1, 2)};
    for (const auto &x : probe_battery(sites, 10, 9, 8)) {
        auto step = sa.apply(ua.apply(wa.apply(x)));
        EXPECT_LE(distance(chain.apply(x), step), 1e-12);
    }
    // Dense oracle for the core: compare against U acting on the explicit vector.
    auto x = LazyProductState::basis(sites, {1, 0, 1});
    std::vector<SiteId> dsites{o, anc(Party::A, 0), catalyst_site(Party::A, 1, 2)};
    auto moved = wa.apply(x);
    EXPECT_LE(distance(moved, LazyProductState::basis(dsites, {1, 0, 1})), 0.0);
}

TEST(Compose, associative) {
    std::mt19937_64 rng(6);
    auto a = pull_out(Party::A, out(Party::A));
    auto b = StructuredIsometry::local_core(SiteOperator({out(Party::A)}, embezzle::testing::random_unitary(2, rng)),
                                            "U");
    auto c = swap(out(Party::A), anc(Party::A, 0));
    for (const auto &x : probe_battery(probe_sites(), 10, 2, 8)) {
        EXPECT_LE(distance(compose(compose(c, b), a).apply(x), compose(c, compose(b, a)).apply(x)), 1e-14);
    }
}

TEST(Relabeling, commutes_with_tensor_on_disjoint_support) {
    std::mt19937_64 rng(12);
    auto w = pull_out(Party::A, out(Party::A));
    for (int trial = 0; trial < 10; ++trial) {
        auto x = random_state({anc(Party::A, 0), anc(Party::A, 1)}, rng);
        auto y = random_state({catalyst_site(Party::B, 1, 3)}, rng);
        EXPECT_LE(distance(w.apply(tensor_states(x, y)), tensor_states(w.apply(x), y)), 1e-12);
    }
}

TEST(VerifyIsometry, named_examples) {
    auto probes = probe_battery(probe_sites(), 20, 2024, 8);
    auto w = pull_out(Party::A, out(Party::A));
    EXPECT_TRUE(w.is_relabel_only());
    EXPECT_EQ(verify_isometry(w, probes), 0.0);
    EXPECT_EQ(verify_isometry(push_in(Party::A, anc(Party::A, 0)), probes), 0.0);

    Matrix broken = Matrix::Zero(2, 2);
    broken(0, 0) = 1.0;
    broken(1, 0) = 1.0;
    auto bad = StructuredIsometry::local_core(SiteOperator::on(anc(Party::A, 0), broken), "broken");
    EXPECT_GT(verify_isometry(bad, probes), 0.1);
}

TEST(VerifyIsometry, factory_battery) {
    std::mt19937_64 rng(31);
    auto probes = probe_battery(probe_sites(), 20, 77, 8);
    std::vector<StructuredIsometry> all{
        pull_out(Party::A, out(Party::A)),
        pull_out(Party::B, out(Party::B)),
        push_in(Party::A, anc(Party::A, 1)),
        push_in(Party::B, catalyst_site(Party::B, 1, 2), 3),
        swap(anc(Party::A, 0), anc(Party::A, 1)),
        swap(catalyst_site(Party::A, 1, 2), catalyst_site(Party::B, 1, 2), true),
        factor_reorder("reorder"),
        StructuredIsometry::local_core(
            SiteOperator({anc(Party::A, 0), anc(Party::A, 2, 3)}, embezzle::testing::random_unitary(6, rng)), "U"),
    };
    for (const auto &v : all) {
        EXPECT_LE(verify_isometry(v, probes), 1e-12) << v.name();
    }
}

TEST(Conjugate, heisenberg_matches_schrodinger) {
    std::mt19937_64 rng(44);
    SiteId o = out(Party::A);
    auto core = StructuredIsometry::local_core(
        SiteOperator({o, catalyst_site(Party::A, 1, 2)}, embezzle::testing::random_unitary(4, rng)), "U");
    auto v = compose(core, pull_out(Party::A, o));
    std::vector<SiteId> sites{anc(Party::A, 0), anc(Party::A, 1), catalyst_site(Party::A, 1, 2),
                              catalyst_site(Party::B, 1, 2)};
    auto probes = probe_battery(sites, 10, 5, 16);
    for (int trial = 0; trial < 5; ++trial) {
        SiteOperator op({o, anc(Party::A, 0), catalyst_site(Party::B, 1, 2)},
                        embezzle::testing::random_matrix(8, rng));
        auto pulled = v.conjugate(op);
        for (const auto &x : probes) {
            EXPECT_NEAR(std::abs(expectation(v.apply(x), op) - expectation(x, pulled)), 0.0, 1e-12);
        }
    }
}

TEST(Conjugate, reduce_on_reference_matches_dense_block) {
    std::mt19937_64 rng(2);
    Matrix m = embezzle::testing::random_matrix(6, rng);
    SiteOperator op({anc(Party::A, 0), anc(Party::A, 1, 3)}, m);
    auto r = reduce_on_reference(op, anc(Party::A, 0));
    EXPECT_LT((r.matrix() - m.topLeftCorner(3, 3)).cwiseAbs().maxCoeff(), 1e-15);
    auto r2 = reduce_on_reference(op, anc(Party::A, 1, 3));
    Matrix expect(2, 2);
    expect << m(0, 0), m(0, 3), m(3, 0), m(3, 3);
    EXPECT_LT((r2.matrix() - expect).cwiseAbs().maxCoeff(), 1e-15);
}
