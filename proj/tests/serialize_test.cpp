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

#include <random>

#include "embezzle/probes.hpp"
#include "embezzle/serialize.hpp"
#include "test_util.hpp"

using namespace embezzle;

namespace {

template <typename T>
T round_trip(const T &x) {
    return decode<T>(parse_json_text(canonical_dump(Json(x))));
}

void expect_same_state(const LazyProductState &a, const LazyProductState &b) {
    EXPECT_EQ(a.sites(), b.sites());
    EXPECT_EQ(a.amplitudes(), b.amplitudes());
    ASSERT_EQ(a.copy_tails().size(), b.copy_tails().size());
    for (std::size_t i = 0; i < a.copy_tails().size(); ++i) {
        EXPECT_EQ(a.copy_tails()[i].pair, b.copy_tails()[i].pair);
        EXPECT_EQ(a.copy_tails()[i].frontier_a, b.copy_tails()[i].frontier_a);
        EXPECT_EQ(a.copy_tails()[i].frontier_b, b.copy_tails()[i].frontier_b);
    }
}

}  // namespace

TEST(Serialize, site_fields) {
    Json j = output_site(Party::B, 3, 5, 2);
    EXPECT_EQ(j.dump(), R"({"dim":5,"group":2,"index":3,"party":"B","role":"output"})");
    EXPECT_EQ(j.get<SiteId>(), output_site(Party::B, 3, 5, 2));
}

TEST(Serialize, states_round_trip_exactly) {
    std::vector<LazyProductState> cases = {
        LazyProductState(),
        build_hotel_catalyst(TargetState::parse("3/5,4/5"), 3),
        build_hotel_catalyst(TargetState::parse("2/3,2/3,1/3"), 0),
        build_vdh_catalyst(6),
        build_composite_catalyst({TargetState::bell(), TargetState::parse("3/5,4/5")}, 2).state,
    };
    for (const auto &p : probe_battery({catalyst_site(Party::A, 1, 3), ancilla_site(Party::B, 0, 2)}, 5, 11)) {
        cases.push_back(p);
    }
    for (const auto &s : cases) {
        auto back = round_trip(s);
        expect_same_state(s, back);
        EXPECT_EQ(canonical_dump(Json(s)), canonical_dump(Json(back)));
    }
}

TEST(Serialize, amplitude_keys_follow_site_order) {
    auto s = LazyProductState::from_amplitudes({output_site(Party::B, 0, 2), catalyst_site(Party::A, 1, 2)},
                                               {{{1, 0}, Complex(0.6)}, {{0, 1}, Complex(0.8)}});
    Json j = s;
    EXPECT_EQ(j["sites"][0]["party"], "A");
    EXPECT_EQ(j["amplitudes"][0][0], Json::array({0, 1}));
    EXPECT_EQ(j["amplitudes"][1][0], Json::array({1, 0}));
}

TEST(Serialize, operators_round_trip) {
    std::mt19937_64 rng(5);
    SiteOperator op({catalyst_site(Party::A, 2, 3), output_site(Party::A, 0, 2)},
                    embezzle::testing::random_matrix(6, rng));
    auto back = round_trip(op);
    EXPECT_EQ(back.support(), op.support());
    EXPECT_EQ(back.matrix(), op.matrix());
    EXPECT_EQ(back.kind(), op.kind());
}

TEST(Serialize, isometries_and_bundles_round_trip) {
    std::vector<ProtocolBundle> bundles = {hotel_noinput_bundle(TargetState::bell(), 2),
                                           vdh_standard_bundle(8, TargetState::bell())};
    bundles.push_back(noinput_to_standard(bundles[0]));
    bundles.push_back(standard_to_noinput(bundles[1]));
    for (const auto &b : bundles) {
        auto back = round_trip(b);
        EXPECT_EQ(canonical_dump(Json(b)), canonical_dump(Json(back)));
        EXPECT_EQ(back.form, b.form);
        EXPECT_EQ(back.pools_used, b.pools_used);
        expect_same_state(back.catalyst, b.catalyst);
        auto sites = bundle_probe_sites(b);
        for (const auto &probe : probe_battery(sites, 3, 4)) {
            expect_same_state(back.alice.apply(probe), b.alice.apply(probe));
            expect_same_state(back.bob.apply(probe), b.bob.apply(probe));
        }
        auto r1 = b.form == ProtocolForm::standard ? check_standard_relation(b) : check_noinput_relation(b);
        auto r2 = b.form == ProtocolForm::standard ? check_standard_relation(back) : check_noinput_relation(back);
        EXPECT_EQ(r1.embezzle_dev, r2.embezzle_dev);
        EXPECT_EQ(r1.commute_dev, r2.commute_dev);
    }
}

TEST(Serialize, families_and_reports_round_trip) {
    auto fam = enumerate_rational_family(3, 9);
    auto fam_back = round_trip(fam);
    ASSERT_EQ(fam_back.members.size(), fam.members.size());
    for (std::size_t i = 0; i < fam.members.size(); ++i) {
        EXPECT_EQ(fam_back.members[i].numerators, fam.members[i].numerators);
    }
    auto c = build_composite_catalyst({TargetState::bell(), TargetState::parse("3/5,4/5")}, 2);
    auto rep = check_simultaneous_containment(c, 2);
    EXPECT_EQ(canonical_dump(Json(round_trip(rep))), canonical_dump(Json(rep)));
    auto g = round_trip(TargetState::parse("2/3,2/3,1/3"));
    EXPECT_EQ(g.coefficients(), TargetState::parse("2/3,2/3,1/3").coefficients());
}

TEST(Serialize, parse_errors_carry_position) {
    try {
        (void)parse_json_text("{\n  \"a\": 1,\n  \"b\": ]\n}");
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::ParseError);
        EXPECT_NE(std::string(e.what()).find("line 3 column 8"), std::string::npos) << e.what();
    }
    try {
        (void)decode<SiteId>(Json{{"party", "A"}});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    }
}
