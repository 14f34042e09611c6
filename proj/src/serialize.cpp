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

#include "embezzle/serialize.hpp"

#include <algorithm>

namespace embezzle {

namespace {

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Complex complex_from(const Json &j) {
    if (!j.is_array() || j.size() != 2) {
        throw Error(ErrorKind::ParseError, "complex value must be [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

void to_json(Json &j, const SiteId &s) {
    j = Json{{"party", s.party}, {"role", s.role}, {"group", s.group}, {"index", s.index}, {"dim", s.dim}};
}

void from_json(const Json &j, SiteId &s) {
    j.at("party").get_to(s.party);
    j.at("role").get_to(s.role);
    j.at("group").get_to(s.group);
    j.at("index").get_to(s.index);
    j.at("dim").get_to(s.dim);
}

void to_json(Json &j, const ShiftRule &r) {
    j = Json{{"party", r.party},
             {"role", r.role},
             {"group", r.group},
             {"threshold", r.threshold},
             {"offset", r.offset}};
}

void from_json(const Json &j, ShiftRule &r) {
    j.at("party").get_to(r.party);
    j.at("role").get_to(r.role);
    j.at("group").get_to(r.group);
    j.at("threshold").get_to(r.threshold);
    j.at("offset").get_to(r.offset);
}

void to_json(Json &j, const SiteMap &m) {
    Json table = Json::array();
    for (const auto &[from, to] : m.table()) table.push_back(Json{{"from", from}, {"to", to}});
    j = Json{{"table", table}, {"rules", m.rules()}};
}

void from_json(const Json &j, SiteMap &m) {
    m = SiteMap();
    for (const auto &e : j.at("table")) m.map(e.at("from").get<SiteId>(), e.at("to").get<SiteId>());
    for (const auto &r : j.at("rules")) m.shift(r.get<ShiftRule>());
}

void to_json(Json &j, const SiteOperator &op) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < op.matrix().rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < op.matrix().cols(); ++c) row.push_back(complex_json(op.matrix()(r, c)));
        rows.push_back(std::move(row));
    }
    j = Json{{"support", op.support()}, {"matrix", rows}};
}

void from_json(const Json &j, SiteOperator &op) {
    auto support = j.at("support").get<std::vector<SiteId>>();
    const auto &rows = j.at("matrix");
    const auto n = static_cast<Eigen::Index>(rows.size());
    Matrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto &row = rows.at(static_cast<std::size_t>(r));
        if (static_cast<Eigen::Index>(row.size()) != n) throw Error(ErrorKind::ParseError, "operator matrix not square");
        for (Eigen::Index c = 0; c < n; ++c) m(r, c) = complex_from(row.at(static_cast<std::size_t>(c)));
    }
    op = SiteOperator(std::move(support), std::move(m));
}

void to_json(Json &j, const CopyTail &t) {
    Json pair = Json::array();
    for (const auto &[a, b, v] : t.pair) pair.push_back(Json::array({a, b, complex_json(v)}));
    j = Json{{"group", t.group}, {"dim", t.dim}, {"pair", pair}, {"frontier_a", t.frontier_a}, {"frontier_b", t.frontier_b}};
}

void from_json(const Json &j, CopyTail &t) {
    j.at("group").get_to(t.group);
    j.at("dim").get_to(t.dim);
    j.at("frontier_a").get_to(t.frontier_a);
    j.at("frontier_b").get_to(t.frontier_b);
    t.pair.clear();
    for (const auto &e : j.at("pair")) {
        t.pair.emplace_back(e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>(), complex_from(e.at(2)));
    }
}

void to_json(Json &j, const LazyProductState &s) {
    Json amps = Json::array();
    for (const auto &[labels, v] : s.amplitudes()) amps.push_back(Json::array({labels, complex_json(v)}));
    j = Json{{"sites", s.sites()}, {"amplitudes", amps}, {"copy_tails", s.copy_tails()}};
}

void from_json(const Json &j, LazyProductState &s) {
    AmplitudeMap amps;
    for (const auto &e : j.at("amplitudes")) amps[e.at(0).get<Labels>()] = complex_from(e.at(1));
    s = LazyProductState::from_amplitudes(j.at("sites").get<std::vector<SiteId>>(), amps, false);
    for (const auto &t : j.at("copy_tails")) s = s.with_copy_tail(t.get<CopyTail>());
}

void to_json(Json &j, const StructuredIsometry &v) {
    Json steps = Json::array();
    for (const auto &step : v.steps()) {
        if (const auto *m = std::get_if<SiteMap>(&step)) {
            steps.push_back(Json{{"relabel", *m}});
        } else {
            steps.push_back(Json{{"core", std::get<SiteOperator>(step)}});
        }
    }
    j = Json{{"name", v.name()},
             {"steps", steps},
             {"materialize", v.materialize()},
             {"retire", v.retire()},
             {"requires_fresh", v.requires_fresh()}};
}

void from_json(const Json &j, StructuredIsometry &v) {
    std::vector<StructuredIsometry::Step> steps;
    for (const auto &s : j.at("steps")) {
        if (s.contains("relabel")) {
            steps.emplace_back(s.at("relabel").get<SiteMap>());
        } else {
            steps.emplace_back(s.at("core").get<SiteOperator>());
        }
    }
    v = StructuredIsometry::from_parts(j.at("name").get<std::string>(), std::move(steps),
                                       j.at("materialize").get<std::vector<SiteId>>(),
                                       j.at("retire").get<std::vector<SiteId>>(),
                                       j.at("requires_fresh").get<std::vector<SiteId>>());
}

void to_json(Json &j, const TargetState &g) {
    j = Json{{"coefficients", g.coefficients()}, {"local_dim", g.local_dim()}, {"label", g.to_string()}};
}

TargetState target_from_json(const Json &j) {
    return TargetState(j.at("coefficients").get<std::vector<double>>(), j.at("local_dim").get<std::uint32_t>());
}

void to_json(Json &j, const ProtocolBundle &b) {
    j = Json{{"form", b.form},           {"alice", b.alice},       {"bob", b.bob},
             {"catalyst", b.catalyst},   {"target", b.target},     {"output_a", b.output_a},
             {"output_b", b.output_b},   {"pools_used", b.pools_used}};
}

void from_json(const Json &j, ProtocolBundle &b) {
    j.at("form").get_to(b.form);
    j.at("alice").get_to(b.alice);
    j.at("bob").get_to(b.bob);
    j.at("catalyst").get_to(b.catalyst);
    b.target = target_from_json(j.at("target"));
    j.at("output_a").get_to(b.output_a);
    j.at("output_b").get_to(b.output_b);
    j.at("pools_used").get_to(b.pools_used);
}

void to_json(Json &j, const RelationReport &r) {
    j = Json{{"embezzle_dev", r.embezzle_dev}, {"commute_dev", r.commute_dev}, {"probes", r.probes}};
}

void to_json(Json &j, const RationalVector &v) {
    j = Json{{"numerators", v.numerators}, {"denominator", v.denominator}, {"label", v.to_string()}};
}

void from_json(const Json &j, RationalVector &v) {
    j.at("numerators").get_to(v.numerators);
    j.at("denominator").get_to(v.denominator);
}

void to_json(Json &j, const RationalSchmidtFamily &f) {
    j = Json{{"members", f.members}, {"max_dim", f.max_dim}, {"max_denominator", f.max_denominator}};
}

void from_json(const Json &j, RationalSchmidtFamily &f) {
    j.at("members").get_to(f.members);
    j.at("max_dim").get_to(f.max_dim);
    j.at("max_denominator").get_to(f.max_denominator);
}

void to_json(Json &j, const CertificationReport &r) {
    j = Json{{"target", r.target},
             {"morphism", r.morphism},
             {"surjectivity", r.surjectivity},
             {"basis", r.basis},
             {"levels", r.levels},
             {"expectation_dev", r.expectation_dev},
             {"commutator", r.commutator},
             {"product_dev", r.product_dev},
             {"max_commutator", r.max_commutator},
             {"max_expectation_dev", r.max_expectation_dev},
             {"max_product_dev", r.max_product_dev},
             {"tolerance", r.tolerance},
             {"pass", r.pass}};
}

void from_json(const Json &j, CertificationReport &r) {
    j.at("target").get_to(r.target);
    j.at("morphism").get_to(r.morphism);
    j.at("surjectivity").get_to(r.surjectivity);
    j.at("basis").get_to(r.basis);
    j.at("levels").get_to(r.levels);
    j.at("expectation_dev").get_to(r.expectation_dev);
    j.at("commutator").get_to(r.commutator);
    j.at("product_dev").get_to(r.product_dev);
    j.at("max_commutator").get_to(r.max_commutator);
    j.at("max_expectation_dev").get_to(r.max_expectation_dev);
    j.at("max_product_dev").get_to(r.max_product_dev);
    j.at("tolerance").get_to(r.tolerance);
    j.at("pass").get_to(r.pass);
}

void to_json(Json &j, const SimultaneousReport &r) {
    j = Json{{"members", r.members},
             {"cross_commutator", r.cross_commutator},
             {"cross_product_dev", r.cross_product_dev},
             {"tolerance", r.tolerance},
             {"pass", r.pass}};
}

void from_json(const Json &j, SimultaneousReport &r) {
    j.at("members").get_to(r.members);
    j.at("cross_commutator").get_to(r.cross_commutator);
    j.at("cross_product_dev").get_to(r.cross_product_dev);
    j.at("tolerance").get_to(r.tolerance);
    j.at("pass").get_to(r.pass);
}

std::string canonical_dump(const Json &j) { return j.dump(2) + "\n"; }

Json parse_json_text(const std::string &text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        // byte is 1-based and points just past the offending character
        const std::size_t stop = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw Error(ErrorKind::ParseError,
                    "line " + std::to_string(line) + " column " + std::to_string(column) + ": " + e.what());
    }
}

}  // namespace embezzle
