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

#include "embezzle/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "embezzle/errors.hpp"

namespace embezzle {

namespace {

std::vector<SiteId> union_of(const std::vector<SiteOperator> &ops, std::vector<SiteId> acc = {}) {
    for (const auto &op : ops) acc = union_support(acc, op.support());
    return acc;
}

Matrix random_matrix(std::uint64_t dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> normal;
    Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = Complex(normal(rng), normal(rng));
    }
    return m;
}

void require_party(const SiteOperator &op, Party p, const std::string &name) {
    if (!op.acts_only_on(p)) {
        throw Error(ErrorKind::MorphismTypeError, name + " cannot ingest an operator on the other party's registers");
    }
}

// <ref| A_i B_j |ref> for all pairs, as a dense table.
std::vector<std::vector<Complex>> pair_values(const ReducedState &rho, const std::vector<SiteOperator> &a,
                                              const std::vector<SiteOperator> &b) {
    std::vector<std::vector<Complex>> out(a.size(), std::vector<Complex>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        ReducedState left = rho.contract(a[i]);
        for (std::size_t j = 0; j < b.size(); ++j) out[i][j] = left.expectation(b[j]);
    }
    return out;
}

std::vector<std::vector<Complex>> target_values(const TargetState &g) {
    SiteId ra = output_site(Party::A, 0, g.local_dim()), rb = output_site(Party::B, 0, g.local_dim());
    auto rho = ReducedState::of(g.on(ra, rb), {ra, rb});
    return pair_values(rho, local_generators(ra), local_generators(rb));
}

double max_deviation(const std::vector<std::vector<Complex>> &x, const std::vector<std::vector<Complex>> &y) {
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < x[i].size(); ++j) worst = std::max(worst, std::abs(x[i][j] - y[i][j]));
    }
    return worst;
}

}  // namespace

std::string to_string(MorphismKind k) {
    switch (k) {
        case MorphismKind::shift_place: return "shift_place";
        case MorphismKind::conjugation: return "conjugation";
        case MorphismKind::composite: return "composite";
    }
    return "?";
}

AlgebraMorphism AlgebraMorphism::hotel(Party party, std::uint32_t dim, std::uint32_t group) {
    SiteId reg = output_site(party, 0, dim, group);
    SiteMap m;
    m.map(reg, catalyst_site(party, 1, dim, group));
    m.shift({party, Role::catalyst_copy, group, 1, +1});
    return placement(party, std::move(m), {reg}, "hotel_" + to_string(party));
}

AlgebraMorphism AlgebraMorphism::placement(Party party, SiteMap map, std::vector<SiteId> registers, std::string name) {
    if (registers.empty()) {
        throw Error(ErrorKind::MorphismTypeError, "placement needs at least one target register");
    }
    for (const auto &r : registers) {
        if (r.party != party || !map.in_domain(r)) {
            throw Error(ErrorKind::MorphismTypeError, "placement does not route " + to_string(r));
        }
    }
    if (!map.acts_only_on(party)) {
        throw Error(ErrorKind::MorphismTypeError, "placement map leaves party " + to_string(party));
    }
    AlgebraMorphism morphism;
    morphism.kind_ = MorphismKind::shift_place;
    morphism.party_ = party;
    morphism.name_ = std::move(name);
    morphism.registers_ = std::move(registers);
    morphism.map_ = std::move(map);
    return morphism;
}

AlgebraMorphism AlgebraMorphism::copy_embedding(Party party, std::uint32_t dim, std::uint32_t copy,
                                                std::uint32_t group) {
    SiteId reg = output_site(party, 0, dim, group);
    SiteId cat = catalyst_site(party, copy, dim, group);
    SiteMap m;
    m.map(reg, cat).map(cat, reg);
    return placement(party, std::move(m), {reg}, "copy" + std::to_string(copy) + "_" + to_string(party));
}

AlgebraMorphism AlgebraMorphism::conjugation(Party party, StructuredIsometry v, SiteId output) {
    if (!v.acts_only_on(party) || output.party != party) {
        throw Error(ErrorKind::MorphismTypeError, v.name() + " is not local to party " + to_string(party));
    }
    AlgebraMorphism morphism;
    morphism.kind_ = MorphismKind::conjugation;
    morphism.party_ = party;
    morphism.name_ = "Ad(" + v.name() + ")";
    morphism.registers_ = {output};
    morphism.isometry_ = std::move(v);
    return morphism;
}

AlgebraMorphism AlgebraMorphism::composite(std::vector<AlgebraMorphism> parts) {
    if (parts.empty()) {
        throw Error(ErrorKind::MorphismTypeError, "composite morphism needs at least one part");
    }
    AlgebraMorphism morphism;
    morphism.kind_ = MorphismKind::composite;
    morphism.party_ = parts.front().party();
    morphism.registers_ = parts.front().registers();
    for (const auto &p : parts) {
        if (p.party() != morphism.party_) {
            throw Error(ErrorKind::MorphismTypeError, "composite parts act on different parties");
        }
        morphism.name_ += (morphism.name_.empty() ? "" : "*") + p.name();
    }
    morphism.parts_ = std::move(parts);
    return morphism;
}

bool AlgebraMorphism::structural() const {
    switch (kind_) {
        case MorphismKind::shift_place: return true;
        case MorphismKind::conjugation: return isometry_.is_relabel_only();
        case MorphismKind::composite:
            return std::all_of(parts_.begin(), parts_.end(), [](const auto &p) { return p.structural(); });
    }
    return false;
}

SiteOperator AlgebraMorphism::operator()(const SiteOperator &op) const {
    require_party(op, party_, name_);
    switch (kind_) {
        case MorphismKind::shift_place: {
            for (const auto &s : op.support()) {
                if (s.role != Role::output) continue;
                auto it = std::find(registers_.begin(), registers_.end(), s);
                if (it == registers_.end() || it->dim != s.dim) {
                    throw Error(ErrorKind::MorphismTypeError, name_ + " does not route " + to_string(s));
                }
            }
            return permute_sites(op, map_);
        }
        case MorphismKind::conjugation: return isometry_.conjugate(op);
        case MorphismKind::composite: {
            SiteOperator out = op;
            for (const auto &p : parts_) out = p(out);
            return out;
        }
    }
    return op;
}

MorphismCheck verify_morphism(const AlgebraMorphism &morphism, std::uint64_t seed, std::size_t trials) {
    const SiteId reg = morphism.target_register();
    std::vector<SiteId> sites{catalyst_site(morphism.party(), 1, reg.dim, reg.group), reg};
    const auto dim = product_of_dims(union_support({}, sites));
    std::mt19937_64 rng(seed);
    MorphismCheck c;
    c.min_norm_ratio = std::numeric_limits<double>::infinity();
    Matrix id = Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    auto unit = morphism(SiteOperator(sites, id));
    c.unit_dev = max_entry_difference(unit, SiteOperator(unit.support(), Matrix::Identity(unit.matrix().rows(),
                                                                                           unit.matrix().cols())));
    for (std::size_t t = 0; t < trials; ++t) {
        SiteOperator x(sites, random_matrix(dim, rng));
        SiteOperator y(sites, random_matrix(dim, rng));
        auto px = morphism(x), py = morphism(y);
        c.product_dev = std::max(c.product_dev, max_entry_difference(morphism(x * y), px * py));
        c.adjoint_dev = std::max(c.adjoint_dev, max_entry_difference(morphism(x.adjoint()), px.adjoint()));
        c.min_norm_ratio = std::min(c.min_norm_ratio, px.operator_norm() / x.operator_norm());
    }
    return c;
}

std::vector<Matrix> generator_basis(std::uint32_t n) {
    std::vector<Matrix> out;
    const auto d = static_cast<Eigen::Index>(n);
    out.push_back(Matrix::Identity(d, d));
    for (Eigen::Index l = 1; l < d; ++l) {
        Matrix m = Matrix::Zero(d, d);
        for (Eigen::Index k = 0; k < l; ++k) m(k, k) = 1.0 / static_cast<double>(l);
        m(l, l) = -1.0;
        out.push_back(m);
    }
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = j + 1; k < d; ++k) {
            Matrix x = Matrix::Zero(d, d), y = Matrix::Zero(d, d);
            x(j, k) = x(k, j) = 1.0;
            y(j, k) = Complex(0.0, -1.0);
            y(k, j) = Complex(0.0, 1.0);
            out.push_back(x);
            out.push_back(y);
        }
    }
    return out;
}

std::vector<SiteOperator> local_generators(const SiteId &site) {
    std::vector<SiteOperator> out;
    for (auto &m : generator_basis(site.dim)) out.push_back(SiteOperator::on(site, std::move(m)));
    return out;
}

std::vector<SiteOperator> product_generators(const std::vector<SiteId> &sites) {
    std::vector<SiteOperator> acc;
    if (sites.empty()) return acc;
    acc = local_generators(sites.front());
    for (std::size_t i = 1; i < sites.size(); ++i) {
        std::vector<SiteOperator> next;
        for (const auto &a : acc) {
            for (const auto &b : local_generators(sites[i])) next.push_back(tensor(a, b));
        }
        acc = std::move(next);
    }
    return acc;
}

ObservableFamily lift_observables(const AlgebraMorphism &alice_map, const AlgebraMorphism &bob_map, const TargetState &g,
                                  std::uint32_t n) {
    if (alice_map.party() != Party::A || bob_map.party() != Party::B) {
        throw Error(ErrorKind::MorphismTypeError, "morphisms must be given as (party A, party B)");
    }
    if (n == 0) {
        throw Error(ErrorKind::ConfigError, "lift level must be at least 1");
    }
    if (alice_map.target_register().dim != g.local_dim() || bob_map.target_register().dim != g.local_dim()) {
        throw Error(ErrorKind::MorphismTypeError, "target register dimension differs from the target state");
    }
    ObservableFamily fam;
    fam.level = n;
    auto lift = [&](const AlgebraMorphism &morphism, std::vector<SiteOperator> &out) {
        for (const auto &gen : local_generators(morphism.target_register())) {
            SiteOperator m = morphism(gen);
            for (std::uint32_t k = 2; k <= n; ++k) m = morphism(m);
            out.push_back(std::move(m));
        }
    };
    lift(alice_map, fam.alice_ops);
    lift(bob_map, fam.bob_ops);
    for (const auto &op : fam.alice_ops) {
        if (!op.acts_only_on(Party::A)) throw Error(ErrorKind::LocalityViolation, "lifted Alice operator leaves A");
    }
    for (const auto &op : fam.bob_ops) {
        if (!op.acts_only_on(Party::B)) throw Error(ErrorKind::LocalityViolation, "lifted Bob operator leaves B");
    }
    return fam;
}

double check_mutual_commutativity(const std::vector<ObservableFamily> &families) {
    double worst = 0.0;
    for (std::size_t x = 0; x < families.size(); ++x) {
        for (std::size_t y = x + 1; y < families.size(); ++y) {
            std::vector<const SiteOperator *> left, right;
            for (const auto &op : families[x].alice_ops) left.push_back(&op);
            for (const auto &op : families[x].bob_ops) left.push_back(&op);
            for (const auto &op : families[y].alice_ops) right.push_back(&op);
            for (const auto &op : families[y].bob_ops) right.push_back(&op);
            for (const auto *o : left) {
                for (const auto *p : right) worst = std::max(worst, commutator_norm(*o, *p));
            }
        }
    }
    return worst;
}

double check_certification(const LazyProductState &f, const ObservableFamily &family, const TargetState &g) {
    auto sites = union_of(family.bob_ops, union_of(family.alice_ops));
    auto rho = ReducedState::of(f, sites);
    return max_deviation(pair_values(rho, family.alice_ops, family.bob_ops), target_values(g));
}

double check_product_structure(const LazyProductState &f, const ObservableFamily &fam1, const ObservableFamily &fam2,
                               const TargetState &g) {
    return check_product_structure(f, fam1, g, fam2, g);
}

double check_product_structure(const LazyProductState &f, const ObservableFamily &fam1, const TargetState &g1,
                               const ObservableFamily &fam2, const TargetState &g2) {
    auto s1 = union_of(fam1.bob_ops, union_of(fam1.alice_ops));
    auto s2 = union_of(fam2.bob_ops, union_of(fam2.alice_ops));
    auto rho = ReducedState::of(f, union_support(s1, s2));
    auto gv = target_values(g1);
    auto hv = target_values(g2);
    const std::size_t na = fam1.alice_ops.size(), nb = fam1.bob_ops.size();
    double worst = 0.0;
    bool disjoint = std::none_of(s1.begin(), s1.end(),
                                 [&](const SiteId &x) { return std::find(s2.begin(), s2.end(), x) != s2.end(); });
    if (disjoint) {
        for (std::size_t i = 0; i < na; ++i) {
            auto r1 = rho.contract(fam1.alice_ops[i]);
            for (std::size_t j = 0; j < nb; ++j) {
                auto r2 = r1.contract(fam1.bob_ops[j]);
                auto values = pair_values(r2, fam2.alice_ops, fam2.bob_ops);
                for (std::size_t k = 0; k < values.size(); ++k) {
                    for (std::size_t l = 0; l < values[k].size(); ++l) {
                        worst = std::max(worst, std::abs(values[k][l] - gv[i][j] * hv[k][l]));
                    }
                }
            }
        }
        return worst;
    }
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < nb; ++j) {
            SiteOperator o1 = fam1.alice_ops[i] * fam1.bob_ops[j];
            for (std::size_t k = 0; k < fam2.alice_ops.size(); ++k) {
                for (std::size_t l = 0; l < fam2.bob_ops.size(); ++l) {
                    Complex v = rho.expectation(o1 * (fam2.alice_ops[k] * fam2.bob_ops[l]));
                    worst = std::max(worst, std::abs(v - gv[i][j] * hv[k][l]));
                }
            }
        }
    }
    return worst;
}

ContainmentResult contains_reference(const LazyProductState &f, const AlgebraMorphism &alice_map,
                                     const AlgebraMorphism &bob_map, const LazyProductState &reference,
                                     double tolerance) {
    std::vector<SiteId> regs_a, regs_b;
    for (const auto &s : reference.sites()) (s.party == Party::A ? regs_a : regs_b).push_back(s);
    auto gen_a = product_generators(regs_a);
    auto gen_b = product_generators(regs_b);
    auto ref = pair_values(ReducedState::of(reference, reference.sites()), gen_a, gen_b);
    std::vector<SiteOperator> img_a, img_b;
    for (const auto &op : gen_a) img_a.push_back(alice_map(op));
    for (const auto &op : gen_b) img_b.push_back(bob_map(op));
    auto rho = ReducedState::of(f, union_of(img_b, union_of(img_a)));
    ContainmentResult r;
    r.deviation = max_deviation(pair_values(rho, img_a, img_b), ref);
    r.contained = r.deviation <= tolerance;
    return r;
}

ContainmentResult contains_state(const LazyProductState &f, const AlgebraMorphism &alice_map, const AlgebraMorphism &bob_map,
                                 const TargetState &g, double tolerance) {
    return contains_reference(f, alice_map, bob_map, g.on(alice_map.target_register(), bob_map.target_register()), tolerance);
}

CertificationReport certify_families(const LazyProductState &f, const std::vector<ObservableFamily> &families,
                                     const TargetState &g, double tolerance) {
    CertificationReport rep;
    rep.target = g.to_string();
    rep.tolerance = tolerance;
    const std::size_t n = families.size();
    for (const auto &fam : families) {
        rep.levels.push_back(fam.level);
        rep.expectation_dev.push_back(check_certification(f, fam, g));
        rep.max_expectation_dev = std::max(rep.max_expectation_dev, rep.expectation_dev.back());
    }
    rep.commutator.assign(n, std::vector<double>(n, 0.0));
    rep.product_dev.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t k = m + 1; k < n; ++k) {
            rep.commutator[m][k] = check_mutual_commutativity({families[m], families[k]});
            rep.product_dev[m][k] = check_product_structure(f, families[m], families[k], g);
            rep.max_commutator = std::max(rep.max_commutator, rep.commutator[m][k]);
            rep.max_product_dev = std::max(rep.max_product_dev, rep.product_dev[m][k]);
        }
    }
    rep.pass = rep.max_commutator <= tolerance && rep.max_expectation_dev <= tolerance;
    return rep;
}

CertificationReport certify_levels(const LazyProductState &f, const AlgebraMorphism &alice_map,
                                   const AlgebraMorphism &bob_map, const TargetState &g, std::uint32_t max_level,
                                   double tolerance) {
    std::vector<ObservableFamily> fams;
    for (std::uint32_t n = 1; n <= max_level; ++n) fams.push_back(lift_observables(alice_map, bob_map, g, n));
    CertificationReport rep = certify_families(f, fams, g, tolerance);
    rep.morphism = to_string(alice_map.kind());
    rep.surjectivity = alice_map.structural() && bob_map.structural() ? "structural" : "generator-verified";
    return rep;
}

}  // namespace embezzle
