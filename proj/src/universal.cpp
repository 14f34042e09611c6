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

#include "embezzle/universal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "embezzle/errors.hpp"

namespace embezzle {

namespace {

std::int64_t gcd_all(const std::vector<std::int64_t> &xs, std::int64_t c) {
    std::int64_t g = c;
    for (auto x : xs) g = std::gcd(g, x);
    return g;
}

// a/c < b/d for the first differing entry, exact.
bool lex_less(const RationalVector &x, const RationalVector &y) {
    if (x.numerators.size() != y.numerators.size()) return x.numerators.size() < y.numerators.size();
    for (std::size_t i = 0; i < x.numerators.size(); ++i) {
        std::int64_t l = x.numerators[i] * y.denominator, r = y.numerators[i] * x.denominator;
        if (l != r) return l < r;
    }
    return false;
}

}  // namespace

bool RationalVector::normalized() const {
    std::int64_t sum = 0;
    for (auto a : numerators) sum += a * a;
    return sum == denominator * denominator;
}

TargetState RationalVector::target() const {
    if (!normalized()) {
        throw Error(ErrorKind::InvalidTarget, "rational vector " + to_string() + " is not normalized");
    }
    std::vector<double> xs;
    for (auto a : numerators) xs.push_back(static_cast<double>(a) / static_cast<double>(denominator));
    return TargetState(std::move(xs));
}

std::string RationalVector::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < numerators.size(); ++i) {
        s += (i ? "," : "") + std::to_string(numerators[i]) + "/" + std::to_string(denominator);
    }
    return s;
}

std::vector<TargetState> RationalSchmidtFamily::targets() const {
    std::vector<TargetState> out;
    for (const auto &m : members) out.push_back(m.target());
    return out;
}

RationalSchmidtFamily enumerate_rational_family(std::uint32_t max_dim, std::int64_t max_denominator) {
    if (max_dim < 2 || max_denominator < 2) {
        throw Error(ErrorKind::ConfigError, "family bounds need max_dim >= 2 and max_denominator >= 2");
    }
    RationalSchmidtFamily fam;
    fam.max_dim = max_dim;
    fam.max_denominator = max_denominator;
    for (std::uint32_t d = 2; d <= max_dim; ++d) {
        for (std::int64_t c = 1; c <= max_denominator; ++c) {
            std::vector<std::int64_t> a;
            // Non-increasing numerators with sum of squares c^2.
            std::function<void(std::int64_t, std::int64_t)> rec = [&](std::int64_t remaining, std::int64_t cap) {
                const auto left = static_cast<std::int64_t>(d - a.size());
                if (left == 0) {
                    if (remaining == 0 && gcd_all(a, c) == 1) fam.members.push_back({a, c});
                    return;
                }
                for (std::int64_t x = std::min(cap, c - 1); x >= 1; --x) {
                    if (x * x + (left - 1) > remaining) continue;
                    if (x * x * left < remaining) break;
                    a.push_back(x);
                    rec(remaining - x * x, x);
                    a.pop_back();
                }
            };
            rec(c * c, c);
        }
    }
    std::stable_sort(fam.members.begin(), fam.members.end(), lex_less);
    return fam;
}

SiteId CompositeCatalyst::site(Party p, std::uint32_t member, std::uint32_t copy) const {
    const std::uint32_t dim = members.at(member).local_dim();
    return interleaved ? catalyst_site(p, member + 1, dim, copy - 1) : catalyst_site(p, copy, dim, member);
}

CompositeCatalyst build_composite_catalyst(const RationalSchmidtFamily &family, std::uint32_t copies,
                                           std::size_t budget) {
    return build_composite_catalyst(family.targets(), copies, budget);
}

CompositeCatalyst build_composite_catalyst(const std::vector<TargetState> &members, std::uint32_t copies,
                                           std::size_t budget) {
    if (members.empty() || copies == 0) {
        throw Error(ErrorKind::ConfigError, "composite catalyst needs at least one member and one copy");
    }
    double count = 1.0;
    for (const auto &g : members) count *= std::pow(static_cast<double>(g.coefficients().size()), copies);
    if (count > static_cast<double>(budget)) {
        throw Error(ErrorKind::SizeBudgetExceeded, "composite catalyst needs " + std::to_string(count) +
                                                       " amplitudes, budget is " + std::to_string(budget));
    }
    CompositeCatalyst c;
    c.members = members;
    c.copies = copies;
    for (std::uint32_t i = 0; i < members.size(); ++i) {
        for (std::uint32_t n = 1; n <= copies; ++n) {
            c.state = tensor_states(c.state, members[i].on(c.site(Party::A, i, n), c.site(Party::B, i, n)));
        }
    }
    return c;
}

SiteMap interleave_map(const CompositeCatalyst &c, Party p) {
    SiteMap m;
    for (std::uint32_t i = 0; i < c.members.size(); ++i) {
        for (std::uint32_t n = 1; n <= c.copies; ++n) {
            SiteId from = c.site(p, i, n);
            SiteId to = from.index >= 1 ? catalyst_site(p, from.group + 1, from.dim, from.index - 1) : from;
            if (!(from == to)) m.map(from, to);
        }
    }
    return m;
}

SiteMap interleave_map(const CompositeCatalyst &c) {
    SiteMap m;
    for (Party p : {Party::A, Party::B}) {
        const SiteMap part = interleave_map(c, p);
        for (const auto &[from, to] : part.table()) m.map(from, to);
    }
    return m;
}

CompositeCatalyst interleave_reindex(const CompositeCatalyst &c) {
    CompositeCatalyst out = c;
    out.state = permute_sites(c.state, interleave_map(c));
    out.interleaved = !c.interleaved;
    return out;
}

ObservableFamily member_family(const CompositeCatalyst &c, std::uint32_t member, std::uint32_t level) {
    const TargetState &g = c.members.at(member);
    auto fam = lift_observables(AlgebraMorphism::hotel(Party::A, g.local_dim(), member),
                                AlgebraMorphism::hotel(Party::B, g.local_dim(), member), g, level);
    if (c.interleaved) {
        CompositeCatalyst plain = c;
        plain.interleaved = false;
        SiteMap m = interleave_map(plain);
        for (auto &op : fam.alice_ops) op = permute_sites(op, m);
        for (auto &op : fam.bob_ops) op = permute_sites(op, m);
    }
    return fam;
}

SimultaneousReport check_simultaneous_containment(const CompositeCatalyst &c, std::uint32_t depth,
                                                  double tolerance) {
    if (depth == 0 || depth > c.copies) {
        throw Error(ErrorKind::ConfigError, "depth must lie in 1..copies");
    }
    SimultaneousReport r;
    r.tolerance = tolerance;
    std::vector<std::vector<ObservableFamily>> fams(c.members.size());
    for (std::uint32_t i = 0; i < c.members.size(); ++i) {
        for (std::uint32_t n = 1; n <= depth; ++n) fams[i].push_back(member_family(c, i, n));
        auto rep = certify_families(c.state, fams[i], c.members[i], tolerance);
        rep.morphism = to_string(MorphismKind::shift_place);
        rep.surjectivity = "structural";
        r.members.push_back(std::move(rep));
    }
    for (std::size_t i = 0; i < fams.size(); ++i) {
        for (std::size_t j = i + 1; j < fams.size(); ++j) {
            for (const auto &fi : fams[i]) {
                for (const auto &fj : fams[j]) {
                    r.cross_commutator = std::max(r.cross_commutator, check_mutual_commutativity({fi, fj}));
                    r.cross_product_dev = std::max(
                        r.cross_product_dev, check_product_structure(c.state, fi, c.members[i], fj, c.members[j]));
                }
            }
        }
    }
    r.pass = r.cross_commutator <= tolerance && r.cross_product_dev <= tolerance;
    for (const auto &m : r.members) r.pass = r.pass && m.pass && m.max_product_dev <= tolerance;
    return r;
}

double embedding_consistency(const CompositeCatalyst &c, std::uint32_t depth) {
    double worst = 0.0;
    for (std::uint32_t i = 0; i < c.members.size(); ++i) {
        const std::uint32_t dim = c.members[i].local_dim();
        for (std::uint32_t n = 1; n <= depth; ++n) {
            auto seq = member_family(c, i, n);
            ObservableFamily direct;
            for (Party p : {Party::A, Party::B}) {
                SiteId reg = output_site(p, 0, dim, i);
                SiteMap m;
                m.map(reg, c.site(p, i, n)).map(c.site(p, i, n), reg);
                auto morphism = AlgebraMorphism::placement(p, m, {reg}, "direct");
                for (const auto &gen : local_generators(reg)) {
                    (p == Party::A ? direct.alice_ops : direct.bob_ops).push_back(morphism(gen));
                }
            }
            std::vector<SiteId> sites{c.site(Party::A, i, n), c.site(Party::B, i, n)};
            auto rho = ReducedState::of(c.state, sites);
            for (std::size_t a = 0; a < seq.alice_ops.size(); ++a) {
                auto l1 = rho.contract(seq.alice_ops[a]);
                auto l2 = rho.contract(direct.alice_ops[a]);
                for (std::size_t b = 0; b < seq.bob_ops.size(); ++b) {
                    worst = std::max(worst, std::abs(l1.expectation(seq.bob_ops[b]) -
                                                     l2.expectation(direct.bob_ops[b])));
                }
            }
        }
    }
    return worst;
}

double interleave_invariance(const CompositeCatalyst &c, std::uint32_t depth) {
    const CompositeCatalyst moved = interleave_reindex(c);
    double worst = 0.0;
    for (std::uint32_t i = 0; i < c.members.size(); ++i) {
        for (std::uint32_t n = 1; n <= depth; ++n) {
            auto before = member_family(c, i, n);
            auto after = member_family(moved, i, n);
            auto rho1 = ReducedState::of(c.state, {c.site(Party::A, i, n), c.site(Party::B, i, n)});
            auto rho2 = ReducedState::of(moved.state, {moved.site(Party::A, i, n), moved.site(Party::B, i, n)});
            for (std::size_t a = 0; a < before.alice_ops.size(); ++a) {
                auto l1 = rho1.contract(before.alice_ops[a]);
                auto l2 = rho2.contract(after.alice_ops[a]);
                for (std::size_t b = 0; b < before.bob_ops.size(); ++b) {
                    worst = std::max(worst, std::abs(l1.expectation(before.bob_ops[b]) -
                                                     l2.expectation(after.bob_ops[b])));
                }
            }
        }
    }
    return worst;
}

std::string deviation_csv(const SimultaneousReport &r) {
    std::ostringstream os;
    os.precision(17);
    os << "member,target,level,expectation_dev\n";
    for (std::size_t i = 0; i < r.members.size(); ++i) {
        const auto &m = r.members[i];
        for (std::size_t k = 0; k < m.levels.size(); ++k) {
            os << i << ",\"" << m.target << "\"," << m.levels[k] << "," << m.expectation_dev[k] << "\n";
        }
    }
    return os.str();
}

}  // namespace embezzle
