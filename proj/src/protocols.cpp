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

#include "embezzle/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "embezzle/errors.hpp"
#include "embezzle/probes.hpp"

namespace embezzle {

namespace {

constexpr double kCommutationLimit = 1e-9;

double parse_number(const std::string &token) {
    std::size_t used = 0;
    auto slash = token.find('/');
    try {
        if (slash == std::string::npos) {
            double v = std::stod(token, &used);
            if (used != token.size()) throw std::invalid_argument(token);
            return v;
        }
        std::string num = token.substr(0, slash), den = token.substr(slash + 1);
        double n = std::stod(num, &used);
        if (used != num.size()) throw std::invalid_argument(token);
        double d = std::stod(den, &used);
        if (used != den.size() || d == 0.0) throw std::invalid_argument(token);
        return n / d;
    } catch (const std::exception &) {
        throw Error(ErrorKind::ParseError, "cannot read coefficient '" + token + "'");
    }
}

std::string trim(const std::string &s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

void add_unique(std::vector<SiteId> &sites, const SiteId &s) {
    if (std::find(sites.begin(), sites.end(), s) == sites.end()) sites.push_back(s);
}

void collect_sites(const StructuredIsometry &v, std::uint32_t default_dim, std::vector<SiteId> &sites) {
    for (const auto &step : v.steps()) {
        if (const auto *m = std::get_if<SiteMap>(&step)) {
            for (const auto &[from, to] : m->table()) {
                add_unique(sites, from);
                add_unique(sites, to);
            }
            for (const auto &rule : m->rules()) {
                std::uint32_t dim = default_dim;
                for (const auto &[from, to] : m->table()) {
                    if (rule.matches(from.with_index(rule.threshold))) dim = from.dim;
                }
                for (std::uint32_t k = rule.threshold; k < rule.threshold + 2; ++k) {
                    add_unique(sites, SiteId{rule.party, rule.role, rule.group, k, dim});
                }
            }
        } else {
            for (const auto &s : std::get<SiteOperator>(step).support()) add_unique(sites, s);
        }
    }
}

void require_locality(const ProtocolBundle &p) {
    if (!p.alice.acts_only_on(Party::A)) {
        throw Error(ErrorKind::LocalityViolation, p.alice.name() + " touches registers outside party A");
    }
    if (!p.bob.acts_only_on(Party::B)) {
        throw Error(ErrorKind::LocalityViolation, p.bob.name() + " touches registers outside party B");
    }
}

RelationReport check_relation(const ProtocolBundle &p, std::uint64_t seed) {
    RelationReport r;
    LazyProductState expected = tensor_states(p.catalyst, p.target.on(p.output_a, p.output_b));
    r.embezzle_dev = distance(bundle_output(p), expected);
    auto probes = spanning_probes(bundle_probe_sites(p), seed);
    r.probes = probes.size();
    for (const auto &x : probes) {
        // The canonical output swap is the identity on named registers.
        auto ab = p.alice.apply(p.bob.apply(x));
        auto ba = p.bob.apply(p.alice.apply(x));
        r.commute_dev = std::max(r.commute_dev, distance(ab, ba));
    }
    return r;
}

}  // namespace

TargetState::TargetState(std::vector<double> coefficients, std::uint32_t local_dim)
    : coefficients_(std::move(coefficients)),
      local_dim_(local_dim == 0 ? std::max<std::uint32_t>(2, static_cast<std::uint32_t>(coefficients_.size()))
                                : local_dim) {
    if (coefficients_.empty()) {
        throw Error(ErrorKind::InvalidTarget, "target needs at least one coefficient");
    }
    if (coefficients_.size() > local_dim_) {
        throw Error(ErrorKind::InvalidTarget, "more coefficients than the local dimension");
    }
    double sum = 0.0;
    for (double x : coefficients_) {
        if (!(x > 0.0)) {
            throw Error(ErrorKind::InvalidTarget, "coefficients must be strictly positive");
        }
        sum += x * x;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw Error(ErrorKind::InvalidTarget, "squared coefficients sum to " + std::to_string(sum));
    }
}

TargetState TargetState::bell() { return TargetState({std::sqrt(0.5), std::sqrt(0.5)}, 2); }

TargetState TargetState::product(std::uint32_t local_dim) { return TargetState({1.0}, local_dim); }

TargetState TargetState::parse(const std::string &text) {
    std::string t = trim(text);
    if (t == "bell") return bell();
    if (t == "product") return product();
    std::vector<double> xs;
    std::stringstream ss(t);
    std::string token;
    while (std::getline(ss, token, ',')) {
        xs.push_back(parse_number(trim(token)));
    }
    if (xs.empty()) {
        throw Error(ErrorKind::ParseError, "empty target");
    }
    return TargetState(std::move(xs));
}

SchmidtSpectrum TargetState::schmidt() const {
    SchmidtSpectrum s;
    s.coefficients = coefficients_;
    std::sort(s.coefficients.begin(), s.coefficients.end(), std::greater<>());
    return s;
}

std::vector<std::tuple<std::uint32_t, std::uint32_t, Complex>> TargetState::pair() const {
    std::vector<std::tuple<std::uint32_t, std::uint32_t, Complex>> out;
    for (std::uint32_t i = 0; i < coefficients_.size(); ++i) {
        out.emplace_back(i, i, Complex(coefficients_[i]));
    }
    return out;
}

LazyProductState TargetState::on(const SiteId &a, const SiteId &b) const {
    if (a.dim != local_dim_ || b.dim != local_dim_) {
        throw Error(ErrorKind::DimensionMismatch, "target registers must have dimension " + std::to_string(local_dim_));
    }
    AmplitudeMap amps;
    for (const auto &[la, lb, v] : pair()) amps[{la, lb}] = v;
    return LazyProductState::from_amplitudes({a, b}, amps, false);
}

std::string TargetState::to_string() const {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < coefficients_.size(); ++i) {
        os << (i ? "," : "") << coefficients_[i];
    }
    return os.str();
}

LazyProductState build_hotel_catalyst(const TargetState &g, std::uint32_t copies, std::uint32_t group) {
    const std::uint32_t n = g.local_dim();
    LazyProductState s;
    for (std::uint32_t k = 1; k <= copies; ++k) {
        s = tensor_states(s, g.on(catalyst_site(Party::A, k, n, group), catalyst_site(Party::B, k, n, group)));
    }
    CopyTail tail;
    tail.group = group;
    tail.dim = n;
    tail.pair = g.pair();
    tail.frontier_a = tail.frontier_b = copies + 1;
    return s.with_copy_tail(std::move(tail));
}

StructuredIsometry hotel_isometry(Party party, const TargetState &g, const SiteId &output, std::uint32_t group) {
    if (output.party != party) {
        throw Error(ErrorKind::PartyViolation, "hotel output " + to_string(output) + " belongs to the other party");
    }
    if (output.dim != g.local_dim()) {
        throw Error(ErrorKind::DimensionMismatch, "hotel output must have dimension " + std::to_string(g.local_dim()));
    }
    SiteMap m;
    m.map(catalyst_site(party, 1, g.local_dim(), group), output);
    m.shift({party, Role::catalyst_copy, group, 2, -1});
    return StructuredIsometry::relabeling(std::move(m), "hotel_" + to_string(party));
}

HotelStepResult hotel_step(const LazyProductState &f, const TargetState &g, std::uint32_t group) {
    const std::uint32_t n = g.local_dim();
    std::uint32_t explicit_copies = 0;
    while (f.has_site(catalyst_site(Party::A, explicit_copies + 1, n, group)) &&
           f.has_site(catalyst_site(Party::B, explicit_copies + 1, n, group))) {
        ++explicit_copies;
    }
    const CopyTail *tail = f.copy_tail(group);
    if (tail) {
        CopyTail expected;
        expected.dim = n;
        expected.pair = g.pair();
        if (!tail->same_pair_state(expected, 1e-12)) {
            throw Error(ErrorKind::CatalystShapeError, "catalyst tail does not hold copies of the target");
        }
    } else if (explicit_copies == 0) {
        throw Error(ErrorKind::CatalystShapeError, "catalyst has no copy registers in group " + std::to_string(group));
    }
    std::uint32_t j = 0;
    while (f.has_site(output_site(Party::A, j, n, group)) || f.has_site(output_site(Party::B, j, n, group))) ++j;
    SiteId out_a = output_site(Party::A, j, n, group), out_b = output_site(Party::B, j, n, group);
    auto s = hotel_isometry(Party::B, g, out_b, group).apply(hotel_isometry(Party::A, g, out_a, group).apply(f));
    if (s.copy_tail(group)) {
        s = s.materialized_copies(group, explicit_copies + 1, explicit_copies + 1);
    } else if (explicit_copies > 0) {
        std::vector<SiteId> last{catalyst_site(Party::A, explicit_copies, n, group),
                                 catalyst_site(Party::B, explicit_copies, n, group)};
        s = s.materialized(last);
    }
    return {std::move(s), out_a, out_b};
}

LazyProductState residual_catalyst(const HotelStepResult &r, const TargetState &g) {
    const auto pa = r.state.position(r.output_a), pb = r.state.position(r.output_b);
    if (!pa || !pb) {
        throw Error(ErrorKind::CatalystShapeError, "hotel step result lacks its output pair");
    }
    std::map<std::pair<std::uint32_t, std::uint32_t>, Complex> bra;
    for (const auto &[a, b, v] : g.pair()) bra[{a, b}] = std::conj(v);
    std::vector<SiteId> rest;
    for (std::size_t i = 0; i < r.state.sites().size(); ++i) {
        if (i != *pa && i != *pb) rest.push_back(r.state.sites()[i]);
    }
    AmplitudeMap amps;
    for (const auto &[labels, v] : r.state.amplitudes()) {
        auto it = bra.find({labels[*pa], labels[*pb]});
        if (it == bra.end()) continue;
        Labels key;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (i != *pa && i != *pb) key.push_back(labels[i]);
        }
        amps[key] += it->second * v;
    }
    auto out = LazyProductState::from_amplitudes(std::move(rest), amps, false);
    for (const auto &t : r.state.copy_tails()) out = out.with_copy_tail(t);
    return out;
}

std::vector<double> vdh_coefficients(std::uint32_t m) {
    if (m == 0) {
        throw Error(ErrorKind::DimensionError, "van Dam-Hayden catalyst needs m >= 1");
    }
    double harmonic = 0.0;
    for (std::uint32_t j = m; j >= 1; --j) harmonic += 1.0 / j;
    std::vector<double> weights(m);
    for (std::uint32_t j = 1; j <= m; ++j) weights[j - 1] = std::sqrt(1.0 / (j * harmonic));
    return weights;
}

LazyProductState build_vdh_catalyst(std::uint32_t m, std::uint32_t group) {
    auto weights = vdh_coefficients(m);
    AmplitudeMap amps;
    for (std::uint32_t j = 0; j < m; ++j) amps[{j, j}] = Complex(weights[j]);
    return LazyProductState::from_amplitudes({catalyst_site(Party::A, 1, m, group), catalyst_site(Party::B, 1, m, group)},
                                             amps, false);
}

namespace {

struct RankedWeight {
    double value;
    std::uint32_t j;
    std::uint32_t k;
};

std::vector<RankedWeight> ranked_products(const std::vector<double> &weights, const TargetState &g) {
    std::vector<RankedWeight> w;
    w.reserve(weights.size() * g.coefficients().size());
    for (std::uint32_t j = 0; j < weights.size(); ++j) {
        for (std::uint32_t k = 0; k < g.coefficients().size(); ++k) {
            w.push_back({weights[j] * g.coefficients()[k], j, k});
        }
    }
    std::stable_sort(w.begin(), w.end(), [](const RankedWeight &a, const RankedWeight &b) { return a.value > b.value; });
    return w;
}

}  // namespace

double vdh_embezzle_fidelity(std::uint32_t m, const TargetState &g) {
    if (m < g.local_dim()) {
        throw Error(ErrorKind::DimensionError,
                    "m = " + std::to_string(m) + " is below the target dimension " + std::to_string(g.local_dim()));
    }
    auto weights = vdh_coefficients(m);
    auto t = ranked_products(weights, g);
    double overlap = 0.0;
    for (std::uint32_t r = 0; r < m; ++r) overlap += weights[r] * t[r].value;
    return std::min(overlap, 1.0);
}

std::string to_string(ProtocolForm f) { return f == ProtocolForm::standard ? "standard" : "no_input"; }

SiteId default_output(Party p, std::uint32_t dim) { return output_site(p, 0, dim, 0); }

ProtocolBundle hotel_noinput_bundle(const TargetState &g, std::uint32_t copies) {
    ProtocolBundle b;
    b.form = ProtocolForm::no_input;
    b.target = g;
    b.output_a = default_output(Party::A, g.local_dim());
    b.output_b = default_output(Party::B, g.local_dim());
    b.alice = hotel_isometry(Party::A, g, b.output_a);
    b.bob = hotel_isometry(Party::B, g, b.output_b);
    b.catalyst = build_hotel_catalyst(g, copies);
    return b;
}

ProtocolBundle identity_standard_bundle(std::uint32_t local_dim) {
    ProtocolBundle b;
    b.form = ProtocolForm::standard;
    b.target = TargetState::product(local_dim);
    b.output_a = default_output(Party::A, local_dim);
    b.output_b = default_output(Party::B, local_dim);
    b.alice = StructuredIsometry().renamed("identity_A");
    b.bob = StructuredIsometry().renamed("identity_B");
    return b;
}

ProtocolBundle vdh_standard_bundle(std::uint32_t m, const TargetState &g) {
    const std::uint32_t n = g.local_dim();
    if (m < n) {
        throw Error(ErrorKind::DimensionError, "m must be at least the target dimension");
    }
    auto weights = vdh_coefficients(m);
    auto ranked = ranked_products(weights, g);
    const std::uint32_t total = m * n;
    // Joint index on (catalyst, output) is j * n + k.
    std::vector<std::int64_t> perm(total, -1);
    std::vector<bool> used(total, false);
    for (std::uint32_t r = 0; r < m; ++r) {
        std::uint32_t to = ranked[r].j * n + ranked[r].k;
        perm[r * n] = to;
        used[to] = true;
    }
    std::uint32_t next = 0;
    for (std::uint32_t c = 0; c < total; ++c) {
        if (perm[c] >= 0) continue;
        while (used[next]) ++next;
        perm[c] = next;
        used[next] = true;
    }
    Matrix u = Matrix::Zero(total, total);
    for (std::uint32_t c = 0; c < total; ++c) u(perm[c], c) = 1.0;

    ProtocolBundle b;
    b.form = ProtocolForm::standard;
    b.target = g;
    b.output_a = default_output(Party::A, n);
    b.output_b = default_output(Party::B, n);
    b.alice = StructuredIsometry::local_core(SiteOperator({catalyst_site(Party::A, 1, m), b.output_a}, u), "vdh_A");
    b.bob = StructuredIsometry::local_core(SiteOperator({catalyst_site(Party::B, 1, m), b.output_b}, u), "vdh_B");
    b.catalyst = build_vdh_catalyst(m);
    return b;
}

ProtocolBundle standard_to_noinput(const ProtocolBundle &p) {
    if (p.form != ProtocolForm::standard) {
        throw Error(ErrorKind::FormMismatch, "expected a standard-form bundle");
    }
    require_locality(p);
    const std::uint32_t pool = p.pools_used;
    ProtocolBundle q = p;
    q.form = ProtocolForm::no_input;
    q.alice = compose({factor_reorder("reorder_A"), p.alice, pull_out(Party::A, p.output_a, pool)}).renamed("noinput_A");
    q.bob = compose({factor_reorder("reorder_B"), p.bob, pull_out(Party::B, p.output_b, pool)}).renamed("noinput_B");
    q.pools_used = pool + 1;
    return q;
}

ProtocolBundle noinput_to_standard(const ProtocolBundle &p, std::uint64_t seed) {
    if (p.form != ProtocolForm::no_input) {
        throw Error(ErrorKind::FormMismatch, "expected a no-input bundle");
    }
    auto report = check_noinput_relation(p, seed);
    if (report.commute_dev > kCommutationLimit) {
        throw Error(ErrorKind::CommutationViolation,
                    "no-input isometries fail to commute (deviation " + std::to_string(report.commute_dev) + ")");
    }
    require_locality(p);
    const std::uint32_t pool = p.pools_used;
    ProtocolBundle q = p;
    q.form = ProtocolForm::standard;
    q.alice = compose({factor_reorder("reorder_A"), p.alice, push_in(Party::A, p.output_a, pool)}).renamed("standard_A");
    q.bob = compose({factor_reorder("reorder_B"), p.bob, push_in(Party::B, p.output_b, pool)}).renamed("standard_B");
    q.pools_used = pool + 1;
    return q;
}

std::vector<SiteId> bundle_probe_sites(const ProtocolBundle &p) {
    std::vector<SiteId> sites;
    for (const auto &s : p.catalyst.sites()) add_unique(sites, s);
    add_unique(sites, p.output_a);
    add_unique(sites, p.output_b);
    collect_sites(p.alice, p.target.local_dim(), sites);
    collect_sites(p.bob, p.target.local_dim(), sites);
    if (p.form == ProtocolForm::no_input) {
        // Registers the isometries create are not part of the input space.
        std::erase_if(sites, [&](const SiteId &s) {
            auto in = [&](const std::vector<SiteId> &v) { return std::find(v.begin(), v.end(), s) != v.end(); };
            return s == p.output_a || s == p.output_b || in(p.alice.materialize()) || in(p.bob.materialize());
        });
    }
    std::sort(sites.begin(), sites.end());
    return sites;
}

RelationReport check_noinput_relation(const ProtocolBundle &p, std::uint64_t seed) { return check_relation(p, seed); }

RelationReport check_standard_relation(const ProtocolBundle &p, std::uint64_t seed) { return check_relation(p, seed); }

LazyProductState bundle_output(const ProtocolBundle &p) { return p.alice.apply(p.bob.apply(p.catalyst)); }

double bundle_fidelity(const ProtocolBundle &p) {
    LazyProductState expected = tensor_states(p.catalyst, p.target.on(p.output_a, p.output_b));
    return std::norm(inner_product(expected, bundle_output(p)));
}

}  // namespace embezzle
