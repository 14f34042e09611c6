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

#include "embezzle/runner.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "embezzle/probes.hpp"

namespace embezzle {

namespace {

struct Defaults {
    std::uint32_t copies;
    std::uint32_t depth;
    std::uint32_t probes;
};

const std::map<std::string, Defaults> &command_defaults() {
    static const std::map<std::string, Defaults> d{
        {"demo-hotel", {8, 0, 0}},   {"convert", {3, 0, 10}},           {"certify", {6, 4, 0}},
        {"vdh-sweep", {0, 0, 0}},    {"universal", {3, 3, 0}},          {"verify-isometries", {0, 0, 20}},
        {"plot-data", {0, 0, 0}},
    };
    return d;
}

std::string number(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

Json check_json(const Check &c) {
    return Json{{"name", c.name}, {"value", c.value}, {"bound", c.bound}, {"relation", c.relation}, {"pass", c.holds()}};
}

RunResult finish(const RunConfig &cfg, Json result, const std::vector<Check> &checks, std::string csv) {
    RunResult r;
    Json list = Json::array();
    Json failure = nullptr;
    for (const auto &c : checks) {
        list.push_back(check_json(c));
        if (!c.holds() && failure.is_null()) failure = check_json(c);
    }
    r.exit_code = failure.is_null() ? kExitPass : kExitCheckFailure;
    r.report = Json{{"tool", kToolVersion},
                    {"command", cfg.command},
                    {"config", config_echo(cfg)},
                    {"seed", cfg.seed},
                    {"tolerance", cfg.tolerance},
                    {"result", std::move(result)},
                    {"checks", std::move(list)},
                    {"failure", failure},
                    {"pass", failure.is_null()}};
    r.csv = std::move(csv);
    return r;
}

RunResult run_demo_hotel(const RunConfig &cfg) {
    const auto g = TargetState::parse(cfg.target);
    Json rows = Json::array();
    std::ostringstream csv;
    csv << "copies,fidelity,fidelity_gap,spectrum_dev\n";
    double gap = 0.0, spec = 0.0;
    for (std::uint32_t k = 1; k <= cfg.copies; ++k) {
        const auto f = build_hotel_catalyst(g, k);
        const auto step = hotel_step(f, g);
        const auto expected = tensor_states(f, g.on(step.output_a, step.output_b));
        const double fid = std::norm(inner_product(expected, step.state));
        const double sd = schmidt_spectrum(residual_catalyst(step, g)).max_difference(schmidt_spectrum(f));
        gap = std::max(gap, std::abs(1.0 - fid));
        spec = std::max(spec, sd);
        rows.push_back(Json{{"copies", k}, {"fidelity", fid}, {"fidelity_gap", std::abs(1.0 - fid)}, {"spectrum_dev", sd}});
        csv << k << "," << number(fid) << "," << number(std::abs(1.0 - fid)) << "," << number(sd) << "\n";
    }
    return finish(cfg, Json{{"target", g}, {"rows", rows}},
                  {{"max_fidelity_gap", gap, cfg.tolerance}, {"max_spectrum_dev", spec, cfg.tolerance}}, csv.str());
}

double replay_dev(const ProtocolBundle &a, const ProtocolBundle &b, const std::vector<LazyProductState> &probes) {
    double worst = 0.0;
    for (const auto &x : probes) {
        worst = std::max(worst, distance(a.alice.apply(a.bob.apply(x)), b.alice.apply(b.bob.apply(x))));
    }
    return worst;
}

RunResult run_convert(const RunConfig &cfg) {
    const auto g = TargetState::parse(cfg.target);
    const auto source = hotel_noinput_bundle(g, cfg.copies);
    const auto standard = noinput_to_standard(source, cfg.seed);
    Json result{{"target", g}, {"direction", cfg.direction}};
    Json bundles;
    std::vector<Check> checks;
    auto relation = [&](const std::string &name, const RelationReport &r) {
        result["relations"][name] = r;
        checks.push_back({name + ".embezzle_dev", r.embezzle_dev, cfg.tolerance});
        checks.push_back({name + ".commute_dev", r.commute_dev, cfg.tolerance});
    };
    relation("source", check_noinput_relation(source, cfg.seed));
    if (cfg.direction != "to-noinput") {
        relation("to_standard", check_standard_relation(standard, cfg.seed));
        bundles["standard"] = standard;
    }
    if (cfg.direction != "to-standard") {
        const auto noinput = standard_to_noinput(standard);
        relation("to_noinput", check_noinput_relation(noinput, cfg.seed));
        bundles["no_input"] = noinput;
    }
    if (cfg.direction == "both") {
        const auto back = noinput_to_standard(standard_to_noinput(standard), cfg.seed);
        // Inputs start in |00>; only the catalyst registers vary.
        const auto probes = probe_battery(standard.catalyst.sites(), cfg.probes, cfg.seed);
        const double dev = replay_dev(standard, back, probes);
        result["round_trip"] = Json{{"probes", probes.size()}, {"max_distance", dev}};
        checks.push_back({"round_trip.max_distance", dev, cfg.tolerance});
    }
    result["bundles"] = bundles;
    return finish(cfg, std::move(result), checks, "");
}

RunResult run_certify(const RunConfig &cfg) {
    const auto g = TargetState::parse(cfg.target);
    const auto f = build_hotel_catalyst(g, cfg.copies);
    const auto n = g.local_dim();
    auto rep = certify_levels(f, AlgebraMorphism::hotel(Party::A, n), AlgebraMorphism::hotel(Party::B, n), g,
                              cfg.depth, cfg.tolerance);
    std::ostringstream csv;
    csv << "level,expectation_dev\n";
    for (std::size_t k = 0; k < rep.levels.size(); ++k) csv << rep.levels[k] << "," << number(rep.expectation_dev[k]) << "\n";
    std::vector<Check> checks{{"max_commutator", rep.max_commutator, cfg.tolerance},
                              {"max_expectation_dev", rep.max_expectation_dev, cfg.tolerance},
                              {"max_product_dev", rep.max_product_dev, cfg.tolerance}};
    return finish(cfg, Json{{"report", rep}}, checks, csv.str());
}

RunResult run_vdh_sweep(const RunConfig &cfg) {
    const auto g = TargetState::parse(cfg.target);
    const auto ms = expand_range(cfg.m_range, cfg.scale);
    const double rank = static_cast<double>(g.coefficients().size());
    Json rows = Json::array();
    std::ostringstream csv;
    csv << "m,fidelity,lower_bound\n";
    double violation = 0.0, min_gap = 1.0, min_step = std::numeric_limits<double>::infinity();
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (auto m : ms) {
        const double fid = vdh_embezzle_fidelity(m, g);
        const double lb = 1.0 - std::log2(rank) / std::log2(static_cast<double>(m));
        violation = std::max(violation, lb - fid);
        min_gap = std::min(min_gap, 1.0 - fid);
        if (!std::isnan(prev)) min_step = std::min(min_step, fid - prev);
        prev = fid;
        rows.push_back(Json{{"m", m}, {"fidelity", fid}, {"lower_bound", lb}});
        csv << m << "," << number(fid) << "," << number(lb) << "\n";
    }
    std::vector<Check> checks{{"max_bound_violation", std::max(0.0, violation), cfg.tolerance}};
    if (!g.is_product()) {
        if (ms.size() > 1) checks.push_back({"min_increment", min_step, 0.0, cfg.scale == "geometric" ? ">" : ">="});
        checks.push_back({"min_gap_to_one", min_gap, 1e-6, ">"});
    }
    return finish(cfg, Json{{"target", g}, {"scale", cfg.scale}, {"rows", rows}}, checks, csv.str());
}

RunResult run_universal(const RunConfig &cfg) {
    const auto family = enumerate_rational_family(cfg.max_dim, cfg.max_denominator);
    const auto c = build_composite_catalyst(family, cfg.copies);
    const auto rep = check_simultaneous_containment(c, cfg.depth, cfg.tolerance);
    double exp_dev = 0.0, comm = 0.0;
    for (const auto &m : rep.members) {
        exp_dev = std::max(exp_dev, m.max_expectation_dev);
        comm = std::max(comm, m.max_commutator);
    }
    Json result{{"family", family}, {"amplitudes", c.state.nnz()}, {"report", rep}};
    std::vector<Check> checks{{"max_expectation_dev", exp_dev, cfg.tolerance},
                              {"max_commutator", comm, cfg.tolerance},
                              {"cross_commutator", rep.cross_commutator, cfg.tolerance},
                              {"cross_product_dev", rep.cross_product_dev, cfg.tolerance},
                              {"embedding_consistency", embedding_consistency(c, cfg.depth), cfg.tolerance}};
    if (cfg.interleave) {
        const double inv = interleave_invariance(c, cfg.depth);
        const auto moved = check_simultaneous_containment(interleave_reindex(c), cfg.depth, cfg.tolerance);
        double moved_dev = 0.0;
        for (const auto &m : moved.members) moved_dev = std::max(moved_dev, m.max_expectation_dev);
        result["interleaved"] = Json{{"invariance_dev", inv}, {"max_expectation_dev", moved_dev}};
        checks.push_back({"interleave_invariance", inv, cfg.tolerance});
        checks.push_back({"interleaved_max_expectation_dev", moved_dev, cfg.tolerance});
    }
    return finish(cfg, std::move(result), checks, deviation_csv(rep));
}

RunResult run_verify_isometries(const RunConfig &cfg) {
    Json rows = Json::array();
    std::vector<Check> checks;
    for (const auto &c : isometry_battery(cfg.seed, cfg.probes)) {
        rows.push_back(Json{{"name", c.name}, {"deviation", c.deviation}, {"probes", c.probes}});
        checks.push_back({"isometry:" + c.name, c.deviation, cfg.tolerance});
    }
    const double ident = pull_push_identity_dev();
    checks.push_back({"push_in_after_pull_out_identity", ident, cfg.tolerance});
    return finish(cfg, Json{{"isometries", rows}, {"identity_dev", ident}}, checks, "");
}

RunResult run_plot_data(const RunConfig &cfg) {
    std::ifstream in(cfg.input);
    if (!in) {
        throw Error(ErrorKind::ConfigError, "cannot read report " + cfg.input);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    RunResult r;
    r.csv = emit_plot_data_text(buf.str());
    return r;
}

const Json &field(const Json &j, const std::string &key, const std::string &where) {
    if (!j.is_object() || !j.contains(key)) {
        throw Error(ErrorKind::ParseError, where + " lacks \"" + key + "\"");
    }
    return j.at(key);
}

std::uint32_t parse_count(const std::string &text, const std::string &what) {
    std::uint32_t v = 0;
    const char *end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw Error(ErrorKind::ConfigError, "bad " + what + " \"" + text + "\"");
    }
    return v;
}

}  // namespace

bool Check::holds() const {
    if (std::isnan(value)) return false;
    if (relation == ">") return value > bound;
    if (relation == ">=") return value >= bound;
    return value <= bound;
}

const std::vector<std::string> &known_commands() {
    static const std::vector<std::string> names{"demo-hotel", "convert",           "certify",  "vdh-sweep",
                                                "universal",  "verify-isometries", "plot-data"};
    return names;
}

RunConfig resolve(RunConfig c) {
    auto it = command_defaults().find(c.command);
    if (it == command_defaults().end()) {
        throw Error(ErrorKind::ConfigError, "unknown command \"" + c.command + "\"");
    }
    if (c.copies == 0) c.copies = it->second.copies;
    if (c.depth == 0) c.depth = it->second.depth;
    if (c.probes == 0) c.probes = it->second.probes;
    if (!(c.tolerance > 0.0 && c.tolerance <= 1e-3)) {
        throw Error(ErrorKind::ConfigError, "tolerance must lie in (0, 1e-3]");
    }
    if (c.command == "certify" || c.command == "universal") {
        if (c.depth == 0 || c.depth > c.copies) throw Error(ErrorKind::ConfigError, "depth must lie in 1..copies");
    }
    if (c.command == "convert" && c.direction != "both" && c.direction != "to-standard" && c.direction != "to-noinput") {
        throw Error(ErrorKind::ConfigError, "direction must be to-standard, to-noinput or both");
    }
    if (c.command == "vdh-sweep") (void)expand_range(c.m_range, c.scale);
    if (c.command == "plot-data" && c.input.empty()) throw Error(ErrorKind::ConfigError, "plot-data needs --input");
    if (c.command == "demo-hotel" || c.command == "convert" || c.command == "certify" || c.command == "vdh-sweep") {
        (void)TargetState::parse(c.target);
    }
    return c;
}

Json config_echo(const RunConfig &c) {
    Json j{{"command", c.command}, {"tolerance", c.tolerance}, {"seed", c.seed}};
    const auto &cmd = c.command;
    if (cmd == "demo-hotel" || cmd == "convert" || cmd == "certify" || cmd == "vdh-sweep") j["target"] = c.target;
    if (cmd == "demo-hotel" || cmd == "convert" || cmd == "certify" || cmd == "universal") j["copies"] = c.copies;
    if (cmd == "certify" || cmd == "universal") j["depth"] = c.depth;
    if (cmd == "convert" || cmd == "verify-isometries") j["probes"] = c.probes;
    if (cmd == "convert") j["direction"] = c.direction;
    if (cmd == "vdh-sweep") {
        j["m"] = c.m_range;
        j["scale"] = c.scale;
    }
    if (cmd == "universal") {
        j["max_dim"] = c.max_dim;
        j["max_denominator"] = c.max_denominator;
        j["interleave"] = c.interleave;
    }
    return j;
}

std::vector<std::uint32_t> expand_range(const std::string &range, const std::string &scale) {
    if (scale != "geometric" && scale != "linear") {
        throw Error(ErrorKind::ConfigError, "scale must be geometric or linear");
    }
    const auto dots = range.find("..");
    const std::uint32_t lo = parse_count(range.substr(0, dots), "range start");
    const std::uint32_t hi = dots == std::string::npos ? lo : parse_count(range.substr(dots + 2), "range end");
    if (lo < 1 || hi < lo || hi > (1u << 20)) {
        throw Error(ErrorKind::ConfigError, "range \"" + range + "\" must satisfy 1 <= start <= end <= 2^20");
    }
    std::vector<std::uint32_t> out;
    for (std::uint64_t m = lo; m <= hi; m = scale == "geometric" ? 2 * m : m + 1) out.push_back(static_cast<std::uint32_t>(m));
    return out;
}

RunResult run(const RunConfig &cfg) {
    const auto &c = cfg.command;
    if (c == "demo-hotel") return run_demo_hotel(cfg);
    if (c == "convert") return run_convert(cfg);
    if (c == "certify") return run_certify(cfg);
    if (c == "vdh-sweep") return run_vdh_sweep(cfg);
    if (c == "universal") return run_universal(cfg);
    if (c == "verify-isometries") return run_verify_isometries(cfg);
    if (c == "plot-data") return run_plot_data(cfg);
    throw Error(ErrorKind::ConfigError, "unknown command \"" + c + "\"");
}

std::string emit_plot_data(const Json &report) {
    try {
        std::ostringstream os;
        os << "x,y,series\n";
        auto row = [&](double x, double y, const std::string &series) {
            os << number(x) << "," << number(y) << "," << series << "\n";
        };
        const auto cmd = field(report, "command", "report").get<std::string>();
        const Json &result = field(report, "result", "report");
        if (cmd == "certify") {
            const auto rep = decode<CertificationReport>(field(result, "report", "result"));
            for (std::size_t k = 0; k < rep.levels.size(); ++k) {
                double comm = 0.0;
                for (std::size_t n = 0; n < rep.levels.size(); ++n) {
                    if (n != k) comm = std::max(comm, rep.commutator.at(k).at(n));
                }
                row(rep.levels[k], comm, "max_commutator");
            }
            for (std::size_t k = 0; k < rep.levels.size(); ++k) row(rep.levels[k], rep.expectation_dev.at(k), "max_expectation_dev");
        } else if (cmd == "vdh-sweep") {
            for (const auto &r : field(result, "rows", "result")) row(r.at("m"), r.at("fidelity"), "fidelity");
            for (const auto &r : field(result, "rows", "result")) row(r.at("m"), r.at("lower_bound"), "lower_bound");
        } else if (cmd == "universal") {
            const auto rep = decode<SimultaneousReport>(field(result, "report", "result"));
            for (std::size_t i = 0; i < rep.members.size(); ++i) {
                const auto &m = rep.members[i];
                for (std::size_t k = 0; k < m.levels.size(); ++k) {
                    row(m.levels[k], m.expectation_dev.at(k), "member_" + std::to_string(i));
                }
            }
        } else if (cmd == "demo-hotel") {
            for (const auto &r : field(result, "rows", "result")) row(r.at("copies"), r.at("fidelity_gap"), "fidelity_gap");
            for (const auto &r : field(result, "rows", "result")) row(r.at("copies"), r.at("spectrum_dev"), "spectrum_dev");
        } else if (cmd == "convert" || cmd == "verify-isometries") {
            std::size_t i = 0;
            for (const auto &c : field(report, "checks", "report")) row(static_cast<double>(i++), c.at("value"), c.at("name"));
        } else {
            throw Error(ErrorKind::ParseError, "report has unknown command \"" + cmd + "\"");
        }
        return os.str();
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::ParseError, std::string("malformed report: ") + e.what());
    }
}

std::string emit_plot_data_text(const std::string &report_text) { return emit_plot_data(parse_json_text(report_text)); }

std::vector<IsometryCheck> isometry_battery(std::uint64_t seed, std::size_t probes) {
    struct Item {
        StructuredIsometry v;
        std::vector<SiteId> sites;
    };
    const SiteId out_a = output_site(Party::A, 0, 2), out_b = output_site(Party::B, 0, 2);
    const std::vector<SiteId> base{ancilla_site(Party::A, 0, 2), ancilla_site(Party::A, 1, 3),
                                   ancilla_site(Party::B, 0, 2), catalyst_site(Party::A, 1, 2),
                                   catalyst_site(Party::B, 1, 2), catalyst_site(Party::A, 2, 2)};
    std::vector<Item> items{
        {pull_out(Party::A, out_a), base},
        {pull_out(Party::B, out_b), base},
        {push_in(Party::A, ancilla_site(Party::A, 1, 3)), base},
        {push_in(Party::B, catalyst_site(Party::B, 1, 2), 3), base},
        {swap(ancilla_site(Party::A, 0, 2), catalyst_site(Party::A, 1, 2)), base},
        {swap(catalyst_site(Party::A, 1, 2), catalyst_site(Party::B, 1, 2), true), base},
        {factor_reorder("reorder"), base},
        {compose(push_in(Party::A, out_a), pull_out(Party::A, out_a)), base},
        {hotel_isometry(Party::A, TargetState::bell(), out_a), base},
        {hotel_isometry(Party::B, TargetState::bell(), out_b), base},
    };
    const auto hotel_std = noinput_to_standard(hotel_noinput_bundle(TargetState::bell(), 2), seed);
    const auto vdh = vdh_standard_bundle(8, TargetState::bell());
    const auto vdh_noinput = standard_to_noinput(vdh);
    for (const ProtocolBundle &b : {hotel_std, standard_to_noinput(hotel_std), vdh_noinput, noinput_to_standard(vdh_noinput, seed)}) {
        items.push_back({b.alice, bundle_probe_sites(b)});
        items.push_back({b.bob, bundle_probe_sites(b)});
    }
    std::vector<IsometryCheck> out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto battery = probe_battery(items[i].sites, probes, seed + i);
        out.push_back({items[i].v.name() + "#" + std::to_string(i), verify_isometry(items[i].v, battery), battery.size()});
    }
    return out;
}

double pull_push_identity_dev() {
    const SiteId out = output_site(Party::A, 0, 2);
    const auto roundtrip = compose(push_in(Party::A, out), pull_out(Party::A, out));
    double worst = 0.0;
    for (const auto &e : basis_battery({ancilla_site(Party::A, 0, 2), ancilla_site(Party::A, 1, 3),
                                         ancilla_site(Party::B, 0, 2)})) {
        worst = std::max(worst, distance(roundtrip.apply(e), e));
    }
    return worst;
}

namespace {

int fail_with(const Error &e, const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    static const std::vector<ErrorKind> usage{ErrorKind::ConfigError, ErrorKind::ParseError, ErrorKind::InvalidTarget,
                                              ErrorKind::SizeBudgetExceeded, ErrorKind::DimensionError};
    const int code = std::find(usage.begin(), usage.end(), e.kind()) != usage.end() ? kExitUsage : kExitCheckFailure;
    const Json record{{"tool", kToolVersion},
                      {"command", cfg.command},
                      {"exit_code", code},
                      {"failure", Json{{"kind", std::string(to_string(e.kind()))}, {"message", e.message()}}}};
    err << canonical_dump(record);
    if (!cfg.output.empty()) {
        std::ofstream(cfg.output) << canonical_dump(record);
    }
    (void)out;
    return code;
}

void write_text(const std::string &path, const std::string &text, std::ostream &fallback) {
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::ConfigError, "cannot write " + path);
    f << text;
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Catalytic entanglement lab: embezzlement demos, conversions and certification", "embezzle_lab"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.set_config("--config", "", "INI file, one [section] per command; flags override it");
    app.require_subcommand(1, 1);
    RunConfig cfg;

    auto common = [&](CLI::App *sub) {
        sub->fallthrough();
        sub->add_option("--tolerance", cfg.tolerance, "Pass threshold for every deviation");
        sub->add_option("--seed", cfg.seed, "Probe seed; EMBEZZLE_LAB_SEED overrides the config file");
        sub->add_option("-o,--output", cfg.output, "JSON report path (default stdout)");
        sub->add_option("--csv", cfg.csv, "CSV output path");
    };
    auto target = [&](CLI::App *sub) { sub->add_option("--target", cfg.target, "bell, product or a list like 3/5,4/5"); };

    auto *demo = app.add_subcommand("demo-hotel", "Hotel embezzlement for 1..copies materialized copies");
    common(demo);
    target(demo);
    demo->add_option("--copies", cfg.copies);

    auto *convert = app.add_subcommand("convert", "Standard and no-input protocol conversions");
    common(convert);
    target(convert);
    convert->add_option("--copies", cfg.copies);
    convert->add_option("--direction", cfg.direction)->check(CLI::IsMember({"to-standard", "to-noinput", "both"}));
    convert->add_option("--probes", cfg.probes);

    auto *certify = app.add_subcommand("certify", "Certify commuting copies of the target in a hotel catalyst");
    common(certify);
    target(certify);
    certify->add_option("--copies", cfg.copies);
    certify->add_option("--depth", cfg.depth);

    auto *sweep = app.add_subcommand("vdh-sweep", "van Dam-Hayden fidelity over a range of catalyst sizes");
    common(sweep);
    target(sweep);
    sweep->add_option("--m", cfg.m_range, "lo..hi");
    sweep->add_option("--scale", cfg.scale)->check(CLI::IsMember({"geometric", "linear"}));

    auto *universal = app.add_subcommand("universal", "Composite catalyst for a rational Schmidt family");
    common(universal);
    universal->add_option("--max-dim", cfg.max_dim);
    universal->add_option("--max-denominator", cfg.max_denominator);
    universal->add_option("--copies", cfg.copies);
    universal->add_option("--depth", cfg.depth);
    universal->add_option("--interleave", cfg.interleave);

    auto *verify = app.add_subcommand("verify-isometries", "Inner-product preservation for every factory isometry");
    common(verify);
    verify->add_option("--probes", cfg.probes);

    auto *plot = app.add_subcommand("plot-data", "Flatten a report into x,y,series rows");
    plot->fallthrough();
    plot->add_option("--input", cfg.input)->required();
    plot->add_option("--csv", cfg.csv, "CSV output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitUsage;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    try {
        bool seed_flag = false;
        for (int i = 1; i < argc; ++i) {
            const std::string a = argv[i];
            if (a == "--seed" || a.rfind("--seed=", 0) == 0) seed_flag = true;
        }
        if (const char *env = std::getenv("EMBEZZLE_LAB_SEED"); env != nullptr && !seed_flag) {
            const std::string text = env;
            std::uint64_t v = 0;
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
            if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
                throw Error(ErrorKind::ConfigError, "EMBEZZLE_LAB_SEED is not an unsigned integer");
            }
            cfg.seed = v;
        }
        cfg = resolve(cfg);
        const RunResult r = run(cfg);
        if (cfg.command == "plot-data") {
            write_text(cfg.csv, r.csv, out);
            return kExitPass;
        }
        write_text(cfg.output, canonical_dump(r.report), out);
        if (!cfg.csv.empty()) write_text(cfg.csv, r.csv, out);
        if (r.exit_code != kExitPass) err << canonical_dump(Json{{"failure", r.report["failure"]}});
        return r.exit_code;
    } catch (const Error &e) {
        return fail_with(e, cfg, out, err);
    }
}

}  // namespace embezzle
