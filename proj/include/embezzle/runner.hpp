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

#ifndef EMBEZZLE_RUNNER_HPP
#define EMBEZZLE_RUNNER_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "embezzle/serialize.hpp"

namespace embezzle {

inline constexpr const char *kToolVersion = "embezzle-lab 0.1.0";

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;

// Zero for copies, depth or probes means "the command's default".
struct RunConfig {
    std::string command;
    double tolerance = kDefaultTolerance;
    std::uint64_t seed = 0;
    std::string target = "bell";
    std::uint32_t copies = 0;
    std::uint32_t depth = 0;
    std::string m_range = "4..4096";
    std::string scale = "geometric";
    std::string direction = "both";
    std::uint32_t probes = 0;
    std::uint32_t max_dim = 3;
    std::int64_t max_denominator = 7;
    bool interleave = true;
    std::string output;
    std::string csv;
    std::string input;
};

struct Check {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    std::string relation = "<=";  // "<=", ">=" or ">"
    bool holds() const;
};

struct RunResult {
    int exit_code = kExitPass;
    Json report;
    std::string csv;
};

const std::vector<std::string> &known_commands();

// Fills command defaults and validates; throws ConfigError.
RunConfig resolve(RunConfig config);
Json config_echo(const RunConfig &config);

// `config` must already be resolved.
RunResult run(const RunConfig &config);

std::vector<std::uint32_t> expand_range(const std::string &range, const std::string &scale);

std::string emit_plot_data(const Json &report);
std::string emit_plot_data_text(const std::string &report_text);

struct IsometryCheck {
    std::string name;
    double deviation = 0.0;
    std::size_t probes = 0;
};

std::vector<IsometryCheck> isometry_battery(std::uint64_t seed, std::size_t probes);

// Largest distance of push_in * pull_out from the identity on every basis state of a 3-site space.
double pull_push_identity_dev();

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace embezzle

#endif
