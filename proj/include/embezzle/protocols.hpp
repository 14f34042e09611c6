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

#ifndef EMBEZZLE_PROTOCOLS_HPP
#define EMBEZZLE_PROTOCOLS_HPP

#include <string>
#include <utility>
#include <vector>

#include "embezzle/isometry.hpp"
#include "embezzle/lazy_state.hpp"
#include "embezzle/schmidt.hpp"

namespace embezzle {

/// Pure bipartite state sum_i x_i |ii> on two registers of local dimension `local_dim`.
class TargetState {
   public:
    /// InvalidTarget unless the coefficients are positive with unit squared sum.
    TargetState(std::vector<double> coefficients, std::uint32_t local_dim = 0);

    static TargetState bell();
    /// The product target |00> on qubits.
    static TargetState product(std::uint32_t local_dim = 2);
    /// "bell", "product", or comma-separated coefficients such as "3/5,4/5" or "0.6,0.8".
    static TargetState parse(const std::string &text);

    const std::vector<double> &coefficients() const { return coefficients_; }
    std::uint32_t local_dim() const { return local_dim_; }
    bool is_product() const { return coefficients_.size() == 1; }
    SchmidtSpectrum schmidt() const;
    /// Pair amplitudes (label on A, label on B, amplitude).
    std::vector<std::tuple<std::uint32_t, std::uint32_t, Complex>> pair() const;
    LazyProductState on(const SiteId &a, const SiteId &b) const;
    std::string to_string() const;

   private:
    std::vector<double> coefficients_;
    std::uint32_t local_dim_;
};

/// g on (A, cat, group, k), (B, cat, group, k) for k = 1..copies, plus all further copies as a lazy tail.
LazyProductState build_hotel_catalyst(const TargetState &g, std::uint32_t copies, std::uint32_t group = 0);

/// One party's hotel map: copy 1 becomes the output register, copy k + 1 becomes copy k.
StructuredIsometry hotel_isometry(Party party, const TargetState &g, const SiteId &output, std::uint32_t group = 0);

struct HotelStepResult {
    LazyProductState state;
    SiteId output_a;
    SiteId output_b;
};

/// Applies both parties' hotel maps, writing g to fresh output registers and
/// keeping the same number of explicit copies. CatalystShapeError when `f`
/// holds no copies for `group`.
HotelStepResult hotel_step(const LazyProductState &f, const TargetState &g, std::uint32_t group = 0);

// What is left after projecting the output pair onto g; unit norm iff the step was exact.
LazyProductState residual_catalyst(const HotelStepResult &r, const TargetState &g);

/// Schmidt coefficients proportional to 1/sqrt(j), j = 1..m, on one site per party.
LazyProductState build_vdh_catalyst(std::uint32_t m, std::uint32_t group = 0);
std::vector<double> vdh_coefficients(std::uint32_t m);
/// Best overlap sum_r s_r t_r between the sorted spectra of catalyst (x) |00> and catalyst (x) g.
double vdh_embezzle_fidelity(std::uint32_t m, const TargetState &g);

enum class ProtocolForm { standard, no_input };
std::string to_string(ProtocolForm f);

struct ProtocolBundle {
    ProtocolForm form = ProtocolForm::standard;
    StructuredIsometry alice;
    StructuredIsometry bob;
    LazyProductState catalyst;
    TargetState target = TargetState::product();
    SiteId output_a;
    SiteId output_b;
    /// Ancilla pools already claimed by conversions; the next conversion uses this index.
    std::uint32_t pools_used = 0;
};

SiteId default_output(Party p, std::uint32_t dim);

ProtocolBundle hotel_noinput_bundle(const TargetState &g, std::uint32_t copies);
/// Both parties act trivially; the target is a product state.
ProtocolBundle identity_standard_bundle(std::uint32_t local_dim = 2);
/// m-level catalyst plus permutation unitaries sending the r-th largest source weight to the r-th largest target weight.
ProtocolBundle vdh_standard_bundle(std::uint32_t m, const TargetState &g);

/// V_P = S_P U_P W_P with W_P pulling a register out of a fresh ancilla pool.
ProtocolBundle standard_to_noinput(const ProtocolBundle &p);
/// U_P = S_P V_P W_P with W_P pushing the input register into a fresh ancilla pool.
ProtocolBundle noinput_to_standard(const ProtocolBundle &p, std::uint64_t seed = 0);

struct RelationReport {
    double embezzle_dev = 0.0;
    double commute_dev = 0.0;
    std::size_t probes = 0;
};

/// Registers a spanning probe set should cover: catalyst sites, outputs, and
/// everything the isometries touch.
std::vector<SiteId> bundle_probe_sites(const ProtocolBundle &p);

RelationReport check_noinput_relation(const ProtocolBundle &p, std::uint64_t seed = 0);
RelationReport check_standard_relation(const ProtocolBundle &p, std::uint64_t seed = 0);
/// Joint output of the bundle applied to its catalyst (B first, then A).
LazyProductState bundle_output(const ProtocolBundle &p);
/// |<catalyst (x) target | output>|^2.
double bundle_fidelity(const ProtocolBundle &p);

}  // namespace embezzle

#endif
