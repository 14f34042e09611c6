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

#ifndef EMBEZZLE_CERTIFY_HPP
#define EMBEZZLE_CERTIFY_HPP

#include <string>
#include <vector>

#include "embezzle/isometry.hpp"
#include "embezzle/protocols.hpp"
#include "embezzle/reduced.hpp"

namespace embezzle {

enum class MorphismKind { shift_place, conjugation, composite };
std::string to_string(MorphismKind k);

/// Maps an operator on (catalyst registers (x) target register) of one party to
/// an operator on the catalyst registers alone.
class AlgebraMorphism {
   public:
    /// Hotel shift: target register -> copy 1, copy k -> copy k + 1.
    static AlgebraMorphism hotel(Party party, std::uint32_t dim, std::uint32_t group = 0);
    /// Pure relabeling; `registers` are the target registers the map must route.
    static AlgebraMorphism placement(Party party, SiteMap map, std::vector<SiteId> registers, std::string name);
    /// Places one target register at catalyst copy `copy`.
    static AlgebraMorphism copy_embedding(Party party, std::uint32_t dim, std::uint32_t copy, std::uint32_t group = 0);
    /// O -> V^dagger O V with V : f -> f (x) g writing the target to `output`.
    static AlgebraMorphism conjugation(Party party, StructuredIsometry v, SiteId output);
    /// Applies `parts` first to last. The target register is that of the first part.
    static AlgebraMorphism composite(std::vector<AlgebraMorphism> parts);

    MorphismKind kind() const { return kind_; }
    Party party() const { return party_; }
    const std::string &name() const { return name_; }
    /// Register holding the g factor (the first one for multi-register placements).
    const SiteId &target_register() const { return registers_.front(); }
    const std::vector<SiteId> &registers() const { return registers_; }
    /// True when surjectivity follows from the structure (relabelings); conjugations
    /// are only verified on generators.
    bool structural() const;

    /// MorphismTypeError when the operator touches the other party or an output
    /// register the descriptor does not route.
    SiteOperator operator()(const SiteOperator &op) const;

   private:
    MorphismKind kind_ = MorphismKind::shift_place;
    Party party_ = Party::A;
    std::string name_;
    std::vector<SiteId> registers_;
    SiteMap map_;
    StructuredIsometry isometry_;
    std::vector<AlgebraMorphism> parts_;
};

struct MorphismCheck {
    double product_dev = 0.0;
    double adjoint_dev = 0.0;
    double unit_dev = 0.0;
    /// min ||morphism(X)|| / ||X|| over the battery.
    double min_norm_ratio = 0.0;
};

/// Homomorphism and injectivity battery on random operators over the target
/// register and catalyst copy 1.
MorphismCheck verify_morphism(const AlgebraMorphism &morphism, std::uint64_t seed, std::size_t trials = 20);

/// n^2 self-adjoint matrices of unit operator norm spanning M_n: identity,
/// rescaled diagonal Gell-Mann matrices, then Hermitianized matrix units
/// E_jk + E_kj and -i E_jk + i E_kj for j < k.
std::vector<Matrix> generator_basis(std::uint32_t n);
std::vector<SiteOperator> local_generators(const SiteId &site);
/// Tensor products of the local generators over several registers.
std::vector<SiteOperator> product_generators(const std::vector<SiteId> &sites);

struct ObservableFamily {
    std::uint32_t level = 1;
    std::vector<SiteOperator> alice_ops;
    std::vector<SiteOperator> bob_ops;
};

/// Level-n lifted generators: M_1 = morphism(1 (x) M), M_k = morphism(M_{k-1} (x) 1).
ObservableFamily lift_observables(const AlgebraMorphism &alice_map, const AlgebraMorphism &bob_map, const TargetState &g,
                                  std::uint32_t n);

/// Max ||[O, P]|| over operators from distinct families.
double check_mutual_commutativity(const std::vector<ObservableFamily> &families);
/// Max |<f| A_i B_j |f> - <g| G_i (x) G_j |g>| over all generator pairs.
double check_certification(const LazyProductState &f, const ObservableFamily &family, const TargetState &g);
/// Max |<f| O_1 O_2 |f> - g(a_1) g(a_2)| with O_k the lifted image of the generator product a_k.
double check_product_structure(const LazyProductState &f, const ObservableFamily &fam1, const ObservableFamily &fam2,
                               const TargetState &g);
/// As above with fam1 certifying g1 and fam2 certifying g2.
double check_product_structure(const LazyProductState &f, const ObservableFamily &fam1, const TargetState &g1,
                               const ObservableFamily &fam2, const TargetState &g2);

struct ContainmentResult {
    bool contained = false;
    double deviation = 0.0;
};

/// f(alice_map (x) bob_map (G)) = g(G) on the generator battery of the target registers.
ContainmentResult contains_state(const LazyProductState &f, const AlgebraMorphism &alice_map, const AlgebraMorphism &bob_map,
                                 const TargetState &g, double tolerance = 1e-12);
/// Same for an arbitrary finitely supported reference vector; the morphisms
/// must route every explicit register of `reference`.
ContainmentResult contains_reference(const LazyProductState &f, const AlgebraMorphism &alice_map,
                                     const AlgebraMorphism &bob_map, const LazyProductState &reference,
                                     double tolerance = 1e-12);

struct CertificationReport {
    std::string target;
    std::string morphism;
    std::string surjectivity;
    std::string basis = "hermitian-matrix-units";
    std::vector<std::uint32_t> levels;
    std::vector<double> expectation_dev;
    /// [m][n] commutator maxima for m < n (zero elsewhere).
    std::vector<std::vector<double>> commutator;
    std::vector<std::vector<double>> product_dev;
    double max_commutator = 0.0;
    double max_expectation_dev = 0.0;
    double max_product_dev = 0.0;
    double tolerance = 1e-12;
    bool pass = false;
};

/// Lifts levels 1..max_level, checks certification at each level and
/// commutativity plus product structure for every pair of levels.
/// Certification at each family's level, commutativity and product structure for every pair.
CertificationReport certify_families(const LazyProductState &f, const std::vector<ObservableFamily> &families,
                                     const TargetState &g, double tolerance = 1e-12);
CertificationReport certify_levels(const LazyProductState &f, const AlgebraMorphism &alice_map,
                                   const AlgebraMorphism &bob_map, const TargetState &g, std::uint32_t max_level,
                                   double tolerance = 1e-12);

}  // namespace embezzle

#endif
