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

#ifndef EMBEZZLE_SITE_OPERATOR_HPP
#define EMBEZZLE_SITE_OPERATOR_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "embezzle/site.hpp"

namespace embezzle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Amplitudes below this magnitude are dropped after every operation.
inline constexpr double kPruneThreshold = 1e-15;
/// Default comparison tolerance for exact-protocol checks.
inline constexpr double kDefaultTolerance = 1e-12;

std::uint64_t product_of_dims(std::span<const SiteId> sites);

/// Operator on finitely many sites, identity elsewhere.
///
/// The matrix is indexed by the multi-index of the (sorted) support with the
/// first site most significant.
class SiteOperator {
   public:
    enum class Kind : std::uint8_t { general, hermitian, unitary, hermitian_unitary };

    SiteOperator() : matrix_(Matrix::Identity(1, 1)) {}
    /// Support may be given in any order; it is sorted and the matrix permuted to match.
    SiteOperator(std::vector<SiteId> support, Matrix matrix);

    static SiteOperator identity() { return SiteOperator(); }
    static SiteOperator on(const SiteId &site, Matrix matrix) { return SiteOperator({site}, std::move(matrix)); }

    const std::vector<SiteId> &support() const { return support_; }
    const Matrix &matrix() const { return matrix_; }
    Kind kind() const { return kind_; }
    bool is_hermitian() const { return kind_ == Kind::hermitian || kind_ == Kind::hermitian_unitary; }
    bool is_unitary() const { return kind_ == Kind::unitary || kind_ == Kind::hermitian_unitary; }
    bool acts_only_on(Party p) const;

    SiteOperator adjoint() const;
    /// Matrix of this operator on `joint`, a sorted superset of the support.
    Matrix embedded(std::span<const SiteId> joint) const;
    /// Drops support sites on which the operator factors as the identity.
    SiteOperator trimmed(double tol = 1e-13) const;
    double operator_norm() const;

    friend SiteOperator operator*(const SiteOperator &a, const SiteOperator &b);
    friend SiteOperator operator+(const SiteOperator &a, const SiteOperator &b);
    friend SiteOperator operator-(const SiteOperator &a, const SiteOperator &b);
    friend SiteOperator operator*(Complex c, const SiteOperator &a);

   private:
    void classify();

    std::vector<SiteId> support_;
    Matrix matrix_;
    Kind kind_ = Kind::hermitian_unitary;
};

/// Tensor product of operators on disjoint supports.
SiteOperator tensor(const SiteOperator &a, const SiteOperator &b);
/// Sorted union of two supports; DimensionMismatch when a shared site disagrees on dim.
std::vector<SiteId> union_support(std::span<const SiteId> a, std::span<const SiteId> b);
bool supports_disjoint(const SiteOperator &a, const SiteOperator &b);
/// Operator norm of [a, b] on the joint support; exactly 0 for disjoint supports.
double commutator_norm(const SiteOperator &a, const SiteOperator &b);
/// Maximum entrywise difference of the two operators on their joint support.
double max_entry_difference(const SiteOperator &a, const SiteOperator &b);
/// Relabels every support site through `map` (forward direction).
SiteOperator permute_sites(const SiteOperator &op, const SiteMap &map);

namespace gates {
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
}  // namespace gates

}  // namespace embezzle

#endif
