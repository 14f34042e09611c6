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

#include "embezzle/site_operator.hpp"

#include <algorithm>
#include <numeric>

#include "embezzle/errors.hpp"

namespace embezzle {

std::uint64_t product_of_dims(std::span<const SiteId> sites) {
    std::uint64_t d = 1;
    for (const auto &s : sites) {
        d *= s.dim;
    }
    return d;
}

namespace {

std::vector<std::uint64_t> strides_of(std::span<const SiteId> sites) {
    std::vector<std::uint64_t> strides(sites.size(), 1);
    for (std::size_t i = sites.size(); i-- > 1;) {
        strides[i - 1] = strides[i] * sites[i].dim;
    }
    return strides;
}

}  // namespace

SiteOperator::SiteOperator(std::vector<SiteId> support, Matrix matrix) {
    const auto dim = product_of_dims(support);
    if (static_cast<std::uint64_t>(matrix.rows()) != dim || static_cast<std::uint64_t>(matrix.cols()) != dim) {
        throw Error(ErrorKind::DimensionMismatch, "operator matrix is " + std::to_string(matrix.rows()) + "x" +
                                                      std::to_string(matrix.cols()) + " but support has dimension " +
                                                      std::to_string(dim));
    }
    std::vector<std::size_t> order(support.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (support[order[i]] == support[order[i - 1]]) {
            throw Error(ErrorKind::SiteCollision, "site " + to_string(support[order[i]]) + " repeated in support");
        }
    }
    bool sorted = std::is_sorted(order.begin(), order.end());
    std::vector<SiteId> sorted_support(support.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        sorted_support[i] = support[order[i]];
    }
    if (sorted) {
        matrix_ = std::move(matrix);
    } else {
        // new flat index -> old flat index
        auto old_strides = strides_of(support);
        auto new_strides = strides_of(sorted_support);
        std::vector<Eigen::Index> to_old(dim);
        for (std::uint64_t flat = 0; flat < dim; ++flat) {
            std::uint64_t old_flat = 0;
            for (std::size_t p = 0; p < order.size(); ++p) {
                auto digit = (flat / new_strides[p]) % sorted_support[p].dim;
                old_flat += digit * old_strides[order[p]];
            }
            to_old[flat] = static_cast<Eigen::Index>(old_flat);
        }
        matrix_.resize(matrix.rows(), matrix.cols());
        for (std::uint64_t r = 0; r < dim; ++r) {
            for (std::uint64_t c = 0; c < dim; ++c) {
                matrix_(r, c) = matrix(to_old[r], to_old[c]);
            }
        }
    }
    support_ = std::move(sorted_support);
    classify();
}

void SiteOperator::classify() {
    const double tol = 1e-12;
    bool herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= tol;
    bool unit = (matrix_.adjoint() * matrix_ - Matrix::Identity(matrix_.rows(), matrix_.cols())).cwiseAbs().maxCoeff() <= tol;
    if (herm && unit) {
        kind_ = Kind::hermitian_unitary;
    } else if (herm) {
        kind_ = Kind::hermitian;
    } else if (unit) {
        kind_ = Kind::unitary;
    } else {
        kind_ = Kind::general;
    }
}

bool SiteOperator::acts_only_on(Party p) const {
    return std::all_of(support_.begin(), support_.end(), [p](const SiteId &s) { return s.party == p; });
}

SiteOperator SiteOperator::adjoint() const {
    SiteOperator out;
    out.support_ = support_;
    out.matrix_ = matrix_.adjoint();
    out.kind_ = kind_;
    return out;
}

Matrix SiteOperator::embedded(std::span<const SiteId> joint) const {
    std::vector<std::size_t> pos;
    pos.reserve(support_.size());
    for (const auto &s : support_) {
        auto it = std::lower_bound(joint.begin(), joint.end(), s);
        if (it == joint.end() || !(*it == s)) {
            throw Error(ErrorKind::SiteSpaceMismatch, "site " + to_string(s) + " missing from joint support");
        }
        if (it->dim != s.dim) {
            throw Error(ErrorKind::DimensionMismatch, "site " + to_string(s) + " has dim " + std::to_string(it->dim));
        }
        pos.push_back(static_cast<std::size_t>(it - joint.begin()));
    }
    const auto dim = product_of_dims(joint);
    const auto joint_strides = strides_of(joint);
    const auto own_strides = strides_of(support_);
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::uint64_t col = 0; col < dim; ++col) {
        std::uint64_t own_col = 0;
        std::uint64_t base = col;
        for (std::size_t k = 0; k < pos.size(); ++k) {
            auto digit = (col / joint_strides[pos[k]]) % joint[pos[k]].dim;
            own_col += digit * own_strides[k];
            base -= digit * joint_strides[pos[k]];
        }
        for (Eigen::Index r = 0; r < matrix_.rows(); ++r) {
            const Complex v = matrix_(r, static_cast<Eigen::Index>(own_col));
            if (v == Complex(0.0)) {
                continue;
            }
            std::uint64_t row = base;
            for (std::size_t k = 0; k < pos.size(); ++k) {
                auto digit = (static_cast<std::uint64_t>(r) / own_strides[k]) % support_[k].dim;
                row += digit * joint_strides[pos[k]];
            }
            out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = v;
        }
    }
    return out;
}

SiteOperator SiteOperator::trimmed(double tol) const {
    std::vector<SiteId> support = support_;
    Matrix m = matrix_;
    std::size_t k = 0;
    while (k < support.size()) {
        // Bring site k to the front: its index is the most significant digit there.
        std::vector<SiteId> reordered;
        reordered.push_back(support[k]);
        for (std::size_t j = 0; j < support.size(); ++j) {
            if (j != k) {
                reordered.push_back(support[j]);
            }
        }
        std::vector<SiteId> rest(reordered.begin() + 1, reordered.end());
        // Express m in the reordered basis.
        auto strides = strides_of(support);
        auto new_strides = strides_of(reordered);
        const auto dim = product_of_dims(support);
        std::vector<Eigen::Index> to_old(dim);
        for (std::uint64_t flat = 0; flat < dim; ++flat) {
            std::uint64_t old_flat = 0;
            for (std::size_t p = 0; p < reordered.size(); ++p) {
                auto digit = (flat / new_strides[p]) % reordered[p].dim;
                std::size_t orig = p == 0 ? k : (p - 1 < k ? p - 1 : p);
                old_flat += digit * strides[orig];
            }
            to_old[flat] = static_cast<Eigen::Index>(old_flat);
        }
        const auto block = static_cast<Eigen::Index>(dim / support[k].dim);
        Matrix r(m.rows(), m.cols());
        for (std::uint64_t a = 0; a < dim; ++a) {
            for (std::uint64_t b = 0; b < dim; ++b) {
                r(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = m(to_old[a], to_old[b]);
            }
        }
        Matrix head = r.block(0, 0, block, block);
        bool factors = true;
        for (std::uint32_t a = 0; a < support[k].dim && factors; ++a) {
            for (std::uint32_t b = 0; b < support[k].dim && factors; ++b) {
                Matrix blk = r.block(a * block, b * block, block, block);
                Matrix expect = a == b ? head : Matrix::Zero(block, block);
                factors = (blk - expect).cwiseAbs().maxCoeff() <= tol;
            }
        }
        if (factors) {
            support = rest;
            m = head;
        } else {
            ++k;
        }
    }
    return SiteOperator(std::move(support), std::move(m));
}

double SiteOperator::operator_norm() const {
    if (matrix_.rows() == 1) {
        return std::abs(matrix_(0, 0));
    }
    Eigen::JacobiSVD<Matrix> svd(matrix_);
    return svd.singularValues()(0);
}

std::vector<SiteId> union_support(std::span<const SiteId> a, std::span<const SiteId> b) {
    std::vector<SiteId> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i] < b[j])) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j] < a[i]) {
            out.push_back(b[j++]);
        } else {
            if (a[i].dim != b[j].dim) {
                throw Error(ErrorKind::DimensionMismatch, "site " + to_string(a[i]) + " vs " + to_string(b[j]));
            }
            out.push_back(a[i]);
            ++i;
            ++j;
        }
    }
    return out;
}

bool supports_disjoint(const SiteOperator &a, const SiteOperator &b) {
    for (const auto &s : a.support()) {
        if (std::binary_search(b.support().begin(), b.support().end(), s)) {
            return false;
        }
    }
    return true;
}

SiteOperator operator*(const SiteOperator &a, const SiteOperator &b) {
    auto joint = union_support(a.support(), b.support());
    return SiteOperator(joint, a.embedded(joint) * b.embedded(joint));
}

SiteOperator operator+(const SiteOperator &a, const SiteOperator &b) {
    auto joint = union_support(a.support(), b.support());
    return SiteOperator(joint, a.embedded(joint) + b.embedded(joint));
}

SiteOperator operator-(const SiteOperator &a, const SiteOperator &b) {
    auto joint = union_support(a.support(), b.support());
    return SiteOperator(joint, a.embedded(joint) - b.embedded(joint));
}

SiteOperator operator*(Complex c, const SiteOperator &a) { return SiteOperator(a.support(), c * a.matrix()); }

SiteOperator tensor(const SiteOperator &a, const SiteOperator &b) {
    if (!supports_disjoint(a, b)) {
        throw Error(ErrorKind::SiteCollision, "tensor of operators with overlapping supports");
    }
    return a * b;
}

double commutator_norm(const SiteOperator &a, const SiteOperator &b) {
    if (supports_disjoint(a, b)) {
        return 0.0;
    }
    auto joint = union_support(a.support(), b.support());
    Matrix ea = a.embedded(joint);
    Matrix eb = b.embedded(joint);
    Matrix c = ea * eb - eb * ea;
    if (c.cwiseAbs().maxCoeff() == 0.0) {
        return 0.0;
    }
    Eigen::JacobiSVD<Matrix> svd(c);
    return svd.singularValues()(0);
}

double max_entry_difference(const SiteOperator &a, const SiteOperator &b) {
    auto joint = union_support(a.support(), b.support());
    return (a.embedded(joint) - b.embedded(joint)).cwiseAbs().maxCoeff();
}

SiteOperator permute_sites(const SiteOperator &op, const SiteMap &map) {
    std::vector<SiteId> support;
    support.reserve(op.support().size());
    for (const auto &s : op.support()) {
        SiteId t = map(s);
        if (t.party != s.party) {
            throw Error(ErrorKind::PartyViolation, "relabel moves " + to_string(s) + " across the A|B cut");
        }
        support.push_back(t);
    }
    return SiteOperator(std::move(support), op.matrix());
}

namespace gates {

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_y() {
    Matrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

}  // namespace gates

}  // namespace embezzle
