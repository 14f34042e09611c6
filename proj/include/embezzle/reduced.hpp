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

#ifndef EMBEZZLE_REDUCED_HPP
#define EMBEZZLE_REDUCED_HPP

#include <vector>

#include "embezzle/lazy_state.hpp"
#include "embezzle/site_operator.hpp"

namespace embezzle {

/// Density matrix of a state restricted to a finite set of registers.
class ReducedState {
   public:
    /// Traces out every other register, including implicit ones. SizeBudgetExceeded
    /// when the kept registers span more than `max_dim` dimensions.
    static ReducedState of(const LazyProductState &s, std::vector<SiteId> sites, std::uint64_t max_dim = 4096);

    ReducedState(std::vector<SiteId> sites, Matrix rho);

    const std::vector<SiteId> &sites() const { return sites_; }
    const Matrix &matrix() const { return rho_; }

    /// tr_S((op (x) 1) rho), left on the remaining registers. The support of `op` must be kept here.
    ReducedState contract(const SiteOperator &op) const;
    Complex trace() const { return rho_.trace(); }
    /// tr(rho op).
    Complex expectation(const SiteOperator &op) const { return contract(op).trace(); }

   private:
    std::vector<SiteId> sites_;
    Matrix rho_;
};

}  // namespace embezzle

#endif
