// Copyright 2026 The coarse-metrology Authors
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

#pragma once

#include <cmath>

#include "coarse_metrology/error.hpp"
#include "coarse_metrology/oracle/mat2.hpp"

namespace coarse_metrology::oracle {

inline constexpr double kDensityMatrixTolerance = 1e-10;

inline bool is_density_matrix(const Mat2 &rho, double tol = kDensityMatrixTolerance) noexcept {
    return std::abs(rho.trace() - 1.0) <= tol && is_positive_semidefinite(rho, tol);
}

/// Pure dephasing of one probe: populations kept, coherences scaled by
/// exp(-gamma). This is the decay the Ramsey signal sees.
inline Mat2 apply_dephasing(const Mat2 &rho, double gamma) {
    if (!is_density_matrix(rho)) {
        throw InvalidArgument("apply_dephasing: input is not a density matrix");
    }
    if (!(gamma >= 0.0)) {
        throw InvalidArgument("apply_dephasing: gamma must be non-negative");
    }
    const double decay = std::isinf(gamma) ? 0.0 : std::exp(-gamma);
    Mat2 out = rho;
    out(0, 1) *= decay;
    out(1, 0) *= decay;
    return out;
}

} // namespace coarse_metrology::oracle
