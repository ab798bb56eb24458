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

#include <algorithm>
#include <cmath>
#include <concepts>
#include <string>

#include "coarse_metrology/error.hpp"

namespace coarse_metrology::numerics {

/// Probabilities may stray outside [0, 1] by this much before we complain.
inline constexpr double kProbabilitySlack = 1e-12;

/// Below this value of p(1 - p) the two-outcome model sits on a boundary
/// point (p' must vanish there) and the Fisher ratio is evaluated by its
/// second-order limit 2|p''| instead of 0/0.
inline constexpr double kBoundaryVariance = 1e-12;

inline double default_fisher_step(double x) noexcept { return 1e-6 * std::max(1.0, std::abs(x)); }

namespace detail {

inline double checked_probability(double p, double x) {
    if (!(p >= -kProbabilitySlack && p <= 1.0 + kProbabilitySlack)) {
        throw InvalidArgument("probability " + std::to_string(p) + " outside [0, 1] at x = " +
                              std::to_string(x));
    }
    return std::clamp(p, 0.0, 1.0);
}

template <class P> double boundary_limit(P &p, double x, double p0) {
    const double h = 1e-4 * std::max(1.0, std::abs(x));
    const double up = checked_probability(p(x + h), x + h);
    const double down = checked_probability(p(x - h), x - h);
    const double second = (up - 2.0 * p0 + down) / (h * h);
    return 2.0 * std::abs(second);
}

} // namespace detail

/// Fisher information of a two-outcome law {p(x), 1 - p(x)} with a
/// caller-supplied derivative dp.
template <class P, class DP>
    requires std::invocable<DP &, double>
double fisher_two_outcome(P &&p, DP &&dp, double x) {
    const double p0 = detail::checked_probability(p(x), x);
    const double variance = p0 * (1.0 - p0);
    if (variance <= kBoundaryVariance) {
        return detail::boundary_limit(p, x, p0);
    }
    const double slope = dp(x);
    return slope * slope / variance;
}

/// Same, with p' from a central difference of step dx.
template <class P> double fisher_two_outcome(P &&p, double x, double dx) {
    if (!(dx > 0.0)) {
        throw InvalidArgument("finite-difference step must be positive");
    }
    auto central = [&](double at) {
        const double up = detail::checked_probability(p(at + dx), at + dx);
        const double down = detail::checked_probability(p(at - dx), at - dx);
        return (up - down) / (2.0 * dx);
    };
    return fisher_two_outcome(p, central, x);
}

template <class P> double fisher_two_outcome(P &&p, double x) {
    return fisher_two_outcome(p, x, default_fisher_step(x));
}

} // namespace coarse_metrology::numerics
