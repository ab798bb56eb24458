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
#include <cstdint>
#include <random>
#include <string>

#include "coarse_metrology/error.hpp"
#include "coarse_metrology/types.hpp"

namespace coarse_metrology::oracle {

struct OutcomeCounts {
    std::int64_t even = 0;
    std::int64_t odd = 0;

    [[nodiscard]] std::int64_t shots() const noexcept { return even + odd; }
    friend bool operator==(const OutcomeCounts &, const OutcomeCounts &) = default;
};

/// Draws `shots` parity outcomes from an explicit generator.
inline OutcomeCounts sample_outcomes(const ParityDistribution &dist, std::int64_t shots,
                                     std::mt19937_64 &rng) {
    if (shots < 1) {
        throw InvalidArgument("need at least one shot");
    }
    const double p = std::clamp(dist.p_even, 0.0, 1.0);
    std::binomial_distribution<std::int64_t> draw(shots, p);
    const std::int64_t even = draw(rng);
    return {even, shots - even};
}

inline OutcomeCounts sample_outcomes(const ParityDistribution &dist, std::int64_t shots,
                                     std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return sample_outcomes(dist, shots, rng);
}

/// Log-likelihood of `counts` under p_even = p, shifted by the saturated
/// model so that it is ~0 at the optimum (keeps the flat maximum resolvable).
inline double relative_log_likelihood(const OutcomeCounts &counts, double p) {
    const double n = static_cast<double>(counts.shots());
    const double f = static_cast<double>(counts.even) / n;
    double value = 0.0;
    if (counts.even > 0) {
        if (p <= 0.0) return -INFINITY;
        value += static_cast<double>(counts.even) * std::log1p((p - f) / f);
    }
    if (counts.odd > 0) {
        if (p >= 1.0) return -INFINITY;
        value += static_cast<double>(counts.odd) * std::log1p((f - p) / (1.0 - f));
    }
    return value;
}

/// Maximum-likelihood phase from parity counts, by golden-section search of
/// the binomial likelihood over [lo, hi]. The model must be monotone or
/// unimodal in the bracket; an optimum pinned to an end is rejected.
template <class Model>
double mle_phase(const OutcomeCounts &counts, Model &&model, double lo, double hi,
                 double tol = 1e-10) {
    if (counts.shots() < 1) {
        throw InvalidArgument("mle_phase needs at least one shot");
    }
    if (!(lo < hi)) {
        throw InvalidArgument("mle_phase needs lo < hi");
    }
    auto objective = [&](double phi) {
        return relative_log_likelihood(counts, std::clamp(model(phi), 0.0, 1.0));
    };
    constexpr double inv_phi = 0.6180339887498948482;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
    }
    const double estimate = 0.5 * (a + b);
    const double edge = 4.0 * tol;
    if (estimate - lo <= edge || hi - estimate <= edge) {
        throw Error("likelihood has no interior optimum in [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "]");
    }
    return estimate;
}

} // namespace coarse_metrology::oracle
