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
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

#include "coarse_metrology/error.hpp"
#include "coarse_metrology/numerics/argmax.hpp"
#include "coarse_metrology/types.hpp"

namespace coarse_metrology::phase {

/// Phase estimation with n probes read out against a Gaussian-coarsened
/// reference basis of spread `delta`, repeated `experiments` times.
struct PhaseScenario {
    StateKind state = StateKind::GHZ;
    int n = 1;
    ReferenceKind reference = ReferenceKind::Common;
    double delta = 0.0;
    std::int64_t experiments = 1;

    void validate() const {
        if (n < 1) throw InvalidArgument("particle number must be >= 1");
        if (!(delta >= 0.0) || !std::isfinite(delta)) {
            throw InvalidArgument("reference spread must be finite and >= 0");
        }
        if (experiments < 1) throw InvalidArgument("experiment count must be >= 1");
        if (state == StateKind::Alternating && reference == ReferenceKind::Independent) {
            throw UnsupportedScenario(
                "alternating probes under independent references are not modelled");
        }
    }
};

/// Multiplier of the phase inside the fringe: n for collective (GHZ,
/// alternating) probes, 1 for product probes which are read qubit by qubit.
inline int fringe_multiplier(const PhaseScenario &s) noexcept {
    return s.state == StateKind::Product ? 1 : s.n;
}

/// Fringe visibility V in p_even = (1 + V cos(m phi)) / 2.
inline double visibility(const PhaseScenario &s) {
    s.validate();
    const double d2 = s.delta * s.delta;
    const double n = s.n;
    if (s.reference == ReferenceKind::Perfect || s.delta == 0.0) return 1.0;
    switch (s.state) {
    case StateKind::Product:
        return std::exp(-d2);
    case StateKind::GHZ:
        return s.reference == ReferenceKind::Common ? std::exp(-n * n * d2) : std::exp(-n * d2);
    case StateKind::Alternating:
        // A common rotation cancels between |0101..> and |1010..> when n is even.
        return s.n % 2 == 0 ? 1.0 : std::exp(-d2);
    }
    return 1.0;
}

inline ParityDistribution parity_probabilities(const PhaseScenario &s, double phi) {
    const double v = visibility(s);
    const double c = v * std::cos(fringe_multiplier(s) * phi);
    return {0.5 * (1.0 + c), 0.5 * (1.0 - c)};
}

/// d p_even / d phi.
inline double parity_slope(const PhaseScenario &s, double phi) {
    const int m = fringe_multiplier(s);
    return -0.5 * m * visibility(s) * std::sin(m * phi);
}

/// Fisher information about phi carried by the whole probe. Product probes
/// add the information of n independent single-qubit fringes.
inline double fisher_phase(const PhaseScenario &s, double phi) {
    const double v = visibility(s);
    const double m = fringe_multiplier(s);
    const double copies = s.state == StateKind::Product ? s.n : 1.0;
    if (v == 1.0) {
        // sin^2 / (1 - cos^2) = 1, including its removable dark-fringe limit.
        return copies * m * m;
    }
    const double sn = std::sin(m * phi);
    const double cs = std::cos(m * phi);
    const double v2 = v * v;
    return copies * m * m * sn * sn * v2 / (1.0 - cs * cs * v2);
}

/// Operating point m phi = pi / 2.
inline double optimal_phase(const PhaseScenario &s) {
    return std::numbers::pi / (2.0 * fringe_multiplier(s));
}

/// Cramer-Rao resolution 1 / sqrt(N F). Infinite when F = 0.
inline double resolution_phase(const PhaseScenario &s, double phi) {
    const double f = fisher_phase(s, phi);
    if (!(f > 0.0)) return std::numeric_limits<double>::infinity();
    return 1.0 / std::sqrt(static_cast<double>(s.experiments) * f);
}

inline double resolution_phase_optimal(const PhaseScenario &s) {
    return resolution_phase(s, optimal_phase(s));
}

struct ParticleOptimum {
    std::int64_t n = 1;
    /// Stationary point of the continuous objective; infinite for delta = 0.
    double continuous = 0.0;
    /// Fisher information n^2 V(n)^2 at the integer optimum.
    double fisher = 0.0;
    /// The scan hit n_max, so no finite optimum was found.
    bool at_boundary = false;
};

/// Integer n maximizing the GHZ Fisher information at its optimal phase.
inline ParticleOptimum optimal_particles(ReferenceKind reference, double delta,
                                         std::int64_t n_max) {
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw InvalidArgument("reference spread must be finite and >= 0");
    }
    if (reference == ReferenceKind::Perfect) delta = 0.0;
    const double d2 = delta * delta;
    const bool common = reference == ReferenceKind::Common;
    auto objective = [&](std::int64_t n) {
        const double x = static_cast<double>(n);
        const double exponent = common ? x * x * d2 : x * d2;
        return x * x * std::exp(-2.0 * exponent);
    };
    const auto best = numerics::integer_argmax(objective, n_max);
    ParticleOptimum out;
    out.n = best.n;
    out.fisher = best.value;
    out.at_boundary = best.at_boundary;
    if (delta == 0.0) {
        out.continuous = std::numeric_limits<double>::infinity();
    } else {
        out.continuous = common ? 1.0 / (std::numbers::sqrt2 * delta) : 1.0 / d2;
    }
    return out;
}

} // namespace coarse_metrology::phase
