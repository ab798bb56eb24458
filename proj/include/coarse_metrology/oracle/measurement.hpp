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

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "coarse_metrology/numerics/distributions.hpp"
#include "coarse_metrology/oracle/mat2.hpp"
#include "coarse_metrology/oracle/statevector.hpp"
#include "coarse_metrology/types.hpp"

namespace coarse_metrology::oracle {

/// The reference rotation is U(theta) = exp(-i c theta sigma_z) with
/// c = 1/sqrt(2). A Gaussian spread Delta in theta then leaves a single-qubit
/// fringe visibility of exactly exp(-Delta^2).
inline constexpr double kRotationScale = std::numbers::sqrt2 / 2.0;

struct ProjectorPair {
    Mat2 plus;
    Mat2 minus;
};

/// Projectors onto U^dagger(theta)|+x> and U^dagger(theta)|-x>.
inline ProjectorPair rotated_x_projectors(double theta) {
    const complex_t phase = std::polar(0.5, 2.0 * kRotationScale * theta);
    const Mat2 plus{{0.5, phase, std::conj(phase), 0.5}};
    const Mat2 minus{{0.5, -phase, -std::conj(phase), 0.5}};
    return {plus, minus};
}

/// Rows are <+x| U(theta) and <-x| U(theta): applying it to a qubit maps the
/// rotated-X readout onto the computational basis (bit 0 = "+", bit 1 = "-").
inline Mat2 rotated_x_readout(double theta) {
    const double r = std::numbers::sqrt2 / 2.0;
    const complex_t lo = std::polar(r, -kRotationScale * theta);
    const complex_t hi = std::polar(r, kRotationScale * theta);
    return {{lo, hi, lo, -hi}};
}

struct SmearedQubitEffects {
    Mat2 e_plus;
    Mat2 e_minus;
};

/// Gaussian average of rotated_x_projectors, entry by entry.
inline SmearedQubitEffects smeared_qubit_effects(double delta,
                                                 const numerics::QuadratureSpec &quad = {}) {
    if (!(delta >= 0.0)) {
        throw InvalidArgument("reference spread must be non-negative");
    }
    if (delta == 0.0) {
        const auto ideal = rotated_x_projectors(0.0);
        return {ideal.plus, ideal.minus};
    }
    const numerics::GaussianKernel kernel(delta);
    SmearedQubitEffects out;
    for (int entry = 0; entry < 4; ++entry) {
        auto re_plus = [&](double t) { return rotated_x_projectors(t).plus.m[entry].real(); };
        auto im_plus = [&](double t) { return rotated_x_projectors(t).plus.m[entry].imag(); };
        auto re_minus = [&](double t) { return rotated_x_projectors(t).minus.m[entry].real(); };
        auto im_minus = [&](double t) { return rotated_x_projectors(t).minus.m[entry].imag(); };
        out.e_plus.m[entry] = {numerics::kernel_expectation(re_plus, kernel, quad),
                               numerics::kernel_expectation(im_plus, kernel, quad)};
        out.e_minus.m[entry] = {numerics::kernel_expectation(re_minus, kernel, quad),
                                numerics::kernel_expectation(im_minus, kernel, quad)};
    }
    return out;
}

/// Outcome probabilities for all 2^n strings when every qubit is read out in
/// the same rotated-X basis. Index bit for qubit k is 1 for outcome eta_k = 1.
inline std::vector<double> rotated_outcome_distribution(std::span<const complex_t> psi,
                                                        double theta) {
    const int n = qubit_count(psi);
    Amplitudes work(psi.begin(), psi.end());
    const Mat2 readout = rotated_x_readout(theta);
    for (int k = 1; k <= n; ++k) apply_single_qubit(work, k, readout);
    std::vector<double> probs(work.size());
    for (std::size_t x = 0; x < work.size(); ++x) probs[x] = std::norm(work[x]);
    return probs;
}

namespace detail {

inline void branch_outcomes(Amplitudes &work, int n, int qubit, std::size_t prefix,
                            const std::array<Mat2, 2> &kraus, std::vector<double> &probs) {
    if (qubit > n) {
        probs[prefix] = norm_squared(work);
        return;
    }
    for (std::size_t eta = 0; eta < 2; ++eta) {
        Amplitudes branch = work;
        apply_single_qubit(branch, qubit, kraus[eta]);
        branch_outcomes(branch, n, qubit + 1, prefix | (eta << qubit_shift(n, qubit)), kraus,
                        probs);
    }
}

} // namespace detail

/// Outcome probabilities for all 2^n strings under per-qubit effects,
/// p(eta) = <psi| E_eta1 x ... x E_etan |psi>, evaluated by branching on the
/// square roots of the effects.
inline std::vector<double> effect_outcome_distribution(std::span<const complex_t> psi,
                                                       const SmearedQubitEffects &effects) {
    const int n = qubit_count(psi);
    const std::array<Mat2, 2> kraus = {sqrt_psd(effects.e_plus), sqrt_psd(effects.e_minus)};
    std::vector<double> probs(psi.size(), 0.0);
    Amplitudes work(psi.begin(), psi.end());
    detail::branch_outcomes(work, n, 1, 0, kraus, probs);
    return probs;
}

inline ParityDistribution parity_of(std::span<const double> probs) noexcept {
    ParityDistribution d{0.0, 0.0};
    for (std::size_t x = 0; x < probs.size(); ++x) {
        (std::popcount(x) % 2 == 0 ? d.p_even : d.p_odd) += probs[x];
    }
    return d;
}

/// Single-qubit readout law of one qubit, reported as a parity pair
/// (even = outcome "+").
inline ParityDistribution qubit_marginal(std::span<const double> probs, int qubit) {
    const int n = std::countr_zero(probs.size());
    const std::size_t bit = std::size_t{1} << qubit_shift(n, qubit);
    ParityDistribution d{0.0, 0.0};
    for (std::size_t x = 0; x < probs.size(); ++x) {
        ((x & bit) ? d.p_odd : d.p_even) += probs[x];
    }
    return d;
}

/// Reduces a full outcome distribution to the two-outcome law under study.
using OutcomeReducer = std::function<ParityDistribution(std::span<const double>)>;

/// Smeared readout of a prepared state, reduced by `reduce`.
///
/// Common: all qubits share one rotation angle; the reduced law is averaged
/// over the Gaussian kernel. Independent: each qubit sees its own angle, so
/// the smeared single-qubit effects are formed first and combined. Perfect
/// (or delta = 0): the ideal X readout.
inline ParityDistribution smeared_readout(std::span<const complex_t> psi, ReferenceKind reference,
                                          double delta, const OutcomeReducer &reduce,
                                          const numerics::QuadratureSpec &quad = {}) {
    if (!(delta >= 0.0)) {
        throw InvalidArgument("reference spread must be non-negative");
    }
    if (reference == ReferenceKind::Perfect || delta == 0.0) {
        return reduce(rotated_outcome_distribution(psi, 0.0));
    }
    if (reference == ReferenceKind::Independent) {
        return reduce(effect_outcome_distribution(psi, smeared_qubit_effects(delta, quad)));
    }
    const numerics::GaussianKernel kernel(delta);
    auto even = [&](double theta) { return reduce(rotated_outcome_distribution(psi, theta)).p_even; };
    auto odd = [&](double theta) { return reduce(rotated_outcome_distribution(psi, theta)).p_odd; };
    return {numerics::kernel_expectation(even, kernel, quad),
            numerics::kernel_expectation(odd, kernel, quad)};
}

/// Parity law of the probe readout. GHZ and alternating probes use the
/// n-qubit parity; product probes are read qubit by qubit, so the law of
/// qubit 1 is returned (all qubits are identical).
inline ParityDistribution smeared_parity_distribution(const ProbeStateSpec &spec,
                                                      ReferenceKind reference, double delta,
                                                      const numerics::QuadratureSpec &quad = {}) {
    const Amplitudes psi = build_probe_state(spec);
    if (spec.kind == StateKind::Product) {
        return smeared_readout(
            psi, reference, delta, [](std::span<const double> p) { return qubit_marginal(p, 1); },
            quad);
    }
    return smeared_readout(psi, reference, delta,
                           [](std::span<const double> p) { return parity_of(p); }, quad);
}

} // namespace coarse_metrology::oracle
