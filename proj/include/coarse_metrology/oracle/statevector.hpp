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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <bit>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "coarse_metrology/error.hpp"
#include "coarse_metrology/oracle/mat2.hpp"
#include "coarse_metrology/types.hpp"

namespace coarse_metrology::oracle {

/// Statevector cost is 2^n amplitudes; closed forms cover larger n.
inline constexpr int kMaxOracleQubits = 12;

struct ProbeStateSpec {
    StateKind kind = StateKind::GHZ;
    int n = 1;
    /// Per-qubit phase; GHZ and alternating states carry e^{i n phase}.
    double phase = 0.0;
};

using Amplitudes = std::vector<complex_t>;

/// Bit position of 1-based qubit k in a basis index. Qubit 1 is the most
/// significant bit, so |q1 q2 ... qn> reads left to right.
inline constexpr unsigned qubit_shift(int n, int qubit) noexcept {
    return static_cast<unsigned>(n - qubit);
}

inline void check_qubit_count(int n) {
    if (n < 1) {
        throw InvalidArgument("oracle needs at least one qubit");
    }
    if (n > kMaxOracleQubits) {
        throw InvalidArgument("oracle is capped at " + std::to_string(kMaxOracleQubits) +
                              " qubits, got n = " + std::to_string(n));
    }
}

/// |0101...>: odd-numbered qubits in |0>, even-numbered in |1>.
inline std::size_t alternating_index(int n) noexcept {
    std::size_t index = 0;
    for (int k = 2; k <= n; k += 2) index |= std::size_t{1} << qubit_shift(n, k);
    return index;
}

inline Amplitudes build_probe_state(const ProbeStateSpec &spec) {
    check_qubit_count(spec.n);
    const int n = spec.n;
    const std::size_t dim = std::size_t{1} << n;
    const std::size_t all_ones = dim - 1;
    Amplitudes psi(dim, complex_t{0.0, 0.0});
    const double r = std::numbers::sqrt2 / 2.0;
    const complex_t collective = std::polar(r, n * spec.phase);

    switch (spec.kind) {
    case StateKind::GHZ:
        psi[0] = r;
        psi[all_ones] += collective;
        break;
    case StateKind::Alternating: {
        const std::size_t a = alternating_index(n);
        psi[a] = r;
        psi[a ^ all_ones] += collective;
        break;
    }
    case StateKind::Product: {
        const double scale = std::pow(0.5, 0.5 * n);
        for (std::size_t x = 0; x < dim; ++x) {
            psi[x] = std::polar(scale, spec.phase * std::popcount(x));
        }
        break;
    }
    }
    return psi;
}

inline int qubit_count(std::span<const complex_t> psi) {
    const std::size_t dim = psi.size();
    if (dim < 2 || (dim & (dim - 1)) != 0) {
        throw InvalidArgument("amplitude vector length must be a power of two");
    }
    return std::countr_zero(dim);
}

/// psi <- (1 x ... x U_qubit x ... x 1) psi.
inline void apply_single_qubit(std::span<complex_t> psi, int qubit, const Mat2 &u) {
    const int n = qubit_count(psi);
    const std::size_t bit = std::size_t{1} << qubit_shift(n, qubit);
    for (std::size_t x = 0; x < psi.size(); ++x) {
        if (x & bit) continue;
        const complex_t a0 = psi[x];
        const complex_t a1 = psi[x | bit];
        psi[x] = u(0, 0) * a0 + u(0, 1) * a1;
        psi[x | bit] = u(1, 0) * a0 + u(1, 1) * a1;
    }
}

/// Relabels qubits: qubit k of the input becomes qubit perm[k-1] of the output.
inline Amplitudes permute_qubits(std::span<const complex_t> psi, std::span<const int> perm) {
    const int n = qubit_count(psi);
    if (static_cast<int>(perm.size()) != n) {
        throw InvalidArgument("permutation size does not match qubit count");
    }
    Amplitudes out(psi.size());
    for (std::size_t x = 0; x < psi.size(); ++x) {
        std::size_t y = 0;
        for (int k = 1; k <= n; ++k) {
            if (x >> qubit_shift(n, k) & 1U) y |= std::size_t{1} << qubit_shift(n, perm[k - 1]);
        }
        out[y] = psi[x];
    }
    return out;
}

inline double norm_squared(std::span<const complex_t> psi) noexcept {
    double s = 0.0;
    for (const auto &a : psi) s += std::norm(a);
    return s;
}

} // namespace coarse_metrology::oracle
