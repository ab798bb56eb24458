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
#include <array>
#include <cmath>
#include <complex>

namespace coarse_metrology::oracle {

using complex_t = std::complex<double>;

/// Dense 2x2 complex matrix, row-major.
struct Mat2 {
    std::array<complex_t, 4> m{};

    constexpr complex_t &operator()(int r, int c) noexcept { return m[2 * r + c]; }
    constexpr const complex_t &operator()(int r, int c) const noexcept { return m[2 * r + c]; }

    static constexpr Mat2 identity() noexcept { return {{1.0, 0.0, 0.0, 1.0}}; }
    static constexpr Mat2 zero() noexcept { return {}; }

    [[nodiscard]] complex_t trace() const noexcept { return m[0] + m[3]; }
    [[nodiscard]] complex_t det() const noexcept { return m[0] * m[3] - m[1] * m[2]; }

    [[nodiscard]] Mat2 adjoint() const noexcept {
        return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}};
    }
};

inline Mat2 operator+(const Mat2 &a, const Mat2 &b) noexcept {
    Mat2 r;
    for (int i = 0; i < 4; ++i) r.m[i] = a.m[i] + b.m[i];
    return r;
}

inline Mat2 operator-(const Mat2 &a, const Mat2 &b) noexcept {
    Mat2 r;
    for (int i = 0; i < 4; ++i) r.m[i] = a.m[i] - b.m[i];
    return r;
}

inline Mat2 operator*(complex_t s, const Mat2 &a) noexcept {
    Mat2 r;
    for (int i = 0; i < 4; ++i) r.m[i] = s * a.m[i];
    return r;
}

inline Mat2 operator*(const Mat2 &a, const Mat2 &b) noexcept {
    Mat2 r;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
        }
    }
    return r;
}

/// Largest entrywise modulus of a - b.
inline double max_abs_diff(const Mat2 &a, const Mat2 &b) noexcept {
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(a.m[i] - b.m[i]));
    return worst;
}

inline bool is_hermitian(const Mat2 &a, double tol) noexcept {
    return max_abs_diff(a, a.adjoint()) <= tol;
}

/// Hermitian 2x2 is PSD iff both eigenvalues are >= -tol.
inline bool is_positive_semidefinite(const Mat2 &a, double tol) noexcept {
    if (!is_hermitian(a, tol)) return false;
    const double tr = a.trace().real();
    const double dt = a.det().real();
    const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - dt));
    return 0.5 * tr - disc >= -tol;
}

/// Principal square root of a 2x2 positive semidefinite matrix:
/// sqrt(M) = (M + s I) / sqrt(tr M + 2 s), s = sqrt(det M).
inline Mat2 sqrt_psd(const Mat2 &a) noexcept {
    const double s = std::sqrt(std::max(0.0, a.det().real()));
    const double t = std::sqrt(std::max(0.0, a.trace().real() + 2.0 * s));
    if (t == 0.0) return Mat2::zero();
    return complex_t(1.0 / t) * (a + complex_t(s) * Mat2::identity());
}

} // namespace coarse_metrology::oracle
