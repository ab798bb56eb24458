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
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "coarse_metrology/error.hpp"

namespace coarse_metrology::numerics {

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_subdivisions = 10'000;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
            throw InvalidArgument("quadrature tolerances must be positive");
        }
        if (max_subdivisions < 1) {
            throw InvalidArgument("quadrature needs at least one subdivision");
        }
    }
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int subdivisions = 0;
};

namespace detail {

// 15-point Kronrod abscissae on [0, 1]; odd indices are the embedded 7-point Gauss nodes.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    double abs_value;

    bool operator<(const Panel &other) const noexcept { return error < other.error; }
};

template <class F> Panel gauss_kronrod15(F &f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    auto eval = [&](double x) {
        const double y = f(x);
        if (!std::isfinite(y)) {
            throw QuadratureError("integrand is not finite at x = " + std::to_string(x),
                                  std::numeric_limits<double>::infinity());
        }
        return y;
    };

    const double fc = eval(center);
    std::array<double, 7> left{};
    std::array<double, 7> right{};
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    double abs_sum = std::abs(kronrod);
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        left[j] = eval(center - dx);
        right[j] = eval(center + dx);
        const double pair = left[j] + right[j];
        kronrod += kKronrodWeights[j] * pair;
        abs_sum += kKronrodWeights[j] * (std::abs(left[j]) + std::abs(right[j]));
        if (j % 2 == 1) {
            gauss += kGaussWeights[j / 2] * pair;
        }
    }

    // Error scaling follows QUADPACK's qk15; the raw |K - G| overestimates badly.
    const double mean = 0.5 * kronrod;
    double asc = kKronrodWeights[7] * std::abs(fc - mean);
    for (std::size_t j = 0; j < 7; ++j) {
        asc += kKronrodWeights[j] * (std::abs(left[j] - mean) + std::abs(right[j] - mean));
    }
    const double resasc = asc * half;
    double err = std::abs((kronrod - gauss) * half);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    return {a, b, kronrod * half, err, abs_sum * half};
}

} // namespace detail

/// Globally adaptive 15-point Gauss-Kronrod quadrature of f over [a, b].
///
/// `oscillation` is the dominant angular frequency of f. When positive the
/// interval is pre-split so that every period holds at least 20 panels.
/// Convergence is declared once the summed error estimate is below
/// max(abs_tol, rel_tol * |I|), or below the roundoff floor 50 eps * int |f|.
template <class F>
QuadratureResult integrate(F &&f, double a, double b, const QuadratureSpec &spec = {},
                           double oscillation = 0.0) {
    spec.validate();
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw InvalidArgument("integration limits must be finite");
    }
    if (a == b) {
        return {0.0, 0.0, 0};
    }
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }

    std::size_t initial = 1;
    if (oscillation > 0.0) {
        const double periods = (b - a) * oscillation / (2.0 * std::numbers::pi);
        initial = static_cast<std::size_t>(std::ceil(20.0 * periods));
        initial = std::max<std::size_t>(initial, 1);
    }
    if (initial > static_cast<std::size_t>(spec.max_subdivisions)) {
        throw QuadratureError("oscillation hint requires " + std::to_string(initial) +
                                  " panels, more than max_subdivisions = " +
                                  std::to_string(spec.max_subdivisions),
                              std::numeric_limits<double>::infinity());
    }

    std::vector<detail::Panel> panels;
    panels.reserve(initial + 64);
    const double width = (b - a) / static_cast<double>(initial);
    for (std::size_t i = 0; i < initial; ++i) {
        const double lo = a + width * static_cast<double>(i);
        const double hi = (i + 1 == initial) ? b : a + width * static_cast<double>(i + 1);
        panels.push_back(detail::gauss_kronrod15(f, lo, hi));
    }
    std::make_heap(panels.begin(), panels.end());

    double value = 0.0;
    double error = 0.0;
    double abs_value = 0.0;
    auto resum = [&]() {
        value = error = abs_value = 0.0;
        for (const auto &p : panels) {
            value += p.value;
            error += p.error;
            abs_value += p.abs_value;
        }
    };
    constexpr double eps = std::numeric_limits<double>::epsilon();
    auto converged = [&]() {
        const double target =
            std::max({spec.abs_tol, spec.rel_tol * std::abs(value), 50.0 * eps * abs_value});
        return error <= target;
    };

    resum();
    int count = static_cast<int>(panels.size());
    while (true) {
        // Running sums drift; confirm with an exact resum before stopping.
        if (converged()) {
            resum();
            if (converged()) break;
        }
        if (count >= spec.max_subdivisions) {
            resum();
            throw QuadratureError("quadrature did not converge within " +
                                      std::to_string(spec.max_subdivisions) +
                                      " subdivisions (error estimate " + std::to_string(error) +
                                      ")",
                                  error);
        }
        std::pop_heap(panels.begin(), panels.end());
        const detail::Panel worst = panels.back();
        panels.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw QuadratureError("quadrature panel cannot be split further", error);
        }
        const detail::Panel lower = detail::gauss_kronrod15(f, worst.a, mid);
        const detail::Panel upper = detail::gauss_kronrod15(f, mid, worst.b);
        value += lower.value + upper.value - worst.value;
        error += lower.error + upper.error - worst.error;
        abs_value += lower.abs_value + upper.abs_value - worst.abs_value;
        panels.push_back(lower);
        std::push_heap(panels.begin(), panels.end());
        panels.push_back(upper);
        std::push_heap(panels.begin(), panels.end());
        ++count;
    }

    return {sign * value, error, count};
}

} // namespace coarse_metrology::numerics
