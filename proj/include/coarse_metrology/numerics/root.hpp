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
#include <limits>
#include <string>
#include <utility>

#include "coarse_metrology/error.hpp"

namespace coarse_metrology::numerics {

/// Brent's method: bisection safeguarding inverse-quadratic / secant steps.
///
/// Requires g(lo) * g(hi) <= 0 and returns a point inside [lo, hi]. The
/// bracket shrinks until it is narrower than max(rel_tol * |x|, abs_tol).
/// An endpoint where g vanishes exactly is returned as-is.
template <class G>
double find_root(G &&g, double lo, double hi, double rel_tol = 1e-12, double abs_tol = 0.0,
                 int max_iterations = 500) {
    if (!(lo <= hi)) {
        std::swap(lo, hi);
    }
    if (!(rel_tol > 0.0)) {
        throw InvalidArgument("root finder needs a positive relative tolerance");
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (!(abs_tol > 0.0)) {
        abs_tol = 4.0 * eps * std::max(std::abs(lo), std::abs(hi));
        if (abs_tol == 0.0) abs_tol = std::numeric_limits<double>::min();
    }

    double a = lo;
    double b = hi;
    double fa = g(a);
    double fb = g(b);
    if (std::isnan(fa) || std::isnan(fb)) {
        throw InvalidArgument("root finder: function is NaN at a bracket end");
    }
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) {
        throw NoSignChange("no sign change in [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
    }

    double c = a;
    double fc = fa;
    double d = b - a;
    double e = d;
    for (int iter = 0; iter < max_iterations; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol = 2.0 * eps * std::abs(b) + 0.5 * std::max(rel_tol * std::abs(b), abs_tol);
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0) {
            return b;
        }
        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            double p;
            double q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) {
                q = -q;
            } else {
                p = -p;
            }
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
        fb = g(b);
        if (std::isnan(fb)) {
            throw InvalidArgument("root finder: function is NaN at " + std::to_string(b));
        }
    }
    return b;
}

} // namespace coarse_metrology::numerics
