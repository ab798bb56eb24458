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
#include <limits>
#include <numbers>

#include "coarse_metrology/error.hpp"
#include "coarse_metrology/numerics/quadrature.hpp"

namespace coarse_metrology::numerics {

/// Integrals against Gaussian weights are cut at this many standard
/// deviations from the center; the discarded mass is below 1.3e-15.
inline constexpr double kGaussianWindow = 8.0;

/// Normalized zero-mean Gaussian over the real line, used to smear a
/// reference angle.
class GaussianKernel {
  public:
    explicit GaussianKernel(double sigma) : sigma_(sigma) {
        if (!(sigma > 0.0) || !std::isfinite(sigma)) {
            throw InvalidArgument("Gaussian kernel width must be positive and finite");
        }
    }

    [[nodiscard]] double sigma() const noexcept { return sigma_; }

    [[nodiscard]] double density(double theta) const noexcept {
        const double z = theta / sigma_;
        return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * sigma_);
    }

  private:
    double sigma_;
};

/// Gaussian law of the interrogation time, renormalized to [0, inf).
/// A zero width is the point mass at the center.
class TruncatedGaussianTime {
  public:
    TruncatedGaussianTime(double center, double width) : center_(center), width_(width) {
        if (!(center >= 0.0) || !std::isfinite(center)) {
            throw InvalidArgument("time center must be finite and non-negative");
        }
        if (!(width >= 0.0) || !std::isfinite(width)) {
            throw InvalidArgument("time width must be finite and non-negative");
        }
        if (width_ > 0.0) {
            normalization_ = width_ * std::sqrt(0.5 * std::numbers::pi) *
                             (1.0 + std::erf(center_ / (width_ * std::numbers::sqrt2)));
        }
    }

    [[nodiscard]] double center() const noexcept { return center_; }
    [[nodiscard]] double width() const noexcept { return width_; }
    [[nodiscard]] bool is_point_mass() const noexcept { return width_ == 0.0; }

    /// int_0^inf exp(-(t - center)^2 / (2 width^2)) dt
    [[nodiscard]] double normalization() const noexcept { return normalization_; }

    [[nodiscard]] double density(double t) const noexcept {
        if (t < 0.0 || is_point_mass()) return 0.0;
        const double z = (t - center_) / width_;
        return std::exp(-0.5 * z * z) / normalization_;
    }

  private:
    double center_;
    double width_;
    double normalization_ = 0.0;
};

struct ExpectationHints {
    /// Dominant angular frequency of the integrand, 0 if not oscillatory.
    double oscillation = 0.0;
    /// The integrand is negligible beyond this time; the caller bounds the tail.
    double support_end = std::numeric_limits<double>::infinity();
};

/// <f> over the truncated Gaussian time law.
template <class F>
double truncated_gaussian_expectation(F &&f, const TruncatedGaussianTime &law,
                                      const QuadratureSpec &spec = {},
                                      const ExpectationHints &hints = {}) {
    if (law.is_point_mass()) {
        const double value = f(law.center());
        if (!std::isfinite(value)) {
            throw QuadratureError("integrand is not finite at the point mass",
                                  std::numeric_limits<double>::infinity());
        }
        return value;
    }
    // Integrate in the standardized variable z = (t - center) / width. In t,
    // a tiny width leaves only a few representable points across the window
    // and the density turns into a staircase.
    const double c = law.center();
    const double w = law.width();
    const double z_lo = std::max(-kGaussianWindow, -c / w);
    const double z_hi = std::min(kGaussianWindow, (hints.support_end - c) / w);
    if (!(z_hi > z_lo)) {
        return 0.0;
    }
    const double scale = w / law.normalization();
    auto weighted = [&](double z) {
        const double t = std::max(0.0, c + w * z);
        return f(t) * std::exp(-0.5 * z * z) * scale;
    };
    return integrate(weighted, z_lo, z_hi, spec, hints.oscillation * w).value;
}

/// int lambda(theta) f(theta) dtheta over [-8 sigma, 8 sigma].
template <class F>
double kernel_expectation(F &&f, const GaussianKernel &kernel, const QuadratureSpec &spec = {},
                          double oscillation = 0.0) {
    const double half = kGaussianWindow * kernel.sigma();
    auto weighted = [&](double theta) { return f(theta) * kernel.density(theta); };
    return integrate(weighted, -half, half, spec, oscillation).value;
}

} // namespace coarse_metrology::numerics
