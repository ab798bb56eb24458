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
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coarse_metrology/error.hpp"
#include "coarse_metrology/numerics/distributions.hpp"
#include "coarse_metrology/numerics/root.hpp"
#include "coarse_metrology/types.hpp"

namespace coarse_metrology::frequency {

/// gamma(t) = gamma0 * t^exponent. Exponent 1 is Markovian dephasing,
/// exponent 2 the short-time non-Markovian law. gamma0 keeps its name for
/// both even though its units differ.
struct DephasingModel {
    double gamma0 = 1.0;
    int exponent = 1;

    void validate() const {
        if (!(gamma0 >= 0.0) || !std::isfinite(gamma0)) {
            throw InvalidArgument("gamma0 must be finite and >= 0");
        }
        if (exponent != 1 && exponent != 2) {
            throw InvalidArgument("dephasing exponent must be 1 or 2");
        }
    }

    [[nodiscard]] bool markovian() const noexcept { return exponent == 1; }
};

inline double gamma(const DephasingModel &model, double t) {
    model.validate();
    if (!(t >= 0.0)) throw InvalidArgument("gamma(t) needs t >= 0");
    return model.gamma0 * std::pow(t, model.exponent);
}

inline double gamma_rate(const DephasingModel &model, double t) {
    model.validate();
    if (!(t >= 0.0)) throw InvalidArgument("gamma'(t) needs t >= 0");
    return model.gamma0 * model.exponent * std::pow(t, model.exponent - 1);
}

/// Phase-accumulation multiplicity: 1 for product probes, n for GHZ probes.
inline double multiplicity(StateKind state, std::int64_t n) {
    switch (state) {
    case StateKind::Product:
        return 1.0;
    case StateKind::GHZ:
        return static_cast<double>(n);
    case StateKind::Alternating:
        break;
    }
    throw UnsupportedScenario("frequency estimation is defined for product and GHZ probes only");
}

/// Closed-form solution of 2 m t gamma'(t) = 1.
inline double optimal_t0_closed_form(const DephasingModel &model, std::int64_t n,
                                     bool entangled) {
    model.validate();
    const double m = entangled ? static_cast<double>(n) : 1.0;
    if (model.gamma0 == 0.0) {
        throw DivergenceError("no finite optimal interrogation time without dephasing");
    }
    return model.markovian() ? 1.0 / (2.0 * m * model.gamma0)
                             : 1.0 / (2.0 * std::sqrt(m * model.gamma0));
}

/// Optimal interrogation time: root of 2 m t gamma'(t) = 1 with m = n for
/// entangled probes and m = 1 otherwise.
inline double optimal_t0(const DephasingModel &model, std::int64_t n, bool entangled) {
    model.validate();
    if (n < 1) throw InvalidArgument("particle number must be >= 1");
    if (model.gamma0 == 0.0) {
        throw DivergenceError("no finite optimal interrogation time without dephasing");
    }
    const double m = entangled ? static_cast<double>(n) : 1.0;
    auto condition = [&](double t) { return 2.0 * m * t * gamma_rate(model, t) - 1.0; };
    double hi = 1.0;
    while (condition(hi) < 0.0) {
        hi *= 2.0;
        if (!std::isfinite(hi)) throw DivergenceError("optimal interrogation time diverges");
    }
    return numerics::find_root(condition, 0.0, hi, 1e-15);
}

struct FrequencyScenario {
    StateKind state = StateKind::Product;
    std::int64_t n = 1;
    DephasingModel dephasing;
    double total_time = 1.0;
    numerics::TruncatedGaussianTime jitter{1.0, 0.0};
    /// Detuning phi between oscillator and probe, in rad per unit time.
    double detuning = 0.0;

    [[nodiscard]] double m() const { return multiplicity(state, n); }
};

/// Scenario at the k = 1 operating point: t0 optimal and m phi t0 = pi / 2.
inline FrequencyScenario make_scenario(StateKind state, std::int64_t n,
                                       const DephasingModel &model, double total_time,
                                       double delta) {
    if (!(total_time > 0.0)) throw InvalidArgument("total time must be positive");
    const double m = multiplicity(state, n);
    const double t0 = optimal_t0(model, n, state == StateKind::GHZ);
    FrequencyScenario s;
    s.state = state;
    s.n = n;
    s.dephasing = model;
    s.total_time = total_time;
    s.jitter = numerics::TruncatedGaussianTime(t0, delta);
    s.detuning = std::numbers::pi / (2.0 * m * t0);
    return s;
}

/// Same operating point, different time jitter.
inline FrequencyScenario with_jitter(FrequencyScenario s, double delta) {
    s.jitter = numerics::TruncatedGaussianTime(s.jitter.center(), delta);
    return s;
}

namespace detail {

/// Beyond m gamma(t) = 700 every decaying integrand is below e^-700 times
/// its envelope, far under double precision of the retained part.
inline constexpr double kDecayCutoff = 700.0;

inline numerics::ExpectationHints decay_hints(const FrequencyScenario &s) {
    numerics::ExpectationHints hints;
    const double m = s.m();
    hints.oscillation = std::abs(m * s.detuning);
    if (s.dephasing.gamma0 > 0.0) {
        hints.support_end =
            std::pow(kDecayCutoff / (m * s.dephasing.gamma0), 1.0 / s.dephasing.exponent);
    }
    return hints;
}

} // namespace detail

struct SignalAverages {
    /// <cos(m phi t) e^{-m gamma(t)}>
    double coherence = 0.0;
    /// <t sin(m phi t) e^{-m gamma(t)}>
    double slope = 0.0;
    /// <t>
    double mean_time = 0.0;
};

inline SignalAverages signal_averages(const FrequencyScenario &s,
                                      const numerics::QuadratureSpec &quad = {}) {
    s.dephasing.validate();
    const double m = s.m();
    const double w = m * s.detuning;
    const auto hints = detail::decay_hints(s);
    auto coherence = [&](double t) {
        return std::cos(w * t) * std::exp(-m * gamma(s.dephasing, t));
    };
    auto slope = [&](double t) {
        return t * std::sin(w * t) * std::exp(-m * gamma(s.dephasing, t));
    };
    auto time = [](double t) { return t; };
    SignalAverages out;
    out.coherence = numerics::truncated_gaussian_expectation(coherence, s.jitter, quad, hints);
    out.slope = numerics::truncated_gaussian_expectation(slope, s.jitter, quad, hints);
    out.mean_time = numerics::truncated_gaussian_expectation(time, s.jitter, quad);
    return out;
}

/// Ramsey signal P0 = <(1 + cos(m phi t) e^{-m gamma(t)}) / 2>.
inline double ramsey_signal(const FrequencyScenario &s, const numerics::QuadratureSpec &quad = {}) {
    s.dephasing.validate();
    const double m = s.m();
    auto coherence = [&](double t) {
        return std::cos(m * s.detuning * t) * std::exp(-m * gamma(s.dephasing, t));
    };
    const double c = numerics::truncated_gaussian_expectation(coherence, s.jitter, quad,
                                                              detail::decay_hints(s));
    return 0.5 * (1.0 + c);
}

struct FrequencyVariance {
    /// delta omega^2; +inf when the slope average underflows.
    double value = 0.0;
    bool finite = true;
    std::string diagnostic;
};

inline constexpr double kSlopeUnderflow = 1e-300;

/// delta omega^2 = [1 - <cos e^{-m gamma}>^2] <t> / (n m T <t sin e^{-m gamma}>^2).
inline FrequencyVariance freq_variance(const FrequencyScenario &s,
                                       const numerics::QuadratureSpec &quad = {}) {
    const SignalAverages avg = signal_averages(s, quad);
    const double denom = static_cast<double>(s.n) * s.m() * s.total_time * avg.slope * avg.slope;
    if (!(std::abs(denom) > kSlopeUnderflow)) {
        return {std::numeric_limits<double>::infinity(), false,
                "signal slope average underflowed (" + std::to_string(avg.slope) +
                    "); no frequency information at delta = " +
                    std::to_string(s.jitter.width())};
    }
    return {(1.0 - avg.coherence * avg.coherence) * avg.mean_time / denom, true, {}};
}

struct CurveRow {
    double delta = 0.0;
    double dw2 = 0.0;
};

struct PrecisionCurve {
    std::vector<CurveRow> rows;
};

/// Grid for precision curves: 0 followed by `points` log-spaced values in
/// [delta_min, delta_max].
inline std::vector<double> log_delta_grid(double delta_min, double delta_max, int points) {
    if (!(delta_min > 0.0) || !(delta_max > delta_min) || points < 2) {
        throw InvalidArgument("log grid needs 0 < delta_min < delta_max and >= 2 points");
    }
    std::vector<double> grid{0.0};
    const double a = std::log(delta_min);
    const double b = std::log(delta_max);
    for (int i = 0; i < points; ++i) {
        grid.push_back(std::exp(a + (b - a) * i / (points - 1)));
    }
    grid.back() = delta_max;
    return grid;
}

inline constexpr double kDefaultGridMin = 1e-6;
inline constexpr int kDefaultGridPoints = 60;

/// 0 plus 60 log-spaced points up to 4 t0 of the product probe.
inline std::vector<double> default_delta_grid(double product_t0) {
    return log_delta_grid(kDefaultGridMin, 4.0 * product_t0, kDefaultGridPoints);
}

/// delta omega^2 along a strictly increasing grid of jitter widths.
inline PrecisionCurve precision_curve(const FrequencyScenario &base, std::span<const double> deltas,
                                      const numerics::QuadratureSpec &quad = {}) {
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] >= 0.0) || (i > 0 && !(deltas[i] > deltas[i - 1]))) {
            throw InvalidArgument("delta grid must be non-negative and strictly increasing");
        }
    }
    PrecisionCurve curve;
    curve.rows.reserve(deltas.size());
    for (const double d : deltas) {
        try {
            curve.rows.push_back({d, freq_variance(with_jitter(base, d), quad).value});
        } catch (const Error &e) {
            throw Error("precision curve failed at delta = " + std::to_string(d) + ": " +
                        e.what());
        }
    }
    return curve;
}

struct Crossover {
    bool found = false;
    double delta = 0.0;
    /// True when scenario a is the worse (larger variance) one beyond delta.
    bool a_worse_above = false;
};

/// Relative gaps below this count as a tie between two variances.
inline constexpr double kVarianceTie = 1e-9;

/// Jitter width where the variance of `a` crosses that of `b`, searched in
/// [lo, hi] on log(dw2_a / dw2_b). Returns found = false when the sign does
/// not change in the bracket.
inline Crossover crossover_delta(const FrequencyScenario &a, const FrequencyScenario &b,
                                 double lo, double hi,
                                 const numerics::QuadratureSpec &quad = {}) {
    if (!(lo >= 0.0) || !(hi > lo)) {
        throw InvalidArgument("crossover bracket needs 0 <= lo < hi");
    }
    auto log_ratio = [&](double d) {
        const double va = freq_variance(with_jitter(a, d), quad).value;
        const double vb = freq_variance(with_jitter(b, d), quad).value;
        if (std::isinf(va) && std::isinf(vb)) {
            throw Error("both variances diverge at delta = " + std::to_string(d));
        }
        const double r = std::log(va / vb);
        return std::abs(r) <= kVarianceTie ? 0.0 : r;
    };
    const double at_hi = log_ratio(hi);
    if (at_hi == 0.0) {
        return {false, 0.0, false};
    }
    try {
        const double root = numerics::find_root(log_ratio, lo, hi, 1e-10);
        return {true, root, at_hi > 0.0};
    } catch (const NoSignChange &) {
        return {false, 0.0, at_hi > 0.0};
    }
}

} // namespace coarse_metrology::frequency
