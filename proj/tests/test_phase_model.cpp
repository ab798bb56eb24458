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

#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "coarse_metrology/numerics.hpp"
#include "coarse_metrology/oracle.hpp"
#include "coarse_metrology/phase_model.hpp"
#include "test_support.hpp"

using namespace coarse_metrology;
using namespace coarse_metrology::phase;
using coarse_metrology::testing::rel_diff;

namespace {

constexpr double kPi = std::numbers::pi;

PhaseScenario scenario(StateKind state, int n, ReferenceKind ref, double delta,
                       std::int64_t experiments = 1) {
    return {state, n, ref, delta, experiments};
}

} // namespace

TEST(PhaseScenario, Validation) {
    EXPECT_THROW(scenario(StateKind::GHZ, 0, ReferenceKind::Common, 0.1).validate(), InvalidArgument);
    EXPECT_THROW(scenario(StateKind::GHZ, 2, ReferenceKind::Common, -0.1).validate(), InvalidArgument);
    EXPECT_THROW(scenario(StateKind::GHZ, 2, ReferenceKind::Common, NAN).validate(), InvalidArgument);
    EXPECT_THROW(scenario(StateKind::GHZ, 2, ReferenceKind::Common, 0.1, 0).validate(), InvalidArgument);
    EXPECT_THROW(scenario(StateKind::Alternating, 2, ReferenceKind::Independent, 0.1).validate(),
                 UnsupportedScenario);
    EXPECT_THROW(visibility(scenario(StateKind::Alternating, 3, ReferenceKind::Independent, 0.1)),
                 UnsupportedScenario);
}

TEST(Visibility, WorkedExamples) {
    EXPECT_EQ(visibility(scenario(StateKind::GHZ, 10, ReferenceKind::Perfect, 0.5)), 1.0);
    EXPECT_NEAR(visibility(scenario(StateKind::GHZ, 2, ReferenceKind::Common, 0.3)), std::exp(-0.36), 1e-15);
    EXPECT_NEAR(visibility(scenario(StateKind::GHZ, 2, ReferenceKind::Independent, 0.3)), std::exp(-0.18), 1e-15);
    EXPECT_NEAR(visibility(scenario(StateKind::Product, 50, ReferenceKind::Common, 0.3)), std::exp(-0.09), 1e-15);
    EXPECT_EQ(visibility(scenario(StateKind::GHZ, 5, ReferenceKind::Common, 0.0)), 1.0);
}

TEST(Visibility, AlternatingEvenOddDichotomy) {
    for (int n = 1; n <= 12; ++n) {
        for (const double delta : {0.05, 0.3, 1.0}) {
            const double v = visibility(scenario(StateKind::Alternating, n, ReferenceKind::Common, delta));
            if (n % 2 == 0) {
                EXPECT_EQ(v, 1.0) << n;
            } else {
                EXPECT_NEAR(v, std::exp(-delta * delta), 1e-15) << n;
            }
        }
    }
}

TEST(ParityProbabilities, WorkedExamples) {
    EXPECT_NEAR(parity_probabilities(scenario(StateKind::GHZ, 4, ReferenceKind::Perfect, 0.0), kPi / 4.0).p_even,
                0.0, 1e-15);
    EXPECT_NEAR(parity_probabilities(scenario(StateKind::GHZ, 2, ReferenceKind::Common, 0.3), 0.0).p_even,
                0.84884, 1e-5);
    EXPECT_NEAR(parity_probabilities(scenario(StateKind::Product, 1, ReferenceKind::Common, 0.2), kPi / 2.0).p_even,
                0.5, 1e-15);
}

TEST(ParityProbabilities, MatchOracleOnGrid) {
    double worst = 0.0;
    for (const auto state : {StateKind::GHZ, StateKind::Product, StateKind::Alternating}) {
        for (const auto ref : {ReferenceKind::Perfect, ReferenceKind::Common, ReferenceKind::Independent}) {
            if (state == StateKind::Alternating && ref == ReferenceKind::Independent) continue;
            for (int n = 1; n <= 8; ++n) {
                for (const double delta : {0.0, 0.1, 0.3}) {
                    const auto s = scenario(state, n, ref, delta);
                    for (const double phi : {0.0, kPi / (4.0 * n), kPi / (2.0 * n), 1.0}) {
                        const auto oracle_dist =
                            oracle::smeared_parity_distribution({state, n, phi}, ref, delta);
                        const double d = std::abs(oracle_dist.p_even - parity_probabilities(s, phi).p_even);
                        worst = std::max(worst, d);
                        ASSERT_LE(d, 1e-8) << to_string(state) << ' ' << to_string(ref) << " n=" << n
                                           << " delta=" << delta << " phi=" << phi;
                    }
                }
            }
        }
    }
    RecordProperty("max_abs_deviation", std::to_string(worst));
}

TEST(FisherPhase, WorkedExamples) {
    EXPECT_EQ(fisher_phase(scenario(StateKind::GHZ, 6, ReferenceKind::Perfect, 0.0), kPi / 12.0), 36.0);
    const double f1 = fisher_phase(scenario(StateKind::GHZ, 1, ReferenceKind::Common, 0.3), kPi / 2.0);
    EXPECT_NEAR(f1, std::exp(-0.18), 1e-14);
    EXPECT_NEAR(f1, 0.83527, 1e-5);
    const double f2 = fisher_phase(scenario(StateKind::GHZ, 2, ReferenceKind::Common, 0.2), kPi / 4.0);
    EXPECT_NEAR(f2, 4.0 * std::exp(-0.32), 1e-13);
    EXPECT_NEAR(f2, 2.9046, 1e-4);
}

TEST(FisherPhase, ProductAddsAcrossQubits) {
    const auto s = scenario(StateKind::Product, 7, ReferenceKind::Independent, 0.2);
    const auto single = scenario(StateKind::Product, 1, ReferenceKind::Independent, 0.2);
    EXPECT_NEAR(fisher_phase(s, 0.9), 7.0 * fisher_phase(single, 0.9), 1e-13);
}

TEST(FisherPhase, AgreesWithFiniteDifferenceFisher) {
    for (const auto state : {StateKind::GHZ, StateKind::Product, StateKind::Alternating}) {
        for (const auto ref : {ReferenceKind::Perfect, ReferenceKind::Common, ReferenceKind::Independent}) {
            if (state == StateKind::Alternating && ref == ReferenceKind::Independent) continue;
            for (int n = 1; n <= 8; ++n) {
                for (const double delta : {0.0, 0.1, 0.3}) {
                    const auto s = scenario(state, n, ref, delta);
                    const double copies = state == StateKind::Product ? n : 1.0;
                    auto p = [&](double phi) { return parity_probabilities(s, phi).p_even; };
                    for (const double phi : {kPi / (8.0 * n), kPi / (2.0 * n), 0.3 / n}) {
                        const double fd = copies * numerics::fisher_two_outcome(p, phi);
                        const double f = fisher_phase(s, phi);
                        EXPECT_LE(rel_diff(fd, f), 1e-6) << to_string(state) << ' ' << to_string(ref)
                                                         << " n=" << n << " delta=" << delta;
                    }
                }
            }
        }
    }
}

TEST(FisherPhase, OracleFiniteDifferenceSpotCheck) {
    const double delta = 0.3;
    for (const auto ref : {ReferenceKind::Common, ReferenceKind::Independent}) {
        for (const int n : {1, 3}) {
            auto p = [&](double phi) {
                return oracle::smeared_parity_distribution({StateKind::GHZ, n, phi}, ref, delta).p_even;
            };
            const double phi = kPi / (2.0 * n);
            const double fd = numerics::fisher_two_outcome(p, phi, 1e-4);
            EXPECT_LE(rel_diff(fd, fisher_phase(scenario(StateKind::GHZ, n, ref, delta), phi)), 1e-5)
                << to_string(ref) << " n=" << n;
        }
    }
}

TEST(FisherPhase, DecaysExponentiallyBeyondOptimum) {
    for (const double delta : {0.05, 0.1, 0.3}) {
        const double n_star = 1.0 / (std::numbers::sqrt2 * delta);
        // Stop before exp(-2 n^2 delta^2) underflows.
        for (int n = 1; 2.0 * (n + 1) * (n + 1) * delta * delta < 600.0; ++n) {
            const auto s = scenario(StateKind::GHZ, n, ReferenceKind::Common, delta);
            const double f = fisher_phase(s, optimal_phase(s));
            EXPECT_NEAR(f * std::exp(2.0 * n * n * delta * delta) / (n * n), 1.0, 1e-12);
            if (n > n_star) {
                const auto next = scenario(StateKind::GHZ, n + 1, ReferenceKind::Common, delta);
                EXPECT_LT(fisher_phase(next, optimal_phase(next)), f) << delta << ' ' << n;
            }
        }
    }
}

TEST(FisherPhase, ProductEventuallyBeatsCommonGhz) {
    for (const double delta : {0.05, 0.1, 0.3}) {
        int last_ghz_win = 0;
        for (int n = 1; n <= 400; ++n) {
            const auto ghz = scenario(StateKind::GHZ, n, ReferenceKind::Common, delta);
            const auto prod = scenario(StateKind::Product, n, ReferenceKind::Common, delta);
            if (fisher_phase(ghz, optimal_phase(ghz)) >= fisher_phase(prod, optimal_phase(prod))) {
                last_ghz_win = n;
            }
        }
        EXPECT_LT(last_ghz_win, 400) << delta;
        EXPECT_GT(last_ghz_win, 1) << delta;
    }
}

TEST(ResolutionPhase, ClosedForms) {
    const std::int64_t big_n = 1000;
    for (const int n : {2, 4, 10}) {
        for (const double delta : {0.1, 0.7, 2.0}) {
            const auto alt = scenario(StateKind::Alternating, n, ReferenceKind::Common, delta, big_n);
            EXPECT_NEAR(resolution_phase_optimal(alt), 1.0 / std::sqrt(double(big_n) * n * n), 1e-15);
        }
    }
    const auto prod = scenario(StateKind::Product, 9, ReferenceKind::Common, 0.0, big_n);
    EXPECT_NEAR(resolution_phase_optimal(prod), 1.0 / std::sqrt(9.0 * big_n), 1e-15);

    const auto prod_coarse = scenario(StateKind::Product, 9, ReferenceKind::Common, 0.4, big_n);
    EXPECT_LT(rel_diff(resolution_phase_optimal(prod_coarse),
                       1.0 / std::sqrt(big_n * 9.0 * std::exp(-2.0 * 0.16))),
              1e-13);
    const auto ghz_ind = scenario(StateKind::GHZ, 9, ReferenceKind::Independent, 0.4, big_n);
    EXPECT_LT(rel_diff(resolution_phase_optimal(ghz_ind),
                       1.0 / std::sqrt(big_n * 81.0 * std::exp(-2.0 * 9 * 0.16))),
              1e-13);
}

TEST(ResolutionPhase, OptimalCommonGhzResolution) {
    const std::int64_t big_n = 500;
    for (const double delta : {0.01, 0.05, 0.1}) {
        const int n = static_cast<int>(std::lround(1.0 / (std::numbers::sqrt2 * delta)));
        const auto s = scenario(StateKind::GHZ, n, ReferenceKind::Common, delta, big_n);
        const double expected = std::sqrt(2.0 * delta * delta * std::numbers::e) / std::sqrt(double(big_n));
        EXPECT_LT(rel_diff(resolution_phase_optimal(s), expected), 0.01) << delta;
    }
}

TEST(ResolutionPhase, CramerRaoConsistency) {
    for (const auto state : {StateKind::GHZ, StateKind::Product}) {
        for (const double phi : {0.1, 0.4, 1.2}) {
            const auto s = scenario(state, 5, ReferenceKind::Independent, 0.2, 37);
            const double r = resolution_phase(s, phi);
            EXPECT_NEAR(r * r * 37.0 * fisher_phase(s, phi), 1.0, 1e-12);
        }
    }
}

TEST(ResolutionPhase, ZeroInformationIsInfinite) {
    const auto s = scenario(StateKind::GHZ, 2, ReferenceKind::Common, 0.3);
    EXPECT_EQ(fisher_phase(s, 0.0), 0.0);
    EXPECT_EQ(resolution_phase(s, 0.0), std::numeric_limits<double>::infinity());
}

TEST(OptimalParticles, WorkedExamples) {
    const auto common = optimal_particles(ReferenceKind::Common, 0.1, 1'000'000);
    EXPECT_EQ(common.n, 7);
    EXPECT_NEAR(common.continuous, 7.0710678, 1e-6);
    EXPECT_FALSE(common.at_boundary);

    const auto indep = optimal_particles(ReferenceKind::Independent, 0.1, 1'000'000);
    EXPECT_EQ(indep.n, 100);
    EXPECT_NEAR(indep.continuous, 100.0, 1e-9);

    EXPECT_EQ(optimal_particles(ReferenceKind::Common, 1.0, 1000).n, 1);
}

TEST(OptimalParticles, MatchesBruteForceScanOfFisher) {
    for (const auto ref : {ReferenceKind::Common, ReferenceKind::Independent}) {
        for (const double delta : {0.03, 0.2, 0.45}) {
            int best = 1;
            double best_f = 0.0;
            for (int n = 1; n <= 3000; ++n) {
                const auto s = scenario(StateKind::GHZ, n, ref, delta);
                const double f = fisher_phase(s, optimal_phase(s));
                if (f > best_f) {
                    best_f = f;
                    best = n;
                }
            }
            const auto opt = optimal_particles(ref, delta, 3000);
            EXPECT_EQ(opt.n, best) << to_string(ref) << ' ' << delta;
            EXPECT_LT(rel_diff(opt.fisher, best_f), 1e-12);
        }
    }
}

TEST(OptimalParticles, NoFiniteOptimumWithoutCoarsening) {
    const auto r = optimal_particles(ReferenceKind::Common, 0.0, 1000);
    EXPECT_TRUE(r.at_boundary);
    EXPECT_EQ(r.n, 1000);
    EXPECT_TRUE(std::isinf(r.continuous));
    EXPECT_THROW(optimal_particles(ReferenceKind::Common, -1.0, 10), InvalidArgument);
}
