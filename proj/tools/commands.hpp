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
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "coarse_metrology/frequency_model.hpp"
#include "coarse_metrology/oracle.hpp"
#include "coarse_metrology/phase_model.hpp"
#include "report.hpp"

namespace coarse_metrology::cli {

inline constexpr std::uint64_t kDefaultSeed = 271828;
inline constexpr const char *kSeedEnvVar = "COARSE_METROLOGY_SEED";

/// Explicit seed wins, then the environment, then kDefaultSeed.
inline std::uint64_t resolve_seed(std::optional<std::uint64_t> explicit_seed) {
    if (explicit_seed) return *explicit_seed;
    if (const char *env = std::getenv(kSeedEnvVar); env && *env) {
        char *end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') return v;
        throw InvalidArgument(std::string(kSeedEnvVar) + " is not an unsigned integer: " + env);
    }
    return kDefaultSeed;
}

/// Parses an angle: a real literal, or [k][*]pi[/m] with optional sign,
/// e.g. "pi/2", "-3*pi/4", "2pi". "optimal" yields nullopt.
inline std::optional<double> parse_angle(const std::string &text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s += static_cast<char>(std::tolower(c));
    }
    if (s == "optimal") return std::nullopt;
    auto to_number = [&](const std::string &part) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(part, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used != part.size() || part.empty()) {
            throw InvalidArgument("cannot parse angle '" + text + "'");
        }
        return v;
    };
    const auto pi_at = s.find("pi");
    if (pi_at == std::string::npos) return to_number(s);

    std::string head = s.substr(0, pi_at);
    std::string tail = s.substr(pi_at + 2);
    double factor = 1.0;
    if (!head.empty() && head.back() == '*') head.pop_back();
    if (head == "-") {
        factor = -1.0;
    } else if (head == "+" || head.empty()) {
        factor = 1.0;
    } else {
        factor = to_number(head);
    }
    double divisor = 1.0;
    if (!tail.empty()) {
        if (tail.front() != '/') throw InvalidArgument("cannot parse angle '" + text + "'");
        divisor = to_number(tail.substr(1));
        if (divisor == 0.0) throw InvalidArgument("angle divides by zero: '" + text + "'");
    }
    return factor * std::numbers::pi / divisor;
}

struct CommandOutcome {
    int exit_code = 0;
    Table table;
    std::string diagnostic;
};

// ---------------------------------------------------------------------------
// phase-fisher

struct PhaseFisherConfig {
    StateKind state = StateKind::GHZ;
    ReferenceKind reference = ReferenceKind::Common;
    std::vector<int> n;
    std::vector<double> delta;
    std::vector<std::string> phi;
    std::int64_t experiments = 1;
};

inline CommandOutcome run_phase_fisher(const PhaseFisherConfig &cfg) {
    CommandOutcome out;
    out.table.columns = {"state", "reference", "n", "delta", "phi", "fisher", "dphi"};
    for (const int n : cfg.n) {
        for (const double delta : cfg.delta) {
            for (const auto &phi_text : cfg.phi) {
                phase::PhaseScenario s{cfg.state, n, cfg.reference, delta, cfg.experiments};
                s.validate();
                const auto parsed = parse_angle(phi_text);
                const double phi = parsed ? *parsed : phase::optimal_phase(s);
                out.table.add({std::string(to_string(cfg.state)),
                               std::string(to_string(cfg.reference)), std::int64_t{n}, delta, phi,
                               phase::fisher_phase(s, phi), phase::resolution_phase(s, phi)});
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// optimal-n

struct OptimalNConfig {
    std::vector<ReferenceKind> references{ReferenceKind::Common};
    std::vector<double> delta;
    std::int64_t n_max = 1'000'000;
    std::int64_t experiments = 1;
};

inline CommandOutcome run_optimal_n(const OptimalNConfig &cfg) {
    CommandOutcome out;
    out.table.columns = {"reference", "delta", "n_integer", "n_continuous", "dphi_at_optimum"};
    for (const auto reference : cfg.references) {
        for (const double delta : cfg.delta) {
            const auto best = phase::optimal_particles(reference, delta, cfg.n_max);
            if (best.at_boundary) {
                out.exit_code = 1;
                out.diagnostic += "divergence: no finite optimal n for reference " +
                                  std::string(to_string(reference)) + " at delta = " +
                                  format_real(delta) + " (argmax reached n_max = " +
                                  std::to_string(cfg.n_max) + ")\n";
                continue;
            }
            phase::PhaseScenario s{StateKind::GHZ, static_cast<int>(best.n), reference, delta,
                                   cfg.experiments};
            out.table.add({std::string(to_string(reference)), delta, best.n, best.continuous,
                           phase::resolution_phase_optimal(s)});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// freq-curve and crossover

struct FrequencyConfig {
    std::int64_t n = 10'000;
    double gamma0 = 1.0;
    double total_time = 1.0;
};

struct FreqCurveConfig {
    FrequencyConfig base;
    std::vector<double> deltas;  // explicit grid; empty means generated
    std::optional<double> delta_min;
    std::optional<double> delta_max;
    int points = frequency::kDefaultGridPoints;
    std::optional<double> scale_ghz_markov;
};

struct NamedScenario {
    std::string name;
    frequency::FrequencyScenario scenario;
};

/// The four Ramsey configurations: product/GHZ x Markovian/non-Markovian.
inline std::vector<NamedScenario> ramsey_family(const FrequencyConfig &cfg) {
    const frequency::DephasingModel markov{cfg.gamma0, 1};
    const frequency::DephasingModel nonmarkov{cfg.gamma0, 2};
    auto make = [&](StateKind s, const frequency::DephasingModel &m) {
        return frequency::make_scenario(s, cfg.n, m, cfg.total_time, 0.0);
    };
    return {{"product_markov", make(StateKind::Product, markov)},
            {"ghz_markov", make(StateKind::GHZ, markov)},
            {"product_nonmarkov", make(StateKind::Product, nonmarkov)},
            {"ghz_nonmarkov", make(StateKind::GHZ, nonmarkov)}};
}

/// Largest product-probe optimal time over both dephasing laws.
inline double product_time_scale(const FrequencyConfig &cfg) {
    return std::max(frequency::optimal_t0({cfg.gamma0, 1}, cfg.n, false),
                    frequency::optimal_t0({cfg.gamma0, 2}, cfg.n, false));
}

inline std::vector<double> resolve_grid(const FreqCurveConfig &cfg) {
    if (!cfg.deltas.empty()) return cfg.deltas;
    const double hi = cfg.delta_max.value_or(4.0 * product_time_scale(cfg.base));
    const double lo = cfg.delta_min.value_or(frequency::kDefaultGridMin);
    return frequency::log_delta_grid(lo, hi, cfg.points);
}

inline CommandOutcome run_freq_curve(const FreqCurveConfig &cfg) {
    CommandOutcome out;
    const auto family = ramsey_family(cfg.base);
    const auto grid = resolve_grid(cfg);
    out.table.columns = {"delta"};
    for (const auto &member : family) out.table.columns.push_back("dw2_" + member.name);
    if (cfg.scale_ghz_markov) out.table.columns.push_back("dw2_ghz_markov_scaled");

    std::vector<frequency::PrecisionCurve> curves;
    for (const auto &member : family) {
        try {
            curves.push_back(frequency::precision_curve(member.scenario, grid));
        } catch (const Error &e) {
            out.exit_code = 1;
            out.diagnostic = "curve " + member.name + ": " + e.what() + "\n";
            out.table.rows.clear();
            return out;
        }
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<Cell> row{grid[i]};
        for (const auto &curve : curves) row.emplace_back(curve.rows[i].dw2);
        if (cfg.scale_ghz_markov) row.emplace_back(*cfg.scale_ghz_markov * curves[1].rows[i].dw2);
        out.table.add(std::move(row));
    }
    return out;
}

struct CrossoverConfig {
    FrequencyConfig base;
    double lo = 0.0;
    std::optional<double> hi;
};

inline CommandOutcome run_crossover(const CrossoverConfig &cfg) {
    CommandOutcome out;
    out.table.columns = {"dephasing", "found", "delta_star", "ghz_worse_above"};
    const auto family = ramsey_family(cfg.base);
    const double hi = cfg.hi.value_or(4.0 * product_time_scale(cfg.base));
    const std::pair<const char *, std::pair<int, int>> pairs[] = {{"markov", {1, 0}},
                                                                  {"nonmarkov", {3, 2}}};
    for (const auto &[label, idx] : pairs) {
        const auto c = frequency::crossover_delta(family[idx.first].scenario,
                                                  family[idx.second].scenario, cfg.lo, hi);
        out.table.add({std::string(label), c.found, c.delta, c.a_worse_above});
    }
    return out;
}

// ---------------------------------------------------------------------------
// oracle-verify

struct OracleVerifyConfig {
    std::vector<int> n{1, 2, 3, 4, 5, 6, 7, 8};
    std::vector<double> delta{0.0, 0.1, 0.3};
    double tolerance = 1e-8;
};

struct OracleCase {
    StateKind state;
    ReferenceKind reference;
    int n;
    double delta;
    double phi;
    double deviation;
};

/// Every (state, reference, n, delta, phi) on the verification grid with the
/// largest |oracle - closed form| over both parity outcomes.
inline std::vector<OracleCase> oracle_deviations(const OracleVerifyConfig &cfg) {
    std::vector<OracleCase> cases;
    constexpr StateKind states[] = {StateKind::GHZ, StateKind::Product, StateKind::Alternating};
    constexpr ReferenceKind refs[] = {ReferenceKind::Perfect, ReferenceKind::Common,
                                      ReferenceKind::Independent};
    for (const auto state : states) {
        for (const auto ref : refs) {
            if (state == StateKind::Alternating && ref == ReferenceKind::Independent) continue;
            for (const int n : cfg.n) {
                oracle::check_qubit_count(n);
                const double base = std::numbers::pi / n;
                for (const double delta : cfg.delta) {
                    for (const double phi : {0.0, base / 4.0, base / 2.0, base}) {
                        const auto numeric =
                            oracle::smeared_parity_distribution({state, n, phi}, ref, delta);
                        const auto closed =
                            phase::parity_probabilities({state, n, ref, delta, 1}, phi);
                        const double dev = std::max(std::abs(numeric.p_even - closed.p_even),
                                                    std::abs(numeric.p_odd - closed.p_odd));
                        cases.push_back({state, ref, n, delta, phi, dev});
                    }
                }
            }
        }
    }
    return cases;
}

inline CommandOutcome run_oracle_verify(const OracleVerifyConfig &cfg) {
    CommandOutcome out;
    out.table.columns = {"state",       "reference",   "cases",    "max_abs_deviation",
                         "worst_n",     "worst_delta", "worst_phi"};
    const auto cases = oracle_deviations(cfg);
    std::map<std::pair<int, int>, std::pair<std::int64_t, OracleCase>> worst;
    for (const auto &c : cases) {
        auto key = std::make_pair(static_cast<int>(c.state), static_cast<int>(c.reference));
        auto [it, inserted] = worst.try_emplace(key, 0, c);
        it->second.first += 1;
        if (c.deviation > it->second.second.deviation) it->second.second = c;
        if (c.deviation > cfg.tolerance) {
            out.exit_code = 1;
            out.diagnostic += "deviation " + format_real(c.deviation) + " > " +
                              format_real(cfg.tolerance) + " at state=" +
                              std::string(to_string(c.state)) +
                              " reference=" + std::string(to_string(c.reference)) +
                              " n=" + std::to_string(c.n) + " delta=" + format_real(c.delta) +
                              " phi=" + format_real(c.phi) + "\n";
        }
    }
    for (const auto &[key, entry] : worst) {
        const auto &[count, c] = entry;
        out.table.add({std::string(to_string(c.state)), std::string(to_string(c.reference)), count,
                       c.deviation, std::int64_t{c.n}, c.delta, c.phi});
    }
    return out;
}

// ---------------------------------------------------------------------------
// mc-verify

inline constexpr double kCramerRaoBandLow = 0.9;
inline constexpr double kCramerRaoBandHigh = 1.2;

struct McVerifyConfig {
    std::vector<int> n{1};
    std::vector<double> delta{0.0, 0.3};
    ReferenceKind reference = ReferenceKind::Common;
    std::int64_t shots = 100'000;
    int repetitions = 200;
    std::uint64_t seed = kDefaultSeed;
};

struct McCase {
    int n;
    double delta;
    double phi;
    double variance;
    double cramer_rao;
    [[nodiscard]] double ratio() const { return variance / cramer_rao; }
    [[nodiscard]] bool within_band() const {
        return ratio() >= kCramerRaoBandLow && ratio() <= kCramerRaoBandHigh;
    }
};

/// Sample variance of the maximum-likelihood phase over repeated simulated
/// experiments, against the Cramer-Rao bound 1 / (shots F).
inline McCase mc_case(int n, double delta, ReferenceKind reference, std::int64_t shots,
                      int repetitions, std::uint64_t seed, std::uint64_t stream) {
    const phase::PhaseScenario s{StateKind::GHZ, n, reference, delta, shots};
    s.validate();
    const double phi = phase::optimal_phase(s);
    const auto truth = phase::parity_probabilities(s, phi);
    auto model = [&](double x) { return phase::parity_probabilities(s, x).p_even; };
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    std::mt19937_64 rng(seq);

    std::vector<double> estimates;
    estimates.reserve(static_cast<std::size_t>(repetitions));
    const double lo = 0.0;
    const double hi = std::numbers::pi / n;
    for (int r = 0; r < repetitions; ++r) {
        const auto counts = oracle::sample_outcomes(truth, shots, rng);
        estimates.push_back(oracle::mle_phase(counts, model, lo, hi));
    }
    double mean = 0.0;
    for (double e : estimates) mean += e;
    mean /= repetitions;
    double ss = 0.0;
    for (double e : estimates) ss += (e - mean) * (e - mean);
    const double variance = ss / (repetitions - 1);
    const double bound = 1.0 / (static_cast<double>(shots) * phase::fisher_phase(s, phi));
    return {n, delta, phi, variance, bound};
}

inline CommandOutcome run_mc_verify(const McVerifyConfig &cfg) {
    if (cfg.shots < 10'000) throw InvalidArgument("mc-verify needs shots >= 10000");
    if (cfg.repetitions < 100) throw InvalidArgument("mc-verify needs repetitions >= 100");
    CommandOutcome out;
    out.table.columns = {"n",     "delta", "phi",  "shots",  "repetitions",
                         "mle_variance", "cramer_rao", "ratio", "within_band"};
    std::uint64_t stream = 0;
    for (const int n : cfg.n) {
        for (const double delta : cfg.delta) {
            const auto c = mc_case(n, delta, cfg.reference, cfg.shots, cfg.repetitions, cfg.seed,
                                   stream++);
            out.table.add({std::int64_t{n}, delta, c.phi, cfg.shots, std::int64_t{cfg.repetitions},
                           c.variance, c.cramer_rao, c.ratio(), c.within_band()});
            if (!c.within_band()) {
                out.exit_code = 1;
                out.diagnostic += "variance ratio " + format_real(c.ratio()) + " outside [" +
                                  format_real(kCramerRaoBandLow) + ", " +
                                  format_real(kCramerRaoBandHigh) + "] at n=" + std::to_string(n) +
                                  " delta=" + format_real(delta) + "\n";
            }
        }
    }
    return out;
}

} // namespace coarse_metrology::cli
