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

// coarse-metrology: precision limits under a coarsened measurement reference.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"

namespace cm = coarse_metrology;
namespace cli = coarse_metrology::cli;

namespace {

/// Reads `key = value` lines ('#' starts a comment). List values are
/// whitespace separated.
std::map<std::string, std::vector<std::string>> read_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw CLI::FileError::Missing(path);
    std::map<std::string, std::vector<std::string>> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw CLI::ConversionError(path + ":" + std::to_string(lineno) +
                                       ": expected key=value");
        }
        std::istringstream key_stream(line.substr(0, eq));
        std::string key;
        key_stream >> key;
        std::istringstream values(line.substr(eq + 1));
        std::vector<std::string> tokens;
        for (std::string tok; values >> tok;) tokens.push_back(tok);
        entries[key] = tokens;
    }
    return entries;
}

/// Splices config-file entries into argv after the subcommand. Keys already
/// given as flags are skipped, so flags win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::optional<std::string> path;
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            kept.push_back(args[i]);
        }
    }
    if (!path) return kept;

    auto given = [&](const std::string &key) {
        for (const auto &a : kept) {
            if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
        }
        return false;
    };
    std::vector<std::string> extra;
    for (const auto &[key, values] : read_config(*path)) {
        if (given(key)) continue;
        extra.push_back("--" + key);
        extra.insert(extra.end(), values.begin(), values.end());
    }
    kept.insert(kept.end(), extra.begin(), extra.end());
    return kept;
}

struct OutputOptions {
    std::string format = "csv";
    std::string path;
};

void add_output_options(CLI::App *cmd, OutputOptions &out) {
    cmd->add_option("--format", out.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--output,-o", out.path, "Write the table here instead of stdout");
}

int emit(const cli::CommandOutcome &outcome, const OutputOptions &opts) {
    const auto format = opts.format == "json" ? cli::OutputFormat::Json : cli::OutputFormat::Csv;
    if (!outcome.table.columns.empty()) {
        if (opts.path.empty()) {
            cli::write_table(std::cout, outcome.table, format);
        } else {
            std::ofstream file(opts.path);
            if (!file) {
                std::cerr << "error: cannot open " << opts.path << " for writing\n";
                return 1;
            }
            cli::write_table(file, outcome.table, format);
        }
    }
    if (!outcome.diagnostic.empty()) std::cerr << outcome.diagnostic;
    return outcome.exit_code;
}

cm::ReferenceKind reference_from(const std::string &s) { return cm::parse_reference_kind(s); }

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Phase and frequency precision limits under a coarsened measurement reference"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");
    // Handled before parsing; registered so it shows up in --help.
    std::string config_path;
    app.add_option("--config", config_path, "key=value file; explicit flags take precedence");

    OutputOptions out;

    // phase-fisher
    cli::PhaseFisherConfig pf;
    std::string pf_state = "ghz";
    std::string pf_reference = "common";
    auto *phase_fisher = app.add_subcommand("phase-fisher", "Fisher information and resolution of phase estimation");
    phase_fisher->add_option("--state", pf_state)
        ->check(CLI::IsMember({"ghz", "product", "alternating"}))
        ->capture_default_str();
    phase_fisher->add_option("--reference", pf_reference)
        ->check(CLI::IsMember({"perfect", "common", "independent"}))
        ->capture_default_str();
    phase_fisher->add_option("--n", pf.n, "Particle numbers")->required()->check(CLI::PositiveNumber);
    phase_fisher->add_option("--delta", pf.delta, "Reference-basis spreads")->required()->check(CLI::NonNegativeNumber);
    phase_fisher->add_option("--phi", pf.phi, "Phases: numbers, pi expressions (pi/2, 3*pi/4) or 'optimal'")->required();
    phase_fisher->add_option("--experiments", pf.experiments, "Number of repetitions N")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_output_options(phase_fisher, out);

    // optimal-n
    cli::OptimalNConfig on;
    std::vector<std::string> on_refs{"common"};
    auto *optimal_n = app.add_subcommand("optimal-n", "Particle number maximizing GHZ Fisher information");
    optimal_n->add_option("--reference", on_refs)
        ->check(CLI::IsMember({"common", "independent"}))
        ->capture_default_str();
    optimal_n->add_option("--delta", on.delta)->required()->check(CLI::NonNegativeNumber);
    optimal_n->add_option("--n-max", on.n_max)->check(CLI::PositiveNumber)->capture_default_str();
    optimal_n->add_option("--experiments", on.experiments)->check(CLI::PositiveNumber)->capture_default_str();
    add_output_options(optimal_n, out);

    // freq-curve
    cli::FreqCurveConfig fc;
    std::optional<double> fc_min;
    std::optional<double> fc_max;
    std::optional<double> fc_scale;
    auto *freq_curve = app.add_subcommand("freq-curve", "Frequency variance versus time-reference jitter");
    auto add_freq_base = [](CLI::App *cmd, cli::FrequencyConfig &base) {
        cmd->add_option("--n", base.n, "Particle number")->check(CLI::PositiveNumber)->capture_default_str();
        cmd->add_option("--gamma0", base.gamma0, "Dephasing strength gamma(0)")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--T", base.total_time, "Total time")->check(CLI::PositiveNumber)->capture_default_str();
    };
    add_freq_base(freq_curve, fc.base);
    freq_curve->add_option("--delta", fc.deltas, "Explicit jitter grid (strictly increasing)")
        ->check(CLI::NonNegativeNumber);
    freq_curve->add_option("--delta-min", fc_min, "Smallest positive grid value")->check(CLI::PositiveNumber);
    freq_curve->add_option("--delta-max", fc_max, "Largest grid value (default 4 t0 of the product probe)")
        ->check(CLI::PositiveNumber);
    freq_curve->add_option("--points", fc.points, "Log-spaced points after delta = 0")
        ->check(CLI::Range(2, 100000))
        ->capture_default_str();
    freq_curve->add_option("--scale-ghz-markov", fc_scale,
                           "Extra column with dw2_ghz_markov times this factor (e.g. 1e-8)");
    add_output_options(freq_curve, out);

    // crossover
    cli::CrossoverConfig co;
    std::optional<double> co_hi;
    auto *crossover = app.add_subcommand("crossover", "Jitter width where GHZ loses to product probes");
    add_freq_base(crossover, co.base);
    crossover->add_option("--lo", co.lo, "Bracket start")->check(CLI::NonNegativeNumber)->capture_default_str();
    crossover->add_option("--hi", co_hi, "Bracket end (default 4 t0 of the product probe)")->check(CLI::PositiveNumber);
    add_output_options(crossover, out);

    // oracle-verify
    cli::OracleVerifyConfig ov;
    auto *oracle_verify = app.add_subcommand("oracle-verify", "Statevector oracle against the closed forms");
    oracle_verify->add_option("--n", ov.n)->check(CLI::PositiveNumber)->capture_default_str();
    oracle_verify->add_option("--delta", ov.delta)->check(CLI::NonNegativeNumber)->capture_default_str();
    oracle_verify->add_option("--tolerance", ov.tolerance)->check(CLI::PositiveNumber)->capture_default_str();
    add_output_options(oracle_verify, out);

    // mc-verify
    cli::McVerifyConfig mc;
    std::string mc_reference = "common";
    std::optional<std::uint64_t> mc_seed;
    auto *mc_verify = app.add_subcommand("mc-verify", "Maximum-likelihood variance against the Cramer-Rao bound");
    mc_verify->add_option("--n", mc.n)->check(CLI::PositiveNumber)->capture_default_str();
    mc_verify->add_option("--delta", mc.delta)->check(CLI::NonNegativeNumber)->capture_default_str();
    mc_verify->add_option("--reference", mc_reference)
        ->check(CLI::IsMember({"perfect", "common", "independent"}))
        ->capture_default_str();
    mc_verify->add_option("--shots", mc.shots)->check(CLI::Range(std::int64_t{10'000}, INT64_MAX))->capture_default_str();
    mc_verify->add_option("--reps", mc.repetitions)->check(CLI::Range(100, 1'000'000))->capture_default_str();
    mc_verify->add_option("--seed", mc_seed, std::string("RNG seed (default ") + std::to_string(cli::kDefaultSeed) +
                                                 ", or $" + cli::kSeedEnvVar + ")");
    add_output_options(mc_verify, out);

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = expand_config(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const cm::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (phase_fisher->parsed()) {
            pf.state = cm::parse_state_kind(pf_state);
            pf.reference = reference_from(pf_reference);
            return emit(cli::run_phase_fisher(pf), out);
        }
        if (optimal_n->parsed()) {
            on.references.clear();
            for (const auto &r : on_refs) on.references.push_back(reference_from(r));
            return emit(cli::run_optimal_n(on), out);
        }
        if (freq_curve->parsed()) {
            fc.delta_min = fc_min;
            fc.delta_max = fc_max;
            fc.scale_ghz_markov = fc_scale;
            return emit(cli::run_freq_curve(fc), out);
        }
        if (crossover->parsed()) {
            co.hi = co_hi;
            return emit(cli::run_crossover(co), out);
        }
        if (oracle_verify->parsed()) {
            return emit(cli::run_oracle_verify(ov), out);
        }
        if (mc_verify->parsed()) {
            mc.reference = reference_from(mc_reference);
            mc.seed = cli::resolve_seed(mc_seed);
            return emit(cli::run_mc_verify(mc), out);
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
