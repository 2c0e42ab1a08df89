#pragma once

// Method sweeps over a generated problem, with CSV/SVG output.
//
// Config file (YAML):
//
//   problem:
//     family: blur            # blur | baart_prolate
//     n: 64
//     band: 7                 # blur only
//     sigma: 4                # blur only
//     base: circulant         # blur only: circulant | symmetric_toeplitz
//     w: 0.46                 # baart_prolate only
//     seed: 0
//     solution: random        # random | ones
//   methods:                  # names: TR Richardson TSD SD TRR TSDR
//     - TR: alpha_star        # step: alpha_star alpha_one mu_star mu_one or a number
//     - Richardson: mu_star
//     - TSD
//   iteration:
//     max_iterations: 500
//     tol: 1.0e-8
//     divergence_guard: 1.0e6
//     relax_variant: from_previous_iterate   # or literal
//   output:
//     dir: out
//     plot: true
//     average_seeds: 0        # > 1 repeats the sweep over seeds seed..seed+N-1 (CLI --average: 10)

#include "teig/io.hpp"
#include "teig/problems.hpp"
#include "teig/solvers.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace teig {

struct MethodChoice {
    std::string name;
    StepKind step = StepKind::alpha_star;
    /// Step value when step == user; a user value v means [alpha] = v [e_1].
    double user_value = 0.0;

    bool tubular_step() const { return name == "TR" || name == "TRR"; }
    bool has_step() const { return name == "TR" || name == "TRR" || name == "Richardson"; }
    bool relaxed() const { return name == "TRR" || name == "TSDR"; }
    std::string step_label() const;
    /// File-friendly label, e.g. "TR_alpha_star".
    std::string label() const;
};

/// Parses one "NAME" or "NAME:STEP" token. Throws ValidationError.
MethodChoice parse_method(const std::string& token);
/// Comma-separated list of tokens.
std::vector<MethodChoice> parse_methods(const std::string& list);

struct ProblemConfig {
    std::string family = "blur";
    Index n = 64;
    Index band = 7;
    double sigma = 4.0;
    double w = 0.46;
    std::uint64_t seed = 0;
    SolutionKind solution = SolutionKind::random;
    BlurBase base = BlurBase::circulant;
};

struct ExperimentConfig {
    ProblemConfig problem;
    std::vector<MethodChoice> methods;
    int max_iterations = 10000;
    double tol = 1e-8;
    double divergence_guard = 1e6;
    RelaxVariant relax_variant = RelaxVariant::from_previous_iterate;
    std::filesystem::path out_dir;
    bool plot = false;
    int average_seeds = 0;

    /// Throws ValidationError naming the offending field.
    void validate() const;
};

/// Throws ValidationError on unknown keys or bad values.
ExperimentConfig parse_config(const std::string& yaml_text);
ExperimentConfig load_config(const std::filesystem::path& path);

ProblemInstance build_problem(const ProblemConfig& pc);

/// Runs one method from X0 = 0, with relative errors tracked against X_star.
SolveResult run_method(const ProblemInstance& P, const MethodChoice& m, const NormalSpectrum& spectrum,
                       const IterOptions& opts, RelaxVariant variant = RelaxVariant::from_previous_iterate);

struct MethodRun {
    MethodChoice method;
    std::uint64_t seed = 0;
    ConvergenceHistory history;
};

struct ExperimentResult {
    std::vector<MethodRun> runs;
    /// One row per method (averaged over seeds when requested).
    std::vector<SummaryRow> summary;
    std::string metadata;
};

/// Builds the problem, runs every method and, when out_dir is set, writes
/// one history CSV per method, summary.csv, metadata.txt and plot.svg.
ExperimentResult run_experiment(const ExperimentConfig& config);

} // namespace teig
