#include "teig/errors.hpp"
#include "teig/experiment.hpp"
#include "teig/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kSuiteFailure = 2;
constexpr int kDefaultAveragedSeeds = 10;

struct RunFlags {
    std::string config;
    std::optional<std::string> problem, methods, out;
    std::optional<long> n;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<int> maxit, seeds;
    bool plot = false;
    bool average = false;
};

teig::ExperimentConfig assemble(const RunFlags& f) {
    teig::ExperimentConfig cfg = f.config.empty() ? teig::ExperimentConfig{} : teig::load_config(f.config);
    if (f.problem) cfg.problem.family = *f.problem;
    if (f.n) cfg.problem.n = *f.n;
    if (f.seed) cfg.problem.seed = *f.seed;
    if (f.methods) cfg.methods = teig::parse_methods(*f.methods);
    if (f.tol) cfg.tol = *f.tol;
    if (f.maxit) cfg.max_iterations = *f.maxit;
    if (f.out) cfg.out_dir = *f.out;
    if (f.average && cfg.average_seeds <= 1) cfg.average_seeds = kDefaultAveragedSeeds;
    if (f.seeds) cfg.average_seeds = *f.seeds;
    if (f.plot) cfg.plot = true;
    cfg.validate();
    return cfg;
}

int run_command(const RunFlags& f) {
    const auto cfg = assemble(f);
    const auto result = teig::run_experiment(cfg);
    std::cout << teig::kSummaryHeader << '\n';
    for (const auto& row : result.summary) teig::write_summary_row(std::cout, row);
    if (!cfg.out_dir.empty()) std::cerr << "wrote " << cfg.out_dir.string() << '\n';
    return kOk;
}

int verify_command(const std::string& suite, const std::string& json_path) {
    const auto report = teig::run_suite(suite);
    for (const auto& c : report.checks) {
        std::cout << (c.criterion > 0 ? "criterion " + std::to_string(c.criterion) : c.id) << ' '
                  << (c.pass ? "PASS" : "FAIL") << ": " << c.detail << '\n';
    }
    if (!json_path.empty()) {
        std::ofstream os(json_path);
        if (!os) throw teig::ValidationError("cannot write report to " + json_path);
        teig::write_report_json(os, report);
    }
    std::cout << "suite " << suite << ' ' << (report.pass() ? "PASS" : "FAIL") << '\n';
    return report.pass() ? kOk : kSuiteFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"T-product tensor solvers: experiment runner and verifier"};
    app.require_subcommand(1);

    RunFlags rf;
    auto* run = app.add_subcommand("run", "run a method sweep on a generated problem");
    run->add_option("--config", rf.config, "YAML config file")->check(CLI::ExistingFile);
    run->add_option("--problem", rf.problem, "blur | baart_prolate");
    run->add_option("--n", rf.n, "problem size");
    run->add_option("--seed", rf.seed, "seed for the exact solution");
    run->add_option("--methods", rf.methods, "comma list, e.g. TR:alpha_star,Richardson:mu_star,TSD,SD");
    run->add_option("--tol", rf.tol, "relative residual tolerance");
    run->add_option("--maxit", rf.maxit, "iteration cap");
    run->add_flag("--average", rf.average, "average the summary over 10 seeds (seed..seed+9)");
    run->add_option("--seeds", rf.seeds, "average the summary over this many seeds");
    run->add_option("--out", rf.out, "output directory");
    run->add_flag("--plot", rf.plot, "write plot.svg");

    std::string suite, json_path;
    auto* verify = app.add_subcommand("verify", "run an invariant/acceptance battery");
    verify->add_option("suite", suite, "algebra | spectra | inequalities | solvers | experiments")->required();
    verify->add_option("--json", json_path, "write the machine-readable report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (*run) return run_command(rf);
        return verify_command(suite, json_path);
    } catch (const teig::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    }
}
