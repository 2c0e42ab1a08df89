#include "teig/errors.hpp"
#include "teig/experiment.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace teig;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

// Drops the trailing seconds column of a history CSV.
std::string without_seconds(const std::string& csv) {
    std::stringstream in(csv), out;
    std::string line;
    while (std::getline(in, line)) out << line.substr(0, line.rfind(',')) << '\n';
    return out.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("teig_exp_" + name);
    fs::remove_all(d);
    return d;
}

ExperimentConfig small_blur(const fs::path& out) {
    ExperimentConfig c;
    c.problem.n = 8;
    c.problem.band = 3;
    c.problem.sigma = 2.0;
    c.methods = parse_methods("TR,Richardson,TSD,SD,TRR,TSDR");
    c.max_iterations = 40;
    c.out_dir = out;
    c.plot = true;
    return c;
}

} // namespace

TEST(ParseMethod, DefaultsAndSteps) {
    EXPECT_EQ(parse_method("TR").step, StepKind::alpha_star);
    EXPECT_EQ(parse_method("TRR").step, StepKind::alpha_one);
    EXPECT_EQ(parse_method("Richardson").step, StepKind::mu_star);
    EXPECT_EQ(parse_method("TR:alpha_one").step, StepKind::alpha_one);
    EXPECT_EQ(parse_method("Richardson:mu_one").step, StepKind::mu_one);
    const auto user = parse_method("TR:0.25");
    EXPECT_EQ(user.step, StepKind::user);
    EXPECT_EQ(user.user_value, 0.25);
    EXPECT_EQ(user.label(), "TR_0.25");
    EXPECT_EQ(parse_method("TSD").label(), "TSD");
    EXPECT_EQ(parse_method(" SD ").step_label(), "none");
    EXPECT_EQ(parse_method("Richardson").label(), "Richardson_mu_star");
}

TEST(ParseMethod, Errors) {
    for (const std::string bad : {"CG", "TR:mu_star", "Richardson:alpha_star", "TSD:alpha_star", "TR:-1", "TR:0",
                                  "TR:abc", "TR:1x", ""})
        EXPECT_THROW(parse_method(bad), ValidationError) << bad;
    EXPECT_THROW(parse_methods(" , "), ValidationError);
    EXPECT_EQ(parse_methods("TR, SD,Richardson:mu_one").size(), 3u);
}

TEST(ParseConfig, FullDocument) {
    const auto c = parse_config(R"(
problem:
  family: baart_prolate
  n: 16
  w: 0.3
  seed: 7
  solution: ones
methods:
  - TR: alpha_one
  - Richardson: 0.5
  - TSD
iteration:
  max_iterations: 25
  tol: 1.0e-4
  divergence_guard: 1.0e3
  relax_variant: literal
output:
  dir: somewhere
  plot: true
  average_seeds: 3
)");
    EXPECT_EQ(c.problem.family, "baart_prolate");
    EXPECT_EQ(c.problem.n, 16);
    EXPECT_EQ(c.problem.w, 0.3);
    EXPECT_EQ(c.problem.seed, 7u);
    EXPECT_EQ(c.problem.solution, SolutionKind::ones);
    ASSERT_EQ(c.methods.size(), 3u);
    EXPECT_EQ(c.methods[0].step, StepKind::alpha_one);
    EXPECT_EQ(c.methods[1].step, StepKind::user);
    EXPECT_EQ(c.methods[1].user_value, 0.5);
    EXPECT_EQ(c.methods[2].name, "TSD");
    EXPECT_EQ(c.max_iterations, 25);
    EXPECT_EQ(c.tol, 1e-4);
    EXPECT_EQ(c.divergence_guard, 1e3);
    EXPECT_EQ(c.relax_variant, RelaxVariant::literal);
    EXPECT_EQ(c.out_dir, fs::path("somewhere"));
    EXPECT_TRUE(c.plot);
    EXPECT_EQ(c.average_seeds, 3);
}

TEST(ParseConfig, ErrorsNameTheField) {
    const std::pair<const char*, const char*> cases[] = {
        {"problem: {family: blur, colour: red}\nmethods: [TR]", "problem.colour"},
        {"problem: {n: many}\nmethods: [TR]", "problem.n"},
        {"problem: {family: shaw}\nmethods: [TR]", "problem.family"},
        {"problem: {n: 8, band: 9}\nmethods: [TR]", "problem.band"},
        {"problem: {solution: zeros}\nmethods: [TR]", "problem.solution"},
        {"methods: [TR]\niteration: {tol: -1}", "iteration.tol"},
        {"methods: [TR]\niteration: {relax_variant: sideways}", "iteration.relax_variant"},
        {"methods: [TR]\noutput: {average_seeds: -2}", "output.average_seeds"},
        {"methods: [CG]", "methods"},
        {"methods: TR", "methods"},
        {"problem: {n: 8}", "methods"},
        {"extra: 1\nmethods: [TR]", "config.extra"},
        {"", "config"},
        {"problem: [unbalanced", "config"},
    };
    for (const auto& [yaml, field] : cases) {
        try {
            parse_config(yaml);
            ADD_FAILURE() << "accepted: " << yaml;
        } catch (const ValidationError& e) {
            EXPECT_NE(std::string(e.what()).find(field), std::string::npos) << e.what();
        }
    }
}

TEST(RunExperiment, WritesOutputsAndIsReproducible) {
    const fs::path a = scratch_dir("a"), b = scratch_dir("b");
    const auto ra = run_experiment(small_blur(a));
    run_experiment(small_blur(b));
    ASSERT_EQ(ra.summary.size(), 6u);
    for (const auto* name : {"TR_alpha_star.csv", "Richardson_mu_star.csv", "TSD.csv", "SD.csv", "TRR_alpha_one.csv",
                             "TSDR.csv", "summary.csv", "metadata.txt", "plot.svg"})
        EXPECT_TRUE(fs::exists(a / name)) << name;

    for (const auto* name : {"TR_alpha_star.csv", "TSD.csv", "TSDR.csv", "SD.csv"}) {
        const std::string csv = slurp(a / name);
        EXPECT_EQ(csv.substr(0, csv.find('\n')), "k,delta,log10_delta,rel_error,seconds");
        EXPECT_EQ(without_seconds(csv), without_seconds(slurp(b / name))) << name;
    }
    EXPECT_EQ(slurp(a / "metadata.txt"), slurp(b / "metadata.txt"));
    const std::string summary = slurp(a / "summary.csv");
    EXPECT_EQ(summary.substr(0, summary.find('\n')), kSummaryHeader);
    EXPECT_NE(slurp(a / "plot.svg").find("<svg"), std::string::npos);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(RunExperiment, SharedZeroStartAndTrackedError) {
    auto c = small_blur({});
    c.plot = false;
    const auto r = run_experiment(c);
    ASSERT_EQ(r.runs.size(), 6u);
    for (const auto& run : r.runs) {
        ASSERT_FALSE(run.history.rel_error.empty()) << run.method.label();
        // X0 = 0 gives relative error 1 and delta 1 at k = 0
        EXPECT_DOUBLE_EQ(run.history.rel_error.front(), 1.0);
        EXPECT_DOUBLE_EQ(run.history.delta.front(), 1.0);
    }
    EXPECT_NE(r.metadata.find("x0: zero\n"), std::string::npos);
    EXPECT_NE(r.metadata.find("summary: single run, seed 0\n"), std::string::npos);
    EXPECT_NE(r.metadata.find("problem: family=blur n=8 band=3"), std::string::npos);
}

TEST(RunExperiment, AveragedSeeds) {
    const fs::path d = scratch_dir("avg");
    auto c = small_blur(d);
    c.methods = parse_methods("TR,SD");
    c.problem.seed = 4;
    c.average_seeds = 3;
    c.plot = false;
    const auto r = run_experiment(c);
    EXPECT_EQ(r.runs.size(), 6u);
    ASSERT_EQ(r.summary.size(), 2u);
    EXPECT_NE(r.metadata.find("summary: mean over 3 seeds (4..6)"), std::string::npos);
    EXPECT_TRUE(fs::exists(d / "TR_alpha_star_seed4.csv"));
    EXPECT_TRUE(fs::exists(d / "SD_seed6.csv"));

    double mean = 0;
    for (const auto& run : r.runs)
        if (run.method.name == "SD") mean += run.history.delta.back() / 3.0;
    EXPECT_NEAR(r.summary[1].final_delta, mean, 1e-15 * mean);

    // each seed is reproduced by a single run at that seed
    auto single = c;
    single.out_dir.clear();
    single.average_seeds = 0;
    single.problem.seed = 5;
    const auto one = run_experiment(single);
    EXPECT_EQ(one.runs[1].history.delta, r.runs[3].history.delta);
    fs::remove_all(d);
}

TEST(RunExperiment, DegenerateStepIsRecordedNotFatal) {
    auto c = small_blur({});
    c.methods = parse_methods("TR:1e6,SD");
    c.plot = false;
    const auto r = run_experiment(c);
    ASSERT_EQ(r.summary.size(), 2u);
    EXPECT_EQ(r.summary[0].stop_reason, "diverged");
    EXPECT_EQ(r.summary[1].method, "SD");
}

TEST(RunExperiment, InvalidConfigRejectedBeforeRunning) {
    auto c = small_blur(scratch_dir("invalid"));
    c.max_iterations = 0;
    EXPECT_THROW(run_experiment(c), ValidationError);
    EXPECT_FALSE(fs::exists(c.out_dir));
}
