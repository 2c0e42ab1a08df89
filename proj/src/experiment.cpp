#include "teig/experiment.hpp"

#include "teig/errors.hpp"
#include "teig/plot.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace teig {

namespace {

const std::set<std::string> kRoster = {"TR", "Richardson", "TSD", "SD", "TRR", "TSDR"};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

StepKind default_step(const std::string& name) {
    if (name == "TRR") return StepKind::alpha_one;
    if (name == "Richardson") return StepKind::mu_star;
    return StepKind::alpha_star;
}

void set_step(MethodChoice& m, const std::string& raw) {
    const std::string s = trim(raw);
    if (!m.has_step()) throw ValidationError("methods: " + m.name + " takes no step parameter");
    const bool tub = m.tubular_step();
    if (s == "alpha_star" && tub) m.step = StepKind::alpha_star;
    else if (s == "alpha_one" && tub) m.step = StepKind::alpha_one;
    else if (s == "mu_star" && !tub) m.step = StepKind::mu_star;
    else if (s == "mu_one" && !tub) m.step = StepKind::mu_one;
    else {
        try {
            std::size_t used = 0;
            m.user_value = std::stod(s, &used);
            if (used != s.size() || !(m.user_value > 0.0)) throw std::invalid_argument(s);
            m.step = StepKind::user;
        } catch (const std::exception&) {
            throw ValidationError("methods: invalid step '" + s + "' for " + m.name);
        }
    }
}

MethodChoice make_method(const std::string& raw_name) {
    MethodChoice m;
    m.name = trim(raw_name);
    if (!kRoster.count(m.name))
        throw ValidationError("methods: unknown method '" + m.name + "' (expected TR, Richardson, TSD, SD, TRR, TSDR)");
    m.step = default_step(m.name);
    return m;
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& field) {
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        throw ValidationError(field + ": invalid value");
    }
}

void check_keys(const YAML::Node& node, const std::string& section, const std::set<std::string>& allowed) {
    if (!node.IsMap()) throw ValidationError(section + ": expected a mapping");
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.count(key)) throw ValidationError(section + "." + key + ": unknown field");
    }
}

SummaryRow summarize(const MethodChoice& m, const ConvergenceHistory& h) {
    SummaryRow r;
    r.method = m.name;
    r.step_param = m.step_label();
    r.iters = h.iterations();
    r.final_delta = h.delta.empty() ? std::numeric_limits<double>::quiet_NaN() : h.delta.back();
    r.final_rel_error = h.rel_error.empty() ? std::numeric_limits<double>::quiet_NaN() : h.rel_error.back();
    r.seconds = h.seconds.empty() ? 0.0 : h.seconds.back();
    r.stop_reason = to_string(h.stop);
    return r;
}

SummaryRow average_rows(const std::vector<SummaryRow>& rows) {
    SummaryRow out = rows.front();
    double iters = 0, d = 0, e = 0, s = 0;
    std::map<std::string, int> reasons;
    for (const auto& r : rows) {
        iters += r.iters;
        d += r.final_delta;
        e += r.final_rel_error;
        s += r.seconds;
        ++reasons[r.stop_reason];
    }
    const auto n = static_cast<double>(rows.size());
    out.iters = static_cast<int>(std::lround(iters / n));
    out.final_delta = d / n;
    out.final_rel_error = e / n;
    out.seconds = s / n;
    if (reasons.size() == 1) {
        out.stop_reason = reasons.begin()->first;
    } else {
        out.stop_reason = "mixed(";
        bool first = true;
        for (const auto& [k, c] : reasons) {
            out.stop_reason += (first ? "" : ";") + k + ":" + std::to_string(c);
            first = false;
        }
        out.stop_reason += ")";
    }
    return out;
}

} // namespace

std::string MethodChoice::step_label() const {
    if (!has_step()) return "none";
    if (step == StepKind::user) {
        std::ostringstream os;
        os.precision(17);
        os << user_value;
        return os.str();
    }
    return to_string(step);
}

std::string MethodChoice::label() const { return has_step() ? name + "_" + step_label() : name; }

MethodChoice parse_method(const std::string& token) {
    const auto colon = token.find(':');
    MethodChoice m = make_method(token.substr(0, colon));
    if (colon != std::string::npos) set_step(m, token.substr(colon + 1));
    return m;
}

std::vector<MethodChoice> parse_methods(const std::string& list) {
    std::vector<MethodChoice> out;
    std::stringstream ss(list);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!trim(tok).empty()) out.push_back(parse_method(tok));
    if (out.empty()) throw ValidationError("methods: at least one method is required");
    return out;
}

void ExperimentConfig::validate() const {
    if (problem.family != "blur" && problem.family != "baart_prolate")
        throw ValidationError("problem.family: expected blur or baart_prolate");
    if (problem.n < 1) throw ValidationError("problem.n: must be >= 1");
    if (problem.family == "baart_prolate" && problem.n < 4) throw ValidationError("problem.n: baart_prolate needs n >= 4");
    if (problem.family == "blur" && (problem.band < 1 || problem.band > problem.n))
        throw ValidationError("problem.band: must satisfy 1 <= band <= n");
    if (!(problem.sigma > 0.0)) throw ValidationError("problem.sigma: must be > 0");
    if (!(problem.w > 0.0 && problem.w < 0.5)) throw ValidationError("problem.w: must lie in (0, 0.5)");
    if (methods.empty()) throw ValidationError("methods: at least one method is required");
    if (max_iterations < 1) throw ValidationError("iteration.max_iterations: must be >= 1");
    if (!(tol > 0.0)) throw ValidationError("iteration.tol: must be > 0");
    if (!(divergence_guard > 0.0)) throw ValidationError("iteration.divergence_guard: must be > 0");
    if (average_seeds < 0) throw ValidationError("output.average_seeds: must be >= 0");
}

ExperimentConfig parse_config(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    ExperimentConfig c;
    if (!root || root.IsNull()) throw ValidationError("config: empty document");
    check_keys(root, "config", {"problem", "methods", "iteration", "output"});

    if (const auto p = root["problem"]) {
        check_keys(p, "problem", {"family", "n", "band", "sigma", "w", "seed", "solution", "base"});
        if (p["family"]) c.problem.family = scalar<std::string>(p["family"], "problem.family");
        if (p["n"]) c.problem.n = scalar<long>(p["n"], "problem.n");
        if (p["band"]) c.problem.band = scalar<long>(p["band"], "problem.band");
        if (p["sigma"]) c.problem.sigma = scalar<double>(p["sigma"], "problem.sigma");
        if (p["w"]) c.problem.w = scalar<double>(p["w"], "problem.w");
        if (p["seed"]) c.problem.seed = scalar<std::uint64_t>(p["seed"], "problem.seed");
        if (p["solution"]) {
            const auto s = scalar<std::string>(p["solution"], "problem.solution");
            if (s != "random" && s != "ones") throw ValidationError("problem.solution: expected random or ones");
            c.problem.solution = s == "ones" ? SolutionKind::ones : SolutionKind::random;
        }
        if (p["base"]) {
            const auto s = scalar<std::string>(p["base"], "problem.base");
            if (s != "circulant" && s != "symmetric_toeplitz")
                throw ValidationError("problem.base: expected circulant or symmetric_toeplitz");
            c.problem.base = s == "circulant" ? BlurBase::circulant : BlurBase::symmetric_toeplitz;
        }
    }

    if (const auto m = root["methods"]) {
        if (!m.IsSequence()) throw ValidationError("methods: expected a list");
        for (const auto& item : m) {
            if (item.IsScalar()) {
                c.methods.push_back(parse_method(item.as<std::string>()));
            } else if (item.IsMap() && item.size() == 1) {
                const auto kv = *item.begin();
                MethodChoice mc = make_method(kv.first.as<std::string>());
                set_step(mc, scalar<std::string>(kv.second, "methods." + mc.name));
                c.methods.push_back(mc);
            } else {
                throw ValidationError("methods: each entry is NAME or {NAME: STEP}");
            }
        }
    }

    if (const auto it = root["iteration"]) {
        check_keys(it, "iteration", {"max_iterations", "tol", "divergence_guard", "relax_variant"});
        if (it["max_iterations"]) c.max_iterations = scalar<int>(it["max_iterations"], "iteration.max_iterations");
        if (it["tol"]) c.tol = scalar<double>(it["tol"], "iteration.tol");
        if (it["divergence_guard"])
            c.divergence_guard = scalar<double>(it["divergence_guard"], "iteration.divergence_guard");
        if (it["relax_variant"]) {
            const auto s = scalar<std::string>(it["relax_variant"], "iteration.relax_variant");
            if (s == "from_previous_iterate") c.relax_variant = RelaxVariant::from_previous_iterate;
            else if (s == "literal") c.relax_variant = RelaxVariant::literal;
            else throw ValidationError("iteration.relax_variant: expected from_previous_iterate or literal");
        }
    }

    if (const auto o = root["output"]) {
        check_keys(o, "output", {"dir", "plot", "average_seeds"});
        if (o["dir"]) c.out_dir = scalar<std::string>(o["dir"], "output.dir");
        if (o["plot"]) c.plot = scalar<bool>(o["plot"], "output.plot");
        if (o["average_seeds"]) c.average_seeds = scalar<int>(o["average_seeds"], "output.average_seeds");
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("config: cannot open " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

ProblemInstance build_problem(const ProblemConfig& pc) {
    if (pc.family == "blur") return blur_problem(pc.n, pc.band, pc.sigma, pc.seed, pc.base, pc.solution);
    if (pc.family == "baart_prolate") return baart_prolate_problem(pc.n, pc.w, pc.seed, pc.solution);
    throw ValidationError("problem.family: expected blur or baart_prolate");
}

SolveResult run_method(const ProblemInstance& P, const MethodChoice& m, const NormalSpectrum& spectrum,
                       const IterOptions& base_opts, RelaxVariant variant) {
    IterOptions opts = base_opts;
    opts.track_error_against = P.X_star;
    const Tensor3 X0(P.B.rows(), 1, P.B.tubes());

    Increment F;
    if (m.name == "TR" || m.name == "TRR") {
        Tubular alpha;
        switch (m.step) {
        case StepKind::alpha_star: alpha = alpha_star(spectrum); break;
        case StepKind::alpha_one: alpha = alpha_one(spectrum); break;
        default: alpha = cplx{m.user_value} * Tubular::unit(P.A.tubes()); break;
        }
        F = tr_increment(alpha);
    } else if (m.name == "Richardson") {
        double mu = m.user_value;
        if (m.step == StepKind::mu_star) mu = mu_star(spectrum);
        if (m.step == StepKind::mu_one) mu = mu_one(spectrum);
        F = richardson_increment(mu);
    } else if (m.name == "TSD" || m.name == "TSDR") {
        F = tsd_increment();
    } else {
        F = sd_increment();
    }
    return m.relaxed() ? relax_wrap(F, P.A, P.B, X0, opts, variant) : iterate(F, P.A, P.B, X0, opts);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    ExperimentResult result;
    ProblemInstance P = build_problem(config.problem);
    const NormalSpectrum spectrum = normal_spectrum(P.A);

    IterOptions opts;
    opts.max_iterations = config.max_iterations;
    opts.rel_residual_tol = config.tol;
    opts.divergence_guard = config.divergence_guard;

    const int nseeds = std::max(1, config.average_seeds);
    const bool averaged = nseeds > 1;
    if (!config.out_dir.empty()) std::filesystem::create_directories(config.out_dir);

    std::vector<std::vector<SummaryRow>> per_method(config.methods.size());
    for (int s = 0; s < nseeds; ++s) {
        const std::uint64_t seed = config.problem.seed + static_cast<std::uint64_t>(s);
        if (s > 0) {
            // A does not depend on the seed; only the solution does.
            P.X_star = config.problem.solution == SolutionKind::ones ? ones_solution(P.A.rows(), P.A.tubes())
                                                                      : random_solution(P.A.rows(), P.A.tubes(), seed);
            P.B = make_rhs(P.A, P.X_star);
            P.descriptor.seed = seed;
        }
        for (std::size_t i = 0; i < config.methods.size(); ++i) {
            const auto& m = config.methods[i];
            MethodRun run{m, seed, {}};
            try {
                run.history = run_method(P, m, spectrum, opts, config.relax_variant).history;
            } catch (const SingularError& e) {
                // degenerate step parameters are a breakdown, not a failed sweep
                run.history.stop = StopReason::breakdown;
                run.history.notes.push_back(e.what());
            }
            per_method[i].push_back(summarize(m, run.history));
            if (!config.out_dir.empty()) {
                const std::string name = averaged ? m.label() + "_seed" + std::to_string(seed) : m.label();
                std::ofstream os(config.out_dir / (name + ".csv"));
                write_history_csv(os, run.history);
            }
            result.runs.push_back(std::move(run));
        }
    }
    for (const auto& rows : per_method) result.summary.push_back(averaged ? average_rows(rows) : rows.front());

    std::ostringstream meta;
    ProblemDescriptor desc = P.descriptor;
    desc.seed = config.problem.seed;
    meta << "problem: " << desc.to_string() << '\n';
    meta << "methods:";
    for (const auto& m : config.methods) meta << ' ' << m.label();
    meta << "\nx0: zero\ntol: " << format_double(config.tol) << "\nmax_iterations: " << config.max_iterations
         << "\ndivergence_guard: " << format_double(config.divergence_guard) << "\nrelax_variant: "
         << (config.relax_variant == RelaxVariant::literal ? "literal" : "from_previous_iterate") << '\n';
    if (averaged)
        meta << "summary: mean over " << nseeds << " seeds (" << config.problem.seed << ".."
             << config.problem.seed + static_cast<std::uint64_t>(nseeds) - 1 << ")\n";
    else
        meta << "summary: single run, seed " << config.problem.seed << '\n';
    result.metadata = meta.str();

    if (!config.out_dir.empty()) {
        std::ofstream sum(config.out_dir / "summary.csv");
        sum << kSummaryHeader << '\n';
        for (const auto& r : result.summary) write_summary_row(sum, r);
        std::ofstream(config.out_dir / "metadata.txt") << result.metadata;
        if (config.plot) {
            std::vector<PlotSeries> series;
            for (std::size_t i = 0; i < config.methods.size(); ++i)
                series.push_back({config.methods[i].label(), result.runs[i].history.delta});
            std::ofstream svg(config.out_dir / "plot.svg");
            write_log_plot_svg(svg, series, config.problem.family + ", n = " + std::to_string(config.problem.n));
        }
    }
    return result;
}

} // namespace teig
