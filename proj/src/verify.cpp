#include "teig/verify.hpp"

#include "teig/errors.hpp"
#include "teig/experiment.hpp"
#include "teig/fourier.hpp"
#include "teig/problems.hpp"
#include "teig/rng.hpp"
#include "teig/solvers.hpp"
#include "teig/spectra.hpp"
#include "teig/tubal.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace teig {

namespace {

constexpr std::uint64_t kSeed = 20240601;

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

Tensor3 random_tensor(Rng& rng, Index n, Index m, Index p, bool complex) {
    Tensor3 A(n, m, p);
    for (auto& v : A.mutable_data()) v = complex ? rng.cnormal() : cplx{rng.normal()};
    return A;
}

Tensor3 random_hermitian(Rng& rng, Index n, Index p) {
    const Tensor3 M = random_tensor(rng, n, n, p, true);
    return cplx{0.5} * (M + ttranspose(M));
}

// M * M^H + shift * I
Tensor3 random_hpd(Rng& rng, Index n, Index p, double shift) {
    const Tensor3 M = random_tensor(rng, n, n, p, true);
    return tprod(M, ttranspose(M)) + cplx{shift} * identity(n, p);
}

// Real operator 2 I + G / (2 sqrt(n p)); every Fourier slice of the
// perturbation has norm about 1, so each slice of A stays well conditioned.
Tensor3 well_conditioned(Rng& rng, Index n, Index p) {
    Tensor3 G = random_tensor(rng, n, n, p, false);
    G *= cplx{0.5 / std::sqrt(static_cast<double>(n * p))};
    return cplx{2.0} * identity(n, p) + G;
}

Index rand_index(Rng& rng, Index lo, Index hi) { return static_cast<Index>(rng.uniform_int(lo, hi)); }

// Greedy nearest matching of two multisets; returns the worst distance.
double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const auto& x : a) {
        auto best = b.begin();
        for (auto it = b.begin(); it != b.end(); ++it)
            if (std::abs(*it - x) < std::abs(*best - x)) best = it;
        worst = std::max(worst, std::abs(*best - x));
        b.erase(best);
    }
    return worst;
}

std::vector<double> real_components(const Tubular& t) {
    const auto d = t.components();
    std::vector<double> out(d.size());
    std::transform(d.begin(), d.end(), out.begin(), [](const cplx& x) { return x.real(); });
    return out;
}

CheckResult make(int criterion, std::string id) {
    CheckResult r;
    r.criterion = criterion;
    r.id = std::move(id);
    return r;
}

// ---------------------------------------------------------------------------
// 1. T-product against Fold(bcirc(A) Ufold(B))

CheckResult criterion1() {
    auto r = make(1, "tprod_oracle_equivalence");
    const auto t0 = Clock::now();
    Rng rng(kSeed + 1);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const Index n = rand_index(rng, 1, 8), m = rand_index(rng, 1, 8), l = rand_index(rng, 1, 8);
        const Index p = rand_index(rng, 1, 8);
        const Tensor3 A = random_tensor(rng, n, m, p, true), B = random_tensor(rng, m, l, p, true);
        const Tensor3 oracle = fold(bcirc_explicit(A) * unfold(B), p);
        worst = std::max(worst, frob_norm(tprod(A, B) - oracle) / frob_norm(oracle));
    }
    r.seconds = elapsed(t0);
    r.pass = worst <= 1e-10 && r.seconds < 5.0;
    r.detail = "200 products, worst relative error " + fmt(worst) + " (limit 1e-10), " + fmt(r.seconds) +
               " s (limit 5 s)";
    return r;
}

// ---------------------------------------------------------------------------
// 2. Aligned tubular eigenpairs of random 4x4x4 tensors

CheckResult criterion2() {
    auto r = make(2, "tubular_eigenpairs_theorem");
    const auto t0 = Clock::now();
    Rng rng(kSeed + 2);
    const Index n = 4, p = 4;
    const Eigen::MatrixXcd F = dft_matrix(p);
    double worst_res = 0.0, worst_match = 0.0, worst_offdiag = 0.0;
    for (int t = 0; t < 50; ++t) {
        const Tensor3 A = random_tensor(rng, n, n, p, true);
        const double an = frob_norm(A);
        std::vector<cplx> from_tubes;
        for (const auto& pair : aligned_eigenpairs(A)) {
            worst_res = std::max(worst_res, pair.residual / (an * frob_norm(pair.X)));
            const Eigen::MatrixXcd D = F.adjoint() * circ_matrix(pair.lambda) * F;
            worst_offdiag = std::max(worst_offdiag, (D - Eigen::MatrixXcd(D.diagonal().asDiagonal())).norm());
            for (Index i = 0; i < p; ++i) from_tubes.push_back(D(i, i));
        }
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(bcirc_explicit(A), false);
        const std::vector<cplx> dense(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
        worst_match = std::max(worst_match, multiset_distance(from_tubes, dense));
    }
    r.seconds = elapsed(t0);
    r.pass = worst_res <= 1e-8 && worst_match <= 1e-8 && worst_offdiag <= 1e-8 && r.seconds < 10.0;
    r.detail = "50 tensors, worst residual ratio " + fmt(worst_res) + " (limit 1e-8), worst eigenvalue match " +
               fmt(worst_match) + " (limit 1e-8), off-diagonal " + fmt(worst_offdiag) + ", " + fmt(r.seconds) +
               " s (limit 10 s)";
    return r;
}

// ---------------------------------------------------------------------------
// 3. Hermitian decomposition A = Q^H * D * Q

CheckResult criterion3() {
    auto r = make(3, "hermitian_decomposition");
    const auto t0 = Clock::now();
    Rng rng(kSeed + 3);
    const Index n = 5, p = 4;
    double worst_rec = 0.0, worst_unit = 0.0, worst_order = 0.0;
    const Tensor3 I = identity(n, p);
    for (int t = 0; t < 50; ++t) {
        const Tensor3 A = random_hermitian(rng, n, p);
        const auto H = hermitian_ordered_spectrum(A);
        const Tensor3 QH = ttranspose(H.Q);
        worst_rec = std::max(worst_rec, frob_norm(tprod(QH, tprod(H.D, H.Q)) - A) / frob_norm(A));
        worst_unit = std::max({worst_unit, frob_norm(tprod(QH, H.Q) - I), frob_norm(tprod(H.Q, QH) - I)});
        for (std::size_t j = 0; j + 1 < H.pairs.size(); ++j) {
            const auto lo = real_components(H.pairs[j].lambda), hi = real_components(H.pairs[j + 1].lambda);
            for (std::size_t i = 0; i < lo.size(); ++i) worst_order = std::max(worst_order, lo[i] - hi[i]);
        }
    }
    r.seconds = elapsed(t0);
    r.pass = worst_rec <= 1e-10 && worst_unit <= 1e-10 && worst_order <= 1e-10;
    r.detail = "50 tensors, reconstruction " + fmt(worst_rec) + ", unitarity " + fmt(worst_unit) +
               ", worst order violation " + fmt(worst_order) + " (limits 1e-10)";
    return r;
}

// ---------------------------------------------------------------------------
// 4. Tubal square root and positive definiteness

CheckResult criterion4() {
    auto r = make(4, "tubal_calculus");
    const auto t0 = Clock::now();
    Rng rng(kSeed + 4);
    double worst_sqrt = 0.0;
    for (int t = 0; t < 500; ++t) {
        const Index p = rand_index(rng, 1, 16);
        std::vector<cplx> d(static_cast<std::size_t>(p));
        for (auto& x : d) x = std::exp(rng.uniform(-3.0, 3.0));
        const Tubular v = Tubular::from_components(d);
        const Tubular w = tub_sqrt(v);
        const Eigen::MatrixXcd Cw = circ_matrix(w);
        const Eigen::VectorXcd first = (Cw * Cw).col(0);
        const Eigen::Map<const Eigen::VectorXcd> vv(v.entries().data(), p);
        worst_sqrt = std::max(worst_sqrt, (first - vv).norm() / std::max(1.0, vv.norm()));
    }
    int disagreements = 0;
    for (int t = 0; t < 500; ++t) {
        const Index p = rand_index(rng, 1, 16);
        Tubular v(p);
        v[0] = rng.normal();
        for (Index k = 1; k < p; ++k) {
            if (k > p - k) {
                v[k] = std::conj(v[p - k]);
            } else if (k == p - k) {
                v[k] = rng.normal();
            } else {
                v[k] = rng.cnormal();
            }
        }
        v[0] += rng.uniform(-1.0, 4.0) * std::sqrt(static_cast<double>(p));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(circ_matrix(v), Eigen::EigenvaluesOnly);
        const bool dense_pd = es.eigenvalues()(0) > 1e-10;
        if (static_cast<bool>(tub_is_hpd(v)) != dense_pd) ++disagreements;
    }
    r.seconds = elapsed(t0);
    r.pass = worst_sqrt <= 1e-12 && disagreements == 0;
    r.detail = "500 roots, worst |w*w - v| " + fmt(worst_sqrt) + " (limit 1e-12); 500 Hermitian tubes, " +
               std::to_string(disagreements) + " HPD disagreements with the dense circulant (limit 0)";
    return r;
}

// ---------------------------------------------------------------------------
// 5. Inequality batteries

CheckResult criterion5() {
    auto r = make(5, "inequality_batteries");
    const auto t0 = Clock::now();
    Rng rng(kSeed + 5);
    double weyl = 1e300, product = 1e300, rayleigh = 1e300, kant = 1e300;
    for (int t = 0; t < 1000; ++t) {
        const Index n = rand_index(rng, 1, 6), p = rand_index(rng, 1, 6);
        weyl = std::min(weyl, weyl_slack(random_hermitian(rng, n, p), random_hermitian(rng, n, p)));

        const Tensor3 Aneg = -random_hpd(rng, n, p, 0.1);
        const Index rank = rand_index(rng, 1, n);
        const Tensor3 N = random_tensor(rng, n, rank, p, true);
        product = std::min(product, product_bound_slack(Aneg, tprod(N, ttranspose(N))));

        rayleigh = std::min(rayleigh, rayleigh_slack(random_hermitian(rng, n, p), random_tensor(rng, n, 1, p, true)));
        kant = std::min(kant, kantorovich_slack(random_hpd(rng, n, p, 0.1), random_tensor(rng, n, 1, p, true)));
    }
    r.seconds = elapsed(t0);
    const double worst = std::min({weyl, product, rayleigh, kant});
    r.pass = worst >= -1e-10;
    r.detail = "1000 trials each, worst slack: weyl " + fmt(weyl) + ", product " + fmt(product) + ", rayleigh " +
               fmt(rayleigh) + ", kantorovich " + fmt(kant) + " (limit -1e-10)";
    return r;
}

// ---------------------------------------------------------------------------
// 6. Tubular vs global steepest descent in the (A^T A)^{1/2} norm

std::vector<double> energy_trajectory(const std::function<SolveResult(const IterOptions&)>& solve,
                                      const Tensor3& A, const Tensor3& Xs, int iters) {
    std::vector<double> e;
    const double scale = frob_norm(tprod(A, Xs));
    IterOptions opts;
    opts.max_iterations = iters;
    opts.rel_residual_tol = 1e-300;
    opts.on_iterate = [&](int, const Tensor3& X) { e.push_back(frob_norm(tprod(A, X - Xs)) / scale); };
    solve(opts);
    return e;
}

CheckResult criterion6() {
    auto r = make(6, "sd_tubular_dominance");
    const auto t0 = Clock::now();
    Rng rng(kSeed + 6);
    int traj_fail = 0;
    double traj_worst = -1e300, proj_worst = -1e300;
    for (int t = 0; t < 50; ++t) {
        const Index n = rand_index(rng, 2, 16), p = rand_index(rng, 1, 8);
        const Tensor3 A = random_tensor(rng, n, n, p, false);
        const Tensor3 Xs = random_tensor(rng, n, 1, p, false);
        const Tensor3 B = tprod(A, Xs);
        const Tensor3 X0(n, 1, p);
        const int iters = 30;
        const auto et = energy_trajectory([&](const IterOptions& o) { return sd_tubular(A, B, X0, o); }, A, Xs, iters);
        const auto eg = energy_trajectory([&](const IterOptions& o) { return sd_global(A, B, X0, o); }, A, Xs, iters);
        double worst = -1e300;
        for (std::size_t k = 0; k < std::min(et.size(), eg.size()); ++k) worst = std::max(worst, et[k] - eg[k]);
        traj_worst = std::max(traj_worst, worst);
        if (worst > 1e-10) ++traj_fail;

        const Index m = rand_index(rng, 1, std::min<Index>(3, n));
        const Tensor3 Xold = random_tensor(rng, n, 1, p, false);
        std::vector<Tensor3> V;
        for (Index j = 0; j < m; ++j) V.push_back(random_tensor(rng, n, 1, p, false));
        const double scale = frob_norm(B);
        const double etub = frob_norm(tprod(A, project_orthogonal(A, B, Xold, V, ProjectionMode::tubular) - Xs)) / scale;
        const double eglo = frob_norm(tprod(A, project_orthogonal(A, B, Xold, V, ProjectionMode::global) - Xs)) / scale;
        proj_worst = std::max(proj_worst, etub - eglo);
    }
    r.seconds = elapsed(t0);
    const bool traj_ok = traj_fail == 0;
    const bool proj_ok = proj_worst <= 1e-10;
    r.pass = traj_ok && proj_ok;
    r.detail = "iterate-wise trajectories: " + std::to_string(traj_fail) + "/50 problems with tubular error above global (worst excess " +
               fmt(traj_worst) + ", limit 1e-10); one-step projections: worst excess " + fmt(proj_worst) +
               " (limit 1e-10)";
    return r;
}

// ---------------------------------------------------------------------------
// 7. Tubular energy contraction of sd_tubular

CheckResult criterion7() {
    auto r = make(7, "sd_tubular_contraction");
    const auto t0 = Clock::now();
    Rng rng(kSeed + 7);
    double worst = -1e300;
    int steps = 0;
    for (int t = 0; t < 20; ++t) {
        const Index n = rand_index(rng, 2, 8), p = rand_index(rng, 2, 6);
        const Tensor3 A = well_conditioned(rng, n, p);
        const Tensor3 Xs = random_tensor(rng, n, 1, p, false);
        const Tensor3 B = tprod(A, Xs);
        const Tensor3 N = tprod(ttranspose(A), A);
        const auto lm = real_components(lambda_min(N)), lM = real_components(lambda_max(N));
        std::vector<double> w(lm.size());
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double kappa = lM[i] / lm[i];
            w[i] = std::pow((kappa - 1.0) / (kappa + 1.0), 2);
        }
        std::vector<std::vector<double>> energy;
        IterOptions opts;
        opts.max_iterations = 25;
        opts.rel_residual_tol = 1e-13;
        opts.on_iterate = [&](int, const Tensor3& X) {
            const Tensor3 AE = tprod(A, X - Xs);
            energy.push_back(real_components(bilinear(AE, AE)));
        };
        sd_tubular(A, B, Tensor3(n, 1, p), opts);
        const double e0 = *std::max_element(energy.front().begin(), energy.front().end());
        for (std::size_t k = 0; k + 1 < energy.size(); ++k, ++steps)
            for (std::size_t i = 0; i < w.size(); ++i)
                worst = std::max(worst, (energy[k + 1][i] - w[i] * energy[k][i]) / e0);
    }
    r.seconds = elapsed(t0);
    r.pass = worst <= 1e-8;
    r.detail = "20 problems, " + std::to_string(steps) + " steps, worst excess over [w]-contraction " + fmt(worst) +
               " relative to the initial energy (limit 1e-8)";
    return r;
}

// ---------------------------------------------------------------------------
// 8. Neumann series rate and the Richardson convergence criterion

CheckResult criterion8() {
    auto r = make(8, "stationary_theory");
    const auto t0 = Clock::now();
    Rng rng(kSeed + 8);
    const Index n = 4, p = 4;
    const Tensor3 I = identity(n, p);
    std::string rates;
    bool rates_ok = true;
    for (double target : {0.3, 0.5, 0.9}) {
        Tensor3 A = random_tensor(rng, n, n, p, true);
        A *= cplx{target / spectral_radius_bar(A)};
        const Tensor3 ImA = I - A;
        std::vector<double> err;
        for (int terms = 0; terms <= 600; ++terms) {
            err.push_back(frob_norm(tprod(ImA, neumann_inverse(A, terms)) - I));
            if (err.back() < 1e-11 * err.front()) break;
        }
        const std::size_t T = err.size() - 1, t1 = T / 2;
        const double rate = std::pow(err[T] / err[t1], 1.0 / static_cast<double>(T - t1));
        rates_ok = rates_ok && rate <= target + 0.02;
        rates += (rates.empty() ? "" : ", ") + fmt(target) + " -> " + fmt(rate);
    }

    int pass_ok = 0, fail_ok = 0;
    for (int t = 0; t < 10; ++t) {
        const Tensor3 A = well_conditioned(rng, n, p);
        const Tensor3 B = random_tensor(rng, n, 1, p, false);
        const auto spec = normal_spectrum(A);
        IterOptions opts;
        opts.max_iterations = 5000;
        opts.rel_residual_tol = 1e-10;

        const Tubular good = alpha_star(spec);
        const auto rho_good = real_components(tubular_spectral_radius(iteration_tensor(A, good)));
        const bool good_contracts = *std::max_element(rho_good.begin(), rho_good.end()) < 1.0;
        const auto run_good = richardson_tubular(A, B, good, Tensor3(n, 1, p), opts);
        if (good_contracts && run_good.history.stop == StopReason::tolerance) ++pass_ok;

        auto comps = good.components();
        const auto j = static_cast<std::size_t>(rand_index(rng, 0, p - 1));
        comps[j] = 2.2 / spec.lambda_max[j];
        const Tubular bad = Tubular::from_components(comps);
        const auto rho_bad = real_components(tubular_spectral_radius(iteration_tensor(A, bad)));
        const bool bad_expands = *std::max_element(rho_bad.begin(), rho_bad.end()) >= 1.05;
        const auto run_bad = richardson_tubular(A, B, bad, Tensor3(n, 1, p), opts);
        if (bad_expands && run_bad.history.stop == StopReason::diverged) ++fail_ok;
    }
    r.seconds = elapsed(t0);
    r.pass = rates_ok && pass_ok == 10 && fail_ok == 10;
    r.detail = "Neumann rates (target -> observed, limit target + 0.02): " + rates + "; Richardson " +
               std::to_string(pass_ok) + "/10 contracting pairs converged, " + std::to_string(fail_ok) +
               "/10 expanding pairs diverged";
    return r;
}

// ---------------------------------------------------------------------------
// 9. Well-conditioned blur problem, n = 64

CheckResult criterion9() {
    auto r = make(9, "blur_n64_replication");
    const auto t0 = Clock::now();
    const auto P = blur_problem(64, 7, 4.0, kSeed + 9);
    const auto spec = normal_spectrum(P.A);
    IterOptions opts;
    opts.max_iterations = 500;
    opts.rel_residual_tol = 1e-8;
    const std::vector<std::string> names = {"TR:alpha_star", "TR:alpha_one", "Richardson:mu_star",
                                            "Richardson:mu_one", "TSD", "SD"};
    std::vector<ConvergenceHistory> h;
    std::string finals;
    bool all_converged = true;
    for (const auto& name : names) {
        h.push_back(run_method(P, parse_method(name), spec, opts).history);
        const bool ok = h.back().stop == StopReason::tolerance;
        all_converged = all_converged && ok;
        finals += (finals.empty() ? "" : ", ") + name + " " + fmt(h.back().delta.back()) + "@" +
                  std::to_string(h.back().iterations());
    }
    auto violations = [](const ConvergenceHistory& a, const ConvergenceHistory& b, double slack) {
        int v = 0;
        for (std::size_t k = 0; k < std::min(a.delta.size(), b.delta.size()); ++k)
            if (a.delta[k] > b.delta[k] + slack) ++v;
        return v;
    };
    const int tr_vs_rich = violations(h[0], h[2], 0.0);
    const int tsd_vs_sd = violations(h[4], h[5], 1e-12);
    r.seconds = elapsed(t0);
    r.pass = all_converged && tr_vs_rich == 0 && tsd_vs_sd == 0 && r.seconds < 30.0;
    r.detail = "final delta@k: " + finals + " (need <= 1e-8 within 500); TR(alpha*) above Richardson(mu*) at " +
               std::to_string(tr_vs_rich) + " iterates; TSD above SD at " + std::to_string(tsd_vs_sd) +
               " iterates; " + fmt(r.seconds) + " s (limit 30 s)";
    return r;
}

// ---------------------------------------------------------------------------
// 10. Ill-posed baart/prolate problem, n = 256

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

CheckResult criterion10() {
    auto r = make(10, "baart_prolate_n256_replication");
    const auto t0 = Clock::now();
    const Index n = 256;
    auto P = baart_prolate_problem(n, 0.46, kSeed + 10);
    const auto spec = normal_spectrum(P.A);
    IterOptions opts;
    opts.max_iterations = 1000;
    opts.rel_residual_tol = 5e-3;
    const auto tr = parse_method("TR:alpha_one");
    std::vector<double> iters, errs;
    for (std::uint64_t s = 0; s < 10; ++s) {
        if (s > 0) {
            P.X_star = random_solution(n, n, kSeed + 10 + s);
            P.B = make_rhs(P.A, P.X_star);
        }
        const auto h = run_method(P, tr, spec, opts).history;
        iters.push_back(h.stop == StopReason::tolerance ? h.iterations() : std::numeric_limits<double>::infinity());
        errs.push_back(h.rel_error.back());
    }
    P.X_star = ones_solution(n, n);
    P.B = make_rhs(P.A, P.X_star);
    const auto ones = run_method(P, tr, spec, opts).history;
    const double mi = median(iters), me = median(errs);
    r.seconds = elapsed(t0);
    const bool random_ok = mi >= 8 && mi <= 35 && me >= 0.13 && me <= 0.52;
    const bool ones_ok = ones.stop == StopReason::tolerance && ones.iterations() <= 5 && ones.rel_error.back() <= 0.05;
    r.pass = random_ok && ones_ok && r.seconds < 180.0;
    r.detail = "random solutions (10 seeds): median " + fmt(mi) + " iterations (band [8, 35]), median relative error " +
               fmt(me) + " (band [0.13, 0.52]); ones solution: " + std::to_string(ones.iterations()) +
               " iterations (limit 5), relative error " + fmt(ones.rel_error.back()) + " (limit 0.05); " +
               fmt(r.seconds) + " s (limit 180 s)";
    return r;
}

// ---------------------------------------------------------------------------
// 11. Relaxation, n = 100

CheckResult criterion11() {
    auto r = make(11, "relaxation_n100");
    const auto t0 = Clock::now();
    const auto P = baart_prolate_problem(100, 0.46, kSeed + 11);
    const auto spec = normal_spectrum(P.A);
    IterOptions opts;
    opts.max_iterations = 500;
    opts.rel_residual_tol = 5e-3;
    const Tensor3 X0(100, 1, 100);

    const auto plain = run_method(P, parse_method("TR:alpha_one"), spec, opts).history;
    const auto relaxed = run_method(P, parse_method("TRR:alpha_one"), spec, opts).history;
    const std::size_t k = std::min(plain.delta.size(), relaxed.delta.size()) - 1;
    const bool relax_helps = relaxed.delta[k] < plain.delta[k];

    struct Run {
        std::string name;
        ConvergenceHistory h;
    };
    std::vector<Run> sd_runs;
    sd_runs.push_back({"TSD", run_method(P, parse_method("TSD"), spec, opts).history});
    sd_runs.push_back({"TSDR", run_method(P, parse_method("TSDR"), spec, opts).history});
    sd_runs.push_back({"SD", run_method(P, parse_method("SD"), spec, opts).history});
    IterOptions tracked = opts;
    tracked.track_error_against = P.X_star;
    sd_runs.push_back({"SD+relax", relax_wrap(sd_increment(), P.A, P.B, X0, tracked).history});

    bool none_converged = true;
    std::string outcomes;
    for (const auto& run : sd_runs) {
        const bool converged = run.h.stop == StopReason::tolerance;
        none_converged = none_converged && !converged;
        outcomes += (outcomes.empty() ? "" : ", ") + run.name + " " + to_string(run.h.stop) + "@" +
                    std::to_string(run.h.iterations()) + " delta " + fmt(run.h.delta.back());
    }
    r.seconds = elapsed(t0);
    r.pass = relax_helps && none_converged;
    r.detail = "at k = " + std::to_string(k) + " TRR delta " + fmt(relaxed.delta[k]) + " vs TR delta " +
               fmt(plain.delta[k]) + "; steepest descent runs (must not reach 5e-3): " + outcomes;
    return r;
}

CheckResult criterion12() {
    auto r = make(12, "non_reproducible_content");
    r.pass = true;
    r.detail = "acknowledged: exact convergence curves depend on unreported seeds; acceptance uses the ordering and "
               "band checks of criteria 9 to 11";
    return r;
}

// ---------------------------------------------------------------------------
// Supporting invariants for the algebra suite

CheckResult algebra_invariants() {
    auto r = make(0, "algebra_invariants");
    const auto t0 = Clock::now();
    Rng rng(kSeed + 100);
    double assoc = 0, transpose = 0, commute = 0, parseval = 0, conj_sym = 0, cs = -1e300, tri = -1e300;
    for (int t = 0; t < 100; ++t) {
        const Index n = rand_index(rng, 1, 5), m = rand_index(rng, 1, 5), l = rand_index(rng, 1, 5);
        const Index k = rand_index(rng, 1, 5), p = rand_index(rng, 1, 8);
        const Tensor3 A = random_tensor(rng, n, m, p, true), B = random_tensor(rng, m, l, p, true),
                      C = random_tensor(rng, l, k, p, true);
        const Tensor3 abc = tprod(tprod(A, B), C);
        assoc = std::max(assoc, frob_norm(tprod(A, tprod(B, C)) - abc) / frob_norm(abc));
        const Tensor3 ab = tprod(A, B);
        transpose = std::max(transpose, frob_norm(ttranspose(ab) - tprod(ttranspose(B), ttranspose(A))) / frob_norm(ab));

        const Tensor3 a = random_tensor(rng, 1, 1, p, true), b = random_tensor(rng, 1, 1, p, true);
        commute = std::max(commute, frob_norm(tprod(a, b) - tprod(b, a)));

        const auto& F = A.fourier();
        double fs = 0;
        for (Index i = 0; i < p; ++i) fs += F.slice(i).squaredNorm();
        parseval = std::max(parseval, std::abs(fs - static_cast<double>(p) * std::pow(frob_norm(A), 2)) / fs);

        const Tensor3 R = random_tensor(rng, n, m, p, false);
        const auto& FR = R.fourier();
        for (Index i = 1; i < p; ++i)
            conj_sym = std::max(conj_sym, (FR.slice(p - i) - FR.slice(i).conjugate()).norm());

        const Tensor3 X = random_tensor(rng, n, 1, p, true), Y = random_tensor(rng, n, 1, p, true);
        const auto& FX = X.fourier();
        const auto& FY = Y.fourier();
        for (Index i = 0; i < p; ++i)
            cs = std::max(cs, std::abs(FX.slice(i).col(0).dot(FY.slice(i).col(0)).real()) -
                                  FX.slice(i).norm() * FY.slice(i).norm());
        const auto nxy = real_components(tubular_norm(X + Y));
        const auto nx = real_components(tubular_norm(X)), ny = real_components(tubular_norm(Y));
        for (std::size_t i = 0; i < nxy.size(); ++i) tri = std::max(tri, nxy[i] - nx[i] - ny[i]);
    }
    r.seconds = elapsed(t0);
    r.pass = assoc <= 1e-10 && transpose <= 1e-10 && commute <= 1e-12 && parseval <= 1e-10 && conj_sym <= 1e-12 &&
             cs <= 1e-12 && tri <= 1e-12;
    r.detail = "associativity " + fmt(assoc) + ", transpose rule " + fmt(transpose) + ", tube commutativity " +
               fmt(commute) + ", Parseval " + fmt(parseval) + ", conjugate symmetry " + fmt(conj_sym) +
               ", Cauchy-Schwarz excess " + fmt(cs) + ", triangle excess " + fmt(tri);
    return r;
}

CheckResult timed(const std::function<CheckResult()>& f) {
    const auto t0 = Clock::now();
    CheckResult r = f();
    if (r.seconds == 0.0) r.seconds = elapsed(t0);
    return r;
}

} // namespace

bool SuiteReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

CheckResult run_criterion(int k) {
    static const std::function<CheckResult()> table[] = {criterion1, criterion2, criterion3,  criterion4,
                                                         criterion5, criterion6, criterion7,  criterion8,
                                                         criterion9, criterion10, criterion11, criterion12};
    if (k < 1 || k > kCriterionCount) throw ValidationError("criterion must be in 1.." + std::to_string(kCriterionCount));
    return timed(table[k - 1]);
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"algebra", "spectra", "inequalities", "solvers", "experiments"};
    return names;
}

SuiteReport run_suite(const std::string& name) {
    SuiteReport rep;
    rep.suite = name;
    auto add = [&](std::initializer_list<int> ks) {
        for (int k : ks) rep.checks.push_back(run_criterion(k));
    };
    if (name == "algebra") {
        add({1, 4});
        rep.checks.push_back(timed(algebra_invariants));
    } else if (name == "spectra") {
        add({2, 3});
    } else if (name == "inequalities") {
        add({5});
    } else if (name == "solvers") {
        add({6, 7, 8});
    } else if (name == "experiments") {
        add({9, 10, 11, 12});
    } else {
        throw ValidationError("unknown suite '" + name + "' (expected algebra, spectra, inequalities, solvers, experiments)");
    }
    return rep;
}

void write_report_json(std::ostream& os, const SuiteReport& report) {
    nlohmann::json j;
    j["suite"] = report.suite;
    j["pass"] = report.pass();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : report.checks)
        j["checks"].push_back({{"criterion", c.criterion},
                               {"id", c.id},
                               {"pass", c.pass},
                               {"detail", c.detail},
                               {"seconds", c.seconds}});
    os << j.dump(2) << '\n';
}

} // namespace teig
