#include "teig/solvers.hpp"

#include "teig/errors.hpp"
#include "teig/fourier.hpp"
#include "teig/spectra.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace teig {

namespace {

using Clock = std::chrono::steady_clock;

bool exactly_real(const Tensor3& A) {
    return std::all_of(A.data().begin(), A.data().end(), [](const cplx& v) { return v.imag() == 0.0; });
}

// ||X||_F^2 from Fourier slices (Parseval).
double frob_sq(const FourierSlices& S) {
    return detail::pairwise_sum_sq(S.data()) / static_cast<double>(S.count());
}

// Re <X, Y>_F from Fourier slices.
double frob_inner_re(const FourierSlices& X, const FourierSlices& Y) {
    double s = 0.0;
    const auto x = X.data(), y = Y.data();
    for (std::size_t i = 0; i < x.size(); ++i) s += (std::conj(x[i]) * y[i]).real();
    return s / static_cast<double>(X.count());
}

void apply(const FourierSlices& A, const FourierSlices& X, FourierSlices& out) {
    for (Index i = 0; i < A.count(); ++i) out.slice(i).noalias() = A.slice(i) * X.slice(i);
}

void apply_adjoint(const FourierSlices& A, const FourierSlices& X, FourierSlices& out) {
    for (Index i = 0; i < A.count(); ++i) out.slice(i).noalias() = A.slice(i).adjoint() * X.slice(i);
}

void axpy(cplx a, const FourierSlices& X, FourierSlices& Y) {
    auto y = Y.data();
    const auto x = X.data();
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

void check_system(const Tensor3& A, const Tensor3& B, const Tensor3& X0) {
    if (A.rows() != A.cols()) throw ShapeError("solver: A must have square frontal slices");
    if (B.rows() != A.rows() || B.cols() != 1 || B.tubes() != A.tubes())
        throw ShapeError("solver: B must be n x 1 x p and conform with A");
    if (!X0.same_shape(B)) throw ShapeError("solver: X0 must have the shape of B");
}

// Shared bookkeeping for the drivers: residuals, history, stop tests.
class Run {
public:
    Run(const Tensor3& A, const Tensor3& B, const IterOptions& opts)
        : A_(A.fourier()), B_(B.fourier()), opts_(opts), real_(exactly_real(A) && exactly_real(B)),
          start_(Clock::now()) {
        opts.validate();
        bnorm_ = frob_norm(B);
        if (opts.track_error_against) {
            if (!opts.track_error_against->same_shape(B)) throw ShapeError("solver: tracked solution shape");
            Xs_ = opts.track_error_against->fourier();
            xsnorm_ = frob_norm(*opts.track_error_against);
        }
    }

    const FourierSlices& A() const { return A_; }

    FourierSlices residual(const FourierSlices& X) const {
        FourierSlices R(A_.rows(), 1, A_.count());
        apply(A_, X, R);
        auto r = R.data();
        const auto b = B_.data();
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
        return R;
    }

    double delta(const FourierSlices& R) const {
        const double rn = std::sqrt(frob_sq(R));
        return bnorm_ > 0.0 ? rn / bnorm_ : rn;
    }

    Tensor3 materialize(const FourierSlices& X) const {
        Tensor3 out = from_fourier(X);
        if (real_)
            for (auto& v : out.mutable_data()) v = cplx{v.real(), 0.0};
        return out;
    }

    /// Records iterate k and returns true when the run must stop.
    bool record(int k, const FourierSlices& X, const FourierSlices& R) {
        const double d = delta(R);
        h_.delta.push_back(d);
        h_.seconds.push_back(std::chrono::duration<double>(Clock::now() - start_).count());
        if (Xs_) {
            FourierSlices E = X;
            axpy(-1.0, *Xs_, E);
            const double en = std::sqrt(frob_sq(E));
            h_.rel_error.push_back(xsnorm_ > 0.0 ? en / xsnorm_ : en);
        }
        if (opts_.on_iterate) opts_.on_iterate(k, materialize(X));

        if (d <= opts_.rel_residual_tol) return stop(StopReason::tolerance);
        if (!std::isfinite(d) || d > opts_.divergence_guard * h_.delta.front()) return stop(StopReason::diverged);
        if (k >= opts_.max_iterations) return stop(StopReason::max_iterations);
        return false;
    }

    void breakdown(const std::string& why) {
        h_.notes.push_back(why);
        stop(StopReason::breakdown);
    }

    void note(std::string s) { h_.notes.push_back(std::move(s)); }

    SolveResult finish(const FourierSlices& X) { return {std::move(h_), materialize(X)}; }

private:
    bool stop(StopReason r) {
        h_.stop = r;
        return true;
    }

    const FourierSlices& A_;
    const FourierSlices& B_;
    const IterOptions& opts_;
    bool real_;
    Clock::time_point start_;
    double bnorm_ = 0.0, xsnorm_ = 0.0;
    std::optional<FourierSlices> Xs_;
    ConvergenceHistory h_;
};

FourierSlices zeros_like(const FourierSlices& X) { return FourierSlices(X.rows(), X.cols(), X.count()); }

} // namespace

const char* to_string(StopReason r) {
    switch (r) {
    case StopReason::tolerance: return "tolerance";
    case StopReason::max_iterations: return "max_iterations";
    case StopReason::diverged: return "diverged";
    case StopReason::breakdown: return "breakdown";
    }
    return "unknown";
}

const char* to_string(StepKind k) {
    switch (k) {
    case StepKind::alpha_star: return "alpha_star";
    case StepKind::alpha_one: return "alpha_one";
    case StepKind::mu_star: return "mu_star";
    case StepKind::mu_one: return "mu_one";
    case StepKind::user: return "user";
    }
    return "unknown";
}

void IterOptions::validate() const {
    if (max_iterations < 1) throw ValidationError("max_iterations must be >= 1");
    if (!(rel_residual_tol > 0.0)) throw ValidationError("rel_residual_tol must be > 0");
    if (!(divergence_guard > 0.0)) throw ValidationError("divergence_guard must be > 0");
}

// ---------------------------------------------------------------------------
// Step parameters

double NormalSpectrum::bar_min() const { return *std::min_element(lambda_min.begin(), lambda_min.end()); }
double NormalSpectrum::bar_max() const { return *std::max_element(lambda_max.begin(), lambda_max.end()); }

NormalSpectrum normal_spectrum(const Tensor3& A) {
    const auto& F = A.fourier();
    const Index p = A.tubes();
    const bool mirror = exactly_real(A);
    NormalSpectrum s;
    s.lambda_min.resize(static_cast<std::size_t>(p));
    s.lambda_max.resize(static_cast<std::size_t>(p));
    for (Index i = 0; i < p; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        const Index partner = (p - i) % p;
        if (mirror && partner < i) {
            // conj(A~)^H conj(A~) has the same eigenvalues
            s.lambda_min[iu] = s.lambda_min[static_cast<std::size_t>(partner)];
            s.lambda_max[iu] = s.lambda_max[static_cast<std::size_t>(partner)];
            continue;
        }
        const Eigen::MatrixXcd N = F.slice(i).adjoint() * F.slice(i);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(N, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw EigenSolverError("normal_spectrum: eigensolver failed", iu);
        s.lambda_min[iu] = es.eigenvalues()(0);
        s.lambda_max[iu] = es.eigenvalues()(es.eigenvalues().size() - 1);
    }
    return s;
}

Tubular alpha_star(const NormalSpectrum& s) {
    std::vector<cplx> sum(s.lambda_min.size());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = s.lambda_max[i] + s.lambda_min[i];
    return cplx{2.0} * tub_inverse(Tubular::from_components(sum));
}

Tubular alpha_one(const NormalSpectrum& s) {
    const std::vector<cplx> lm(s.lambda_max.begin(), s.lambda_max.end());
    return tub_inverse(Tubular::from_components(lm));
}

double mu_star(const NormalSpectrum& s) { return 2.0 / (s.bar_max() + s.bar_min()); }
double mu_one(const NormalSpectrum& s) { return 1.0 / s.bar_max(); }

Tubular alpha_star(const Tensor3& A) { return alpha_star(normal_spectrum(A)); }
Tubular alpha_one(const Tensor3& A) { return alpha_one(normal_spectrum(A)); }
double mu_star(const Tensor3& A) { return mu_star(normal_spectrum(A)); }
double mu_one(const Tensor3& A) { return mu_one(normal_spectrum(A)); }

Tensor3 iteration_tensor(const Tensor3& A, const Tubular& alpha) {
    if (alpha.length() != A.tubes()) throw ShapeError("iteration_tensor: tube length mismatch");
    const auto& F = A.fourier();
    const auto a = alpha.components();
    FourierSlices G(A.cols(), A.cols(), A.tubes());
    for (Index i = 0; i < A.tubes(); ++i) {
        const Eigen::MatrixXcd N = F.slice(i).adjoint() * F.slice(i);
        G.slice(i) = Eigen::MatrixXcd::Identity(A.cols(), A.cols()) - a[static_cast<std::size_t>(i)] * N;
    }
    return from_fourier(G);
}

// ---------------------------------------------------------------------------
// Increments

Increment tr_increment(const Tubular& alpha) {
    if (!tub_is_hermitian(alpha)) throw NotHermitianError("tubular step [alpha] must be Hermitian");
    auto a = alpha.components();
    return [a = std::move(a)](const FourierSlices& A, const FourierSlices& R, FourierSlices& inc) {
        if (static_cast<Index>(a.size()) != A.count()) throw ShapeError("tr_increment: tube length mismatch");
        apply_adjoint(A, R, inc);
        for (Index i = 0; i < A.count(); ++i) inc.slice(i) *= a[static_cast<std::size_t>(i)];
    };
}

Increment richardson_increment(double mu) {
    if (!(mu > 0.0)) throw ValidationError("richardson: mu must be > 0");
    return [mu](const FourierSlices& A, const FourierSlices& R, FourierSlices& inc) {
        apply_adjoint(A, R, inc);
        for (auto& v : inc.data()) v *= mu;
    };
}

Increment tsd_increment() {
    return [](const FourierSlices& A, const FourierSlices& R, FourierSlices& inc) {
        apply_adjoint(A, R, inc);
        FourierSlices AD = zeros_like(R);
        apply(A, inc, AD);
        const double eps = std::numeric_limits<double>::epsilon() * static_cast<double>(A.count());
        for (Index i = 0; i < A.count(); ++i) {
            auto d = inc.slice(i);
            const double num = d.squaredNorm();
            // a slice whose direction vanishes has already converged
            if (num == 0.0) continue;
            const double den = AD.slice(i).squaredNorm();
            if (!(den > eps * A.slice(i).squaredNorm() * num))
                throw StepBreakdown("tubular step <AD,AD> singular at Fourier component " + std::to_string(i) +
                                    " (Rayleigh quotient " + std::to_string(den / num) + ")");
            d *= num / den;
        }
    };
}

Increment sd_increment() {
    return [](const FourierSlices& A, const FourierSlices& R, FourierSlices& inc) {
        apply_adjoint(A, R, inc);
        FourierSlices AD = zeros_like(R);
        apply(A, inc, AD);
        const double num = frob_sq(inc), den = frob_sq(AD);
        if (!(den > 0.0)) throw StepBreakdown("global step: ||A D||_F = 0");
        for (auto& v : inc.data()) v *= num / den;
    };
}

// ---------------------------------------------------------------------------
// Drivers

SolveResult iterate(const Increment& F, const Tensor3& A, const Tensor3& B, const Tensor3& X0,
                    const IterOptions& opts) {
    check_system(A, B, X0);
    Run run(A, B, opts);
    FourierSlices X = X0.fourier();
    FourierSlices R = run.residual(X);
    FourierSlices inc = zeros_like(X);
    for (int k = 0; !run.record(k, X, R); ++k) {
        try {
            F(run.A(), R, inc);
        } catch (const StepBreakdown& e) {
            run.breakdown(e.what());
            break;
        }
        axpy(1.0, inc, X);
        R = run.residual(X);
    }
    return run.finish(X);
}

SolveResult relax_wrap(const Increment& F, const Tensor3& A, const Tensor3& B, const Tensor3& X0,
                       const IterOptions& opts, RelaxVariant variant) {
    check_system(A, B, X0);
    Run run(A, B, opts);
    FourierSlices X = X0.fourier();
    FourierSlices R = run.residual(X);
    FourierSlices inc = zeros_like(X);

    // X_{k-1}, R_{k-1} and Xbar_{k-1}, Xbar_k (the un-relaxed sequence)
    FourierSlices X_prev = X, R_prev = R, Xbar_prev = X, Xbar_cur = X;

    for (int k = 0; !run.record(k, X, R); ++k) {
        try {
            F(run.A(), R, inc);
        } catch (const StepBreakdown& e) {
            run.breakdown(e.what());
            break;
        }
        FourierSlices Xbar_next = X;
        axpy(1.0, inc, Xbar_next);
        FourierSlices X_next = Xbar_next;

        if (k >= 2) {
            const FourierSlices Rbar_next = run.residual(Xbar_next);
            FourierSlices D = R_prev;
            axpy(-1.0, Rbar_next, D);
            const double den = frob_sq(D);
            const double num = frob_inner_re(R_prev, D);
            const double omega = num / den;
            if (!(den > 0.0) || !std::isfinite(omega)) {
                run.note("k=" + std::to_string(k + 1) + ": relaxation denominator zero, plain step used");
            } else {
                const FourierSlices& base = variant == RelaxVariant::literal ? Xbar_prev : X_prev;
                X_next = X_prev;
                axpy(omega, Xbar_next, X_next);
                axpy(-omega, base, X_next);
            }
        }
        X_prev = std::move(X);
        R_prev = std::move(R);
        Xbar_prev = std::move(Xbar_cur);
        Xbar_cur = std::move(Xbar_next);
        X = std::move(X_next);
        R = run.residual(X);
    }
    return run.finish(X);
}

SolveResult richardson_tubular(const Tensor3& A, const Tensor3& B, const Tubular& alpha, const Tensor3& X0,
                               const IterOptions& opts) {
    if (alpha.length() != A.tubes()) throw ShapeError("richardson_tubular: tube length mismatch");
    return iterate(tr_increment(alpha), A, B, X0, opts);
}

SolveResult richardson_global(const Tensor3& A, const Tensor3& B, double mu, const Tensor3& X0,
                              const IterOptions& opts) {
    return iterate(richardson_increment(mu), A, B, X0, opts);
}

SolveResult sd_tubular(const Tensor3& A, const Tensor3& B, const Tensor3& X0, const IterOptions& opts) {
    return iterate(tsd_increment(), A, B, X0, opts);
}

SolveResult sd_global(const Tensor3& A, const Tensor3& B, const Tensor3& X0, const IterOptions& opts) {
    return iterate(sd_increment(), A, B, X0, opts);
}

// ---------------------------------------------------------------------------

Tensor3 project_orthogonal(const Tensor3& A, const Tensor3& B, const Tensor3& X_old,
                           std::span<const Tensor3> V, ProjectionMode mode) {
    check_system(A, B, X_old);
    if (V.empty()) throw ShapeError("project_orthogonal: empty basis");
    for (const auto& v : V)
        if (!v.same_shape(X_old)) throw ShapeError("project_orthogonal: basis tensors must be n x 1 x p");
    const Index n = A.rows(), p = A.tubes();
    const auto m = static_cast<Index>(V.size());
    const auto& FA = A.fourier();

    // normal-equation residual r = A^H (B - A X_old) per slice
    FourierSlices R(n, 1, p), r(n, 1, p);
    apply(FA, X_old.fourier(), R);
    {
        auto rd = R.data();
        const auto bd = B.fourier().data();
        for (std::size_t i = 0; i < rd.size(); ++i) rd[i] = bd[i] - rd[i];
    }
    apply_adjoint(FA, R, r);

    std::vector<Eigen::MatrixXcd> G(static_cast<std::size_t>(p));
    std::vector<Eigen::VectorXcd> rhs(static_cast<std::size_t>(p));
    std::vector<Eigen::MatrixXcd> Vs(static_cast<std::size_t>(p));
    for (Index i = 0; i < p; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        Vs[iu].resize(n, m);
        for (Index j = 0; j < m; ++j) Vs[iu].col(j) = V[static_cast<std::size_t>(j)].fourier().slice(i);
        const Eigen::MatrixXcd AV = FA.slice(i) * Vs[iu];
        G[iu] = AV.adjoint() * AV;
        rhs[iu] = Vs[iu].adjoint() * r.slice(i);
    }

    auto solve = [m](const Eigen::MatrixXcd& M, const Eigen::VectorXcd& b, std::size_t where) {
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(M);
        if (lu.rank() < m)
            throw SingularError("project_orthogonal: singular Galerkin system",
                                {{where, lu.maxPivot() > 0 ? std::abs(lu.matrixLU().diagonal()(m - 1)) : 0.0}});
        return Eigen::VectorXcd(lu.solve(b));
    };

    FourierSlices Xn = X_old.fourier();
    if (mode == ProjectionMode::tubular) {
        for (Index i = 0; i < p; ++i) {
            const auto iu = static_cast<std::size_t>(i);
            Xn.slice(i) += Vs[iu] * solve(G[iu], rhs[iu], iu);
        }
    } else {
        Eigen::MatrixXcd Gs = Eigen::MatrixXcd::Zero(m, m);
        Eigen::VectorXcd bs = Eigen::VectorXcd::Zero(m);
        for (Index i = 0; i < p; ++i) {
            Gs += G[static_cast<std::size_t>(i)];
            bs += rhs[static_cast<std::size_t>(i)];
        }
        const Eigen::VectorXcd c = solve(Gs, bs, 0);
        for (Index i = 0; i < p; ++i) Xn.slice(i) += Vs[static_cast<std::size_t>(i)] * c;
    }
    Tensor3 out = from_fourier(Xn);
    bool real = exactly_real(A) && exactly_real(B) && exactly_real(X_old);
    for (const auto& v : V) real = real && exactly_real(v);
    if (real)
        for (auto& v : out.mutable_data()) v = cplx{v.real(), 0.0};
    return out;
}

Tensor3 neumann_inverse(const Tensor3& A, int terms) {
    if (A.rows() != A.cols()) throw ShapeError("neumann_inverse: frontal slices must be square");
    if (terms < 0) throw ValidationError("neumann_inverse: terms must be >= 0");
    const auto rho = tubular_spectral_radius(A).components();
    for (std::size_t i = 0; i < rho.size(); ++i)
        if (!(rho[i].real() < 1.0))
            throw SpectralRadiusError("neumann_inverse: tubular spectral radius component " + std::to_string(i) +
                                      " is " + std::to_string(rho[i].real()) + ", not < 1");
    const auto& F = A.fourier();
    const Index n = A.rows();
    FourierSlices S(n, n, A.tubes());
    for (Index i = 0; i < A.tubes(); ++i) {
        Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(n, n);
        Eigen::MatrixXcd sum = P;
        for (int k = 1; k <= terms; ++k) {
            P = P * F.slice(i);
            sum += P;
        }
        S.slice(i) = sum;
    }
    Tensor3 out = from_fourier(S);
    if (exactly_real(A))
        for (auto& v : out.mutable_data()) v = cplx{v.real(), 0.0};
    return out;
}

} // namespace teig
