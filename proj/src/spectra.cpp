#include "teig/spectra.hpp"

#include "teig/errors.hpp"
#include "teig/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>

namespace teig {

namespace {

constexpr double kDefectiveCondition = 1e12;

void require_square(const Tensor3& A, const char* what) {
    if (A.rows() != A.cols()) throw ShapeError(std::string(what) + ": frontal slices must be square");
}

void require_hermitian(const Tensor3& A, const char* what) {
    require_square(A, what);
    if (!is_hermitian(A)) throw NotHermitianError(std::string(what) + ": operand is not Hermitian");
}

bool exactly_real(const Tensor3& A) {
    return std::all_of(A.data().begin(), A.data().end(), [](const cplx& v) { return v.imag() == 0.0; });
}

void hermitian_slice(const Eigen::MatrixXcd& M, Eigen::VectorXcd& values, Eigen::MatrixXcd& vectors, Index k) {
    const Eigen::MatrixXcd H = 0.5 * (M + M.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    if (es.info() != Eigen::Success) throw EigenSolverError("Hermitian eigensolver failed", static_cast<std::size_t>(k));
    values = es.eigenvalues().cast<cplx>();
    vectors = es.eigenvectors();
}

double general_slice(const Eigen::MatrixXcd& M, Eigen::VectorXcd& values, Eigen::MatrixXcd& vectors, Index k) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M);
    if (es.info() != Eigen::Success) throw EigenSolverError("eigensolver failed", static_cast<std::size_t>(k));
    const Index n = M.rows();
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    const auto& ev = es.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        if (ev(a).real() != ev(b).real()) return ev(a).real() < ev(b).real();
        return ev(a).imag() < ev(b).imag();
    });
    values.resize(n);
    vectors.resize(n, n);
    for (Index j = 0; j < n; ++j) {
        values(j) = ev(order[static_cast<std::size_t>(j)]);
        Eigen::VectorXcd v = es.eigenvectors().col(order[static_cast<std::size_t>(j)]);
        const double nv = v.norm();
        vectors.col(j) = nv > 0.0 ? Eigen::VectorXcd(v / nv) : v;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(vectors);
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

// Worst normalized slack of lower <= upper over paired components.
double order_slack(std::span<const double> lower, std::span<const double> upper) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lower.size(); ++i) {
        const double scale = std::max({1.0, std::abs(lower[i]), std::abs(upper[i])});
        worst = std::min(worst, (upper[i] - lower[i]) / scale);
    }
    return worst;
}

std::vector<double> real_parts(const Tubular& t) {
    const auto d = t.components();
    std::vector<double> re(d.size());
    std::transform(d.begin(), d.end(), re.begin(), [](const cplx& x) { return x.real(); });
    return re;
}

std::vector<double> extreme_components(const SliceSpectrum& S, bool largest) {
    std::vector<double> out(static_cast<std::size_t>(S.p));
    for (Index i = 0; i < S.p; ++i) {
        const auto& v = S.values[static_cast<std::size_t>(i)];
        double e = v(0).real();
        for (Index j = 1; j < v.size(); ++j) e = largest ? std::max(e, v(j).real()) : std::min(e, v(j).real());
        out[static_cast<std::size_t>(i)] = e;
    }
    return out;
}

Tubular tube_from_real(std::span<const double> comps) {
    std::vector<cplx> d(comps.begin(), comps.end());
    return Tubular::from_components(d);
}

} // namespace

SliceSpectrum slice_spectra(const Tensor3& A, std::optional<bool> hermitian) {
    require_square(A, "slice_spectra");
    SliceSpectrum S;
    S.n = A.rows();
    S.p = A.tubes();
    S.hermitian = hermitian.value_or(is_hermitian(A));
    S.sort_key = S.hermitian ? "ascending" : "lexicographic(re,im)";
    S.values.resize(static_cast<std::size_t>(S.p));
    S.vectors.resize(static_cast<std::size_t>(S.p));
    S.vector_condition.assign(static_cast<std::size_t>(S.p), 1.0);

    const auto& F = A.fourier();
    // For real Hermitian A, slice p-k is the conjugate of slice k, and so is
    // its eigendecomposition (eigenvalues are real and keep their order).
    const bool mirror = S.hermitian && exactly_real(A);
    for (Index k = 0; k < S.p; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        const Index partner = (S.p - k) % S.p;
        if (mirror && partner < k) {
            S.values[ku] = S.values[static_cast<std::size_t>(partner)];
            S.vectors[ku] = S.vectors[static_cast<std::size_t>(partner)].conjugate();
            continue;
        }
        const Eigen::MatrixXcd M = F.slice(k);
        if (S.hermitian)
            hermitian_slice(M, S.values[ku], S.vectors[ku], k);
        else
            S.vector_condition[ku] = general_slice(M, S.values[ku], S.vectors[ku], k);
    }
    return S;
}

std::vector<cplx> t_eigenvalues(const Tensor3& A) {
    const auto S = slice_spectra(A);
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(S.n * S.p));
    for (const auto& v : S.values) out.insert(out.end(), v.data(), v.data() + v.size());
    return out;
}

TubularEigenPair tubular_eig_from_selection(const Tensor3& A, const SliceSpectrum& S,
                                            std::span<const Index> selection) {
    if (static_cast<Index>(selection.size()) != S.p)
        throw ShapeError("tubular_eig_from_selection: selection needs one index per slice");
    TubularEigenPair pair;
    pair.selection.assign(selection.begin(), selection.end());
    std::vector<cplx> comps(static_cast<std::size_t>(S.p));
    FourierSlices xs(S.n, 1, S.p);
    for (Index i = 0; i < S.p; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        const Index j = selection[iu];
        if (j < 0 || j >= S.n)
            throw ShapeError("tubular_eig_from_selection: index " + std::to_string(j) + " out of range in slice " +
                             std::to_string(i));
        comps[iu] = S.values[iu](j);
        xs.slice(i) = S.vectors[iu].col(j);
        if (S.vector_condition[iu] > kDefectiveCondition) pair.defective = true;
    }
    pair.lambda = Tubular::from_components(comps);
    pair.X = from_fourier(xs);
    pair.residual = frob_norm(tprod(A, pair.X) - tube_scale(pair.X, pair.lambda));
    if (pair.defective)
        std::clog << "warning: tubular eigenpair selected from a defective slice, residual " << pair.residual
                  << "\n";
    return pair;
}

TubularEigenPair tubular_eig_from_selection(const Tensor3& A, std::span<const Index> selection) {
    return tubular_eig_from_selection(A, slice_spectra(A), selection);
}

std::vector<TubularEigenPair> aligned_eigenpairs(const Tensor3& A) {
    const auto S = slice_spectra(A);
    std::vector<TubularEigenPair> out;
    for (Index j = 0; j < S.n; ++j) {
        const std::vector<Index> sel(static_cast<std::size_t>(S.p), j);
        out.push_back(tubular_eig_from_selection(A, S, sel));
    }
    return out;
}

std::vector<TubularEigenPair> enumerate_tubular_eigenpairs(const Tensor3& A) {
    require_square(A, "enumerate_tubular_eigenpairs");
    const double count = std::pow(static_cast<double>(A.rows()), static_cast<double>(A.tubes()));
    if (count > 4096.0) throw ShapeError("enumerate_tubular_eigenpairs: n^p exceeds 4096");
    const auto S = slice_spectra(A);
    std::vector<TubularEigenPair> out;
    std::vector<Index> sel(static_cast<std::size_t>(S.p), 0);
    while (true) {
        out.push_back(tubular_eig_from_selection(A, S, sel));
        Index pos = S.p - 1;
        while (pos >= 0 && ++sel[static_cast<std::size_t>(pos)] == S.n) sel[static_cast<std::size_t>(pos--)] = 0;
        if (pos < 0) break;
    }
    return out;
}

HermitianSpectrum hermitian_ordered_spectrum(const Tensor3& A, double tol) {
    require_square(A, "hermitian_ordered_spectrum");
    if (!is_hermitian(A, tol)) throw NotHermitianError("hermitian_ordered_spectrum: operand is not Hermitian");
    const auto S = slice_spectra(A, true);
    FourierSlices q(S.n, S.n, S.p), d(S.n, S.n, S.p);
    for (Index i = 0; i < S.p; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        q.slice(i) = S.vectors[iu].adjoint();
        d.slice(i) = S.values[iu].asDiagonal();
    }
    HermitianSpectrum H;
    H.Q = from_fourier(q);
    H.D = from_fourier(d);
    for (Index j = 0; j < S.n; ++j) {
        const std::vector<Index> sel(static_cast<std::size_t>(S.p), j);
        H.pairs.push_back(tubular_eig_from_selection(A, S, sel));
    }
    return H;
}

Tubular lambda_min(const Tensor3& A) {
    require_hermitian(A, "lambda_min");
    return tube_from_real(extreme_components(slice_spectra(A, true), false));
}

Tubular lambda_max(const Tensor3& A) {
    require_hermitian(A, "lambda_max");
    return tube_from_real(extreme_components(slice_spectra(A, true), true));
}

Tubular tubular_spectral_radius(const Tensor3& A) {
    const auto S = slice_spectra(A);
    std::vector<cplx> comps(static_cast<std::size_t>(S.p));
    for (Index i = 0; i < S.p; ++i)
        comps[static_cast<std::size_t>(i)] = S.values[static_cast<std::size_t>(i)].cwiseAbs().maxCoeff();
    return Tubular::from_components(comps);
}

double spectral_radius_bar(const Tensor3& A) {
    double r = 0.0;
    for (const auto& c : tubular_spectral_radius(A).components()) r = std::max(r, c.real());
    return r;
}

std::vector<cplx> tubular_to_eigentuple(const Tubular& lambda) {
    const Index p = lambda.length();
    std::vector<cplx> d(static_cast<std::size_t>(p));
    for (Index i = 0; i < p; ++i) d[static_cast<std::size_t>(i)] = lambda[(p - i) % p];
    return d;
}

Tubular eigentuple_to_tubular(std::span<const cplx> d) {
    const auto p = static_cast<Index>(d.size());
    Tubular lambda(p);
    for (Index i = 0; i < p; ++i) lambda[i] = d[static_cast<std::size_t>((p - i) % p)];
    return lambda;
}

IndependenceReport t_linear_independent(std::span<const Tensor3> Xs) {
    IndependenceReport r;
    if (Xs.empty()) return r;
    const Index n = Xs.front().rows(), p = Xs.front().tubes();
    const auto k = static_cast<Index>(Xs.size());
    for (const auto& X : Xs)
        if (X.rows() != n || X.cols() != 1 || X.tubes() != p)
            throw ShapeError("t_linear_independent: operands must all be n x 1 x p");
    if (k > n) return {false, Index{0}};
    std::vector<Eigen::VectorXd> sv;
    double scale = 0.0;
    for (Index l = 0; l < p; ++l) {
        Eigen::MatrixXcd M(n, k);
        for (Index j = 0; j < k; ++j) M.col(j) = Xs[static_cast<std::size_t>(j)].fourier().slice(l);
        sv.push_back(Eigen::JacobiSVD<Eigen::MatrixXcd>(M).singularValues());
        scale = std::max(scale, sv.back()(0));
    }
    // one scale for all slices, so a slice that is zero up to transform
    // roundoff counts as rank deficient
    const double threshold =
        static_cast<double>(std::max(n, k) * p) * std::numeric_limits<double>::epsilon() * scale;
    for (Index l = 0; l < p; ++l)
        if (scale == 0.0 || sv[static_cast<std::size_t>(l)](k - 1) <= threshold) return {false, l};
    return r;
}

bool is_positive_definite(const Tensor3& A, double tol) {
    require_hermitian(A, "is_positive_definite");
    const auto S = slice_spectra(A, true);
    double scale = 0.0, lo = std::numeric_limits<double>::infinity();
    for (const auto& v : S.values)
        for (Index j = 0; j < v.size(); ++j) {
            scale = std::max(scale, std::abs(v(j).real()));
            lo = std::min(lo, v(j).real());
        }
    return lo > tol * std::max(scale, 1.0);
}

double weyl_slack(const Tensor3& A, const Tensor3& B) {
    require_hermitian(A, "weyl_slack");
    require_hermitian(B, "weyl_slack");
    const auto lower = real_parts(lambda_min(A) + lambda_min(B));
    const auto upper = real_parts(lambda_max(A) + lambda_max(B));
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& pair : aligned_eigenpairs(A + B)) {
        const auto mid = real_parts(pair.lambda);
        worst = std::min({worst, order_slack(lower, mid), order_slack(mid, upper)});
    }
    return worst;
}

double product_bound_slack(const Tensor3& A, const Tensor3& B) {
    require_hermitian(A, "product_bound_slack");
    require_hermitian(B, "product_bound_slack");
    if (!is_positive_definite(-A)) throw NotHPDError("product_bound_slack: A must be negative definite");
    const auto SB = slice_spectra(B, true);
    const auto bmin = extreme_components(SB, false);
    double bscale = 1.0;
    for (const auto& v : SB.values) bscale = std::max(bscale, v.cwiseAbs().maxCoeff());
    if (*std::min_element(bmin.begin(), bmin.end()) < -1e-12 * bscale)
        throw NotHPDError("product_bound_slack: B must be positive semidefinite");

    const Tubular lmA = lambda_min(A), LMA = lambda_max(A);
    const Tubular lmB = lambda_min(B), LMB = lambda_max(B);
    const auto C = tprod(A, B);
    const auto SC = slice_spectra(C, false);
    const auto cmin = extreme_components(SC, false);
    const auto cmax = extreme_components(SC, true);

    double worst = std::numeric_limits<double>::infinity();
    worst = std::min(worst, order_slack(real_parts(lmA * lmB), cmax));
    worst = std::min(worst, order_slack(cmax, real_parts(LMA * lmB)));
    worst = std::min(worst, order_slack(real_parts(lmA * LMB), cmin));
    worst = std::min(worst, order_slack(cmin, real_parts(LMA * LMB)));
    // every tubular eigenvalue of A*B is negative semidefinite
    const std::vector<double> zeros(cmax.size(), 0.0);
    worst = std::min(worst, order_slack(cmax, zeros));
    return worst;
}

double rayleigh_slack(const Tensor3& A, const Tensor3& X) {
    require_hermitian(A, "rayleigh_slack");
    const Tubular num = Tubular::from_tensor(tprod(ttranspose(X), tprod(A, X)));
    const Tubular q = num * tub_inverse(bilinear(X, X));
    const auto mid = real_parts(q);
    return std::min(order_slack(real_parts(lambda_min(A)), mid), order_slack(mid, real_parts(lambda_max(A))));
}

double kantorovich_slack(const Tensor3& A, const Tensor3& X) {
    require_hermitian(A, "kantorovich_slack");
    if (!is_positive_definite(A)) throw NotHPDError("kantorovich_slack: A must be positive definite");
    const Tensor3 XH = ttranspose(X);
    const Tubular gi = tub_inverse(bilinear(X, X));
    const Tubular xax = Tubular::from_tensor(tprod(XH, tprod(A, X)));
    const Tubular xaix = Tubular::from_tensor(tprod(XH, tprod(tinverse(A), X)));
    const Tubular lhs = gi * xax * xaix * gi;
    const Tubular lm = lambda_min(A), LM = lambda_max(A);
    const Tubular s = lm + LM;
    const Tubular rhs = cplx{0.25} * (s * s * tub_inverse(lm) * tub_inverse(LM));
    return order_slack(real_parts(lhs), real_parts(rhs));
}

std::vector<InequalityResult> verify_inequalities(const Tensor3& A, const Tensor3& B, const Tensor3& X) {
    std::vector<InequalityResult> out;
    auto run = [&](const char* name, auto&& f) {
        InequalityResult r{name, std::nullopt, {}};
        try {
            r.worst_slack = f();
        } catch (const NotHermitianError& e) {
            r.skipped = e.what();
        } catch (const NotHPDError& e) {
            r.skipped = e.what();
        } catch (const SingularError& e) {
            r.skipped = e.what();
        }
        out.push_back(std::move(r));
    };
    run("weyl", [&] { return weyl_slack(A, B); });
    run("product_bounds", [&] { return product_bound_slack(A, B); });
    run("rayleigh", [&] { return rayleigh_slack(A, X); });
    run("kantorovich", [&] { return kantorovich_slack(A, X); });
    return out;
}

} // namespace teig
