#pragma once

// Tubular spectra computed slice by slice in the Fourier domain.
//
// Selections and slice indices are 0-based. Slice eigenvectors are
// normalized to unit 2-norm.

#include "teig/tensor3.hpp"
#include "teig/tubal.hpp"

#include <optional>
#include <string>
#include <vector>

namespace teig {

struct SliceSpectrum {
    Index n = 0, p = 0;
    bool hermitian = false;
    /// "ascending" (Hermitian path) or "lexicographic(re,im)".
    std::string sort_key;
    std::vector<Eigen::VectorXcd> values;
    /// Column j is the unit eigenvector for values[i](j).
    std::vector<Eigen::MatrixXcd> vectors;
    /// 2-norm condition number of each slice's eigenvector matrix.
    std::vector<double> vector_condition;
};

/// Eigendecomposition of every Fourier slice. The Hermitian path is used
/// when `hermitian` is true or, if unset, when is_hermitian(A) holds.
/// Throws ShapeError, EigenSolverError.
SliceSpectrum slice_spectra(const Tensor3& A, std::optional<bool> hermitian = std::nullopt);

/// All n*p T-eigenvalues (spectrum of bcirc(A)), slice by slice.
std::vector<cplx> t_eigenvalues(const Tensor3& A);

struct TubularEigenPair {
    Tubular lambda;
    /// n x 1 x p eigentensor.
    Tensor3 X;
    std::vector<Index> selection;
    /// Set when a selected slice had an ill-conditioned eigenvector basis.
    bool defective = false;
    /// ||A*X - X*[lambda]||_F.
    double residual = 0.0;
};

/// Assemble ([lambda], X) from one eigenpair per slice. Throws ShapeError
/// when an index is out of range.
TubularEigenPair tubular_eig_from_selection(const Tensor3& A, const SliceSpectrum& S,
                                            std::span<const Index> selection);
TubularEigenPair tubular_eig_from_selection(const Tensor3& A, std::span<const Index> selection);

/// The n aligned selections (j, ..., j).
std::vector<TubularEigenPair> aligned_eigenpairs(const Tensor3& A);

/// Every selection, in lexicographic order of the index tuple. Throws
/// ShapeError when n^p > 4096.
std::vector<TubularEigenPair> enumerate_tubular_eigenpairs(const Tensor3& A);

struct HermitianSpectrum {
    /// Unitary Q and F-diagonal D with A = Q^H * D * Q.
    Tensor3 Q, D;
    /// [lambda_1] <= ... <= [lambda_n]; X_j is lateral slice j of Q^H.
    std::vector<TubularEigenPair> pairs;
};

/// Throws NotHermitianError when ||A - A^H||_F > tol * ||A||_F.
HermitianSpectrum hermitian_ordered_spectrum(const Tensor3& A, double tol = 1e-10);

/// [lambda_m(A)] and [lambda_M(A)] of a Hermitian tensor.
Tubular lambda_min(const Tensor3& A);
Tubular lambda_max(const Tensor3& A);

/// Fourier component i is the spectral radius of slice i.
Tubular tubular_spectral_radius(const Tensor3& A);
/// Spectral radius of bcirc(A): the largest component of the above.
double spectral_radius_bar(const Tensor3& A);

/// Tubular eigenvalue -> eigentuple: d_1 = lambda_1, d_i = lambda_{p-i+2}.
std::vector<cplx> tubular_to_eigentuple(const Tubular& lambda);
Tubular eigentuple_to_tubular(std::span<const cplx> d);

struct IndependenceReport {
    bool independent = true;
    std::optional<Index> failing_slice;
    explicit operator bool() const noexcept { return independent; }
};

/// Slice-wise rank test. The threshold is max(n, k) * p * eps times the
/// largest singular value over all slices.
IndependenceReport t_linear_independent(std::span<const Tensor3> Xs);

/// Hermitian A is positive definite iff every slice eigenvalue is > tol * scale.
bool is_positive_definite(const Tensor3& A, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Inequality verifiers. Each returns the worst slack (upper minus lower side)
// over all Fourier components, divided by max(1, |sides|). Negative means
// violated.

/// lambda_m(A)+lambda_m(B) <= [lambda] <= lambda_M(A)+lambda_M(B) for every
/// aligned tubular eigenvalue of A+B. A, B Hermitian.
double weyl_slack(const Tensor3& A, const Tensor3& B);

/// The four product bounds plus semidefiniteness of [lambda] for A Hermitian
/// negative definite and B Hermitian positive semidefinite.
double product_bound_slack(const Tensor3& A, const Tensor3& B);

/// [lambda_m] <= (X^H A X) * (X^H X)^{-1} <= [lambda_M], evaluated with
/// tensor operations. A Hermitian, X n x 1 x p with X^H X nonsingular.
double rayleigh_slack(const Tensor3& A, const Tensor3& X);

/// (X^H X)^{-1} (X^H A X)(X^H A^{-1} X)(X^H X)^{-1} <=
/// (1/4)([lambda_m]+[lambda_M])^2 [lambda_m]^{-1}[lambda_M]^{-1}. A HPD.
double kantorovich_slack(const Tensor3& A, const Tensor3& X);

struct InequalityResult {
    std::string name;
    std::optional<double> worst_slack;
    /// Set when the operands do not satisfy the preconditions.
    std::string skipped;
};

/// Runs every inequality whose preconditions the operands satisfy.
std::vector<InequalityResult> verify_inequalities(const Tensor3& A, const Tensor3& B, const Tensor3& X);

} // namespace teig
