#pragma once

// Dense third-order tensors under the T-product.
//
// Storage is slice-major: frontal slice k is a contiguous column-major n x m
// block, so entry (i, j, k) lives at k*n*m + j*n + i. The mode-3 transform
// (see fourier.hpp) is computed on first use and cached; any mutable access
// drops the cache.

#include <Eigen/Dense>

#include <atomic>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace teig {

using cplx = std::complex<double>;
using Index = Eigen::Index;

class FourierSlices;
class Tubular;

class Tensor3 {
public:
    Tensor3() = default;
    /// Zero tensor of shape n x m x p. All extents must be >= 1.
    Tensor3(Index n, Index m, Index p);

    Tensor3(const Tensor3& other);
    Tensor3(Tensor3&& other) noexcept = default;
    Tensor3& operator=(const Tensor3& other);
    Tensor3& operator=(Tensor3&& other) noexcept = default;

    static Tensor3 from_slices(std::span<const Eigen::MatrixXcd> slices);
    static Tensor3 from_real(Index n, Index m, Index p, std::span<const double> entries);

    Index rows() const noexcept { return n_; }
    Index cols() const noexcept { return m_; }
    Index tubes() const noexcept { return p_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    cplx operator()(Index i, Index j, Index k) const { return data_[offset(i, j, k)]; }
    cplx& operator()(Index i, Index j, Index k) {
        touch();
        return data_[offset(i, j, k)];
    }

    Eigen::Map<const Eigen::MatrixXcd> slice(Index k) const;
    Eigen::Map<Eigen::MatrixXcd> slice(Index k);

    std::span<const cplx> data() const noexcept { return data_; }
    std::span<cplx> mutable_data() {
        touch();
        return data_;
    }

    /// Mode-3 transform of this tensor, computed once per value.
    const FourierSlices& fourier() const;

    /// True when every imaginary part is within tol * (1 + max |entry|).
    bool is_real(double tol = 1e-12) const;
    /// Copy with imaginary parts dropped; throws DomainError when the
    /// imaginary residue exceeds tol * (1 + max |entry|).
    Tensor3 real_checked(double tol = 1e-12) const;

    bool same_shape(const Tensor3& other) const noexcept {
        return n_ == other.n_ && m_ == other.m_ && p_ == other.p_;
    }

    Tensor3& operator+=(const Tensor3& rhs);
    Tensor3& operator-=(const Tensor3& rhs);
    Tensor3& operator*=(cplx s);

private:
    friend Tensor3 from_fourier(const FourierSlices& slices);

    struct FourierCache {
        FourierCache();
        ~FourierCache();
        std::once_flag once;
        std::unique_ptr<const FourierSlices> value;
        std::atomic<bool> ready{false};
    };

    std::size_t offset(Index i, Index j, Index k) const noexcept {
        return static_cast<std::size_t>((k * m_ + j) * n_ + i);
    }
    void touch();

    Index n_ = 0, m_ = 0, p_ = 0;
    std::vector<cplx> data_;
    std::shared_ptr<FourierCache> cache_ = std::make_shared<FourierCache>();
};

Tensor3 operator+(Tensor3 lhs, const Tensor3& rhs);
Tensor3 operator-(Tensor3 lhs, const Tensor3& rhs);
Tensor3 operator*(cplx s, Tensor3 rhs);
Tensor3 operator-(Tensor3 t);

/// A 1 x 1 x p tensor: the scalar of the T-algebra.
class Tubular {
public:
    Tubular() = default;
    explicit Tubular(Index p) : entries_(static_cast<std::size_t>(p), cplx{0.0}) {}
    explicit Tubular(std::vector<cplx> entries) : entries_(std::move(entries)) {}

    /// [e_1] = (1, 0, ..., 0): the identity tube.
    static Tubular unit(Index p);
    /// Tube whose Fourier components are `components`.
    static Tubular from_components(std::span<const cplx> components);
    static Tubular from_tensor(const Tensor3& t);

    Index length() const noexcept { return static_cast<Index>(entries_.size()); }
    cplx operator[](Index k) const { return entries_[static_cast<std::size_t>(k)]; }
    cplx& operator[](Index k) { return entries_[static_cast<std::size_t>(k)]; }
    const std::vector<cplx>& entries() const noexcept { return entries_; }

    /// Fourier components d_1..d_p, i.e. the diagonal of F_p^H circ([v]) F_p.
    std::vector<cplx> components() const;
    Tensor3 as_tensor() const;

    /// Conjugate transpose: [v]^H.
    Tubular adjoint() const;

    Tubular& operator+=(const Tubular& rhs);
    Tubular& operator-=(const Tubular& rhs);
    Tubular& operator*=(cplx s);

private:
    std::vector<cplx> entries_;
};

Tubular operator+(Tubular lhs, const Tubular& rhs);
Tubular operator-(Tubular lhs, const Tubular& rhs);
Tubular operator*(cplx s, Tubular rhs);
/// T-product of two tubes (circular convolution).
Tubular operator*(const Tubular& a, const Tubular& b);

// ---------------------------------------------------------------------------
// T-product algebra

/// A * B for A n x m x p and B m x l x p. Throws ShapeError.
Tensor3 tprod(const Tensor3& A, const Tensor3& B);

/// Conjugate transpose A^H: slice 1 is A_1^H, slice k >= 2 is A_{p-k+2}^H.
Tensor3 ttranspose(const Tensor3& A);

/// n x n x p identity: first frontal slice I_n, others zero.
Tensor3 identity(Index n, Index p);

/// T-inverse via slice-wise inversion in the Fourier domain. Throws SingularError.
Tensor3 tinverse(const Tensor3& A);

/// X * [a] for X n x m x p: every tube of X convolved with [a].
Tensor3 tube_scale(const Tensor3& X, const Tubular& a);

/// Tube (i, j, :).
Tubular tube(const Tensor3& A, Index i, Index j);

/// Lateral slice A(:, j, :) as an n x 1 x p tensor.
Tensor3 lateral(const Tensor3& A, Index j);

/// Concatenate n x 1 x p tensors into an n x k x p tensor.
Tensor3 lateral_concat(std::span<const Tensor3> columns);

/// Block-circulant matrix bcirc(A), np x mp. Test oracle only: refuses
/// matrices with more than 4e6 entries.
Eigen::MatrixXcd bcirc_explicit(const Tensor3& A);

/// Ufold(A): the np x m block column [A_1; ...; A_p].
Eigen::MatrixXcd unfold(const Tensor3& A);
/// Inverse of unfold; `rows` must be a multiple of p.
Tensor3 fold(const Eigen::MatrixXcd& blocks, Index p);

/// Frobenius norm with a fixed pairwise summation order.
double frob_norm(const Tensor3& A);
/// <A, B>_F = sum conj(A) * B.
cplx frob_inner(const Tensor3& A, const Tensor3& B);

/// <X, Y> = X^H * Y for n x 1 x p operands.
Tubular bilinear(const Tensor3& X, const Tensor3& Y);

/// <X, X>^{1/2}: Hermitian positive semidefinite tube.
Tubular tubular_norm(const Tensor3& X);

/// ||A - A^H||_F <= tol * ||A||_F.
bool is_hermitian(const Tensor3& A, double tol = 1e-10);

namespace detail {
/// Pairwise (cascade) sum of squared magnitudes; deterministic order.
double pairwise_sum_sq(std::span<const cplx> values);
} // namespace detail

} // namespace teig
