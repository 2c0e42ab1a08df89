#pragma once

// Mode-3 DFT layer.
//
// Conventions (the only place they are stated):
//   * F_p is the unitary matrix with (j, k) entry w^{jk} / sqrt(p), w = exp(-2 pi i / p).
//   * to_fourier computes, for every tube, d_k = sum_s v_s exp(+2 pi i s k / p)
//     without normalization. This makes Fourier slice k exactly the k-th
//     diagonal block of (F_p^H (x) I_n) bcirc(A) (F_p (x) I_m), and the
//     components of a tube exactly the diagonal of F_p^H circ([v]) F_p.
//   * from_fourier is the exact inverse: v_s = (1/p) sum_k d_k exp(-2 pi i s k / p).
//   * Bridge to the unitary form: diag(d) = F_p^H circ([v]) F_p and
//     v = F_p diag(d) F_p^H e_1 (so v = sqrt(p) F_p diag(d) e / p).

#include "teig/tensor3.hpp"

#include <span>
#include <vector>

namespace teig {

/// The p Fourier-domain slices A~_1..A~_p of an n x m x p tensor, stored
/// slice-major like Tensor3.
class FourierSlices {
public:
    FourierSlices() = default;
    FourierSlices(Index n, Index m, Index p);

    Index rows() const noexcept { return n_; }
    Index cols() const noexcept { return m_; }
    Index count() const noexcept { return p_; }

    Eigen::Map<const Eigen::MatrixXcd> slice(Index k) const;
    Eigen::Map<Eigen::MatrixXcd> slice(Index k);

    std::span<const cplx> data() const noexcept { return data_; }
    std::span<cplx> data() noexcept { return data_; }

private:
    Index n_ = 0, m_ = 0, p_ = 0;
    std::vector<cplx> data_;
};

FourierSlices to_fourier(const Tensor3& A);
/// Throws ShapeError when the buffer is inconsistent with its extents.
Tensor3 from_fourier(const FourierSlices& S);

/// Unitary DFT matrix F_p (oracle use).
Eigen::MatrixXcd dft_matrix(Index p);

/// In-place transforms of `howmany` interleaved tubes of length p: tube t
/// occupies data[t + s * howmany] for s = 0..p-1.
void forward_tubes(std::span<cplx> data, Index howmany, Index p);
void inverse_tubes(std::span<cplx> data, Index howmany, Index p);

/// Single-tube convenience wrappers.
std::vector<cplx> tube_to_components(std::span<const cplx> tube);
std::vector<cplx> components_to_tube(std::span<const cplx> components);

} // namespace teig
