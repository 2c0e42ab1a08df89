#pragma once

// Calculus on tubular scalars. Everything here acts on the Fourier
// components d_1..d_p of a tube (the eigenvalues of circ([v])).

#include "teig/tensor3.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace teig {

/// p x p circulant with first column v.
Eigen::MatrixXcd circ_matrix(const Tubular& v);

/// Default singularity threshold: p * eps * max |d_i|.
double default_singular_tol(std::span<const cplx> components);

/// Inverse by componentwise reciprocal. `tol` is absolute on |d_i|; when
/// omitted the scale-relative default is used. Throws SingularError.
Tubular tub_inverse(const Tubular& v, std::optional<double> tol = std::nullopt);

/// f([v]) with Fourier components f(d_i). Throws DomainError when f throws
/// it or returns a non-finite value.
Tubular tub_func(const Tubular& v, const std::function<cplx(cplx)>& f);

/// Real-branch variant for Hermitian tubes: f is applied to the real
/// components. Throws NotHermitianError, DomainError.
Tubular tub_func_real(const Tubular& v, const std::function<double(double)>& f);

/// Hermitian test: |Im d_i| <= tol * (1 + max |d_i|).
bool tub_is_hermitian(const Tubular& v, double tol = 1e-10);

struct HpdReport {
    bool hpd = true;
    /// Components that are not real or not positive.
    std::vector<std::size_t> offending;
    explicit operator bool() const noexcept { return hpd; }
};

/// True iff every component is real (|Im| <= tol) and > tol.
HpdReport tub_is_hpd(const Tubular& v, double tol = 1e-10);

/// Principal root of an HPD tube. Throws NotHPDError.
Tubular tub_sqrt(const Tubular& v);

enum class Order { less, greater, equal, incomparable };

/// Partial order on Hermitian tubes via their real components.
/// `less` means a <= b (not equal), `greater` means b <= a.
/// Throws NotHermitianError.
Order tub_order_cmp(const Tubular& a, const Tubular& b, double tol = 1e-10);

/// Real parts of the components; throws NotHermitianError unless Hermitian.
std::vector<double> hermitian_components(const Tubular& v, double tol = 1e-10);

/// F-diagonal n x n x p tensor with every diagonal tube equal to [a].
Tensor3 dtensor_from_tubular(const Tubular& a, Index n);

} // namespace teig
