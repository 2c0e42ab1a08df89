#pragma once

// Stationary and steepest-descent iterations for the normal equation
// A^H * A * X = A^H * B, in tubular and global form.
//
// All iterations run on Fourier slices; only the reported quantities are
// mapped back. delta_k is the relative residual of the original system,
// ||B - A*X_k||_F / ||B||_F.

#include "teig/tensor3.hpp"
#include "teig/tubal.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace teig {

class FourierSlices;

enum class StopReason { tolerance, max_iterations, diverged, breakdown };
const char* to_string(StopReason r);

struct IterOptions {
    int max_iterations = 10000;
    double rel_residual_tol = 1e-8;
    /// When set, relative errors against this solution are recorded.
    std::optional<Tensor3> track_error_against;
    std::uint64_t rng_seed = 0;
    /// Stop as diverged once delta_k > divergence_guard * delta_0.
    double divergence_guard = 1e6;
    /// Called with (k, X_k) for every accepted iterate, k = 0 included.
    std::function<void(int, const Tensor3&)> on_iterate;

    /// Throws ValidationError.
    void validate() const;
};

struct ConvergenceHistory {
    std::vector<double> delta;
    /// Empty unless a solution was tracked.
    std::vector<double> rel_error;
    /// Elapsed wall time at each iterate, from the start of the run.
    std::vector<double> seconds;
    StopReason stop = StopReason::max_iterations;
    /// Breakdown details and relaxation fallbacks.
    std::vector<std::string> notes;

    int iterations() const { return static_cast<int>(delta.size()) - 1; }
};

struct SolveResult {
    ConvergenceHistory history;
    Tensor3 X;
};

// ---------------------------------------------------------------------------
// Step parameters

enum class StepKind { alpha_star, alpha_one, mu_star, mu_one, user };
const char* to_string(StepKind k);

/// Extreme eigenvalues of every Fourier slice of A^H * A.
struct NormalSpectrum {
    std::vector<double> lambda_min, lambda_max;
    /// Extreme T-eigenvalues over all slices.
    double bar_min() const;
    double bar_max() const;
};

NormalSpectrum normal_spectrum(const Tensor3& A);

/// 2 ([lambda_M] + [lambda_m])^{-1}. Throws SingularError.
Tubular alpha_star(const NormalSpectrum& s);
/// [lambda_M]^{-1}. Throws SingularError.
Tubular alpha_one(const NormalSpectrum& s);
double mu_star(const NormalSpectrum& s);
double mu_one(const NormalSpectrum& s);

Tubular alpha_star(const Tensor3& A);
Tubular alpha_one(const Tensor3& A);
double mu_star(const Tensor3& A);
double mu_one(const Tensor3& A);

/// G_[alpha] = I - D_[alpha] * A^H * A.
Tensor3 iteration_tensor(const Tensor3& A, const Tubular& alpha);

// ---------------------------------------------------------------------------
// Iterations

/// Raised by an increment that cannot be formed (singular step tube, zero
/// denominator). The drivers turn it into a breakdown stop.
class StepBreakdown : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// F in X_{k+1} = X_k + F(X_k), on Fourier slices: given the slices of A and
/// of the residual B - A*X_k, write the slices of the increment.
using Increment = std::function<void(const FourierSlices& A, const FourierSlices& R, FourierSlices& inc)>;

/// X += A^H * R * [alpha]. Throws NotHermitianError for non-Hermitian alpha.
Increment tr_increment(const Tubular& alpha);
/// X += mu A^H * R.
Increment richardson_increment(double mu);
/// X += D * <D,D> * <AD,AD>^{-1}, D = A^H * R. Slices with D~_i = 0 are left
/// alone; a slice whose Rayleigh quotient ||A~D~||^2 / ||D~||^2 is at or below
/// p * eps * ||A~_i||_F^2 raises StepBreakdown.
Increment tsd_increment();
/// X += (||D||_F^2 / ||A D||_F^2) D.
Increment sd_increment();

/// Plain iteration X_{k+1} = X_k + F(X_k).
SolveResult iterate(const Increment& F, const Tensor3& A, const Tensor3& B, const Tensor3& X0,
                    const IterOptions& opts);

/// Which iterate the relaxation direction starts from.
///   from_previous_iterate: X_{k+1} = X_{k-1} + w (Xbar_{k+1} - X_{k-1})
///   literal:               X_{k+1} = X_{k-1} + w (Xbar_{k+1} - Xbar_{k-1})
/// In both, w minimizes ||R_{k-1} - w (R_{k-1} - Rbar_{k+1})||_F.
enum class RelaxVariant { from_previous_iterate, literal };

/// Two plain steps, then Xbar_{k+1} = X_k + F(X_k) followed by the relaxation
/// above. A zero denominator in w falls back to X_{k+1} = Xbar_{k+1}.
SolveResult relax_wrap(const Increment& F, const Tensor3& A, const Tensor3& B, const Tensor3& X0,
                       const IterOptions& opts, RelaxVariant variant = RelaxVariant::from_previous_iterate);

SolveResult richardson_tubular(const Tensor3& A, const Tensor3& B, const Tubular& alpha, const Tensor3& X0,
                               const IterOptions& opts);
SolveResult richardson_global(const Tensor3& A, const Tensor3& B, double mu, const Tensor3& X0,
                              const IterOptions& opts);
SolveResult sd_tubular(const Tensor3& A, const Tensor3& B, const Tensor3& X0, const IterOptions& opts);
SolveResult sd_global(const Tensor3& A, const Tensor3& B, const Tensor3& X0, const IterOptions& opts);

enum class ProjectionMode { tubular, global };

/// One orthogonal projection step for the normal equation onto span(V):
/// tubular mode uses tubular coefficients (one Galerkin system per slice),
/// global mode scalar coefficients. Throws SingularError naming the slice.
Tensor3 project_orthogonal(const Tensor3& A, const Tensor3& B, const Tensor3& X_old,
                           std::span<const Tensor3> V, ProjectionMode mode);

/// sum_{k=0}^{terms} A^k. Throws SpectralRadiusError unless rho_T(A) < [e_1].
Tensor3 neumann_inverse(const Tensor3& A, int terms);

} // namespace teig
