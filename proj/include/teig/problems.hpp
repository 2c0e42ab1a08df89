#pragma once

// Test problems for A * X = B with a known solution.

#include "teig/tensor3.hpp"

#include <cstdint>
#include <string>

namespace teig {

/// Base matrix of the blur family. `circulant` is MATLAB's
/// toeplitz([z(1) fliplr(z(2:end))], z); `symmetric_toeplitz` is toeplitz(z).
enum class BlurBase { circulant, symmetric_toeplitz };
enum class SolutionKind { random, ones };

struct ProblemDescriptor {
    std::string family;
    Index n = 0;
    Index band = 0;
    double sigma = 0.0;
    double w = 0.0;
    std::uint64_t seed = 0;
    SolutionKind solution = SolutionKind::random;
    BlurBase base = BlurBase::circulant;

    /// One-line "key=value" summary used as file metadata.
    std::string to_string() const;
};

struct ProblemInstance {
    Tensor3 A, X_star, B;
    ProblemDescriptor descriptor;
};

/// Gaussian blur matrix scaled by 1/sqrt(2 pi sigma^2). Throws ValidationError
/// unless 1 <= band <= n.
Eigen::MatrixXd blur_matrix(Index n, Index band, double sigma, BlurBase base = BlurBase::circulant);

/// baart(n) from Hansen's Regularization Tools.
Eigen::MatrixXd baart_matrix(Index n);

/// gallery('prolate', n, w): symmetric Toeplitz with a_0 = 2w,
/// a_k = sin(2 pi w k) / (pi k).
Eigen::MatrixXd prolate_matrix(Index n, double w);

/// n x n x p tensor with frontal slice i equal to A1(i, 0) * A2 (p = A1.rows()).
Tensor3 scaled_slices(const Eigen::MatrixXd& A1, const Eigen::MatrixXd& A2);

ProblemInstance blur_problem(Index n, Index band = 7, double sigma = 4.0, std::uint64_t seed = 0,
                             BlurBase base = BlurBase::circulant, SolutionKind solution = SolutionKind::random);

/// Throws ValidationError when n < 4.
ProblemInstance baart_prolate_problem(Index n, double w = 0.46, std::uint64_t seed = 0,
                                      SolutionKind solution = SolutionKind::random);

Tensor3 make_rhs(const Tensor3& A, const Tensor3& X_star);
/// n x 1 x p, i.i.d. standard normal real entries drawn in storage order.
Tensor3 random_solution(Index n, Index p, std::uint64_t seed);
Tensor3 ones_solution(Index n, Index p);

} // namespace teig
