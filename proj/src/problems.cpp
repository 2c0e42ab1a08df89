#include "teig/problems.hpp"

#include "teig/errors.hpp"
#include "teig/rng.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace teig {

namespace {

const char* name(BlurBase b) { return b == BlurBase::circulant ? "circulant" : "symmetric_toeplitz"; }
const char* name(SolutionKind s) { return s == SolutionKind::random ? "random" : "ones"; }

Tensor3 solution_for(SolutionKind kind, Index n, std::uint64_t seed) {
    return kind == SolutionKind::ones ? ones_solution(n, n) : random_solution(n, n, seed);
}

// (exp(b c) - exp(a c)) / c with b - a = h, stable as c -> 0.
double exp_diff_over(double a, double h, double c) {
    if (c == 0.0) return h;
    return std::exp(a * c) * std::expm1(h * c) / c;
}

} // namespace

std::string ProblemDescriptor::to_string() const {
    std::ostringstream os;
    os.precision(17);
    os << "family=" << family << " n=" << n;
    if (family == "blur") os << " band=" << band << " sigma=" << sigma << " base=" << name(base);
    if (family == "baart_prolate") os << " w=" << w;
    os << " solution=" << name(solution) << " seed=" << seed;
    return os.str();
}

Eigen::MatrixXd blur_matrix(Index n, Index band, double sigma, BlurBase base) {
    if (band < 1 || band > n) throw ValidationError("blur: band must satisfy 1 <= band <= n");
    if (!(sigma > 0.0)) throw ValidationError("blur: sigma must be positive");
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    for (Index j = 0; j < band; ++j) z(j) = std::exp(-static_cast<double>(j * j) / (2.0 * sigma * sigma));
    Eigen::MatrixXd T(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i)
            T(i, j) = base == BlurBase::circulant ? z(((j - i) % n + n) % n) : z(std::abs(i - j));
    return T / std::sqrt(2.0 * std::numbers::pi * sigma * sigma);
}

Eigen::MatrixXd baart_matrix(Index n) {
    if (n < 1) throw ValidationError("baart: n must be positive");
    const double hs = std::numbers::pi / (2.0 * static_cast<double>(n));
    const double ht = std::numbers::pi / static_cast<double>(n);
    const double c = 1.0 / (3.0 * std::sqrt(2.0));
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd f1(n), f2(n), f3(n);
    for (Index i = 0; i < n; ++i) f3(i) = exp_diff_over(static_cast<double>(i) * hs, hs, 1.0);
    for (Index j = 1; j <= n; ++j) {
        f1 = f3;
        const double co2 = std::cos((static_cast<double>(j) - 0.5) * ht);
        const double co3 = std::cos(static_cast<double>(j) * ht);
        for (Index i = 0; i < n; ++i) f2(i) = exp_diff_over(static_cast<double>(i) * hs, hs, co2);
        if (n % 2 == 0 && j == n / 2)
            f3.setConstant(hs);
        else
            for (Index i = 0; i < n; ++i) f3(i) = exp_diff_over(static_cast<double>(i) * hs, hs, co3);
        A.col(j - 1) = c * (f1 + 4.0 * f2 + f3);
    }
    return A;
}

Eigen::MatrixXd prolate_matrix(Index n, double w) {
    Eigen::VectorXd a(n);
    a(0) = 2.0 * w;
    for (Index k = 1; k < n; ++k)
        a(k) = std::sin(2.0 * std::numbers::pi * w * static_cast<double>(k)) / (std::numbers::pi * static_cast<double>(k));
    Eigen::MatrixXd T(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i) T(i, j) = a(std::abs(i - j));
    return T;
}

Tensor3 scaled_slices(const Eigen::MatrixXd& A1, const Eigen::MatrixXd& A2) {
    const Index p = A1.rows();
    Tensor3 A(A2.rows(), A2.cols(), p);
    for (Index i = 0; i < p; ++i) A.slice(i) = (A1(i, 0) * A2).cast<cplx>();
    return A;
}

ProblemInstance blur_problem(Index n, Index band, double sigma, std::uint64_t seed, BlurBase base,
                             SolutionKind solution) {
    const auto M = blur_matrix(n, band, sigma, base);
    ProblemInstance P;
    P.A = scaled_slices(M, M);
    P.X_star = solution_for(solution, n, seed);
    P.B = make_rhs(P.A, P.X_star);
    P.descriptor = {"blur", n, band, sigma, 0.0, seed, solution, base};
    return P;
}

ProblemInstance baart_prolate_problem(Index n, double w, std::uint64_t seed, SolutionKind solution) {
    if (n < 4) throw ValidationError("baart_prolate: n must be at least 4");
    ProblemInstance P;
    P.A = scaled_slices(baart_matrix(n), prolate_matrix(n, w));
    P.X_star = solution_for(solution, n, seed);
    P.B = make_rhs(P.A, P.X_star);
    P.descriptor = {"baart_prolate", n, 0, 0.0, w, seed, solution, BlurBase::circulant};
    return P;
}

Tensor3 make_rhs(const Tensor3& A, const Tensor3& X_star) { return tprod(A, X_star); }

Tensor3 random_solution(Index n, Index p, std::uint64_t seed) {
    Rng rng(seed);
    Tensor3 X(n, 1, p);
    for (auto& v : X.mutable_data()) v = rng.normal();
    return X;
}

Tensor3 ones_solution(Index n, Index p) {
    Tensor3 X(n, 1, p);
    for (auto& v : X.mutable_data()) v = 1.0;
    return X;
}

} // namespace teig
