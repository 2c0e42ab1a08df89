#include "teig/fourier.hpp"

#include "teig/errors.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace teig {

namespace {

// FFTW's planner is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (p, howmany, sign) and kept for the
// lifetime of the process.
class PlanCache {
public:
    fftw_plan get(Index p, Index howmany, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_tuple(p, howmany, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;

        std::vector<fftw_complex> scratch(static_cast<std::size_t>(p * howmany));
        int n = static_cast<int>(p);
        int stride = static_cast<int>(howmany);
        fftw_plan plan = fftw_plan_many_dft(1, &n, static_cast<int>(howmany), scratch.data(), nullptr,
                                            stride, 1, scratch.data(), nullptr, stride, 1, sign,
                                            FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<Index, Index, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

void run(std::span<cplx> data, Index howmany, Index p, int sign) {
    if (p == 1 || howmany == 0) return;
    if (static_cast<Index>(data.size()) != howmany * p)
        throw ShapeError("tube transform: buffer size does not match howmany * p");
    fftw_plan plan = plan_cache().get(p, howmany, sign);
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, ptr, ptr);
}

} // namespace

FourierSlices::FourierSlices(Index n, Index m, Index p)
    : n_(n), m_(m), p_(p), data_(static_cast<std::size_t>(n * m * p), cplx{0.0}) {
    if (n < 1 || m < 1 || p < 1) throw ShapeError("FourierSlices: extents must be positive");
}

Eigen::Map<const Eigen::MatrixXcd> FourierSlices::slice(Index k) const {
    return {data_.data() + k * n_ * m_, n_, m_};
}

Eigen::Map<Eigen::MatrixXcd> FourierSlices::slice(Index k) {
    return {data_.data() + k * n_ * m_, n_, m_};
}

void forward_tubes(std::span<cplx> data, Index howmany, Index p) {
    run(data, howmany, p, FFTW_BACKWARD);
}

void inverse_tubes(std::span<cplx> data, Index howmany, Index p) {
    run(data, howmany, p, FFTW_FORWARD);
    const double scale = 1.0 / static_cast<double>(p);
    for (auto& v : data) v *= scale;
}

FourierSlices to_fourier(const Tensor3& A) {
    FourierSlices out(A.rows(), A.cols(), A.tubes());
    std::copy(A.data().begin(), A.data().end(), out.data().begin());
    forward_tubes(out.data(), A.rows() * A.cols(), A.tubes());
    return out;
}

Tensor3 from_fourier(const FourierSlices& S) {
    if (static_cast<Index>(S.data().size()) != S.rows() * S.cols() * S.count())
        throw ShapeError("from_fourier: inconsistent slice buffer");
    Tensor3 out(S.rows(), S.cols(), S.count());
    std::copy(S.data().begin(), S.data().end(), out.data_.begin());
    inverse_tubes(out.data_, S.rows() * S.cols(), S.count());
    return out;
}

Eigen::MatrixXcd dft_matrix(Index p) {
    Eigen::MatrixXcd F(p, p);
    const double scale = 1.0 / std::sqrt(static_cast<double>(p));
    for (Index j = 0; j < p; ++j)
        for (Index k = 0; k < p; ++k) {
            // reduce the exponent first so large p keeps full accuracy
            const double angle = -2.0 * std::numbers::pi * static_cast<double>((j * k) % p) /
                                 static_cast<double>(p);
            F(j, k) = scale * cplx{std::cos(angle), std::sin(angle)};
        }
    return F;
}

std::vector<cplx> tube_to_components(std::span<const cplx> tube) {
    std::vector<cplx> out(tube.begin(), tube.end());
    forward_tubes(out, 1, static_cast<Index>(out.size()));
    return out;
}

std::vector<cplx> components_to_tube(std::span<const cplx> components) {
    std::vector<cplx> out(components.begin(), components.end());
    inverse_tubes(out, 1, static_cast<Index>(out.size()));
    return out;
}

} // namespace teig
