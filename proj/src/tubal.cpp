#include "teig/tubal.hpp"

#include "teig/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace teig {

namespace {

double max_abs(std::span<const cplx> d) {
    double m = 0.0;
    for (const auto& x : d) m = std::max(m, std::abs(x));
    return m;
}

bool components_hermitian(std::span<const cplx> d, double tol) {
    const double bound = tol * (1.0 + max_abs(d));
    return std::all_of(d.begin(), d.end(), [bound](const cplx& x) { return std::abs(x.imag()) <= bound; });
}

} // namespace

Eigen::MatrixXcd circ_matrix(const Tubular& v) {
    const Index p = v.length();
    Eigen::MatrixXcd C(p, p);
    for (Index c = 0; c < p; ++c)
        for (Index r = 0; r < p; ++r) C(r, c) = v[((r - c) % p + p) % p];
    return C;
}

double default_singular_tol(std::span<const cplx> components) {
    return static_cast<double>(components.size()) * std::numeric_limits<double>::epsilon() *
           max_abs(components);
}

Tubular tub_inverse(const Tubular& v, std::optional<double> tol) {
    auto d = v.components();
    const double t = tol.value_or(default_singular_tol(d));
    std::vector<SingularError::Component> bad;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double mag = std::abs(d[i]);
        if (mag <= t || mag == 0.0) bad.push_back({i, mag});
    }
    if (!bad.empty()) throw SingularError("tub_inverse: singular Fourier component(s)", std::move(bad));
    for (auto& x : d) x = 1.0 / x;
    return Tubular::from_components(d);
}

Tubular tub_func(const Tubular& v, const std::function<cplx(cplx)>& f) {
    auto d = v.components();
    for (std::size_t i = 0; i < d.size(); ++i) {
        const cplx y = f(d[i]);
        if (!std::isfinite(y.real()) || !std::isfinite(y.imag()))
            throw DomainError("tub_func: f undefined at Fourier component " + std::to_string(i));
        d[i] = y;
    }
    return Tubular::from_components(d);
}

Tubular tub_func_real(const Tubular& v, const std::function<double(double)>& f) {
    const auto re = hermitian_components(v);
    std::vector<cplx> d(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) {
        const double y = f(re[i]);
        if (!std::isfinite(y))
            throw DomainError("tub_func_real: f undefined at Fourier component " + std::to_string(i));
        d[i] = y;
    }
    return Tubular::from_components(d);
}

bool tub_is_hermitian(const Tubular& v, double tol) { return components_hermitian(v.components(), tol); }

HpdReport tub_is_hpd(const Tubular& v, double tol) {
    HpdReport r;
    const auto d = v.components();
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (std::abs(d[i].imag()) > tol || d[i].real() <= tol) {
            r.hpd = false;
            r.offending.push_back(i);
        }
    }
    return r;
}

Tubular tub_sqrt(const Tubular& v) {
    const auto report = tub_is_hpd(v);
    if (!report) throw NotHPDError("tub_sqrt: operand is not Hermitian positive definite");
    auto d = v.components();
    for (auto& x : d) x = std::sqrt(x.real());
    // The result of an exactly Hermitian tube is Hermitian; drop O(eps) residue
    // so the root is representable as a real tube when v is.
    Tubular w = Tubular::from_components(d);
    if (std::all_of(v.entries().begin(), v.entries().end(), [](const cplx& x) { return x.imag() == 0.0; }))
        for (Index k = 0; k < w.length(); ++k) w[k] = cplx{w[k].real(), 0.0};
    return w;
}

std::vector<double> hermitian_components(const Tubular& v, double tol) {
    const auto d = v.components();
    if (!components_hermitian(d, tol)) throw NotHermitianError("tube is not Hermitian");
    std::vector<double> re(d.size());
    std::transform(d.begin(), d.end(), re.begin(), [](const cplx& x) { return x.real(); });
    return re;
}

Order tub_order_cmp(const Tubular& a, const Tubular& b, double tol) {
    if (a.length() != b.length()) throw ShapeError("tub_order_cmp: length mismatch");
    const auto da = hermitian_components(a, tol);
    const auto db = hermitian_components(b, tol);
    double scale = 1.0;
    for (std::size_t i = 0; i < da.size(); ++i) scale = std::max({scale, std::abs(da[i]), std::abs(db[i])});
    const double eps = tol * scale;
    bool any_less = false, any_greater = false;
    for (std::size_t i = 0; i < da.size(); ++i) {
        const double diff = db[i] - da[i];
        if (diff > eps) any_less = true;
        if (diff < -eps) any_greater = true;
    }
    if (any_less && any_greater) return Order::incomparable;
    if (any_less) return Order::less;
    if (any_greater) return Order::greater;
    return Order::equal;
}

Tensor3 dtensor_from_tubular(const Tubular& a, Index n) {
    Tensor3 D(n, n, a.length());
    for (Index k = 0; k < a.length(); ++k)
        for (Index i = 0; i < n; ++i) D(i, i, k) = a[k];
    return D;
}

} // namespace teig
