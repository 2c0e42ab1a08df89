#include "teig/tensor3.hpp"

#include "teig/errors.hpp"
#include "teig/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace teig {

Tensor3::FourierCache::FourierCache() = default;
Tensor3::FourierCache::~FourierCache() = default;

namespace {

void require_positive(Index n, Index m, Index p) {
    if (n < 1 || m < 1 || p < 1)
        throw ShapeError("tensor extents must be positive, got " + std::to_string(n) + "x" +
                         std::to_string(m) + "x" + std::to_string(p));
}

void require_same_shape(const Tensor3& a, const Tensor3& b, const char* what) {
    if (!a.same_shape(b)) throw ShapeError(std::string(what) + ": shape mismatch");
}

void require_column(const Tensor3& X, const char* what) {
    if (X.cols() != 1) throw ShapeError(std::string(what) + ": expected an n x 1 x p tensor");
}

bool exactly_real(const Tensor3& A) {
    return std::all_of(A.data().begin(), A.data().end(), [](const cplx& v) { return v.imag() == 0.0; });
}

// Products of real tensors are real; remove the transform's O(eps) residue.
void drop_imaginary(Tensor3& A) {
    for (auto& v : A.mutable_data()) v = cplx{v.real(), 0.0};
}

double max_abs(std::span<const cplx> values) {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
}

} // namespace

namespace detail {

double pairwise_sum_sq(std::span<const cplx> values) {
    constexpr std::size_t block = 64;
    if (values.size() <= block) {
        double s = 0.0;
        for (const auto& v : values) s += std::norm(v);
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum_sq(values.first(half)) + pairwise_sum_sq(values.subspan(half));
}

} // namespace detail

// ---------------------------------------------------------------------------
// Tensor3

Tensor3::Tensor3(Index n, Index m, Index p)
    : n_(n), m_(m), p_(p) {
    require_positive(n, m, p);
    data_.assign(static_cast<std::size_t>(n * m * p), cplx{0.0});
}

Tensor3::Tensor3(const Tensor3& other)
    : n_(other.n_), m_(other.m_), p_(other.p_), data_(other.data_) {
    // A computed transform is immutable and can be shared; a pending one cannot.
    if (other.cache_ && other.cache_->ready.load()) cache_ = other.cache_;
}

Tensor3& Tensor3::operator=(const Tensor3& other) {
    if (this == &other) return *this;
    n_ = other.n_;
    m_ = other.m_;
    p_ = other.p_;
    data_ = other.data_;
    if (other.cache_ && other.cache_->ready.load())
        cache_ = other.cache_;
    else
        cache_ = std::make_shared<FourierCache>();
    return *this;
}

Tensor3 Tensor3::from_slices(std::span<const Eigen::MatrixXcd> slices) {
    if (slices.empty()) throw ShapeError("from_slices: no slices");
    const Index n = slices.front().rows(), m = slices.front().cols();
    Tensor3 out(n, m, static_cast<Index>(slices.size()));
    for (Index k = 0; k < out.p_; ++k) {
        const auto& s = slices[static_cast<std::size_t>(k)];
        if (s.rows() != n || s.cols() != m) throw ShapeError("from_slices: ragged slices");
        out.slice(k) = s;
    }
    return out;
}

Tensor3 Tensor3::from_real(Index n, Index m, Index p, std::span<const double> entries) {
    Tensor3 out(n, m, p);
    if (entries.size() != out.size()) throw ShapeError("from_real: entry count mismatch");
    std::transform(entries.begin(), entries.end(), out.data_.begin(),
                   [](double v) { return cplx{v, 0.0}; });
    return out;
}

Eigen::Map<const Eigen::MatrixXcd> Tensor3::slice(Index k) const {
    return {data_.data() + k * n_ * m_, n_, m_};
}

Eigen::Map<Eigen::MatrixXcd> Tensor3::slice(Index k) {
    touch();
    return {data_.data() + k * n_ * m_, n_, m_};
}

void Tensor3::touch() {
    if (!cache_ || cache_->ready.load()) cache_ = std::make_shared<FourierCache>();
}

const FourierSlices& Tensor3::fourier() const {
    if (empty()) throw ShapeError("fourier: empty tensor");
    std::call_once(cache_->once, [this] {
        cache_->value = std::make_unique<const FourierSlices>(to_fourier(*this));
        cache_->ready.store(true);
    });
    return *cache_->value;
}

bool Tensor3::is_real(double tol) const {
    const double bound = tol * (1.0 + max_abs(data_));
    return std::all_of(data_.begin(), data_.end(),
                       [bound](const cplx& v) { return std::abs(v.imag()) <= bound; });
}

Tensor3 Tensor3::real_checked(double tol) const {
    if (!is_real(tol)) throw DomainError("real_checked: imaginary residue above tolerance");
    Tensor3 out(*this);
    for (auto& v : out.mutable_data()) v = cplx{v.real(), 0.0};
    return out;
}

Tensor3& Tensor3::operator+=(const Tensor3& rhs) {
    require_same_shape(*this, rhs, "operator+=");
    touch();
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

Tensor3& Tensor3::operator-=(const Tensor3& rhs) {
    require_same_shape(*this, rhs, "operator-=");
    touch();
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

Tensor3& Tensor3::operator*=(cplx s) {
    touch();
    for (auto& v : data_) v *= s;
    return *this;
}

Tensor3 operator+(Tensor3 lhs, const Tensor3& rhs) { return lhs += rhs; }
Tensor3 operator-(Tensor3 lhs, const Tensor3& rhs) { return lhs -= rhs; }
Tensor3 operator*(cplx s, Tensor3 rhs) { return rhs *= s; }
Tensor3 operator-(Tensor3 t) { return t *= cplx{-1.0}; }

// ---------------------------------------------------------------------------
// Tubular

Tubular Tubular::unit(Index p) {
    Tubular e(p);
    e.entries_.at(0) = 1.0;
    return e;
}

Tubular Tubular::from_components(std::span<const cplx> components) {
    return Tubular(components_to_tube(components));
}

Tubular Tubular::from_tensor(const Tensor3& t) {
    if (t.rows() != 1 || t.cols() != 1) throw ShapeError("Tubular::from_tensor: expected 1x1xp");
    return Tubular(std::vector<cplx>(t.data().begin(), t.data().end()));
}

std::vector<cplx> Tubular::components() const { return tube_to_components(entries_); }

Tensor3 Tubular::as_tensor() const {
    Tensor3 t(1, 1, length());
    std::copy(entries_.begin(), entries_.end(), t.mutable_data().begin());
    return t;
}

Tubular Tubular::adjoint() const {
    const Index p = length();
    Tubular out(p);
    for (Index k = 0; k < p; ++k) out[k] = std::conj(entries_[static_cast<std::size_t>((p - k) % p)]);
    return out;
}

Tubular& Tubular::operator+=(const Tubular& rhs) {
    if (rhs.length() != length()) throw ShapeError("Tubular +=: length mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += rhs.entries_[i];
    return *this;
}

Tubular& Tubular::operator-=(const Tubular& rhs) {
    if (rhs.length() != length()) throw ShapeError("Tubular -=: length mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= rhs.entries_[i];
    return *this;
}

Tubular& Tubular::operator*=(cplx s) {
    for (auto& v : entries_) v *= s;
    return *this;
}

Tubular operator+(Tubular lhs, const Tubular& rhs) { return lhs += rhs; }
Tubular operator-(Tubular lhs, const Tubular& rhs) { return lhs -= rhs; }
Tubular operator*(cplx s, Tubular rhs) { return rhs *= s; }

Tubular operator*(const Tubular& a, const Tubular& b) {
    if (a.length() != b.length()) throw ShapeError("Tubular *: length mismatch");
    auto da = a.components();
    const auto db = b.components();
    for (std::size_t i = 0; i < da.size(); ++i) da[i] *= db[i];
    return Tubular::from_components(da);
}

// ---------------------------------------------------------------------------
// Algebra

Tensor3 tprod(const Tensor3& A, const Tensor3& B) {
    if (A.cols() != B.rows() || A.tubes() != B.tubes())
        throw ShapeError("tprod: cannot multiply " + std::to_string(A.rows()) + "x" +
                         std::to_string(A.cols()) + "x" + std::to_string(A.tubes()) + " by " +
                         std::to_string(B.rows()) + "x" + std::to_string(B.cols()) + "x" +
                         std::to_string(B.tubes()));
    const auto& FA = A.fourier();
    const auto& FB = B.fourier();
    FourierSlices C(A.rows(), B.cols(), A.tubes());
    for (Index k = 0; k < A.tubes(); ++k) C.slice(k).noalias() = FA.slice(k) * FB.slice(k);
    Tensor3 out = from_fourier(C);
    if (exactly_real(A) && exactly_real(B)) drop_imaginary(out);
    return out;
}

Tensor3 ttranspose(const Tensor3& A) {
    const Index p = A.tubes();
    Tensor3 out(A.cols(), A.rows(), p);
    for (Index k = 0; k < p; ++k) out.slice(k) = A.slice((p - k) % p).adjoint();
    return out;
}

Tensor3 identity(Index n, Index p) {
    Tensor3 I(n, n, p);
    I.slice(0).setIdentity();
    return I;
}

Tensor3 tinverse(const Tensor3& A) {
    if (A.rows() != A.cols()) throw ShapeError("tinverse: frontal slices must be square");
    const auto& FA = A.fourier();
    FourierSlices inv(A.rows(), A.rows(), A.tubes());
    std::vector<SingularError::Component> bad;
    for (Index k = 0; k < A.tubes(); ++k) {
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(FA.slice(k));
        if (!lu.isInvertible()) {
            bad.push_back({static_cast<std::size_t>(k), std::abs(lu.determinant())});
            continue;
        }
        inv.slice(k) = lu.inverse();
    }
    if (!bad.empty()) throw SingularError("tinverse: singular Fourier slice(s)", std::move(bad));
    Tensor3 out = from_fourier(inv);
    if (exactly_real(A)) drop_imaginary(out);
    return out;
}

Tensor3 tube_scale(const Tensor3& X, const Tubular& a) {
    if (a.length() != X.tubes()) throw ShapeError("tube_scale: tube length mismatch");
    const auto d = a.components();
    FourierSlices S = X.fourier();
    for (Index k = 0; k < X.tubes(); ++k) S.slice(k) *= d[static_cast<std::size_t>(k)];
    Tensor3 out = from_fourier(S);
    const bool real_tube = std::all_of(a.entries().begin(), a.entries().end(), [](const cplx& v) { return v.imag() == 0.0; });
    if (real_tube && exactly_real(X)) drop_imaginary(out);
    return out;
}

Tubular tube(const Tensor3& A, Index i, Index j) {
    Tubular t(A.tubes());
    for (Index k = 0; k < A.tubes(); ++k) t[k] = A(i, j, k);
    return t;
}

Tensor3 lateral(const Tensor3& A, Index j) {
    if (j < 0 || j >= A.cols()) throw ShapeError("lateral: column out of range");
    Tensor3 out(A.rows(), 1, A.tubes());
    for (Index k = 0; k < A.tubes(); ++k) out.slice(k) = A.slice(k).col(j);
    return out;
}

Tensor3 lateral_concat(std::span<const Tensor3> columns) {
    if (columns.empty()) throw ShapeError("lateral_concat: no columns");
    const Index n = columns.front().rows(), p = columns.front().tubes();
    Tensor3 out(n, static_cast<Index>(columns.size()), p);
    for (Index j = 0; j < out.cols(); ++j) {
        const auto& c = columns[static_cast<std::size_t>(j)];
        if (c.rows() != n || c.cols() != 1 || c.tubes() != p)
            throw ShapeError("lateral_concat: columns must all be n x 1 x p");
        for (Index k = 0; k < p; ++k) out.slice(k).col(j) = c.slice(k);
    }
    return out;
}

Eigen::MatrixXcd bcirc_explicit(const Tensor3& A) {
    const Index n = A.rows(), m = A.cols(), p = A.tubes();
    if (static_cast<double>(n * p) * static_cast<double>(m * p) > 4e6)
        throw ShapeError("bcirc_explicit: oracle refuses matrices above 4e6 entries");
    Eigen::MatrixXcd M(n * p, m * p);
    for (Index r = 0; r < p; ++r)
        for (Index c = 0; c < p; ++c) M.block(r * n, c * m, n, m) = A.slice(((r - c) % p + p) % p);
    return M;
}

Eigen::MatrixXcd unfold(const Tensor3& A) {
    Eigen::MatrixXcd M(A.rows() * A.tubes(), A.cols());
    for (Index k = 0; k < A.tubes(); ++k) M.block(k * A.rows(), 0, A.rows(), A.cols()) = A.slice(k);
    return M;
}

Tensor3 fold(const Eigen::MatrixXcd& blocks, Index p) {
    if (p < 1 || blocks.rows() % p != 0) throw ShapeError("fold: row count not a multiple of p");
    const Index n = blocks.rows() / p;
    Tensor3 out(n, blocks.cols(), p);
    for (Index k = 0; k < p; ++k) out.slice(k) = blocks.block(k * n, 0, n, blocks.cols());
    return out;
}

double frob_norm(const Tensor3& A) { return std::sqrt(detail::pairwise_sum_sq(A.data())); }

cplx frob_inner(const Tensor3& A, const Tensor3& B) {
    require_same_shape(A, B, "frob_inner");
    cplx s{0.0};
    const auto a = A.data(), b = B.data();
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

Tubular bilinear(const Tensor3& X, const Tensor3& Y) {
    require_column(X, "bilinear");
    require_column(Y, "bilinear");
    require_same_shape(X, Y, "bilinear");
    const auto& FX = X.fourier();
    const auto& FY = Y.fourier();
    std::vector<cplx> d(static_cast<std::size_t>(X.tubes()));
    for (Index k = 0; k < X.tubes(); ++k)
        d[static_cast<std::size_t>(k)] = FX.slice(k).col(0).dot(FY.slice(k).col(0));
    return Tubular::from_components(d);
}

Tubular tubular_norm(const Tensor3& X) {
    require_column(X, "tubular_norm");
    const auto& FX = X.fourier();
    std::vector<cplx> d(static_cast<std::size_t>(X.tubes()));
    // <X, X> has components ||x~_k||^2 >= 0; the PSD root takes sqrt of each,
    // zero components stay zero.
    for (Index k = 0; k < X.tubes(); ++k) d[static_cast<std::size_t>(k)] = FX.slice(k).norm();
    return Tubular::from_components(d);
}

bool is_hermitian(const Tensor3& A, double tol) {
    if (A.rows() != A.cols()) return false;
    return frob_norm(A - ttranspose(A)) <= tol * frob_norm(A);
}

} // namespace teig
