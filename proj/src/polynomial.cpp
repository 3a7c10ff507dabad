#include "mixsmooth/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mixsmooth {

std::vector<double> apply_along_axis(std::span<const double> tensor, std::vector<std::size_t>& dims, std::size_t axis,
                                     const Matrix& m)
{
    if (dims[axis] != m.cols)
        throw std::invalid_argument("apply_along_axis: extent mismatch");
    std::size_t outer = 1, inner = 1;
    for (std::size_t j = 0; j < axis; ++j)
        outer *= dims[j];
    for (std::size_t j = axis + 1; j < dims.size(); ++j)
        inner *= dims[j];
    std::vector<double> out(outer * m.rows * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t i = 0; i < m.rows; ++i) {
            double* dst = &out[(o * m.rows + i) * inner];
            for (std::size_t k = 0; k < m.cols; ++k) {
                const double mik = m(i, k);
                if (mik == 0.0)
                    continue;
                const double* src = &tensor[(o * m.cols + k) * inner];
                for (std::size_t r = 0; r < inner; ++r)
                    dst[r] += mik * src[r];
            }
        }
    dims[axis] = m.rows;
    return out;
}

Matrix affine_substitution(std::size_t n, double shift, double scale)
{
    // (shift + scale s)^k = sum_i C(k,i) shift^{k-i} scale^i s^i
    Matrix m(n + 1, n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        double binom = 1.0;
        for (std::size_t i = 0; i <= k; ++i) {
            if (i > 0)
                binom = binom * static_cast<double>(k - i + 1) / static_cast<double>(i);
            m(i, k) = binom * std::pow(shift, static_cast<double>(k - i)) * std::pow(scale, static_cast<double>(i));
        }
    }
    return m;
}

Poly::Poly(Box box, MultiIndex degree) : box_(std::move(box)), degree_(std::move(degree))
{
    if (box_.dim() != degree_.size())
        throw std::invalid_argument("Poly: box/degree dimension mismatch");
    if (!degree_.all_nonnegative())
        throw std::invalid_argument("Poly: negative degree");
    std::size_t n = 1;
    for (int k : degree_)
        n *= static_cast<std::size_t>(k + 1);
    coeffs_.assign(n, 0.0);
}

Poly::Poly(Box box, MultiIndex degree, std::vector<double> coeffs) : Poly(std::move(box), std::move(degree))
{
    if (coeffs.size() != coeffs_.size())
        throw std::invalid_argument("Poly: coefficient count mismatch");
    coeffs_ = std::move(coeffs);
}

std::vector<std::size_t> Poly::extents() const
{
    std::vector<std::size_t> e;
    for (int k : degree_)
        e.push_back(static_cast<std::size_t>(k + 1));
    return e;
}

double Poly::coeff(const MultiIndex& lambda) const
{
    if (!lambda.leq(degree_))
        return 0.0;
    return coeffs_[IntBox(MultiIndex(dim()), degree_).linear_index(lambda)];
}

void Poly::set_coeff(const MultiIndex& lambda, double value)
{
    if (!lambda.leq(degree_))
        throw std::out_of_range("Poly::set_coeff: index beyond degree");
    coeffs_[IntBox(MultiIndex(dim()), degree_).linear_index(lambda)] = value;
}

namespace {

double eval_rec(const double* c, const MultiIndex& deg, std::span<const std::size_t> stride, std::span<const double> u,
                std::size_t axis)
{
    const int n = deg[axis];
    double acc = 0.0;
    if (axis + 1 == deg.size()) {
        for (int k = n; k >= 0; --k)
            acc = acc * u[axis] + c[k];
        return acc;
    }
    for (int k = n; k >= 0; --k)
        acc = acc * u[axis] + eval_rec(c + static_cast<std::size_t>(k) * stride[axis], deg, stride, u, axis + 1);
    return acc;
}

}  // namespace

double Poly::eval_local(std::span<const double> u) const
{
    const std::size_t d = dim();
    std::size_t stride[8];
    if (d > 8)
        throw std::invalid_argument("Poly: dimension above 8 unsupported");
    std::size_t s = 1;
    for (std::size_t j = d; j-- > 0;) {
        stride[j] = s;
        s *= static_cast<std::size_t>(degree_[j] + 1);
    }
    return eval_rec(coeffs_.data(), degree_, std::span<const std::size_t>(stride, d), u, 0);
}

double Poly::operator()(std::span<const double> x) const
{
    double u[8];
    const std::size_t d = dim();
    if (d > 8)
        throw std::invalid_argument("Poly: dimension above 8 unsupported");
    for (std::size_t j = 0; j < d; ++j)
        u[j] = (x[j] - box_.corner()[j]) / box_.edge()[j];
    return eval_local(std::span<const double>(u, d));
}

Poly Poly::derivative(const MultiIndex& lambda) const
{
    if (!lambda.all_nonnegative())
        throw std::invalid_argument("Poly::derivative: negative order");
    MultiIndex new_deg(dim());
    std::vector<double> c = coeffs_;
    auto dims = extents();
    for (std::size_t j = 0; j < dim(); ++j) {
        const int n = degree_[j];
        const int lam = lambda[j];
        if (lam == 0) {
            new_deg[j] = n;
            continue;
        }
        const int nn = std::max(n - lam, 0);
        Matrix m(static_cast<std::size_t>(nn) + 1, static_cast<std::size_t>(n) + 1);
        const double scale = std::pow(box_.edge()[j], -lam);
        if (lam <= n)
            for (int i = 0; i <= nn; ++i) {
                double ff = 1.0;
                for (int t = 0; t < lam; ++t)
                    ff *= static_cast<double>(i + lam - t);
                m(static_cast<std::size_t>(i), static_cast<std::size_t>(i + lam)) = ff * scale;
            }
        c = apply_along_axis(c, dims, j, m);
        new_deg[j] = nn;
    }
    return Poly(box_, new_deg, std::move(c));
}

Poly Poly::rebased(const Box& target) const
{
    if (target.dim() != dim())
        throw std::invalid_argument("Poly::rebased: dimension mismatch");
    std::vector<double> c = coeffs_;
    auto dims = extents();
    for (std::size_t j = 0; j < dim(); ++j) {
        // u_old = (a' - a)/b + (b'/b) u_new
        const double shift = (target.corner()[j] - box_.corner()[j]) / box_.edge()[j];
        const double scale = target.edge()[j] / box_.edge()[j];
        if (shift == 0.0 && scale == 1.0)
            continue;
        c = apply_along_axis(c, dims, j, affine_substitution(static_cast<std::size_t>(degree_[j]), shift, scale));
    }
    return Poly(target, degree_, std::move(c));
}

Poly Poly::padded(const MultiIndex& degree) const
{
    if (degree == degree_)
        return *this;
    if (!degree_.leq(degree))
        throw std::invalid_argument("Poly::padded: target degree is lower");
    Poly out(box_, degree);
    IntBox(MultiIndex(dim()), degree_).for_each([&](const MultiIndex& lam) { out.set_coeff(lam, coeff(lam)); });
    return out;
}

Poly& Poly::operator+=(const Poly& other)
{
    if (coeffs_.empty()) {
        *this = other;
        return *this;
    }
    if (!(other.box_ == box_))
        throw std::invalid_argument("Poly::operator+=: boxes differ; rebase first");
    MultiIndex deg(dim());
    for (std::size_t j = 0; j < dim(); ++j)
        deg[j] = std::max(degree_[j], other.degree_[j]);
    if (!(deg == degree_))
        *this = padded(deg);
    if (other.degree_ == degree_) {
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            coeffs_[i] += other.coeffs_[i];
    } else {
        const Poly o = other.padded(deg);
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            coeffs_[i] += o.coeffs_[i];
    }
    return *this;
}

Poly& Poly::operator*=(double s)
{
    for (double& c : coeffs_)
        c *= s;
    return *this;
}

Poly Poly::times(const Poly& other) const
{
    if (!(other.box_ == box_))
        throw std::invalid_argument("Poly::times: boxes differ; rebase first");
    Poly out(box_, degree_ + other.degree_);
    const IntBox a(MultiIndex(dim()), degree_), b(MultiIndex(dim()), other.degree_);
    const IntBox o(MultiIndex(dim()), out.degree_);
    a.for_each([&](const MultiIndex& la) {
        const double ca = coeff(la);
        if (ca == 0.0)
            return;
        b.for_each([&](const MultiIndex& lb) {
            out.coeffs_[o.linear_index(la + lb)] += ca * other.coeff(lb);
        });
    });
    return out;
}

double Poly::max_abs_coeff() const
{
    double m = 0.0;
    for (double c : coeffs_)
        m = std::max(m, std::abs(c));
    return m;
}

}  // namespace mixsmooth
