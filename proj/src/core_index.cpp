#include "mixsmooth/core_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mixsmooth {

namespace {

void require_same_dim(const MultiIndex& a, const MultiIndex& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("multi-index dimension mismatch");
}

}  // namespace

bool MultiIndex::leq(const MultiIndex& o) const
{
    require_same_dim(*this, o);
    for (std::size_t j = 0; j < v_.size(); ++j)
        if (v_[j] > o.v_[j])
            return false;
    return true;
}

bool MultiIndex::less(const MultiIndex& o) const
{
    require_same_dim(*this, o);
    for (std::size_t j = 0; j < v_.size(); ++j)
        if (v_[j] >= o.v_[j])
            return false;
    return true;
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const
{
    require_same_dim(*this, o);
    MultiIndex r(*this);
    for (std::size_t j = 0; j < v_.size(); ++j)
        r.v_[j] += o.v_[j];
    return r;
}

MultiIndex MultiIndex::operator-(const MultiIndex& o) const
{
    require_same_dim(*this, o);
    MultiIndex r(*this);
    for (std::size_t j = 0; j < v_.size(); ++j)
        r.v_[j] -= o.v_[j];
    return r;
}

MultiIndex MultiIndex::operator*(int s) const
{
    MultiIndex r(*this);
    for (auto& x : r.v_)
        x *= s;
    return r;
}

MultiIndex MultiIndex::plus_part() const
{
    MultiIndex r(*this);
    for (auto& x : r.v_)
        x = std::max(x, 0);
    return r;
}

int MultiIndex::sum() const { return std::accumulate(v_.begin(), v_.end(), 0); }
int MultiIndex::max() const { return v_.empty() ? 0 : *std::max_element(v_.begin(), v_.end()); }
int MultiIndex::min() const { return v_.empty() ? 0 : *std::min_element(v_.begin(), v_.end()); }

bool MultiIndex::all_nonnegative() const
{
    return std::all_of(v_.begin(), v_.end(), [](int x) { return x >= 0; });
}

std::string MultiIndex::str() const
{
    std::ostringstream os;
    os << *this;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const MultiIndex& m)
{
    os << '(';
    for (std::size_t j = 0; j < m.size(); ++j)
        os << (j ? "," : "") << m[j];
    return os << ')';
}

std::size_t MultiIndexHash::operator()(const MultiIndex& m) const
{
    std::size_t h = m.size();
    for (int x : m)
        h = h * 1000003u ^ static_cast<std::size_t>(x + 0x9e3779b9);
    return h;
}

MultiIndex pow2(const MultiIndex& k)
{
    MultiIndex r(k.size());
    for (std::size_t j = 0; j < k.size(); ++j) {
        if (k[j] < 0 || k[j] > 30)
            throw std::invalid_argument("pow2: level out of range");
        r[j] = 1 << k[j];
    }
    return r;
}

std::vector<std::size_t> support_set(const MultiIndex& x)
{
    std::vector<std::size_t> s;
    for (std::size_t j = 0; j < x.size(); ++j)
        if (x[j] != 0)
            s.push_back(j);
    return s;
}

MultiIndex indicator_vector(std::span<const std::size_t> J, std::size_t d)
{
    MultiIndex chi(d);
    for (std::size_t j : J) {
        if (j >= d)
            throw std::out_of_range("indicator_vector: axis " + std::to_string(j + 1) + " exceeds d = "
                                    + std::to_string(d));
        chi[j] = 1;
    }
    return chi;
}

double min_coord(std::span<const double> y)
{
    if (y.empty())
        throw std::invalid_argument("min_coord: empty vector");
    return *std::min_element(y.begin(), y.end());
}

BinaryMask::BinaryMask(MultiIndex bits) : bits_(std::move(bits))
{
    for (int b : bits_)
        if (b != 0 && b != 1)
            throw std::invalid_argument("BinaryMask: entries must be 0 or 1");
}

BinaryMask BinaryMask::from_bits(unsigned bits, std::size_t d)
{
    MultiIndex m(d);
    for (std::size_t j = 0; j < d; ++j)
        m[j] = (bits >> j) & 1u;
    return BinaryMask(m);
}

bool BinaryMask::subset_of(const MultiIndex& other) const
{
    for (std::size_t j = 0; j < bits_.size(); ++j)
        if (bits_[j] && other[j] == 0)
            return false;
    return true;
}

std::vector<BinaryMask> masks_within(const MultiIndex& kappa)
{
    std::vector<BinaryMask> out;
    const std::size_t d = kappa.size();
    for (unsigned bits = 0; bits < (1u << d); ++bits) {
        auto eps = BinaryMask::from_bits(bits, d);
        if (eps.subset_of(kappa))
            out.push_back(eps);
    }
    return out;
}

IntBox::IntBox(MultiIndex lo, MultiIndex hi) : lo_(std::move(lo)), hi_(std::move(hi))
{
    require_same_dim(lo_, hi_);
}

bool IntBox::empty() const
{
    for (std::size_t j = 0; j < lo_.size(); ++j)
        if (lo_[j] > hi_[j])
            return true;
    return false;
}

std::size_t IntBox::count() const
{
    if (empty())
        return 0;
    std::size_t n = 1;
    for (std::size_t j = 0; j < lo_.size(); ++j)
        n *= static_cast<std::size_t>(hi_[j] - lo_[j] + 1);
    return n;
}

bool IntBox::contains(const MultiIndex& nu) const { return lo_.leq(nu) && nu.leq(hi_); }

std::size_t IntBox::linear_index(const MultiIndex& nu) const
{
    std::size_t idx = 0;
    for (std::size_t j = 0; j < lo_.size(); ++j)
        idx = idx * static_cast<std::size_t>(hi_[j] - lo_[j] + 1) + static_cast<std::size_t>(nu[j] - lo_[j]);
    return idx;
}

void IntBox::for_each(const std::function<void(const MultiIndex&)>& fn) const
{
    if (empty())
        return;
    MultiIndex nu = lo_;
    const std::size_t d = lo_.size();
    while (true) {
        fn(nu);
        std::size_t j = d;
        while (j > 0) {
            --j;
            if (nu[j] < hi_[j]) {
                ++nu[j];
                break;
            }
            nu[j] = lo_[j];
            if (j == 0)
                return;
        }
        if (d == 0)
            return;
    }
}

std::vector<MultiIndex> IntBox::members() const
{
    std::vector<MultiIndex> out;
    out.reserve(count());
    for_each([&](const MultiIndex& nu) { out.push_back(nu); });
    return out;
}

IntBox index_range(const MultiIndex& lo, const MultiIndex& hi) { return IntBox(lo, hi); }

Box::Box(Point corner, Point edge) : corner_(std::move(corner)), edge_(std::move(edge))
{
    if (corner_.size() != edge_.size())
        throw std::invalid_argument("Box: corner/edge dimension mismatch");
    for (double e : edge_)
        if (!(e > 0.0) || !std::isfinite(e))
            throw std::invalid_argument("Box: edges must be positive and finite");
}

Box Box::unit(std::size_t d) { return Box(Point(d, 0.0), Point(d, 1.0)); }

double Box::volume() const
{
    double v = 1.0;
    for (double e : edge_)
        v *= e;
    return v;
}

bool Box::contains_half_open(std::span<const double> x) const
{
    for (std::size_t j = 0; j < dim(); ++j)
        if (x[j] < lo(j) || x[j] >= hi(j))
            return false;
    return true;
}

bool Box::contains_closed(std::span<const double> x) const
{
    for (std::size_t j = 0; j < dim(); ++j)
        if (x[j] < lo(j) || x[j] > hi(j))
            return false;
    return true;
}

bool Box::contains_box(const Box& inner, double tol) const
{
    for (std::size_t j = 0; j < dim(); ++j) {
        const double slack = tol * std::max(1.0, std::abs(hi(j)));
        if (inner.lo(j) < lo(j) - slack || inner.hi(j) > hi(j) + slack)
            return false;
    }
    return true;
}

bool Box::intersects_open(const Box& other) const
{
    for (std::size_t j = 0; j < dim(); ++j)
        if (other.hi(j) <= lo(j) || other.lo(j) >= hi(j))
            return false;
    return true;
}

Point Box::map_from_unit(std::span<const double> u) const
{
    Point x(dim());
    for (std::size_t j = 0; j < dim(); ++j)
        x[j] = corner_[j] + edge_[j] * u[j];
    return x;
}

Box dyadic_cell(const MultiIndex& kappa, const MultiIndex& nu)
{
    require_same_dim(kappa, nu);
    Point corner(kappa.size()), edge(kappa.size());
    for (std::size_t j = 0; j < kappa.size(); ++j) {
        if (kappa[j] < 0)
            throw std::invalid_argument("dyadic_cell: negative level");
        const double h = std::ldexp(1.0, -kappa[j]);
        corner[j] = h * nu[j];
        edge[j] = h;
    }
    return Box(std::move(corner), std::move(edge));
}

std::vector<std::vector<std::size_t>> all_subsets(std::size_t d, bool include_empty)
{
    std::vector<std::vector<std::size_t>> out;
    for (unsigned bits = include_empty ? 0u : 1u; bits < (1u << d); ++bits) {
        std::vector<std::size_t> J;
        for (std::size_t j = 0; j < d; ++j)
            if ((bits >> j) & 1u)
                J.push_back(j);
        out.push_back(std::move(J));
    }
    return out;
}

std::string axis_set_label(std::span<const std::size_t> J)
{
    std::string s = "{";
    for (std::size_t i = 0; i < J.size(); ++i)
        s += (i ? "," : "") + std::to_string(J[i] + 1);
    return s + "}";
}

}  // namespace mixsmooth
