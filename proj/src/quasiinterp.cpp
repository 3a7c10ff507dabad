#include "mixsmooth/quasiinterp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mixsmooth/analysis.hpp"
#include "mixsmooth/splines.hpp"

namespace mixsmooth {

namespace {

int floor_div(int a, int b)
{
    int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

int ceil_div(int a, int b)
{
    return -floor_div(-a, b);
}

// Multiplication by a 1-D polynomial s(u) along one axis.
Matrix multiply_matrix(std::size_t n_in, const std::vector<double>& s)
{
    Matrix m(n_in + s.size() - 1, n_in);
    for (std::size_t k = 0; k < n_in; ++k)
        for (std::size_t i = 0; i < s.size(); ++i)
            m(k + i, k) = s[i];
    return m;
}

}  // namespace

CellGeometry cell_geometry(const MultiIndex& kappa, const MultiIndex& nu, const MultiIndex& m)
{
    if (!cell_indices(kappa).contains(nu))
        throw std::out_of_range("cell_geometry: index " + nu.str() + " outside N_{0,2^kappa-e}");
    const std::size_t d = kappa.size();
    CellGeometry g{kappa, nu, m, Point(d), Point(d), Box(), Box()};
    Point wc(d), we(d);
    for (std::size_t j = 0; j < d; ++j) {
        const double h = std::ldexp(1.0, -kappa[j]);
        const int n = 1 << kappa[j];
        g.base_point[j] = h * std::max(nu[j] - m[j], 0);
        g.base_edge[j] = h * std::min(n, m[j] + 1);
        wc[j] = h * std::min(std::max(nu[j] - 2 * m[j] - 1, 0), std::max(n - 2 * m[j] - 3, 0));
        we[j] = h * std::min(n, 2 * m[j] + 3);
    }
    g.base = Box(g.base_point, g.base_edge);
    g.wide = Box(wc, we);
    return g;
}

MultiIndex index_clamp(const MultiIndex& kappa, const MultiIndex& m, const MultiIndex& nu)
{
    if (!spline_indices(kappa, m).contains(nu))
        throw std::out_of_range("index_clamp: index " + nu.str() + " outside N_{-m,2^kappa-e}");
    MultiIndex out(kappa.size());
    for (std::size_t j = 0; j < kappa.size(); ++j) {
        const int top = (1 << kappa[j]) - m[j] - 1;
        out[j] = std::max(top, 0) - std::max(top - std::max(nu[j], 0), 0);
    }
    return out;
}

TensorPoly local_projector_S(const MultiIndex& kappa, const MultiIndex& nu, const MultiIndex& deg, const MultiIndex& m,
                             const FunctionOracle& f, std::optional<QuadSpec> quad)
{
    return project(f, cell_geometry(kappa, nu, m).base, deg, quad);
}

// ---------------------------------------------------------------- PiecewisePoly

PiecewisePoly::PiecewisePoly(MultiIndex kappa, IntBox cells, MultiIndex degree, bool closed_top)
    : kappa_(std::move(kappa)), cells_(std::move(cells)), closed_top_(closed_top)
{
    polys_.reserve(cells_.count());
    cells_.for_each([&](const MultiIndex& mu) { polys_.emplace_back(cell_box(mu), degree); });
}

Box PiecewisePoly::extent() const
{
    const std::size_t d = dim();
    Point c(d), e(d);
    for (std::size_t j = 0; j < d; ++j) {
        const double h = std::ldexp(1.0, -kappa_[j]);
        c[j] = h * cells_.lo()[j];
        e[j] = h * (cells_.hi()[j] - cells_.lo()[j] + 1);
    }
    return Box(c, e);
}

MultiIndex PiecewisePoly::max_degree() const
{
    MultiIndex out(dim());
    for (const Poly& p : polys_)
        for (std::size_t j = 0; j < dim(); ++j)
            out[j] = std::max(out[j], p.degree()[j]);
    return out;
}

std::optional<MultiIndex> PiecewisePoly::locate(std::span<const double> x) const
{
    MultiIndex mu(dim());
    for (std::size_t j = 0; j < dim(); ++j) {
        const double y = std::ldexp(x[j], kappa_[j]);
        const double fy = std::floor(y);
        if (fy < cells_.lo()[j] - 1.0 || fy > cells_.hi()[j] + 1.0)
            return std::nullopt;
        int k = static_cast<int>(fy);
        if (closed_top_ && k == cells_.hi()[j] + 1 && y == fy)
            k = cells_.hi()[j];
        if (k < cells_.lo()[j] || k > cells_.hi()[j])
            return std::nullopt;
        mu[j] = k;
    }
    return mu;
}

double PiecewisePoly::operator()(std::span<const double> x) const
{
    const std::size_t d = dim();
    double u[8];
    std::size_t pos = 0, stride = 1;
    for (std::size_t j = d; j-- > 0;) {
        const double y = std::ldexp(x[j], kappa_[j]);
        const double fy = std::floor(y);
        const int lo = cells_.lo()[j], hi = cells_.hi()[j];
        if (fy < lo - 1.0 || fy > hi + 1.0)
            return 0.0;
        int k = static_cast<int>(fy);
        if (closed_top_ && k == hi + 1 && y == fy)
            k = hi;
        if (k < lo || k > hi)
            return 0.0;
        u[j] = y - k;
        pos += static_cast<std::size_t>(k - lo) * stride;
        stride *= static_cast<std::size_t>(hi - lo + 1);
    }
    return polys_[pos].eval_local(std::span<const double>(u, d));
}

PiecewisePoly PiecewisePoly::derivative(const MultiIndex& lambda) const
{
    PiecewisePoly out = *this;
    for (Poly& p : out.polys_)
        p = p.derivative(lambda);
    return out;
}

double PiecewisePoly::norm(double q, std::optional<IntBox> region) const
{
    const IntBox range = region ? *region : cells_;
    const std::size_t d = dim();
    const MultiIndex deg = max_degree();
    const bool sup = std::isinf(q);
    std::vector<std::vector<double>> nodes(d), weights(d);
    for (std::size_t j = 0; j < d; ++j) {
        if (sup) {
            const int n = 2 * (deg[j] + 1) + 1;
            for (int i = 0; i <= n; ++i) {
                nodes[j].push_back(static_cast<double>(i) / n);
                weights[j].push_back(1.0);
            }
        } else {
            const int s = (q == 2.0) ? 1 : 2;
            composite_points_1d(0.0, 1.0, deg[j] + 2, s, nodes[j], weights[j]);
        }
    }
    double cell_volume = 1.0;
    for (std::size_t j = 0; j < d; ++j)
        cell_volume *= std::ldexp(1.0, -kappa_[j]);
    double acc = 0.0;
    Point u(d);
    std::vector<std::size_t> idx(d);
    range.for_each([&](const MultiIndex& mu) {
        if (!cells_.contains(mu))
            return;
        const Poly& p = cell(mu);
        if (p.max_abs_coeff() == 0.0)
            return;
        std::fill(idx.begin(), idx.end(), 0);
        while (true) {
            double w = 1.0;
            for (std::size_t j = 0; j < d; ++j) {
                u[j] = nodes[j][idx[j]];
                w *= weights[j][idx[j]];
            }
            const double v = std::abs(p.eval_local(u));
            if (sup)
                acc = std::max(acc, v);
            else
                acc += w * cell_volume * std::pow(v, q);
            bool more = false;
            for (std::size_t j = d; j-- > 0;) {
                if (++idx[j] < nodes[j].size()) {
                    more = true;
                    break;
                }
                idx[j] = 0;
            }
            if (!more)
                break;
        }
    });
    return sup ? acc : std::pow(acc, 1.0 / q);
}

void PiecewisePoly::accumulate_into(PiecewisePoly& fine, double scale) const
{
    if (fine.dim() != dim() || !kappa_.leq(fine.kappa_))
        throw std::invalid_argument("accumulate_into: target grid must be finer");
    const std::size_t d = dim();
    MultiIndex coarse(d);
    fine.cells_.for_each([&](const MultiIndex& mu) {
        for (std::size_t j = 0; j < d; ++j)
            coarse[j] = mu[j] >> (fine.kappa_[j] - kappa_[j]);  // arithmetic shift floors negatives
        if (!cells_.contains(coarse))
            return;
        const Poly& src = cell(coarse);
        if (src.max_abs_coeff() == 0.0)
            return;
        Poly piece = src.rebased(fine.cell_box(mu));
        piece *= scale;
        fine.cell(mu) += piece;
    });
}

PiecewisePoly& PiecewisePoly::operator+=(const PiecewisePoly& other)
{
    if (!(other.kappa_ == kappa_) || !(other.cells_.lo() == cells_.lo()) || !(other.cells_.hi() == cells_.hi()))
        throw std::invalid_argument("PiecewisePoly::operator+=: grids differ");
    for (std::size_t i = 0; i < polys_.size(); ++i)
        polys_[i] += other.polys_[i];
    return *this;
}

PiecewisePoly& PiecewisePoly::operator*=(double s)
{
    for (Poly& p : polys_)
        p *= s;
    return *this;
}

// ---------------------------------------------------------------- SplineBlend

SplineBlend::SplineBlend(MultiIndex kappa, MultiIndex m, MultiIndex degree)
    : kappa_(std::move(kappa)), m_(std::move(m)), deg_(std::move(degree))
{
    if (!kappa_.all_nonnegative() || !m_.all_nonnegative())
        throw std::invalid_argument("SplineBlend: negative level or order");
    const IntBox idx = indices();
    family_.reserve(idx.count());
    idx.for_each([&](const MultiIndex& nu) { family_.emplace_back(support_g(kappa_, nu, m_), deg_); });
}

IntBox SplineBlend::support_cells() const
{
    return IntBox(m_ * -1, pow2(kappa_) + m_ - MultiIndex(dim(), 1));
}

double SplineBlend::operator()(std::span<const double> x) const
{
    const std::size_t d = dim();
    std::vector<int> lo(d), hi(d);
    std::vector<double> y(d);
    for (std::size_t j = 0; j < d; ++j) {
        y[j] = std::ldexp(x[j], kappa_[j]);
        const int mu = static_cast<int>(std::floor(y[j]));
        lo[j] = std::max(mu - m_[j], -m_[j]);
        hi[j] = std::min(mu, (1 << kappa_[j]) - 1);
        if (lo[j] > hi[j])
            return 0.0;
    }
    double acc = 0.0;
    IntBox(MultiIndex(lo), MultiIndex(hi)).for_each([&](const MultiIndex& nu) {
        double g = 1.0;
        for (std::size_t j = 0; j < d && g != 0.0; ++j)
            g *= spline(m_[j]).eval(0, y[j] - nu[j]);
        if (g != 0.0)
            acc += g * family(nu)(x);
    });
    return acc;
}

PiecewisePoly SplineBlend::cellwise(const IntBox& cells, bool closed_top) const
{
    const std::size_t d = dim();
    PiecewisePoly out(kappa_, cells, deg_ + m_, closed_top);
    const IntBox idx = indices();
    cells.for_each([&](const MultiIndex& mu) {
        const Box box = out.cell_box(mu);
        Poly& acc = out.cell(mu);
        MultiIndex lo(d), hi(d);
        for (std::size_t j = 0; j < d; ++j) {
            lo[j] = std::max(mu[j] - m_[j], idx.lo()[j]);
            hi[j] = std::min(mu[j], idx.hi()[j]);
        }
        IntBox(lo, hi).for_each([&](const MultiIndex& nu) {
            const Poly& f = family(nu);
            if (f.max_abs_coeff() == 0.0)
                return;
            Poly p = f.rebased(box);
            std::vector<double> c = p.coeffs();
            std::vector<std::size_t> dims = p.extents();
            for (std::size_t j = 0; j < d; ++j)
                c = apply_along_axis(c, dims, j,
                                     multiply_matrix(dims[j], spline(m_[j]).piece(mu[j] - nu[j], 0)));
            acc += Poly(box, p.degree() + m_, std::move(c));
        });
    });
    return out;
}

QuasiInterpolant::QuasiInterpolant(SplineBlend blend)
    : blend_(std::move(blend)), cells_(blend_.cellwise(cell_indices(blend_.level()), true))
{
}

// ---------------------------------------------------------------- operators

ProjectionCache::ProjectionCache(const FunctionOracle& f, MultiIndex deg, std::optional<QuadSpec> quad)
    : f_(f), deg_(std::move(deg)), quad_(quad)
{
}

const Poly& ProjectionCache::get(const MultiIndex& kappa, const MultiIndex& nu)
{
    auto key = std::make_pair(kappa, nu);
    auto it = memo_.find(key);
    if (it == memo_.end())
        it = memo_.emplace(key, project(f_, dyadic_cell(kappa, nu), deg_, quad_).to_poly()).first;
    return it->second;
}

void check_degree_pair(const MultiIndex& l, const MultiIndex& m)
{
    if (l.size() != m.size())
        throw std::invalid_argument("l and m differ in dimension");
    for (std::size_t j = 0; j < l.size(); ++j) {
        if (l[j] < 1)
            throw std::invalid_argument("need l >= e (axis " + std::to_string(j + 1) + ")");
        if (m[j] < l[j] - 1)
            throw std::invalid_argument("need m >= l - e (axis " + std::to_string(j + 1) + ")");
    }
}

QuasiInterpolant quasi_interp_E(const MultiIndex& kappa, const MultiIndex& m, ProjectionCache& cache)
{
    SplineBlend blend(kappa, m, cache.degree());
    blend.indices().for_each(
        [&](const MultiIndex& nu) { blend.family(nu) = cache.get(kappa, index_clamp(kappa, m, nu)); });
    return QuasiInterpolant(std::move(blend));
}

QuasiInterpolant quasi_interp_E(const MultiIndex& kappa, const MultiIndex& l, const MultiIndex& m,
                                const FunctionOracle& f, std::optional<QuadSpec> quad)
{
    check_degree_pair(l, m);
    ProjectionCache cache(f, l - MultiIndex(l.size(), 1), quad);
    return quasi_interp_E(kappa, m, cache);
}

SplineBlend detail_blend(const MultiIndex& kappa, const MultiIndex& m, ProjectionCache& cache)
{
    const std::size_t d = kappa.size();
    SplineBlend blend(kappa, m, cache.degree());
    std::vector<RefinementMask> masks;
    for (std::size_t j = 0; j < d; ++j)
        masks.push_back(refinement_coeffs(m[j]));
    const auto eps_list = masks_within(kappa);
    blend.indices().for_each([&](const MultiIndex& nu) {
        const Box target = support_g(kappa, nu, m);
        Poly acc(target, cache.degree());
        for (const BinaryMask& eps : eps_list) {
            const MultiIndex level = kappa - eps.index();
            // P_{kappa,nu,eps}
            MultiIndex lo(d), hi(d);
            for (std::size_t j = 0; j < d; ++j) {
                if (eps.test(j)) {
                    lo[j] = std::max(ceil_div(nu[j] - m[j] - 1, 2), -m[j]);
                    hi[j] = std::min(floor_div(nu[j], 2), (1 << level[j]) - 1);
                } else {
                    lo[j] = hi[j] = nu[j];
                }
            }
            IntBox(lo, hi).for_each([&](const MultiIndex& rho) {
                double w = eps.sign();
                for (std::size_t j = 0; j < d; ++j)
                    if (eps.test(j))
                        w *= masks[j][nu[j] - 2 * rho[j]];
                if (w == 0.0)
                    return;
                Poly term = cache.get(level, index_clamp(level, m, rho)).rebased(target);
                term *= w;
                acc += term;
            });
        }
        blend.family(nu) = std::move(acc);
    });
    return blend;
}

QuasiInterpolant telescoped_E(const MultiIndex& kappa, const MultiIndex& l, const MultiIndex& m,
                              const FunctionOracle& f, std::optional<QuadSpec> quad)
{
    check_degree_pair(l, m);
    ProjectionCache cache(f, l - MultiIndex(l.size(), 1), quad);
    return QuasiInterpolant(detail_blend(kappa, m, cache));
}

double lp_error(const FunctionOracle& f, const PiecewisePoly& F, double p, int extra_nodes)
{
    const QuadSpec q{F.max_degree().max() + extra_nodes, 2};
    double acc = 0.0;
    const bool sup = std::isinf(p);
    F.cells().for_each([&](const MultiIndex& mu) {
        const Box box = F.cell_box(mu);
        const Poly& poly = F.cell(mu);
        for_each_quad_point(box, q, [&](std::span<const double> x, double w) {
            const double v = std::abs(f(x) - poly(x));
            if (sup)
                acc = std::max(acc, v);
            else
                acc += w * std::pow(v, p);
        });
    });
    return sup ? acc : std::pow(acc, 1.0 / p);
}

LevelBoundRecord derivative_level_bound_report(const FunctionOracle& f, const MultiIndex& kappa,
                                               const MultiIndex& lambda, double p, double q, const MultiIndex& l,
                                               const MultiIndex& m, double s)
{
    if (!lambda.leq(m))
        throw std::invalid_argument("derivative_level_bound_report: need lambda <= m");
    const std::size_t d = kappa.size();
    LevelBoundRecord r;
    r.kappa = kappa;
    r.lambda = lambda;
    r.p = p;
    r.q = q;
    const QuasiInterpolant detail = telescoped_E(kappa, l, m, f);
    r.lhs = detail.cellwise().derivative(lambda).norm(q);

    const double gap = std::max(1.0 / p - (std::isinf(q) ? 0.0 : 1.0 / q), 0.0);
    double expo = 0.0;
    for (std::size_t j = 0; j < d; ++j)
        expo += kappa[j] * (lambda[j] + gap);
    r.scale = std::exp2(expo);

    const auto active = support_set(kappa);
    const DiffDomain cube = DiffDomain::cube(d);
    if (active.empty()) {
        r.modulus = lp_norm_box(f.fn, cube.box, p, QuadSpec{6, 4});
    } else {
        MultiIndex order(d);
        Point t(d, 1.0);
        for (std::size_t j : active) {
            order[j] = l[j];
            t[j] = s * std::ldexp(1.0, -kappa[j]);
        }
        r.modulus = modulus_avg(f.fn, order, t, p, cube).value;
    }
    const double rhs = r.scale * r.modulus;
    r.ratio = (rhs > 0.0) ? r.lhs / rhs : (r.lhs > 0.0 ? INFINITY : 0.0);
    return r;
}

}  // namespace mixsmooth
