#include "mixsmooth/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mixsmooth/quasiinterp.hpp"

namespace mixsmooth {

SmoothnessParams SmoothnessParams::make(std::vector<double> alpha, double p, double theta,
                                        std::optional<MultiIndex> ell)
{
    SmoothnessParams sp;
    sp.l = l_of_alpha(alpha);
    if (!(p >= 1.0) || std::isinf(p))
        throw std::invalid_argument("p must satisfy 1 <= p < inf");
    if (!(theta >= 1.0))
        throw std::invalid_argument("theta must satisfy theta >= 1");
    if (ell) {
        if (ell->size() != alpha.size())
            throw std::invalid_argument("ell and alpha differ in dimension");
        for (std::size_t j = 0; j < alpha.size(); ++j)
            if ((*ell)[j] < 0 || !((*ell)[j] < alpha[j]))
                throw std::invalid_argument("need 0 <= ell < alpha (axis " + std::to_string(j + 1) + ")");
    }
    sp.alpha = std::move(alpha);
    sp.p = p;
    sp.theta = theta;
    sp.ell = std::move(ell);
    return sp;
}

MultiIndex l_of_alpha(std::span<const double> alpha)
{
    if (alpha.empty())
        throw std::invalid_argument("l_of_alpha: empty alpha");
    MultiIndex l(alpha.size());
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        if (!(alpha[j] > 0.0))
            throw std::invalid_argument("l_of_alpha: alpha must be positive (axis " + std::to_string(j + 1) + ")");
        l[j] = static_cast<int>(std::floor(alpha[j])) + 1;
    }
    return l;
}

namespace {

// (offset along the axis, coefficient) pairs of the 1-D difference of order l.
std::vector<std::pair<double, double>> difference_stencil(int l, double h)
{
    std::vector<std::pair<double, double>> st;
    double binom = 1.0;
    for (int k = 0; k <= l; ++k) {
        if (k > 0)
            binom = binom * (l - k + 1) / k;
        st.emplace_back(k * h, ((l - k) % 2 == 0) ? binom : -binom);
    }
    return st;
}

struct Stencil {
    std::vector<Point> offsets;
    std::vector<double> coeffs;
};

Stencil tensor_stencil(const MultiIndex& l, std::span<const double> h)
{
    Stencil s{{Point(l.size(), 0.0)}, {1.0}};
    for (std::size_t j = 0; j < l.size(); ++j) {
        if (l[j] == 0)
            continue;
        const auto st = difference_stencil(l[j], h[j]);
        Stencil next;
        for (std::size_t i = 0; i < s.offsets.size(); ++i)
            for (const auto& [off, c] : st) {
                Point o = s.offsets[i];
                o[j] = off;
                next.offsets.push_back(std::move(o));
                next.coeffs.push_back(s.coeffs[i] * c);
            }
        s = std::move(next);
    }
    return s;
}

}  // namespace

std::optional<Box> difference_region(const MultiIndex& l, std::span<const double> h, const DiffDomain& dom)
{
    const std::size_t d = l.size();
    Point c(d), e(d);
    for (std::size_t j = 0; j < d; ++j) {
        const double lo = dom.box.lo(j), hi = dom.box.hi(j);
        double a = lo, b = hi;
        if (l[j] > 0) {
            const double span = l[j] * h[j];
            if (dom.whole_space) {
                a = lo - std::max(span, 0.0);
                b = hi - std::min(span, 0.0);
            } else {
                a = std::max(lo, lo - span);
                b = std::min(hi, hi - span);
            }
        }
        if (!(b > a))
            return std::nullopt;
        c[j] = a;
        e[j] = b - a;
    }
    return Box(c, e);
}

std::optional<double> mixed_difference(const ScalarFn& f, const MultiIndex& l, std::span<const double> h,
                                       std::span<const double> x, const DiffDomain& dom)
{
    const std::size_t d = l.size();
    if (!dom.whole_space)
        for (std::size_t j = 0; j < d; ++j) {
            if (l[j] == 0)
                continue;
            const double end = x[j] + l[j] * h[j];
            if (x[j] < dom.box.lo(j) || x[j] > dom.box.hi(j) || end < dom.box.lo(j) || end > dom.box.hi(j))
                return std::nullopt;
        }
    const Stencil s = tensor_stencil(l, h);
    Point y(d);
    double acc = 0.0;
    for (std::size_t i = 0; i < s.offsets.size(); ++i) {
        for (std::size_t j = 0; j < d; ++j)
            y[j] = x[j] + s.offsets[i][j];
        acc += s.coeffs[i] * f(y);
    }
    return acc;
}

double difference_norm(const ScalarFn& f, const MultiIndex& l, std::span<const double> h, double p,
                       const DiffDomain& dom, const QuadSpec& inner)
{
    const auto region = difference_region(l, h, dom);
    if (!region)
        return 0.0;
    const std::size_t d = l.size();
    std::vector<std::vector<double>> xs(d), ws(d);
    for (std::size_t j = 0; j < d; ++j) {
        const double width = region->edge()[j];
        const int s = std::max(1, static_cast<int>(std::ceil(width * inner.subdivisions - 1e-9)));
        composite_points_1d(region->lo(j), region->hi(j), inner.nodes, s, xs[j], ws[j]);
    }
    const Stencil st = tensor_stencil(l, h);
    const bool sup = std::isinf(p);
    std::vector<std::size_t> idx(d, 0);
    Point x(d), y(d);
    double acc = 0.0;
    while (true) {
        double w = 1.0;
        for (std::size_t j = 0; j < d; ++j) {
            x[j] = xs[j][idx[j]];
            w *= ws[j][idx[j]];
        }
        double v = 0.0;
        for (std::size_t i = 0; i < st.offsets.size(); ++i) {
            for (std::size_t j = 0; j < d; ++j)
                y[j] = x[j] + st.offsets[i][j];
            v += st.coeffs[i] * f(y);
        }
        v = std::abs(v);
        if (sup)
            acc = std::max(acc, v);
        else
            acc += w * std::pow(v, p);
        bool more = false;
        for (std::size_t j = d; j-- > 0;) {
            if (++idx[j] < xs[j].size()) {
                more = true;
                break;
            }
            idx[j] = 0;
        }
        if (!more)
            break;
    }
    return sup ? acc : std::pow(acc, 1.0 / p);
}

// ---------------------------------------------------------------- ModulusTable

ModulusTable::ModulusTable(ScalarFn f, MultiIndex order, Point t0, int kmax, double p, DiffDomain dom,
                           ModulusOptions opts, bool with_average)
    : f_(std::move(f)),
      order_(std::move(order)),
      t0_(std::move(t0)),
      kmax_(kmax),
      p_(p),
      dom_(std::move(dom)),
      opts_(std::move(opts)),
      with_average_(with_average),
      active_(support_set(order_))
{
    if (kmax < 0)
        throw std::invalid_argument("ModulusTable: negative kmax");
    for (std::size_t j : active_)
        if (!(t0_[j] > 0.0))
            throw std::invalid_argument("modulus: t must be positive on active axes");
    const std::size_t A = active_.size();
    const std::size_t d = order_.size();
    const IntBox lv = levels();
    avg_.assign(lv.count(), 0.0);
    sup_.assign(lv.count(), 0.0);

    if (A == 0) {
        const double v = shift_norm(Point(d, 0.0));
        avg_[0] = sup_[0] = v;
        return;
    }

    // Dyadic xi blocks per active axis: block b < B-1 is [t0 2^{-b-1}, t0 2^{-b}],
    // the last block is [0, t0 2^{-(B-1)}].
    const int B = kmax_ + opts_.xi_tail_blocks + 1;
    const IntBox blocks(MultiIndex(A, 0), MultiIndex(A, B - 1));
    std::vector<double> block_sum(blocks.count(), 0.0), block_max(blocks.count(), 0.0);
    if (with_average_) {
        const GaussRule& g = gauss_legendre(opts_.xi_nodes);
        const auto n = g.nodes.size();
        // Per active axis: node position and weight for (block, node).
        std::vector<std::vector<double>> pos(A), wt(A);
        for (std::size_t a = 0; a < A; ++a) {
            const double t = t0_[active_[a]];
            for (int b = 0; b < B; ++b) {
                const double hi = std::ldexp(t, -b);
                const double lo = (b == B - 1) ? 0.0 : std::ldexp(t, -b - 1);
                for (std::size_t i = 0; i < n; ++i) {
                    pos[a].push_back(lo + (hi - lo) * g.nodes[i]);
                    wt[a].push_back((hi - lo) * g.weights[i]);
                }
            }
        }
        const IntBox nodes(MultiIndex(A, 0), MultiIndex(A, B * static_cast<int>(n) - 1));
        Point h(d, 0.0);
        MultiIndex blk(A);
        nodes.for_each([&](const MultiIndex& q) {
            double w = 1.0;
            for (std::size_t a = 0; a < A; ++a) {
                h[active_[a]] = pos[a][static_cast<std::size_t>(q[a])];
                w *= wt[a][static_cast<std::size_t>(q[a])];
                blk[a] = q[a] / static_cast<int>(n);
            }
            const double v = shift_norm(h);
            const std::size_t bi = blocks.linear_index(blk);
            block_sum[bi] += w * std::pow(v, p_);
            block_max[bi] = std::max(block_max[bi], v);
        });
    }

    std::size_t li = 0;
    lv.for_each([&](const MultiIndex& k) {
        MultiIndex klo(A), khi(A, B - 1);
        double vol = 1.0;
        for (std::size_t a = 0; a < A; ++a) {
            klo[a] = k[active_[a]];
            vol *= std::ldexp(t0_[active_[a]], -k[active_[a]]);
        }
        double s = 0.0, mx = 0.0;
        if (with_average_) {
            IntBox(klo, khi).for_each([&](const MultiIndex& b) {
                const std::size_t bi = blocks.linear_index(b);
                s += block_sum[bi];
                mx = std::max(mx, block_max[bi]);
            });
            avg_[li] = std::pow(s / vol, 1.0 / p_);
        }
        if (!opts_.include_avg_nodes)
            mx = 0.0;
        // Shift grid at this level.
        const std::size_t F = opts_.shift_fractions.size();
        const IntBox combos(MultiIndex(A, 0), MultiIndex(A, static_cast<int>(F) - 1));
        Point h(d, 0.0);
        combos.for_each([&](const MultiIndex& c) {
            for (std::size_t a = 0; a < A; ++a)
                h[active_[a]] = opts_.shift_fractions[static_cast<std::size_t>(c[a])]
                                * std::ldexp(t0_[active_[a]], -k[active_[a]]);
            mx = std::max(mx, shift_norm(h));
        });
        sup_[li] = mx;
        ++li;
    });
    // Shifts admissible at a finer level are admissible here too.
    const std::vector<double> raw = sup_;
    lv.for_each([&](const MultiIndex& k) {
        double mx = 0.0;
        IntBox(k, lv.hi()).for_each([&](const MultiIndex& k2) { mx = std::max(mx, raw[lv.linear_index(k2)]); });
        sup_[lv.linear_index(k)] = mx;
    });
}

IntBox ModulusTable::levels() const
{
    MultiIndex hi(order_.size(), 0);
    for (std::size_t j : active_)
        hi[j] = kmax_;
    return IntBox(MultiIndex(order_.size(), 0), hi);
}

Point ModulusTable::t_at(const MultiIndex& k) const
{
    Point t = t0_;
    for (std::size_t j : active_)
        t[j] = std::ldexp(t0_[j], -k[j]);
    return t;
}

double ModulusTable::avg(const MultiIndex& k) const
{
    if (!with_average_ && !active_.empty())
        throw std::logic_error("ModulusTable: averaged modulus not tabulated");
    return avg_[levels().linear_index(k)];
}

double ModulusTable::sup(const MultiIndex& k) const
{
    return sup_[levels().linear_index(k)];
}

double ModulusTable::shift_norm(const Point& h) const
{
    auto it = memo_.find(h);
    if (it != memo_.end())
        return it->second;
    const double v = difference_norm(f_, order_, h, p_, dom_, opts_.inner);
    memo_.emplace(h, v);
    return v;
}

ModulusEstimate modulus_sup(const ScalarFn& f, const MultiIndex& order, std::span<const double> t, double p,
                            const DiffDomain& dom, const ModulusOptions& opts)
{
    const ModulusTable tab(f, order, Point(t.begin(), t.end()), 0, p, dom, opts, opts.include_avg_nodes);
    return {order, Point(t.begin(), t.end()), tab.sup(MultiIndex(order.size(), 0)), "sup-grid", tab.samples(), true};
}

ModulusEstimate modulus_avg(const ScalarFn& f, const MultiIndex& order, std::span<const double> t, double p,
                            const DiffDomain& dom, const ModulusOptions& opts)
{
    if (std::isinf(p)) {
        ModulusEstimate e = modulus_sup(f, order, t, p, dom, opts);
        e.method = "sup-grid (p = inf)";
        return e;
    }
    ModulusOptions o = opts;
    o.shift_fractions.clear();
    const ModulusTable tab(f, order, Point(t.begin(), t.end()), 0, p, dom, o, true);
    return {order, Point(t.begin(), t.end()), tab.avg(MultiIndex(order.size(), 0)), "averaged-quadrature",
            tab.samples(), false};
}

// ---------------------------------------------------------------- norms

namespace {

// Weight of the dyadic block [2^{-k}, 2^{-k+1}] under t^{-1-theta a}.
double block_weight(int k, double theta, double a)
{
    return std::exp2(k * theta * a) * (1.0 - std::exp2(-theta * a)) / (theta * a);
}

// Discretized J-integral to the power theta. `value(sub, k)` is the
// modulus with the axes of `sub` (bitmask over positions in J) at
// t = 2^{-k}; the other axes of J sit in the t >= 1 tail and contribute
// `tail(j)` each.
double theta_sum(const std::vector<std::size_t>& J, std::size_t d, int kmax, double theta,
                 const std::vector<double>& a, const std::function<double(unsigned, const MultiIndex&)>& value,
                 const std::function<double(std::size_t)>& tail)
{
    double total = 0.0;
    const unsigned n = 1u << J.size();
    for (unsigned sub = 0; sub < n; ++sub) {
        double factor = 1.0;
        MultiIndex lo(d, 0), hi(d, 0);
        for (std::size_t i = 0; i < J.size(); ++i) {
            if (sub & (1u << i)) {
                lo[J[i]] = 1;
                hi[J[i]] = kmax;
            } else {
                factor *= tail(J[i]);
            }
        }
        if (factor == 0.0)
            continue;
        IntBox(lo, hi).for_each([&](const MultiIndex& k) {
            double w = factor;
            for (std::size_t i = 0; i < J.size(); ++i)
                if (sub & (1u << i))
                    w *= block_weight(k[J[i]], theta, a[J[i]]);
            total += w * std::pow(value(sub, k), theta);
        });
    }
    return total;
}

// sup over the grid t = 2^{-k}, k = 0..kmax, of prod 2^{k a} value(sub, k),
// with tail axes contributing the factor `tail(j)`.
double grid_sup(const std::vector<std::size_t>& J, std::size_t d, int kmax, const std::vector<double>& a,
                const std::function<double(unsigned, const MultiIndex&)>& value,
                const std::function<double(std::size_t)>& tail, bool tail_subsets)
{
    double best = 0.0;
    const unsigned full = (1u << J.size()) - 1;
    for (unsigned sub = tail_subsets ? 0 : full; sub <= full; ++sub) {
        double factor = 1.0;
        MultiIndex hi(d, 0);
        for (std::size_t i = 0; i < J.size(); ++i) {
            if (sub & (1u << i))
                hi[J[i]] = kmax;
            else
                factor *= tail(J[i]);
        }
        IntBox(MultiIndex(d, 0), hi).for_each([&](const MultiIndex& k) {
            double w = factor;
            for (std::size_t i = 0; i < J.size(); ++i)
                if (sub & (1u << i))
                    w *= std::exp2(k[J[i]] * a[J[i]]);
            best = std::max(best, w * value(sub, k));
        });
    }
    return best;
}

MultiIndex restrict_to(const MultiIndex& v, const std::vector<std::size_t>& J)
{
    MultiIndex out(v.size(), 0);
    for (std::size_t j : J)
        out[j] = v[j];
    return out;
}

}  // namespace

NormReport nikolskii_norm_prime(const ScalarFn& f, const SmoothnessParams& sp, const NormOptions& opts)
{
    const std::size_t d = sp.dim();
    const DiffDomain cube = DiffDomain::cube(d);
    NormReport r;
    r.norm = "H'";
    r.kmax = opts.kmax;
    r.theta = INFINITY;
    r.sup_lower_bound = true;
    r.lp_term = lp_norm_box(f, cube.box, sp.p, opts.lp);
    r.total = r.lp_term;
    r.parts.push_back({{}, r.lp_term});
    for (const auto& J : all_subsets(d, false)) {
        const ModulusTable tab(f, restrict_to(sp.l, J), Point(d, 1.0), opts.kmax, sp.p, cube, opts.modulus, true);
        const double v = grid_sup(
            J, d, opts.kmax, sp.alpha, [&](unsigned, const MultiIndex& k) { return tab.avg(k); },
            [](std::size_t) { return 1.0; }, false);
        r.parts.push_back({J, v});
        r.total = std::max(r.total, v);
    }
    r.notes.push_back("sup over t = 2^{-k}, k = 0..kmax; t >= 1 bounded by the t = 1 value");
    return r;
}

NormReport besov_norm_prime(const ScalarFn& f, const SmoothnessParams& sp, const NormOptions& opts)
{
    if (std::isinf(sp.theta)) {
        NormReport r = nikolskii_norm_prime(f, sp, opts);
        r.routed_to_nikolskii = true;
        r.notes.push_back("theta = inf routed to the H' norm");
        return r;
    }
    const std::size_t d = sp.dim();
    const DiffDomain cube = DiffDomain::cube(d);
    NormReport r;
    r.norm = "B'";
    r.kmax = opts.kmax;
    r.theta = sp.theta;
    r.tail_upper_bound = true;
    r.lp_term = lp_norm_box(f, cube.box, sp.p, opts.lp);
    r.total = r.lp_term;
    r.parts.push_back({{}, r.lp_term});
    for (const auto& J : all_subsets(d, false)) {
        const ModulusTable tab(f, restrict_to(sp.l, J), Point(d, 1.0), opts.kmax, sp.p, cube, opts.modulus, true);
        const double s = theta_sum(
            J, d, opts.kmax, sp.theta, sp.alpha, [&](unsigned, const MultiIndex& k) { return tab.avg(k); },
            [&](std::size_t j) { return 1.0 / (sp.theta * sp.alpha[j]); });
        const double v = std::pow(s, 1.0 / sp.theta);
        r.parts.push_back({J, v});
        r.total = std::max(r.total, v);
    }
    r.notes.push_back("dyadic t-blocks [2^{-k}, 2^{-k+1}], k = 1..kmax, modulus at the left endpoint");
    r.notes.push_back("t >= 1: averaged modulus frozen at t = 1 (upper envelope)");
    return r;
}

NormReport besov_norm_ell(const DerivativeProvider& deriv, const SmoothnessParams& sp, const NormOptions& opts)
{
    if (!sp.ell)
        throw std::invalid_argument("besov_norm_ell: ell not set");
    const std::size_t d = sp.dim();
    const MultiIndex& ell = *sp.ell;
    const DiffDomain cube = DiffDomain::cube(d);
    const bool nik = std::isinf(sp.theta);
    NormReport r;
    r.norm = nik ? "H^ell" : "B^ell";
    r.kmax = opts.kmax;
    r.theta = sp.theta;
    r.routed_to_nikolskii = nik;
    r.sup_lower_bound = true;
    r.lp_term = lp_norm_box(deriv(MultiIndex(d, 0)), cube.box, sp.p, opts.lp);
    r.total = r.lp_term;
    r.parts.push_back({{}, r.lp_term});
    std::vector<double> a(d);
    for (std::size_t j = 0; j < d; ++j)
        a[j] = sp.alpha[j] - ell[j];
    for (const auto& J : all_subsets(d, false)) {
        const MultiIndex lam = restrict_to(ell, J);
        const MultiIndex order = restrict_to(sp.l - ell, J);
        const ModulusTable tab(deriv(lam), order, Point(d, 1.0), opts.kmax, sp.p, cube, opts.modulus,
                               opts.modulus.include_avg_nodes);
        const auto value = [&](unsigned, const MultiIndex& k) { return tab.sup(k); };
        double v;
        if (nik)
            v = grid_sup(J, d, opts.kmax, a, value, [](std::size_t) { return 1.0; }, false);
        else
            v = std::pow(theta_sum(J, d, opts.kmax, sp.theta, a, value,
                                   [&](std::size_t j) { return 1.0 / (sp.theta * a[j]); }),
                         1.0 / sp.theta);
        r.parts.push_back({J, v});
        r.total = std::max(r.total, v);
    }
    r.notes.push_back("t >= 1: sup modulus is constant there on the cube");
    return r;
}

double lp_norm_whole_space(const PiecewisePoly& F, double p)
{
    return F.norm(p);
}

NormReport derivative_besov_norm(const PiecewisePoly& F, const MultiIndex& lambda, const SmoothnessParams& sp,
                                 const NormOptions& opts)
{
    const std::size_t d = sp.dim();
    for (std::size_t j = 0; j < d; ++j)
        if (lambda[j] < 0 || !(lambda[j] < sp.alpha[j]))
            throw std::invalid_argument("derivative_besov_norm: need lambda < alpha (axis " + std::to_string(j + 1)
                                        + ")");
    const PiecewisePoly G = F.derivative(lambda);
    const ScalarFn g = [G](std::span<const double> x) { return G(x); };
    const DiffDomain whole{F.extent(), true};
    const MultiIndex r_order = sp.l - lambda;
    std::vector<double> a(d);
    for (std::size_t j = 0; j < d; ++j)
        a[j] = sp.alpha[j] - lambda[j];
    const bool nik = std::isinf(sp.theta);

    NormReport rep;
    rep.norm = "R^d-derivative";
    rep.kmax = opts.kmax;
    rep.theta = sp.theta;
    rep.routed_to_nikolskii = nik;
    rep.tail_upper_bound = true;
    rep.sup_lower_bound = true;
    rep.lp_term = lp_norm_whole_space(G, sp.p);
    rep.total = rep.lp_term;
    rep.parts.push_back({{}, rep.lp_term});

    ModulusOptions mo = opts.modulus;
    mo.include_avg_nodes = false;
    std::map<unsigned, std::unique_ptr<ModulusTable>> tables;  // keyed by axis bitmask
    const auto table_for = [&](const std::vector<std::size_t>& axes) -> const ModulusTable& {
        unsigned key = 0;
        for (std::size_t j : axes)
            key |= 1u << j;
        auto& slot = tables[key];
        if (!slot)
            slot = std::make_unique<ModulusTable>(g, restrict_to(r_order, axes), Point(d, 1.0), opts.kmax, sp.p,
                                                  whole, mo, false);
        return *slot;
    };

    for (const auto& J : all_subsets(d, false)) {
        const auto value = [&](unsigned sub, const MultiIndex& k) {
            std::vector<std::size_t> axes;
            for (std::size_t i = 0; i < J.size(); ++i)
                if (sub & (1u << i))
                    axes.push_back(J[i]);
            if (axes.empty())
                return rep.lp_term;
            return table_for(axes).sup(restrict_to(k, axes));
        };
        double v;
        if (nik) {
            v = grid_sup(J, d, opts.kmax, a, value, [&](std::size_t j) { return std::exp2(r_order[j]); }, true);
        } else {
            const double s = theta_sum(J, d, opts.kmax, sp.theta, a, value, [&](std::size_t j) {
                return std::exp2(sp.theta * r_order[j]) / (sp.theta * a[j]);
            });
            v = std::pow(s, 1.0 / sp.theta);
        }
        rep.parts.push_back({J, v});
        rep.total = std::max(rep.total, v);
    }
    rep.notes.push_back("sup moduli over the shift grid (lower bounds); t >= 1 via ||Delta^r g|| <= 2^r ||g||");
    return rep;
}

}  // namespace mixsmooth
