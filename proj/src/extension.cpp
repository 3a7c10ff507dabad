#include "mixsmooth/extension.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "mixsmooth/splines.hpp"

namespace mixsmooth {

FunctionOracle zero_extend(const FunctionOracle& f)
{
    FunctionOracle out = f;
    const Box cube = Box::unit(f.dim);
    out.fn = [fn = f.fn, cube](std::span<const double> x) { return cube.contains_closed(x) ? fn(x) : 0.0; };
    out.poly_degree.reset();
    out.name = "I(" + f.name + ")";
    return out;
}

Box support_box(const MultiIndex& m)
{
    Point c(m.size()), e(m.size());
    for (std::size_t j = 0; j < m.size(); ++j) {
        c[j] = -(m[j] + 1.0);
        e[j] = 2.0 * m[j] + 3.0;
    }
    return Box(c, e);
}

FunctionOracle global_local_projector(const MultiIndex& kappa, const MultiIndex& nu, const MultiIndex& deg,
                                      const MultiIndex& m, const FunctionOracle& f, std::optional<QuadSpec> quad)
{
    if (!cell_indices(kappa).contains(nu))
        throw std::out_of_range("global_local_projector: index " + nu.str() + " outside N_{0,2^kappa-e}");
    return masked_project(f, dyadic_cell(kappa, nu), support_box(m), deg, quad);
}

GlobalPiecewisePoly::GlobalPiecewisePoly(SplineBlend blend)
    : blend_(std::move(blend)), cells_(blend_.cellwise(blend_.support_cells(), false))
{
}

GlobalPiecewisePoly global_detail(const MultiIndex& kappa, const MultiIndex& m, ProjectionCache& cache)
{
    return GlobalPiecewisePoly(detail_blend(kappa, m, cache));
}

GlobalPiecewisePoly global_detail(const MultiIndex& kappa, const MultiIndex& l, const MultiIndex& m,
                                  const FunctionOracle& f, std::optional<QuadSpec> quad)
{
    check_degree_pair(l, m);
    ProjectionCache cache(f, l - MultiIndex(l.size(), 1), quad);
    return global_detail(kappa, m, cache);
}

// ---------------------------------------------------------------- class check

namespace {

// Sample coordinates along one axis: `per_cell` points inside every
// level-k cell meeting Q^{d,m}, away from the knots.
std::vector<double> axis_samples(int k, int m, int per_cell)
{
    std::vector<double> out;
    const double h = std::ldexp(1.0, -k);
    const int lo = -m << k, hi = ((m + 2) << k) - 1;
    for (int c = lo; c <= hi; ++c)
        for (int i = 0; i < per_cell; ++i)
            out.push_back(h * (c + (i + 0.37) / per_cell));
    return out;
}

}  // namespace

ClassCheckReport class_check_Pprime(const GlobalPiecewisePoly& F, double rel_tol, int per_cell)
{
    const SplineBlend& B = F.blend();
    const std::size_t d = B.dim();
    const MultiIndex& kappa = B.level();
    const MultiIndex& m = B.order();
    const IntBox idx = B.indices();
    if (idx.empty() || B.degree().size() != d)
        throw std::invalid_argument("class_check_Pprime: malformed family");
    if (per_cell <= 0)
        per_cell = B.degree().max() + m.max() + 2;

    std::vector<std::vector<double>> samples(d);
    for (std::size_t j = 0; j < d; ++j)
        samples[j] = axis_samples(kappa[j], m[j], per_cell);

    ClassCheckReport rep;
    for (std::size_t j = 0; j < d; ++j) {
        const int lo_j = idx.lo()[j], hi_j = idx.hi()[j];
        const std::size_t n_j = static_cast<std::size_t>(hi_j - lo_j + 1);
        std::vector<double> dev(n_j, 0.0), slice(n_j);
        std::vector<int> rep_of(n_j);
        const int top = (1 << kappa[j]) - m[j] - 1;
        for (int v = lo_j; v <= hi_j; ++v)
            rep_of[static_cast<std::size_t>(v - lo_j)] = std::max(top, 0) - std::max(top - std::max(v, 0), 0);
        double scale = 0.0;

        MultiIndex pos_lo(d, 0), pos_hi(d);
        for (std::size_t i = 0; i < d; ++i)
            pos_hi[i] = static_cast<int>(samples[i].size()) - 1;
        Point x(d);
        IntBox(pos_lo, pos_hi).for_each([&](const MultiIndex& q) {
            for (std::size_t i = 0; i < d; ++i)
                x[i] = samples[i][static_cast<std::size_t>(q[i])];
            // Other-axis index range with nonzero splines at x.
            MultiIndex olo(d), ohi(d);
            for (std::size_t i = 0; i < d; ++i) {
                if (i == j) {
                    olo[i] = ohi[i] = 0;
                    continue;
                }
                const int mu = static_cast<int>(std::floor(std::ldexp(x[i], kappa[i])));
                olo[i] = std::max(mu - m[i], idx.lo()[i]);
                ohi[i] = std::min(mu, idx.hi()[i]);
            }
            std::fill(slice.begin(), slice.end(), 0.0);
            const IntBox others(olo, ohi);
            if (others.empty())
                return;
            others.for_each([&](const MultiIndex& o) {
                double g = 1.0;
                for (std::size_t i = 0; i < d; ++i)
                    if (i != j)
                        g *= spline(m[i]).eval(0, std::ldexp(x[i], kappa[i]) - o[i]);
                if (g == 0.0)
                    return;
                MultiIndex nu = o;
                for (int v = lo_j; v <= hi_j; ++v) {
                    nu[j] = v;
                    slice[static_cast<std::size_t>(v - lo_j)] += g * B.family(nu)(x);
                }
            });
            for (std::size_t a = 0; a < n_j; ++a) {
                scale = std::max(scale, std::abs(slice[a]));
                const double ref = slice[static_cast<std::size_t>(rep_of[a] - lo_j)];
                dev[a] = std::max(dev[a], std::abs(slice[a] - ref));
            }
        });
        for (std::size_t a = 0; a < n_j; ++a) {
            if (dev[a] > rel_tol * scale) {
                rep.pass = false;
                rep.axis = j + 1;
                rep.index = lo_j + static_cast<int>(a);
                rep.representative = rep_of[a];
                rep.deviation = dev[a];
                rep.scale = scale;
                rep.message = "axis " + std::to_string(j + 1) + ": slice " + std::to_string(rep.index)
                              + " differs from slice " + std::to_string(rep.representative) + " (max deviation "
                              + std::to_string(dev[a]) + ", scale " + std::to_string(scale) + ")";
                return rep;
            }
        }
        rep.scale = std::max(rep.scale, scale);
    }
    rep.message = "pass";
    return rep;
}

// ---------------------------------------------------------------- injectivity

Reconstruction reconstruct_family(const GlobalPiecewisePoly& F)
{
    const SplineBlend& B = F.blend();
    const std::size_t d = B.dim();
    const MultiIndex& kappa = B.level();
    const MultiIndex& m = B.order();
    const MultiIndex& deg = B.degree();
    const IntBox idx = B.indices();
    const IntBox lam(MultiIndex(d, 0), deg);
    const std::size_t nlam = lam.count();
    const std::size_t ncols = idx.count() * nlam;

    const IntBox cells = B.support_cells();
    const int per = deg.max() + m.max() + 2;
    const GaussRule& g = gauss_legendre(per);
    const IntBox node_box(MultiIndex(d, 0), MultiIndex(d, per - 1));
    const std::size_t nrows = cells.count() * node_box.count();

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nrows), static_cast<Eigen::Index>(ncols));
    Eigen::VectorXd b(static_cast<Eigen::Index>(nrows));
    Eigen::Index row = 0;
    Point x(d);
    cells.for_each([&](const MultiIndex& mu) {
        const Box cb = dyadic_cell(kappa, mu);
        node_box.for_each([&](const MultiIndex& q) {
            for (std::size_t j = 0; j < d; ++j)
                x[j] = cb.lo(j) + cb.edge()[j] * g.nodes[static_cast<std::size_t>(q[j])];
            b(row) = F(x);
            MultiIndex lo(d), hi(d);
            for (std::size_t j = 0; j < d; ++j) {
                lo[j] = std::max(mu[j] - m[j], idx.lo()[j]);
                hi[j] = std::min(mu[j], idx.hi()[j]);
            }
            IntBox(lo, hi).for_each([&](const MultiIndex& nu) {
                const double gv = eval_g(kappa, nu, m, x);
                if (gv == 0.0)
                    return;
                const Box sb = support_g(kappa, nu, m);
                const std::size_t base = idx.linear_index(nu) * nlam;
                lam.for_each([&](const MultiIndex& l) {
                    double v = gv;
                    for (std::size_t j = 0; j < d; ++j)
                        v *= std::pow((x[j] - sb.lo(j)) / sb.edge()[j], l[j]);
                    A(row, static_cast<Eigen::Index>(base + lam.linear_index(l))) = v;
                });
            });
            ++row;
        });
    });

    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    Reconstruction out{SplineBlend(kappa, m, deg), 0.0, (A * c - b).cwiseAbs().maxCoeff()};
    idx.for_each([&](const MultiIndex& nu) {
        Poly& p = out.family.family(nu);
        const Poly ref = B.family(nu).rebased(p.box()).padded(deg);
        const std::size_t base = idx.linear_index(nu) * nlam;
        for (std::size_t i = 0; i < nlam; ++i) {
            p.coeffs()[i] = c(static_cast<Eigen::Index>(base + i));
            out.max_coeff_error = std::max(out.max_coeff_error, std::abs(p.coeffs()[i] - ref.coeffs()[i]));
        }
    });
    return out;
}

// ---------------------------------------------------------------- random class elements

GlobalPiecewisePoly random_pprime(const MultiIndex& kappa, const MultiIndex& deg, const MultiIndex& m,
                                  std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    SplineBlend blend(kappa, m, deg);
    std::map<MultiIndex, Poly, MultiIndexLess> drawn;
    const std::size_t ncoef = IntBox(MultiIndex(deg.size(), 0), deg).count();
    blend.indices().for_each([&](const MultiIndex& nu) {
        const MultiIndex c = index_clamp(kappa, m, nu);
        auto it = drawn.find(c);
        if (it == drawn.end()) {
            std::vector<double> coeffs(ncoef);
            for (double& v : coeffs)
                v = normal(rng);
            it = drawn.emplace(c, TensorPoly(dyadic_cell(kappa, c), deg, std::move(coeffs)).to_poly()).first;
        }
        blend.family(nu) = it->second.rebased(blend.family(nu).box());
    });
    return GlobalPiecewisePoly(std::move(blend));
}

BernsteinRecord bernstein_experiment(const std::vector<MultiIndex>& kappas, const MultiIndex& deg, const MultiIndex& m,
                                     const MultiIndex& lambda, double q, int trials, std::uint64_t seed)
{
    if (!lambda.all_nonnegative() || !lambda.leq(m))
        throw std::invalid_argument("bernstein_experiment: need 0 <= lambda <= m");
    if (trials < 1)
        throw std::invalid_argument("bernstein_experiment: trials must be positive");
    BernsteinRecord rec{lambda, q, {}, {}};
    std::seed_seq seq{seed};
    std::mt19937_64 master(seq);
    for (const MultiIndex& kappa : kappas) {
        BernsteinLevel lv{kappa, 0.0};
        for (int t = 0; t < trials; ++t) {
            const GlobalPiecewisePoly F = random_pprime(kappa, deg, m, master());
            const double den = F.norm_cube(q);
            if (den > 0.0)
                lv.max_ratio = std::max(lv.max_ratio, F.derivative(lambda).norm(q) / den);
        }
        rec.levels.push_back(lv);
    }
    for (std::size_t i = 1; i < rec.levels.size(); ++i)
        rec.slopes.push_back(std::log2(rec.levels[i].max_ratio / rec.levels[i - 1].max_ratio));
    return rec;
}

// ---------------------------------------------------------------- extension

double ExtensionResult::shell(int k, std::span<const double> x) const
{
    double acc = 0.0;
    for (const LevelDetail& ld : details)
        if (ld.kappa.max() == k)
            acc += ld.detail(x);
    return acc;
}

ExtensionResult extend(const FunctionOracle& f, const SmoothnessParams& sp, const MultiIndex& m, int K,
                       std::optional<QuadSpec> quad)
{
    const std::size_t d = sp.dim();
    if (f.dim != d || m.size() != d)
        throw std::invalid_argument("extend: dimension mismatch");
    if (std::isinf(sp.p) || !(sp.p >= 1.0))
        throw std::invalid_argument("extend: need 1 <= p < inf");
    if (K < 0)
        throw std::invalid_argument("extend: K must be nonnegative");
    check_degree_pair(sp.l, m);

    const MultiIndex e(d, 1);
    const MultiIndex deg = sp.l - e;
    ExtensionResult r{sp, m, K, f.name, {}, {}};
    ProjectionCache cache(f, deg, quad);
    const MultiIndex top = e * K;
    const MultiIndex scale = pow2(top);
    MultiIndex lo(d), hi(d);
    for (std::size_t j = 0; j < d; ++j) {
        lo[j] = -m[j] * scale[j];
        hi[j] = (m[j] + 1) * scale[j] - 1;
    }
    r.sum = PiecewisePoly(top, IntBox(lo, hi), deg + m, false);
    IntBox(MultiIndex(d, 0), top).for_each([&](const MultiIndex& kappa) {
        LevelDetail ld{kappa, global_detail(kappa, m, cache), 0.0};
        ld.lp_norm = ld.detail.norm_whole_space(sp.p);
        ld.detail.cells().accumulate_into(r.sum);
        r.details.push_back(std::move(ld));
    });
    return r;
}

// ---------------------------------------------------------------- JSON

namespace {

nlohmann::json number_or_inf(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    return v;
}

}  // namespace

nlohmann::json to_json(const Poly& p)
{
    return {{"corner", p.box().corner()}, {"edge", p.box().edge()}, {"degree", p.degree().values()},
            {"coeffs", p.coeffs()}};
}

nlohmann::json to_json(const GlobalPiecewisePoly& F)
{
    const SplineBlend& B = F.blend();
    nlohmann::json fam = nlohmann::json::array();
    B.indices().for_each([&](const MultiIndex& nu) {
        fam.push_back({{"nu", nu.values()}, {"coeffs", B.family(nu).coeffs()}});
    });
    return {{"kappa", B.level().values()},
            {"m", B.order().values()},
            {"degree", B.degree().values()},
            {"basis", "monomial in (x - corner) / edge on supp g_{kappa,nu}"},
            {"index_lo", B.indices().lo().values()},
            {"index_hi", B.indices().hi().values()},
            {"family", fam}};
}

nlohmann::json to_json(const ExtensionResult& r)
{
    nlohmann::json details = nlohmann::json::array();
    for (const LevelDetail& ld : r.details) {
        nlohmann::json j = to_json(ld.detail);
        j["lp_norm"] = ld.lp_norm;
        details.push_back(std::move(j));
    }
    return {{"schema", 1},
            {"kind", "extension"},
            {"function", r.function_name},
            {"alpha", r.params.alpha},
            {"p", number_or_inf(r.params.p)},
            {"theta", number_or_inf(r.params.theta)},
            {"l", r.params.l.values()},
            {"m", r.m.values()},
            {"K", r.K},
            {"details", details}};
}

}  // namespace mixsmooth
