#include "mixsmooth/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

#include "mixsmooth/catalog.hpp"
#include "mixsmooth/extension.hpp"
#include "mixsmooth/quasiinterp.hpp"
#include "mixsmooth/splines.hpp"

namespace mixsmooth {

using nlohmann::json;

bool SuiteResult::pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

double fitted_slope(const std::vector<double>& xs, const std::vector<double>& ys)
{
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("fitted_slope: need at least two matching points");
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<MultiIndex> admissible_lambdas(const std::vector<double>& alpha, const MultiIndex& m)
{
    const std::size_t d = alpha.size();
    MultiIndex hi(d);
    for (std::size_t j = 0; j < d; ++j)
        hi[j] = std::min(m[j], static_cast<int>(std::ceil(alpha[j])) - 1);
    return IntBox(MultiIndex(d, 0), hi).members();
}

namespace {

struct Suite {
    SuiteResult r;
    explicit Suite(std::string name) { r.name = std::move(name); }
    void add(std::string name, bool pass, json measured = json::object())
    {
        r.checks.push_back({std::move(name), pass, std::move(measured)});
    }
};

std::mt19937_64 suite_rng(const ExperimentConfig& cfg, std::uint64_t salt)
{
    std::seed_seq seq{cfg.seed, salt};
    return std::mt19937_64(seq);
}

Point random_point(std::mt19937_64& rng, std::size_t d, double lo = 0.0, double hi = 1.0)
{
    std::uniform_real_distribution<double> u(lo, hi);
    Point x(d);
    for (double& v : x)
        v = u(rng);
    return x;
}

std::vector<Point> unit_grid(std::size_t d, int n)
{
    std::vector<Point> out;
    IntBox(MultiIndex(d, 0), MultiIndex(d, n)).for_each([&](const MultiIndex& q) {
        Point x(d);
        for (std::size_t j = 0; j < d; ++j)
            x[j] = static_cast<double>(q[j]) / n;
        out.push_back(std::move(x));
    });
    return out;
}

double max_abs_diff(const std::vector<Point>& pts, const std::function<double(std::span<const double>)>& a,
                    const std::function<double(std::span<const double>)>& b)
{
    double w = 0.0;
    for (const Point& x : pts)
        w = std::max(w, std::abs(a(x) - b(x)));
    return w;
}

std::vector<CatalogFunction> selected_functions(const ExperimentConfig& cfg)
{
    if (std::find(cfg.functions.begin(), cfg.functions.end(), "all") != cfg.functions.end())
        return function_catalog(cfg.d);
    std::vector<CatalogFunction> out;
    for (const auto& n : cfg.functions)
        out.push_back(catalog_entry(n, cfg.d));
    return out;
}

std::optional<QuadSpec> projection_quad_of(const ExperimentConfig& cfg)
{
    if (cfg.quad_nodes > 0)
        return QuadSpec{cfg.quad_nodes, 1};
    return std::nullopt;
}

// Random polynomial with degree `deg` written on `box`.
Poly random_poly(std::mt19937_64& rng, const Box& box, const MultiIndex& deg)
{
    std::normal_distribution<double> n(0.0, 1.0);
    Poly p(box, deg);
    for (double& c : p.coeffs())
        c = n(rng);
    return p;
}

// ---------------------------------------------------------------- core-index

SuiteResult suite_core_index(const ExperimentConfig& cfg)
{
    Suite s("core_index");
    auto rng = suite_rng(cfg, 1);
    s.add("support_set_examples", support_set(MultiIndex{0, 3, 0}) == std::vector<std::size_t>{1}
                                      && support_set(MultiIndex{0, 0}).empty()
                                      && support_set(MultiIndex{1, 1, 1}) == std::vector<std::size_t>{0, 1, 2});
    bool bij = true;
    for (std::size_t d = 1; d <= 6; ++d) {
        std::set<std::vector<int>> seen;
        for (const auto& J : all_subsets(d, true)) {
            const MultiIndex chi = indicator_vector(J, d);
            bij = bij && support_set(chi) == J && seen.insert(chi.values()).second;
        }
        bij = bij && seen.size() == (1u << d);
    }
    s.add("indicator_bijection_d_le_6", bij);
    bool counts = true, order = true;
    std::uniform_int_distribution<int> small(-3, 3);
    for (int t = 0; t < 200; ++t) {
        MultiIndex lo(3), hi(3), a(3), b(3);
        for (std::size_t j = 0; j < 3; ++j) {
            lo[j] = small(rng);
            hi[j] = small(rng);
            a[j] = small(rng) / 3;
            b[j] = small(rng) / 3;
        }
        const IntBox box(lo, hi);
        std::size_t n = 0;
        box.for_each([&](const MultiIndex&) { ++n; });
        std::size_t expect = 1;
        for (std::size_t j = 0; j < 3; ++j)
            expect *= hi[j] >= lo[j] ? static_cast<std::size_t>(hi[j] - lo[j] + 1) : 0;
        counts = counts && n == expect && box.count() == expect;
        if (a.leq(b) && b.leq(a))
            order = order && a == b;
    }
    s.add("intbox_count", counts);
    s.add("order_antisymmetry", order);
    const Box c = dyadic_cell(MultiIndex{1, 2}, MultiIndex{1, 3});
    s.add("dyadic_cell_example", c.corner() == Point{0.5, 0.75} && c.edge() == Point{0.5, 0.25});
    return s.r;
}

// ---------------------------------------------------------------- splines

SuiteResult suite_splines(const ExperimentConfig& cfg)
{
    Suite s("splines");
    auto rng = suite_rng(cfg, 2);
    double worst = 0.0;
    for (int m = 0; m <= 4; ++m) {
        const SplineGen& psi = spline(m);
        const RefinementMask a = refinement_coeffs(m);
        std::uniform_real_distribution<double> u(-1.0, m + 2.0);
        for (int t = 0; t < 1000; ++t) {
            const double x = u(rng);
            double rhs = 0.0;
            for (int mu = 0; mu <= m + 1; ++mu)
                rhs += a[mu] * psi(2 * x - mu);
            worst = std::max(worst, std::abs(psi(x) - rhs));
        }
    }
    s.add("refinement_float", worst <= 1e-10, {{"max_error", worst}});

    bool exact = true, parity = true;
    for (int m = 0; m <= 4; ++m) {
        const SplineGen& psi = spline(m);
        const RefinementMask a = refinement_coeffs(m);
        for (int k = -7; k <= 7 * (m + 2); ++k) {
            const Rational x(k, 7);
            Rational rhs = 0;
            for (int mu = 0; mu <= m + 1; ++mu)
                rhs += a.exact_coeffs[static_cast<std::size_t>(mu)] * psi.eval_exact(2 * x - mu);
            exact = exact && rhs == psi.eval_exact(x);
        }
        Rational even = 0, odd = 0;
        for (int mu = 0; mu <= m + 1; ++mu)
            (mu % 2 == 0 ? even : odd) += a.exact_coeffs[static_cast<std::size_t>(mu)];
        parity = parity && even == 1 && odd == 1;
    }
    s.add("refinement_exact", exact);
    s.add("mask_parity_sums_exact", parity);

    double pou = 0.0;
    for (std::size_t d = 1; d <= 2; ++d)
        IntBox(MultiIndex(d, 0), MultiIndex(d, 2)).for_each([&](const MultiIndex& m) {
            IntBox(MultiIndex(d, 0), MultiIndex(d, 3)).for_each([&](const MultiIndex& kappa) {
                const IntBox idx = spline_indices(kappa, m);
                for (int t = 0; t < 100; ++t) {
                    const Point x = random_point(rng, d);
                    double sum = 0.0;
                    idx.for_each([&](const MultiIndex& nu) { sum += eval_g(kappa, nu, m, x); });
                    pou = std::max(pou, std::abs(sum - 1.0));
                }
            });
        });
    s.add("partition_of_unity", pou <= 1e-10, {{"max_error", pou}});

    double scaling = 0.0;
    for (int m = 1; m <= 3; ++m)
        for (int lam = 0; lam <= m; ++lam)
            for (int k = 0; k <= 3; ++k) {
                const int n = 256 * (m + 1);
                double gmax = 0.0, pmax = 0.0;
                for (int i = 0; i < n; ++i) {
                    const double sx = (i + 0.5) / 256.0;
                    const double x = std::ldexp(1.0 + sx, -k);
                    gmax = std::max(gmax, std::abs(eval_g_deriv(MultiIndex{k}, MultiIndex{1}, MultiIndex{m},
                                                                MultiIndex{lam}, std::span<const double>(&x, 1))));
                    pmax = std::max(pmax, std::abs(spline(m).eval(lam, sx)));
                }
                scaling = std::max(scaling, std::abs(gmax - std::ldexp(pmax, k * lam)) / std::ldexp(pmax, k * lam));
            }
    s.add("derivative_scaling", scaling <= 1e-8, {{"max_relative_error", scaling}});

    bool sign = true;
    for (int m = 0; m <= 4; ++m)
        for (int i = 0; i < 64 * (m + 3); ++i) {
            const double x = -1.0 + (i + 0.5) / 64.0;
            const bool inside = x > 0.0 && x < m + 1.0;
            const double v = spline(m)(x);
            sign = sign && v >= 0.0 && ((v > 0.0) == inside);
        }
    s.add("nonnegativity_and_support", sign);
    return s.r;
}

// ---------------------------------------------------------------- polyproj

SuiteResult suite_polyproj(const ExperimentConfig& cfg)
{
    Suite s("polyproj");
    auto rng = suite_rng(cfg, 3);
    const std::size_t d = cfg.d;

    double gram = 0.0;
    const GaussRule& g = gauss_legendre(12);
    for (int l = 0; l <= 10; ++l) {
        const OrthoBasis1D& B = ortho_basis(l);
        std::vector<double> vals(static_cast<std::size_t>(l + 1));
        std::vector<double> G(static_cast<std::size_t>((l + 1) * (l + 1)), 0.0);
        for (std::size_t q = 0; q < g.nodes.size(); ++q) {
            B.eval_all(g.nodes[q], vals);
            for (int i = 0; i <= l; ++i)
                for (int k = 0; k <= l; ++k)
                    G[static_cast<std::size_t>(i * (l + 1) + k)] += g.weights[q] * vals[i] * vals[k];
        }
        for (int i = 0; i <= l; ++i)
            for (int k = 0; k <= l; ++k)
                gram = std::max(gram, std::abs(G[static_cast<std::size_t>(i * (l + 1) + k)] - (i == k ? 1.0 : 0.0)));
    }
    s.add("orthonormal_gram", gram <= 1e-12, {{"max_error", gram}});

    const FunctionOracle sq{[](std::span<const double> x) { return x[0] * x[0]; }, 1, MultiIndex{2}, "x^2"};
    const Poly fit = project(sq, Box::unit(1), MultiIndex{1}).to_poly();
    const double fit_err = std::max(std::abs(fit.coeffs()[0] + 1.0 / 6.0), std::abs(fit.coeffs()[1] - 1.0));
    s.add("projection_of_x_squared", fit_err <= 1e-12, {{"error", fit_err}});

    double repro = 0.0, kernel = 0.0;
    const MultiIndex l = cfg.params().l;
    for (int t = 0; t < 20; ++t) {
        const Box box(random_point(rng, d, -1.0, 1.0), random_point(rng, d, 0.1, 2.0));
        const Poly f = random_poly(rng, box, l);
        const FunctionOracle fo{[f](std::span<const double> x) { return f(x); }, d, l, "poly"};
        const TensorPoly P = project(fo, box, l);
        for (int i = 0; i < 10; ++i) {
            const Point x = box.map_from_unit(random_point(rng, d));
            repro = std::max(repro, std::abs(P(x) - f(x)) / std::max(1.0, f.max_abs_coeff()));
        }
        // pi_{l+1} in the first variable is orthogonal to P^{d,l}.
        const int top = l[0] + 1;
        const FunctionOracle orth{[box, top](std::span<const double> x) {
                                      return ortho_basis(top).eval(top, (x[0] - box.lo(0)) / box.edge()[0]);
                                  },
                                  d, std::nullopt, "pi"};
        const TensorPoly K = project(orth, box, l, QuadSpec{top + 3, 1});
        for (double c : K.coeffs())
            kernel = std::max(kernel, std::abs(c));
    }
    s.add("projector_reproduction", repro <= 1e-12, {{"max_error", repro}});
    s.add("projector_kernel", kernel <= 1e-12, {{"max_coeff", kernel}});

    // Tensorization on d = 2 regardless of cfg.d.
    {
        const CatalogFunction rf = random_smooth_function(2, cfg.seed);
        const FunctionOracle f = rf.oracle();
        const QuadSpec q{5, 1};
        const Box box({0.2, 0.1}, {0.5, 0.7});
        const std::vector<AxisOp> ops{projector_op(0.2, 0.5, 2, q),
                                      masked_op(0.3, 0.4, projector_op(0.1, 0.7, 1, q))};
        const FunctionOracle a = tensor_apply(ops, f, Box::unit(2), {0, 1});
        const FunctionOracle b = tensor_apply(ops, f, Box::unit(2), {1, 0});
        double comm = 0.0;
        for (int i = 0; i < 20; ++i) {
            const Point x = random_point(rng, 2);
            comm = std::max(comm, std::abs(a(x) - b(x)));
        }
        s.add("tensorization_commutes", comm <= 1e-12, {{"max_error", comm}});

        const FunctionOracle bil{[](std::span<const double> x) { return 1.0 + 2.0 * x[0] - x[1] + 3.0 * x[0] * x[1]; },
                                 2, MultiIndex{1, 1}, "bilinear"};
        const FunctionOracle pb = tensor_apply({projector_op(0.2, 0.5, 1, q), projector_op(0.1, 0.7, 1, q)}, bil,
                                               Box::unit(2));
        double bil_err = 0.0;
        for (int i = 0; i < 20; ++i) {
            const Point x = random_point(rng, 2);
            bil_err = std::max(bil_err, std::abs(pb(x) - bil(x)));
        }
        s.add("tensor_projector_reproduces_bilinear", bil_err <= 1e-12, {{"max_error", bil_err}});

        const Box mask({0.3, 0.0}, {0.5, 0.6});
        const FunctionOracle direct = masked_project(f, box, mask, MultiIndex{2, 1}, q);
        const FunctionOracle lifted = tensor_apply({masked_op(0.3, 0.5, projector_op(0.2, 0.5, 2, q)),
                                                    masked_op(0.0, 0.6, projector_op(0.1, 0.7, 1, q))},
                                                   f, Box::unit(2));
        double masked = 0.0;
        for (int i = 0; i < 50; ++i) {
            const Point x = random_point(rng, 2);
            masked = std::max(masked, std::abs(direct(x) - lifted(x)));
        }
        s.add("masked_projector_factorizes", masked <= 1e-10, {{"max_error", masked}});
    }

    // Boundedness of P across scales.
    {
        json per_p = json::object();
        bool ok = true;
        for (double p : {1.0, 2.0, 4.0}) {
            std::vector<double> max_ratio;
            for (int k = 0; k <= 6; ++k) {
                double mr = 0.0;
                for (int t = 0; t < 200; ++t) {
                    // phi((x - corner) / delta) with phi drawn per trial
                    const CatalogFunction rf = random_smooth_function(d, cfg.seed * 7919 + t);
                    auto trial = suite_rng(cfg, 5000 + static_cast<std::uint64_t>(t));
                    const double delta = std::ldexp(1.0, -k);
                    const Box box(random_point(trial, d, 0.0, 1.0 - delta), Point(d, delta));
                    const FunctionOracle f{[rf, box](std::span<const double> x) {
                                               Point u(x.size());
                                               for (std::size_t j = 0; j < x.size(); ++j)
                                                   u[j] = (x[j] - box.lo(j)) / box.edge()[j];
                                               return rf(u);
                                           },
                                           d, std::nullopt, "scaled"};
                    const TensorPoly P = project(f, box, MultiIndex(d, 1), QuadSpec{6, 1});
                    const QuadSpec nq{8, 1};
                    const double den = lp_norm_box(f.fn, box, p, nq);
                    if (den > 0.0)
                        mr = std::max(mr, lp_norm_box([&](std::span<const double> x) { return P(x); }, box, p, nq) / den);
                }
                max_ratio.push_back(mr);
            }
            const double hi = *std::max_element(max_ratio.begin(), max_ratio.end());
            const double lo = *std::min_element(max_ratio.begin(), max_ratio.end());
            ok = ok && hi / lo - 1.0 < 0.10;
            per_p[format_double(p)] = max_ratio;
        }
        s.add("projector_bounded_across_scales", ok, {{"max_ratio_by_k", per_p}});
    }

    // Markov-type scaling for random polynomials.
    {
        const double p = 2.0, q = 4.0;
        const MultiIndex deg(d, 2), lam(d, 1);
        std::vector<double> by_k;
        for (int k = 0; k <= 6; ++k) {
            const double delta = std::ldexp(1.0, -k);
            double mr = 0.0;
            for (int t = 0; t < 50; ++t) {
                // same local coefficients at every scale
                auto trial = suite_rng(cfg, 1000 + static_cast<std::uint64_t>(t));
                const Box box(random_point(trial, d), Point(d, delta));
                const Poly f = random_poly(trial, box, deg);
                const Poly df = f.derivative(lam);
                const QuadSpec nq{6, 1};
                const double num = lp_norm_box([&](std::span<const double> x) { return df(x); }, box, q, nq);
                const double den = lp_norm_box([&](std::span<const double> x) { return f(x); }, box, p, nq);
                const double scale = std::pow(delta, d * (1.0 + 1.0 / p - 1.0 / q));
                mr = std::max(mr, num * scale / den);
            }
            by_k.push_back(mr);
        }
        const double hi = *std::max_element(by_k.begin(), by_k.end());
        const double lo = *std::min_element(by_k.begin(), by_k.end());
        s.add("markov_scaling", hi / lo - 1.0 < 0.10, {{"max_ratio_by_k", by_k}});
    }

    // Jackson rate of P for sin(pi x) with linear pieces.
    {
        const FunctionOracle f{[](std::span<const double> x) { return std::sin(std::numbers::pi * x[0]); }, 1,
                               std::nullopt, "sin(pi x)"};
        std::vector<double> ks, errs;
        for (int k = 2; k <= 6; ++k) {
            double acc = 0.0;
            cell_indices(MultiIndex{k}).for_each([&](const MultiIndex& nu) {
                const Box box = dyadic_cell(MultiIndex{k}, nu);
                const TensorPoly P = project(f, box, MultiIndex{1});
                acc += std::pow(lp_norm_box([&](std::span<const double> x) { return f(x) - P(x); }, box, 2.0,
                                            QuadSpec{8, 1}),
                                2.0);
            });
            ks.push_back(k);
            errs.push_back(std::log2(std::sqrt(acc)));
        }
        const double slope = -fitted_slope(ks, errs);
        s.add("projector_jackson_rate", slope >= 1.8 && slope <= 2.2, {{"rate", slope}});
    }
    return s.r;
}

// ---------------------------------------------------------------- quasiinterp

SuiteResult suite_quasiinterp(const ExperimentConfig& cfg)
{
    Suite s("quasiinterp");
    const std::size_t d = cfg.d;
    const SmoothnessParams sp = cfg.params();
    const MultiIndex m = cfg.m_vec();
    const MultiIndex e(d, 1);

    s.add("index_clamp_examples", index_clamp(MultiIndex{0}, MultiIndex{2}, MultiIndex{-2}) == MultiIndex{0}
                                      && index_clamp(MultiIndex{3}, MultiIndex{1}, MultiIndex{-1}) == MultiIndex{0}
                                      && index_clamp(MultiIndex{3}, MultiIndex{1}, MultiIndex{7}) == MultiIndex{6});

    bool geom = true, contain = true;
    std::size_t max_overlap = 0;
    bool overlap_ok = true;
    for (std::size_t dd = 1; dd <= 2; ++dd) {
        const Box unit = Box::unit(dd);
        IntBox(MultiIndex(dd, 0), MultiIndex(dd, 2)).for_each([&](const MultiIndex& mm) {
            IntBox(MultiIndex(dd, 0), MultiIndex(dd, 4)).for_each([&](const MultiIndex& kappa) {
                cell_indices(kappa).for_each([&](const MultiIndex& nu) {
                    const CellGeometry g = cell_geometry(kappa, nu, mm);
                    const Box q = dyadic_cell(kappa, nu);
                    geom = geom && unit.contains_box(g.base) && g.base.contains_box(q) && g.wide.contains_box(g.base)
                           && unit.contains_box(g.wide);
                    interacting_indices(kappa, mm, nu).for_each([&](const MultiIndex& rho) {
                        contain = contain && g.base.contains_box(dyadic_cell(kappa, index_clamp(kappa, mm, rho)));
                    });
                });
                if (kappa.max() > 3)
                    return;
                std::size_t bound = 1;
                for (std::size_t j = 0; j < dd; ++j)
                    bound *= static_cast<std::size_t>(mm[j] + 1);
                const IntBox idx = spline_indices(kappa, mm);
                cell_indices(kappa).for_each([&](const MultiIndex& cell) {
                    const Box q = dyadic_cell(kappa, cell);
                    std::size_t n = 0;
                    idx.for_each([&](const MultiIndex& nu) { n += support_g(kappa, nu, mm).intersects_open(q); });
                    max_overlap = std::max(max_overlap, n);
                    overlap_ok = overlap_ok && n <= bound && n == interacting_indices(kappa, mm, cell).count();
                });
            });
        });
    }
    s.add("cell_geometry_containments", geom);
    s.add("clamped_cells_inside_base", contain);
    s.add("spline_overlap_counts", overlap_ok, {{"max_overlap", max_overlap}});

    // Reproduction of P^{d,l-e}.
    {
        auto rng = suite_rng(cfg, 4);
        const Poly f = random_poly(rng, Box::unit(d), sp.l - e);
        const FunctionOracle fo{[f](std::span<const double> x) { return f(x); }, d, sp.l - e, "poly"};
        double err = 0.0, det = 0.0;
        const auto pts = unit_grid(d, d == 1 ? 64 : 16);
        for (int k = 0; k <= 3; ++k) {
            const QuasiInterpolant E = quasi_interp_E(e * k, sp.l, m, fo);
            err = std::max(err, max_abs_diff(pts, E, fo.fn));
            if (k > 0) {
                const QuasiInterpolant D = telescoped_E(e * k, sp.l, m, fo);
                det = std::max(det, max_abs_diff(pts, D, [](std::span<const double>) { return 0.0; }));
            }
        }
        s.add("E_reproduces_polynomials", err <= 1e-10, {{"max_error", err}});
        s.add("details_vanish_on_polynomials", det <= 1e-10, {{"max_value", det}});
    }

    // Jackson rates for infinitely smooth entries.
    {
        json rates = json::object();
        bool ok = true;
        const double target = -static_cast<double>(sp.l.min());
        for (const char* name : {"sin_tensor", "exp_smooth"}) {
            const FunctionOracle f = catalog_entry(name, d).oracle();
            for (double p : {1.0, 2.0}) {
                std::vector<double> ks, errs;
                const int k0 = d == 1 ? 4 : 3;
                for (int k = k0; k <= k0 + 3; ++k) {
                    ks.push_back(k);
                    errs.push_back(std::log2(lp_error(f, quasi_interp_E(e * k, sp.l, m, f).cellwise(), p)));
                }
                const double slope = fitted_slope(ks, errs);
                ok = ok && std::abs(slope - target) <= 0.3;
                rates[std::string(name) + "_p" + format_double(p)] = slope;
            }
        }
        s.add("jackson_slope", ok, {{"slopes", rates}, {"target", target}});
    }

    // Telescoping.
    {
        const int K = d == 1 ? 4 : 3;
        const FunctionOracle f = catalog_entry("exp_smooth", d).oracle();
        ProjectionCache cache(f, sp.l - e);
        const QuasiInterpolant EK = quasi_interp_E(e * K, m, cache);
        std::vector<QuasiInterpolant> parts;
        IntBox(MultiIndex(d, 0), e * K).for_each([&](const MultiIndex& kappa) {
            parts.push_back(QuasiInterpolant(detail_blend(kappa, m, cache)));
        });
        const auto pts = unit_grid(d, d == 1 ? 128 : 24);
        double err = 0.0;
        for (const Point& x : pts) {
            double sum = 0.0;
            for (const auto& D : parts)
                sum += D(x);
            err = std::max(err, std::abs(sum - EK(x)));
        }
        s.add("telescoping_sum", err <= 1e-10, {{"max_error", err}, {"K", K}});
        // Direct alternating sum of E at neighbouring levels.
        double alt = 0.0;
        const MultiIndex kappa = d == 1 ? MultiIndex{3} : MultiIndex{2, 3};
        const QuasiInterpolant D(detail_blend(kappa, m, cache));
        std::vector<std::pair<int, QuasiInterpolant>> terms;
        for (const BinaryMask& eps : masks_within(kappa))
            terms.emplace_back(eps.sign(), quasi_interp_E(kappa - eps.index(), m, cache));
        for (const Point& x : pts) {
            double v = 0.0;
            for (const auto& [sg, E] : terms)
                v += sg * E(x);
            alt = std::max(alt, std::abs(v - D(x)));
        }
        s.add("U_form_matches_alternating_sum", alt <= 1e-10, {{"max_error", alt}});
    }

    // Detail-derivative bound.
    {
        const FunctionOracle f = catalog_entry("sin_tensor", d).oracle();
        json table = json::object();
        bool ok = true;
        for (const MultiIndex& lam : {MultiIndex(d, 0), MultiIndex(d, 1)}) {
            if (!lam.leq(m))
                continue;
            std::vector<double> ratios;
            for (int k = 1; k <= 5; ++k)
                ratios.push_back(derivative_level_bound_report(f, e * k, lam, sp.p, sp.p, sp.l, m).ratio);
            const double hi = *std::max_element(ratios.begin(), ratios.end());
            const double lo = *std::min_element(ratios.begin(), ratios.end());
            ok = ok && lo > 0.0 && hi / lo < 10.0;
            table[lam.str()] = ratios;
        }
        s.add("detail_derivative_bound_ratio", ok, {{"ratios", table}});
    }

    // Convergence on three entries.
    {
        bool ok = true;
        json errs = json::object();
        for (const char* name : {"sin_tensor", "abs_pow", "step"}) {
            const FunctionOracle f = catalog_entry(name, d).oracle();
            std::vector<double> v;
            for (int k = 2; k <= 4; ++k)
                v.push_back(lp_error(f, quasi_interp_E(e * k, sp.l, m, f).cellwise(), sp.p));
            ok = ok && v[1] < v[0] && v[2] < v[1];
            errs[name] = v;
        }
        s.add("convergence_monotone", ok, {{"errors", errs}});
    }

    // (E - P_j) operator bounds, scale invariant.
    {
        auto rng = suite_rng(cfg, 5);
        json table = json::object();
        bool ok = true;
        for (const auto& J : all_subsets(d, false)) {
            std::vector<double> by_k;
            for (int k = 1; k <= 5; ++k) {
                const double delta = std::ldexp(1.0, -k);
                double mr = 0.0;
                for (int t = 0; t < 10; ++t) {
                    const Box box(random_point(rng, d, 0.0, 1.0 - delta), Point(d, delta));
                    const CatalogFunction rf = random_smooth_function(d, cfg.seed * 31 + t);
                    const FunctionOracle f{[rf, box](std::span<const double> x) {
                                               Point u(x.size());
                                               for (std::size_t j = 0; j < x.size(); ++j)
                                                   u[j] = (x[j] - box.lo(j)) / box.edge()[j];
                                               return rf(u);
                                           },
                                           d, std::nullopt, "scaled"};
                    std::vector<AxisOp> ops(d, identity_op());
                    for (std::size_t j : J)
                        ops[j] = difference_op(identity_op(),
                                               projector_op(box.lo(j), box.edge()[j], sp.l[j] - 1, QuadSpec{6, 1}));
                    const FunctionOracle r = tensor_apply(ops, f, box);
                    const QuadSpec nq{6, 1};
                    const double den = lp_norm_box(f.fn, box, sp.p, nq);
                    if (den > 0.0)
                        mr = std::max(mr, lp_norm_box(r.fn, box, sp.p, nq) / den);
                }
                by_k.push_back(mr);
            }
            const double hi = *std::max_element(by_k.begin(), by_k.end());
            const double lo = *std::min_element(by_k.begin(), by_k.end());
            ok = ok && lo > 0.0 && hi / lo < 10.0;
            table[axis_set_label(J)] = by_k;
        }
        s.add("operator_difference_bounds", ok, {{"max_ratio_by_k", table}});
    }
    return s.r;
}

// ---------------------------------------------------------------- analysis

SuiteResult suite_analysis(const ExperimentConfig& cfg)
{
    Suite s("analysis");
    auto rng = suite_rng(cfg, 6);
    const std::size_t d = cfg.d;
    const SmoothnessParams sp = cfg.params();
    const NormOptions opts = cfg.norm_options();
    const DiffDomain cube = DiffDomain::cube(d);

    s.add("l_of_alpha_examples", l_of_alpha(std::vector<double>{1.5, 0.7}) == MultiIndex{2, 1}
                                     && l_of_alpha(std::vector<double>{1.0}) == MultiIndex{2}
                                     && l_of_alpha(std::vector<double>{2.9}) == MultiIndex{3});

    {
        const ScalarFn sq = [](std::span<const double> x) { return x[0] * x[0]; };
        const ScalarFn add = [](std::span<const double> x) { return x[0] + x[1]; };
        const Point x1{0.3}, h1{0.2}, x2{0.2, 0.3}, h2{0.1, 0.2};
        const auto a = mixed_difference(sq, MultiIndex{2}, h1, x1, DiffDomain::cube(1));
        const auto b = mixed_difference(add, MultiIndex{1, 1}, h2, x2, DiffDomain::cube(2));
        const auto c = mixed_difference(sq, MultiIndex{0}, h1, x1, DiffDomain::cube(1));
        const auto out = mixed_difference(sq, MultiIndex{2}, Point{0.4}, Point{0.5}, DiffDomain::cube(1));
        s.add("difference_examples", a && std::abs(*a - 2 * 0.04) < 1e-14 && b && std::abs(*b) < 1e-14 && c
                                         && *c == sq(x1) && !out);
    }

    {
        const CatalogFunction rf = random_smooth_function(2, cfg.seed + 17);
        double comm = 0.0;
        for (int t = 0; t < 50; ++t) {
            const Point h = random_point(rng, 2, -0.1, 0.1);
            const Point x = random_point(rng, 2, 0.4, 0.6);
            const MultiIndex l{2, 3};
            const auto direct = mixed_difference(rf.oracle().fn, l, h, x, DiffDomain::cube(2));
            // axis 2 first, then axis 1
            double v = 0.0;
            for (int k1 = 0; k1 <= 2; ++k1) {
                double inner = 0.0;
                for (int k2 = 0; k2 <= 3; ++k2) {
                    const Point y{x[0] + k1 * h[0], x[1] + k2 * h[1]};
                    inner += std::pow(-1.0, 3 - k2) * std::tgamma(4.0) / (std::tgamma(k2 + 1.0) * std::tgamma(4.0 - k2))
                             * rf(y);
                }
                v += std::pow(-1.0, 2 - k1) * (k1 == 1 ? 2.0 : 1.0) * inner;
            }
            comm = std::max(comm, std::abs(*direct - v));
        }
        s.add("difference_axis_order", comm <= 1e-12, {{"max_error", comm}});
    }

    {
        const double L = 1.7;
        const ScalarFn lin = [L](std::span<const double> x) { return L * x[0]; };
        double err = 0.0;
        for (double p : {1.0, 2.0, 4.0})
            for (double h : {0.1, 0.3, -0.2, 0.6}) {
                const Point hv{h};
                const double v = difference_norm(lin, MultiIndex{1}, hv, p, DiffDomain::cube(1), QuadSpec{4, 8});
                err = std::max(err, std::abs(v - std::abs(h) * L * std::pow(1.0 - std::abs(h), 1.0 / p)));
            }
        s.add("difference_norm_closed_form", err <= 1e-10, {{"max_error", err}});
    }

    const auto catalog = selected_functions(cfg);

    // Difference-derivative bound.
    {
        json viol = json::object();
        bool ok = true;
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        for (const auto& f : catalog) {
            if (!f.has_derivative(sp.l))
                continue;
            const double dn = lp_norm_box(f.derivative(sp.l), Box::unit(d), sp.p, QuadSpec{8, 8});
            int bad = 0;
            for (int t = 0; t < 100; ++t) {
                Point h(d);
                double prod = 1.0;
                for (std::size_t j = 0; j < d; ++j) {
                    h[j] = u(rng);
                    prod *= std::pow(std::abs(h[j]), sp.l[j]);
                }
                const double lhs = difference_norm(f.oracle().fn, sp.l, h, sp.p, cube, QuadSpec{6, 16});
                bad += lhs > prod * dn * (1.0 + 1e-9) + 1e-12;
            }
            viol[f.name] = bad;
            ok = ok && bad == 0;
        }
        s.add("difference_derivative_bound", ok, {{"violations", viol}});
    }

    // Omega' <= Omega, sup monotone in t.
    {
        int bad = 0, nonmono = 0;
        for (const auto& f : catalog)
            for (const auto& J : all_subsets(d, false)) {
                const MultiIndex order = indicator_vector(J, d).plus_part();
                MultiIndex ord(d);
                for (std::size_t j : J)
                    ord[j] = sp.l[j];
                (void)order;
                const ModulusTable tab(f.oracle().fn, ord, Point(d, 1.0), 4, sp.p, cube, opts.modulus, true);
                const IntBox lv = tab.levels();
                lv.for_each([&](const MultiIndex& k) {
                    bad += tab.avg(k) > tab.sup(k) * (1.0 + 1e-9) + 1e-15;
                    for (std::size_t j : J) {
                        if (k[j] == 0)
                            continue;
                        MultiIndex k2 = k;
                        k2[j] -= 1;
                        nonmono += tab.sup(k) > tab.sup(k2) * (1.0 + 1e-12);
                    }
                });
            }
        s.add("averaged_below_sup_modulus", bad == 0, {{"violations", bad}});
        s.add("sup_modulus_monotone", nonmono == 0, {{"violations", nonmono}});
    }

    // Embeddings.
    {
        double c4 = 1.0;
        for (double a : sp.alpha)
            c4 *= std::exp2(2.0 + a);
        MultiIndex ell(d);
        for (std::size_t j = 0; j < d; ++j)
            ell[j] = static_cast<int>(std::ceil(sp.alpha[j])) - 1;
        const SmoothnessParams spl = SmoothnessParams::make(sp.alpha, sp.p, sp.theta, ell);
        const SmoothnessParams sph = SmoothnessParams::make(sp.alpha, sp.p, INFINITY);
        json table = json::array();
        int v8 = 0, v10 = 0;
        for (const auto& f : catalog) {
            const NormReport b = besov_norm_prime(f.oracle().fn, sp, opts);
            const NormReport h = nikolskii_norm_prime(f.oracle().fn, sph, opts);
            const bool ok8 = h.total <= c4 * b.total * (1.0 + 1e-9) + 1e-14;
            v8 += !ok8;
            json row{{"function", f.name}, {"B_prime", b.total}, {"H_prime", h.total}};
            if (f.has_derivative(ell)) {
                const NormReport bl = besov_norm_ell(f.provider(), spl, opts);
                const bool ok10 = b.total <= bl.total * (1.0 + 1e-9) + 1e-14;
                v10 += !ok10;
                row["B_ell"] = bl.total;
            }
            table.push_back(row);
        }
        s.add("nikolskii_below_c4_besov", v8 == 0, {{"violations", v8}, {"c4", c4}, {"norms", table}});
        s.add("besov_prime_below_besov_ell", v10 == 0, {{"violations", v10}, {"ell", ell.values()}});
    }

    // Homogeneity and triangle inequality.
    {
        double hom = 0.0;
        int tri = 0;
        for (std::size_t i = 0; i < catalog.size(); ++i) {
            const ScalarFn f = catalog[i].oracle().fn;
            const ScalarFn g = catalog[(i + 3) % catalog.size()].oracle().fn;
            const ScalarFn cf = [f](std::span<const double> x) { return -2.5 * f(x); };
            const ScalarFn fg = [f, g](std::span<const double> x) { return f(x) + g(x); };
            const double nf = besov_norm_prime(f, sp, opts).total;
            const double ng = besov_norm_prime(g, sp, opts).total;
            const double ncf = besov_norm_prime(cf, sp, opts).total;
            const double nfg = besov_norm_prime(fg, sp, opts).total;
            if (nf > 0.0)
                hom = std::max(hom, std::abs(ncf - 2.5 * nf) / (2.5 * nf));
            tri += nfg > (nf + ng) * (1.0 + 1e-8);
        }
        s.add("norm_homogeneity", hom <= 1e-10, {{"max_relative_error", hom}});
        s.add("norm_triangle_inequality", tri == 0, {{"violations", tri}});
    }

    // H' of f(x) = x against the closed form sup_t t^{-1/2} Omega'(t).
    {
        const SmoothnessParams s1 = SmoothnessParams::make({0.5}, 2.0, INFINITY);
        NormOptions o = opts;
        o.kmax = 10;
        const NormReport r = nikolskii_norm_prime([](std::span<const double> x) { return x[0]; }, s1, o);
        // Omega'(t)^2 = t^2/3 - t^3/4 on (0,1]; the weighted sup over all t is 1/3.
        const double oracle = 1.0 / 3.0;
        const double part = r.parts.back().value;
        s.add("nikolskii_linear_vs_dense_oracle", part > 0.0 && std::abs(part - oracle) <= 0.05 * oracle,
              {{"estimate", part}, {"oracle", oracle}});
    }

    {
        const ScalarFn zero = [](std::span<const double>) { return 0.0; };
        s.add("zero_norms", besov_norm_prime(zero, sp, opts).total == 0.0
                                && nikolskii_norm_prime(zero, sp, opts).total == 0.0);
    }
    return s.r;
}

// ---------------------------------------------------------------- extension

SuiteResult suite_extension(const ExperimentConfig& cfg)
{
    Suite s("extension");
    auto rng = suite_rng(cfg, 7);
    const std::size_t d = cfg.d;
    const SmoothnessParams sp = cfg.params();
    const MultiIndex m = cfg.m_vec();
    const MultiIndex e(d, 1);
    const MultiIndex deg = sp.l - e;
    const auto quad = projection_quad_of(cfg);

    {
        const FunctionOracle f = catalog_entry("exp_smooth", d).oracle();
        const FunctionOracle z = zero_extend(f);
        const Point in(d, 0.3), out(d, 1.2);
        s.add("zero_extension", z(in) == f(in) && z(out) == 0.0);
    }

    // Masked projector: mask, consistency with S on I^d, factorization.
    {
        const MultiIndex kappa = e * 2;
        double fact = 0.0, cons = 0.0;
        bool masked = true;
        for (int t = 0; t < 50; ++t) {
            const CatalogFunction rf = random_smooth_function(d, cfg.seed * 101 + t);
            const FunctionOracle f = rf.oracle();
            MultiIndex nu(d);
            for (std::size_t j = 0; j < d; ++j)
                nu[j] = static_cast<int>(rng() % 4);
            const QuadSpec q{deg.max() + 3, 1};
            const FunctionOracle G = global_local_projector(kappa, nu, deg, m, zero_extend(f), q);
            const Box cell = dyadic_cell(kappa, nu);
            const Box Q = support_box(m);
            std::vector<AxisOp> ops;
            for (std::size_t j = 0; j < d; ++j)
                ops.push_back(masked_op(Q.lo(j), Q.edge()[j], projector_op(cell.lo(j), cell.edge()[j], deg[j], q)));
            const FunctionOracle T = tensor_apply(ops, zero_extend(f), Box(Q.corner(), Q.edge()));
            const TensorPoly S = project(f, cell, deg, q);
            for (int i = 0; i < 10; ++i) {
                const Point x = random_point(rng, d, Q.lo(0), Q.hi(0));
                fact = std::max(fact, std::abs(G(x) - T(x)));
                const Point y = random_point(rng, d);
                cons = std::max(cons, std::abs(G(y) - S(y)));
            }
            masked = masked && G(Point(d, Q.hi(0) + 0.5)) == 0.0;
        }
        s.add("masked_projector_factorization", fact <= 1e-10, {{"max_error", fact}});
        s.add("masked_projector_matches_S_on_cube", cons <= 1e-10, {{"max_error", cons}});
        s.add("masked_projector_vanishes_outside", masked);
    }

    const auto catalog = selected_functions(cfg);

    // Global / cube consistency of the details.
    {
        double err = 0.0;
        const auto pts = unit_grid(d, d == 1 ? 128 : 20);
        const int kmax = d == 1 ? 4 : 2;
        for (const auto& f : catalog) {
            const FunctionOracle fo = f.oracle();
            ProjectionCache cache(zero_extend(fo), deg, quad);
            ProjectionCache cube_cache(fo, deg, quad);
            IntBox(MultiIndex(d, 0), e * kmax).for_each([&](const MultiIndex& kappa) {
                const GlobalPiecewisePoly G = global_detail(kappa, m, cache);
                const QuasiInterpolant C(detail_blend(kappa, m, cube_cache));
                err = std::max(err, max_abs_diff(pts, G, C));
            });
        }
        s.add("global_cube_consistency", err <= 1e-10, {{"max_error", err}});
    }

    // Class membership of global details.
    {
        int failures = 0;
        std::string first;
        for (int t = 0; t < cfg.random_oracles; ++t) {
            const CatalogFunction rf = random_smooth_function(d, cfg.seed * 1009 + t);
            MultiIndex kappa(d);
            for (std::size_t j = 0; j < d; ++j)
                kappa[j] = static_cast<int>(rng() % (d == 1 ? 5 : 4));
            GlobalPiecewisePoly G = global_detail(kappa, sp.l, m, zero_extend(rf.oracle()), quad);
            if (cfg.inject_class_violation && t == 0) {
                SplineBlend b = G.blend();
                Poly& corner = b.family(b.indices().lo());
                corner.coeffs()[0] += 1e-3 * std::max(1.0, corner.max_abs_coeff());
                G = GlobalPiecewisePoly(std::move(b));
            }
            const ClassCheckReport r = class_check_Pprime(G);
            if (!r.pass) {
                if (failures == 0)
                    first = "kappa " + kappa.str() + ": " + r.message;
                ++failures;
            }
        }
        json meas{{"oracles", cfg.random_oracles}, {"failures", failures}};
        if (cfg.inject_class_violation)
            meas["injected_violation"] = true;
        if (!first.empty())
            meas["first_failure"] = first;
        s.add("global_details_in_boundary_class", failures == 0, meas);
    }

    // The check itself: single polynomial blend passes, perturbed corner fails.
    {
        const MultiIndex kappa = e * 2;
        SplineBlend b(kappa, m, deg);
        const Poly base = random_poly(rng, Box::unit(d), deg);
        b.indices().for_each([&](const MultiIndex& nu) { b.family(nu) = base.rebased(b.family(nu).box()); });
        const ClassCheckReport good = class_check_Pprime(GlobalPiecewisePoly(b));
        MultiIndex corner = b.indices().hi();
        b.family(corner).coeffs()[0] += 0.01;
        const ClassCheckReport bad = class_check_Pprime(GlobalPiecewisePoly(b));
        s.add("class_check_detects_violation", good.pass && !bad.pass && bad.axis >= 1,
              {{"report", bad.message}, {"axis", bad.axis}, {"index", bad.index}});
    }

    // Injectivity round trip.
    {
        double err = 0.0;
        for (int k = 0; k <= 2; ++k) {
            const GlobalPiecewisePoly F = random_pprime(e * k, deg, m, cfg.seed + static_cast<std::uint64_t>(k));
            err = std::max(err, reconstruct_family(F).max_coeff_error);
        }
        s.add("family_reconstruction", err <= 1e-8, {{"max_coeff_error", err}});
    }

    // Bernstein-type inequality.
    {
        json table = json::object();
        bool ok = true;
        const auto run = [&](const std::vector<MultiIndex>& kappas, const MultiIndex& lam, double q,
                             const std::vector<double>& xs, double target, double tol, const std::string& label) {
            const BernsteinRecord r = bernstein_experiment(kappas, deg, m, lam, q, cfg.trials, cfg.seed);
            std::vector<double> ys;
            for (const auto& lv : r.levels)
                ys.push_back(std::log2(lv.max_ratio));
            const double slope = fitted_slope(xs, ys);
            ok = ok && std::abs(slope - target) <= tol;
            table[label] = {{"slope", slope}, {"target", target}};
        };
        std::vector<MultiIndex> uniform;
        std::vector<double> xs;
        for (int k = 2; k <= 5; ++k) {
            uniform.push_back(e * k);
            xs.push_back(k);
        }
        for (double q : {2.0, std::numeric_limits<double>::infinity()}) {
            const std::string qs = "q=" + format_double(q);
            run(uniform, MultiIndex(d, 0), q, xs, 0.0, 0.5, "uniform lambda=0 " + qs);
            MultiIndex lam(d, 0);
            lam[0] = 1;
            if (lam.leq(m))
                run(uniform, lam, q, xs, 1.0, 0.5, "uniform lambda=" + lam.str() + " " + qs);
            if (d >= 2 && e.leq(m))
                run(uniform, e, q, xs, static_cast<double>(d), 0.5, "uniform lambda=" + e.str() + " " + qs);
            if (d >= 2 && lam.leq(m)) {
                std::vector<MultiIndex> axis;
                for (int k = 2; k <= 5; ++k) {
                    MultiIndex kap(d, 2);
                    kap[0] = k;
                    axis.push_back(kap);
                }
                run(axis, lam, q, xs, 1.0, 0.5, "axis-1 refinement lambda=" + lam.str() + " " + qs);
                MultiIndex lam2(d, 0);
                lam2[1] = 1;
                run(axis, lam2, q, xs, 0.0, 0.5, "axis-1 refinement lambda=" + lam2.str() + " " + qs);
            }
        }
        s.add("bernstein_slopes", ok, {{"experiments", table}});
    }

    // Restriction identity, polynomial case, support, level decay.
    {
        const int K = cfg.K_value();
        const auto pts = unit_grid(d, d == 1 ? 128 : 20);
        double restr = 0.0;
        bool decreasing = true, outside = true;
        json errs = json::object(), decay = json::object();
        bool decay_ok = true;
        // first level with 2^k >= m + 1
        const int k0 = static_cast<int>(std::ceil(std::log2(m.max() + 1.0)));
        for (const auto& f : catalog) {
            const FunctionOracle fo = f.oracle();
            std::vector<double> ev;
            for (int k = 1; k <= K; ++k) {
                const ExtensionResult ext = extend(fo, sp, m, k, quad);
                const QuasiInterpolant EK = quasi_interp_E(e * k, sp.l, m, fo, quad);
                restr = std::max(restr, max_abs_diff(pts, ext, EK));
                ev.push_back(lp_error(fo, EK.cellwise(), sp.p));
                outside = outside && ext(Point(d, support_box(m).hi(0) + 0.25)) == 0.0
                          && ext(Point(d, support_box(m).lo(0) - 0.25)) == 0.0;
            }
            // below k0 nearly every index is clamped
            for (std::size_t i = static_cast<std::size_t>(std::max(k0, 1)); i < ev.size(); ++i)
                decreasing = decreasing && ev[i] <= ev[i - 1] * (1.0 + 1e-12) + 1e-15;
            errs[f.name] = ev;

            if (!f.in_besov(sp.alpha, sp.p))
                continue;
            ProjectionCache cache(zero_extend(fo), deg, quad);
            std::vector<GlobalPiecewisePoly> diag;
            for (int k = k0 + 1; k <= k0 + 4; ++k)
                diag.push_back(global_detail(e * k, m, cache));
            for (const MultiIndex& lam : admissible_lambdas(sp.alpha, m)) {
                std::vector<double> ks, ys;
                for (std::size_t i = 0; i < diag.size(); ++i) {
                    const double n = diag[i].derivative(lam).norm(sp.p);
                    if (n > 1e-12) {
                        ks.push_back(k0 + 1 + static_cast<double>(i));
                        ys.push_back(std::log2(n));
                    }
                }
                if (ks.size() < 2)
                    continue;
                double target = 0.0;
                for (std::size_t j = 0; j < d; ++j)
                    target -= sp.alpha[j] - lam[j];
                const double slope = fitted_slope(ks, ys);
                decay_ok = decay_ok && slope <= target + 0.5;
                decay[f.name + " lambda=" + lam.str()] = slope;
            }
        }
        s.add("restriction_equals_E_K", restr <= 1e-10, {{"max_error", restr}});
        s.add("restriction_error_decreasing", decreasing, {{"errors_by_K", errs}, {"from_K", std::max(k0, 1)}});
        s.add("vanishes_outside_support", outside);
        s.add("detail_norm_decay", decay_ok, {{"slopes", decay}, {"levels", {k0 + 1, k0 + 4}}});

        const FunctionOracle p = catalog_entry("poly_linear", d).oracle();
        if (deg.leq(sp.l) && MultiIndex(d, 1).leq(deg)) {
            const ExtensionResult ext = extend(p, sp, m, std::min(K, 3), quad);
            double hi = 0.0;
            for (const auto& ld : ext.details)
                if (ld.kappa.max() > 0)
                    hi = std::max(hi, ld.lp_norm);
            s.add("polynomial_details_vanish", hi <= 1e-10, {{"max_norm", hi}});
        }
    }
    return s.r;
}

SuiteResult suite_main_theorem(const ExperimentConfig& cfg)
{
    Suite s("main_theorem");
    const TheoremReport r = main_theorem_experiment(cfg);
    bool finite = true, stable = true;
    for (const auto& sm : r.summaries) {
        finite = finite && sm.finite;
        stable = stable && sm.stable;
    }
    s.add("ratios_finite", finite && !r.summaries.empty(), {{"functions", r.functions}});
    json by = json::array();
    for (const auto& sm : r.summaries)
        by.push_back({{"function", sm.function}, {"lambda", sm.lambda.values()}, {"ratio_by_K", sm.ratio_by_K}});
    s.add("ratios_stable_in_K", stable, {{"K", cfg.main_K_values()}, {"ratios", by}});
    s.add("uniform_constant", std::isfinite(r.constant), {{"constant", r.constant}, {"excluded", r.excluded}});
    return s.r;
}

json config_json(const ExperimentConfig& cfg)
{
    json o = json::object();
    std::istringstream in(serialize_config(cfg));
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find(" = ");
        if (eq != std::string::npos)
            o[line.substr(0, eq)] = line.substr(eq + 3);
    }
    return o;
}

}  // namespace

SuiteResult run_suite(const std::string& name, const ExperimentConfig& cfg)
{
    if (name == "core_index")
        return suite_core_index(cfg);
    if (name == "splines")
        return suite_splines(cfg);
    if (name == "polyproj")
        return suite_polyproj(cfg);
    if (name == "quasiinterp")
        return suite_quasiinterp(cfg);
    if (name == "analysis")
        return suite_analysis(cfg);
    if (name == "extension")
        return suite_extension(cfg);
    if (name == "main_theorem")
        return suite_main_theorem(cfg);
    throw std::invalid_argument("unknown suite '" + name + "'");
}

std::vector<SuiteResult> run_suites(const ExperimentConfig& cfg)
{
    cfg.validate();
    std::vector<SuiteResult> out;
    for (const char* n : {"core_index", "splines", "polyproj", "quasiinterp", "analysis", "extension", "main_theorem"})
        if (cfg.wants_suite(n))
            out.push_back(run_suite(n, cfg));
    return out;
}

json verify_report(const ExperimentConfig& cfg, const std::vector<SuiteResult>& suites)
{
    json arr = json::array();
    bool all = true;
    for (const auto& s : suites) {
        json checks = json::array();
        for (const auto& c : s.checks)
            checks.push_back({{"name", c.name}, {"pass", c.pass}, {"measured", c.measured}});
        arr.push_back({{"suite", s.name}, {"pass", s.pass()}, {"checks", checks}});
        all = all && s.pass();
    }
    return {{"schema", 1}, {"command", "verify"}, {"config", config_json(cfg)}, {"suites", arr}, {"pass", all}};
}

// ---------------------------------------------------------------- main theorem

TheoremReport main_theorem_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    const std::size_t d = cfg.d;
    const SmoothnessParams sp = cfg.params();
    const MultiIndex m = cfg.m_vec();
    const auto Ks = cfg.main_K_values();
    const int Kmax = *std::max_element(Ks.begin(), Ks.end());
    const auto quad = projection_quad_of(cfg);
    const NormOptions cube_opts = cfg.norm_options();
    NormOptions whole = cube_opts;
    whole.kmax = Kmax + 1;
    whole.modulus.inner = {3, std::max(cfg.modulus_density, 1 << Kmax)};
    whole.modulus.shift_fractions = {0.5, 1.0};

    TheoremReport rep;
    rep.routed_to_nikolskii = std::isinf(sp.theta);
    for (const auto& f : selected_functions(cfg)) {
        if (!f.in_besov(sp.alpha, sp.p)) {
            rep.excluded.push_back(f.name + ": smoothness tag does not exceed alpha");
            continue;
        }
        const FunctionOracle fo = f.oracle();
        const double rhs = besov_norm_prime(fo.fn, sp, cube_opts).total;
        if (!(rhs > 0.0)) {
            rep.excluded.push_back(f.name + ": zero norm");
            continue;
        }
        rep.functions.push_back(f.name);
        const auto lams = admissible_lambdas(sp.alpha, m);
        std::vector<TheoremSummary> sums;
        for (const auto& lam : lams)
            sums.push_back({f.name, lam, {}, true, true});
        for (int K : Ks) {
            const ExtensionResult ext = extend(fo, sp, m, K, quad);
            for (std::size_t i = 0; i < lams.size(); ++i) {
                const NormReport nr = derivative_besov_norm(ext.sum, lams[i], sp, whole);
                for (const auto& part : nr.parts)
                    rep.rows.push_back({f.name, K, lams[i], part.J, part.value, rhs, part.value / rhs});
                const double ratio = nr.total / rhs;
                sums[i].ratio_by_K.push_back(ratio);
                sums[i].finite = sums[i].finite && std::isfinite(ratio);
                rep.constant = std::max(rep.constant, ratio);
            }
        }
        for (auto& sm : sums) {
            const auto& r = sm.ratio_by_K;
            if (r.size() >= 2) {
                const double a = r[r.size() - 2], b = r.back();
                sm.stable = b <= a * (1.0 + 1e-12) || std::abs(b - a) <= 0.1 * a;
            }
            rep.summaries.push_back(sm);
        }
    }
    (void)d;
    return rep;
}

json to_json(const TheoremReport& r)
{
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"function", row.function},
                        {"K", row.K},
                        {"lambda", row.lambda.values()},
                        {"J", axis_set_label(row.J)},
                        {"lhs", row.lhs},
                        {"rhs", row.rhs},
                        {"ratio", row.ratio}});
    json sums = json::array();
    for (const auto& s : r.summaries)
        sums.push_back({{"function", s.function},
                        {"lambda", s.lambda.values()},
                        {"ratio_by_K", s.ratio_by_K},
                        {"finite", s.finite},
                        {"stable", s.stable}});
    return {{"rows", rows},
            {"summaries", sums},
            {"functions", r.functions},
            {"excluded", r.excluded},
            {"constant", r.constant},
            {"theta_inf_routed_to_H", r.routed_to_nikolskii}};
}

}  // namespace mixsmooth
