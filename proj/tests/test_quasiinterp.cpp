#include "doctest.h"

#include <cmath>
#include <numbers>

#include "mixsmooth/quasiinterp.hpp"
#include "mixsmooth/quadrature.hpp"
#include "mixsmooth/splines.hpp"

using namespace mixsmooth;

namespace {

FunctionOracle sin2pi()
{
    return {[](std::span<const double> x) { return std::sin(2 * std::numbers::pi * x[0]); }, 1, std::nullopt, "sin"};
}

double slope(const std::vector<double>& xs, const std::vector<double>& ys)
{
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    return num / den;
}

}  // namespace

TEST_SUITE("quasiinterp")
{
    TEST_CASE("index clamp and cell geometry")
    {
        CHECK(index_clamp(MultiIndex{3}, MultiIndex{2}, MultiIndex{-2}) == MultiIndex{0});
        CHECK(index_clamp(MultiIndex{3}, MultiIndex{2}, MultiIndex{7}) == MultiIndex{5});
        CHECK(index_clamp(MultiIndex{3}, MultiIndex{2}, MultiIndex{4}) == MultiIndex{4});
        CHECK(index_clamp(MultiIndex{1}, MultiIndex{2}, MultiIndex{1}) == MultiIndex{0});
        const CellGeometry g = cell_geometry(MultiIndex{3}, MultiIndex{5}, MultiIndex{2});
        CHECK(g.base.corner()[0] == doctest::Approx(3.0 / 8.0));
        CHECK(g.base.edge()[0] == doctest::Approx(3.0 / 8.0));
        const CellGeometry c = cell_geometry(MultiIndex{1}, MultiIndex{1}, MultiIndex{2});
        CHECK(c.base.corner()[0] == 0.0);
        CHECK(c.base.edge()[0] == doctest::Approx(1.0));
    }

    TEST_CASE("E reproduces P^{l-e}")
    {
        const FunctionOracle lin{[](std::span<const double> x) { return 0.3 + 2 * x[0] - x[1] + 0.5 * x[0] * x[1]; },
                                 2, MultiIndex{1, 1}, "bilinear"};
        const QuasiInterpolant E = quasi_interp_E(MultiIndex{2, 3}, MultiIndex{2, 2}, MultiIndex{2, 1}, lin);
        for (double a : {0.0, 0.31, 0.77, 1.0})
            for (double b : {0.0, 0.5, 0.93, 1.0}) {
                const Point x{a, b};
                CHECK(E(x) == doctest::Approx(lin(x)).epsilon(1e-12));
            }
    }

    TEST_CASE("kappa = 0 blends one projection")
    {
        const FunctionOracle f = sin2pi();
        const QuasiInterpolant E0 = quasi_interp_E(MultiIndex{0}, MultiIndex{2}, MultiIndex{2}, f);
        const TensorPoly P = project(f, Box::unit(1), MultiIndex{1});
        for (double x : {0.1, 0.6, 0.95})
            CHECK(E0(Point{x}) == doctest::Approx(P(Point{x})).epsilon(1e-12));
        const QuasiInterpolant D0 = telescoped_E(MultiIndex{0}, MultiIndex{2}, MultiIndex{2}, f);
        CHECK(D0(Point{0.4}) == doctest::Approx(E0(Point{0.4})));
    }

    TEST_CASE("Jackson rate for sin(2 pi x)")
    {
        const FunctionOracle f = sin2pi();
        std::vector<double> ks, es;
        for (int k = 2; k <= 6; ++k) {
            const QuasiInterpolant E = quasi_interp_E(MultiIndex{k}, MultiIndex{2}, MultiIndex{2}, f);
            // independent error: dense composite Gauss rule
            const double err = std::sqrt(integrate_box(
                [&](std::span<const double> x) { return std::pow(f(x) - E(x), 2.0); }, Box::unit(1),
                QuadSpec{8, 1 << (k + 1)}));
            ks.push_back(k);
            es.push_back(std::log2(err));
            CHECK(lp_error(f, E.cellwise(), 2.0) == doctest::Approx(err).epsilon(1e-8));
        }
        const double r = -slope(ks, es);
        CHECK(r >= 1.7);
        CHECK(r <= 2.3);
    }

    TEST_CASE("telescoping and vanishing details")
    {
        const FunctionOracle f{[](std::span<const double> x) { return std::exp(x[0]) * std::cos(2 * x[1]); }, 2,
                               std::nullopt, "e"};
        const MultiIndex l{2, 2}, m{2, 2};
        const QuasiInterpolant EK = quasi_interp_E(MultiIndex{3, 3}, l, m, f);
        std::vector<QuasiInterpolant> parts;
        IntBox(MultiIndex{0, 0}, MultiIndex{3, 3}).for_each([&](const MultiIndex& k) {
            parts.push_back(telescoped_E(k, l, m, f));
        });
        for (double a : {0.05, 0.5, 0.99})
            for (double b : {0.2, 0.61}) {
                const Point x{a, b};
                double s = 0.0;
                for (const auto& D : parts)
                    s += D(x);
                CHECK(s == doctest::Approx(EK(x)).epsilon(1e-12));
            }
        const FunctionOracle p{[](std::span<const double> x) { return 1.0 + x[0] * x[1]; }, 2, MultiIndex{1, 1}, "p"};
        const QuasiInterpolant D = telescoped_E(MultiIndex{2, 1}, l, m, p);
        CHECK(std::abs(D(Point{0.3, 0.3})) < 1e-12);
        const LevelBoundRecord r = derivative_level_bound_report(p, MultiIndex{2, 1}, MultiIndex{1, 0}, 2, 2, l, m);
        CHECK(r.lhs < 1e-12);
    }

    TEST_CASE("degree pair validation")
    {
        CHECK_THROWS_AS(check_degree_pair(MultiIndex{3}, MultiIndex{1}), std::invalid_argument);
        CHECK_NOTHROW(check_degree_pair(MultiIndex{2}, MultiIndex{1}));
    }

    TEST_CASE("piecewise polynomial norms")
    {
        const FunctionOracle f{[](std::span<const double> x) { return x[0]; }, 1, MultiIndex{1}, "x"};
        const QuasiInterpolant E = quasi_interp_E(MultiIndex{2}, MultiIndex{2}, MultiIndex{2}, f);
        CHECK(E.cellwise().norm(2.0) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
        CHECK(E.cellwise().norm(INFINITY) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(E.cellwise().derivative(MultiIndex{1}).norm(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    }
}
