#include "doctest.h"

#include <cmath>
#include <random>

#include "mixsmooth/splines.hpp"

using namespace mixsmooth;

namespace {

// Cox-de Boor on integer knots 0..m+1.
double cox_de_boor(int m, double x)
{
    std::vector<double> N(static_cast<std::size_t>(m + 1));
    for (int i = 0; i <= m; ++i)
        N[static_cast<std::size_t>(i)] = (x >= i && x < i + 1) ? 1.0 : 0.0;
    for (int k = 1; k <= m; ++k)
        for (int i = 0; i + k <= m; ++i) {
            const auto u = static_cast<std::size_t>(i);
            N[u] = ((x - i) * N[u] + (i + k + 1 - x) * N[u + 1]) / k;
        }
    return N[0];
}

double binom(int n, int k)
{
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

}  // namespace

TEST_SUITE("splines")
{
    TEST_CASE("generator against Cox-de Boor")
    {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-0.5, 6.5);
        for (int m = 0; m <= 5; ++m)
            for (int t = 0; t < 200; ++t) {
                const double x = u(rng);
                CHECK(spline(m)(x) == doctest::Approx(cox_de_boor(m, x)).epsilon(1e-12));
            }
        CHECK(spline(2)(1.5) == doctest::Approx(0.75));
        CHECK(spline(3)(2.0) == doctest::Approx(2.0 / 3.0));
        CHECK(spline(3)(1.0) == doctest::Approx(1.0 / 6.0));
    }

    TEST_CASE("mask is binomial over 2^m")
    {
        for (int m = 0; m <= 6; ++m) {
            const RefinementMask a = refinement_coeffs(m);
            for (int mu = 0; mu <= m + 1; ++mu) {
                CHECK(a[mu] == doctest::Approx(binom(m + 1, mu) / std::ldexp(1.0, m)));
                CHECK(a.exact_coeffs[static_cast<std::size_t>(mu)] == Rational(static_cast<long>(binom(m + 1, mu)),
                                                                                 1L << m));
            }
            CHECK(a[-1] == 0.0);
            CHECK(a[m + 2] == 0.0);
        }
    }

    TEST_CASE("exact refinement at rationals")
    {
        for (int m = 0; m <= 4; ++m) {
            const RefinementMask a = refinement_coeffs(m);
            for (int k = -3; k <= 13 * (m + 2); ++k) {
                const Rational x(k, 13);
                Rational rhs = 0;
                for (int mu = 0; mu <= m + 1; ++mu)
                    rhs += a.exact_coeffs[static_cast<std::size_t>(mu)] * spline(m).eval_exact(2 * x - mu);
                CHECK(rhs == spline(m).eval_exact(x));
            }
        }
    }

    TEST_CASE("derivatives against central differences")
    {
        const double h = 1e-5;
        for (int m = 1; m <= 4; ++m)
            for (double x : {0.3, 1.1, 1.7, 2.45}) {
                if (x >= m + 1)
                    continue;
                const double fd = (spline(m)(x + h) - spline(m)(x - h)) / (2 * h);
                CHECK(spline(m).eval(1, x) == doctest::Approx(fd).epsilon(1e-6));
            }
        CHECK_THROWS_AS(spline(1).eval(2, 0.5), std::invalid_argument);
        CHECK(spline(3).sup_norm(0) == doctest::Approx(2.0 / 3.0));
    }

    TEST_CASE("tensor splines on dyadic levels")
    {
        const MultiIndex kappa{2, 1}, nu{-1, 1}, m{2, 1};
        const Point x{0.1, 0.7};
        const double expect = spline(2)(4 * 0.1 + 1) * spline(1)(2 * 0.7 - 1);
        CHECK(eval_g(kappa, nu, m, x) == doctest::Approx(expect));
        const Box s = support_g(kappa, nu, m);
        CHECK(s.corner() == Point{-0.25, 0.5});
        CHECK(s.edge() == Point{0.75, 1.0});
        const IntBox idx = spline_indices(kappa, m);
        CHECK(idx.lo() == MultiIndex{-2, -1});
        CHECK(idx.hi() == MultiIndex{3, 1});
        CHECK(cell_indices(kappa).hi() == MultiIndex{3, 1});
        const double dx = eval_g_deriv(kappa, nu, m, MultiIndex{1, 0}, x);
        CHECK(dx == doctest::Approx(4 * spline(2).eval(1, 4 * 0.1 + 1) * spline(1)(2 * 0.7 - 1)));
        CHECK(interacting_indices(kappa, m, MultiIndex{1, 0}).count() == 6);
    }

    TEST_CASE("partition of unity on the cube")
    {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const MultiIndex kappa{3, 2}, m{2, 1};
        const IntBox idx = spline_indices(kappa, m);
        for (int t = 0; t < 100; ++t) {
            const Point x{u(rng), u(rng)};
            double s = 0.0;
            idx.for_each([&](const MultiIndex& nu) { s += eval_g(kappa, nu, m, x); });
            CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}
