#include "doctest.h"

#include <cmath>
#include <random>

#include "mixsmooth/polyproj.hpp"
#include "mixsmooth/quadrature.hpp"

using namespace mixsmooth;

TEST_SUITE("polyproj")
{
    TEST_CASE("Gauss-Legendre on [0,1]")
    {
        for (int n = 1; n <= 12; ++n) {
            const GaussRule& g = gauss_legendre(n);
            double wsum = 0.0;
            for (double w : g.weights)
                wsum += w;
            CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
            for (int k = 0; k <= 2 * n - 1; ++k) {
                double s = 0.0;
                for (std::size_t i = 0; i < g.nodes.size(); ++i)
                    s += g.weights[i] * std::pow(g.nodes[i], k);
                CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
            }
        }
        const double v = integrate_box([](std::span<const double> x) { return x[0] * x[1] * x[1]; },
                                       Box({0.0, 1.0}, {2.0, 1.0}), QuadSpec{3, 2});
        // int_0^2 x dx * int_1^2 y^2 dy
        CHECK(v == doctest::Approx(2.0 * 7.0 / 3.0).epsilon(1e-13));
    }

    TEST_CASE("Legendre basis on the unit interval")
    {
        const OrthoBasis1D& B = ortho_basis(3);
        for (double u : {0.0, 0.2, 0.5, 0.9}) {
            CHECK(B.eval(0, u) == doctest::Approx(1.0));
            CHECK(B.eval(1, u) == doctest::Approx(std::sqrt(3.0) * (2 * u - 1)));
            CHECK(B.eval(2, u) == doctest::Approx(std::sqrt(5.0) * (6 * u * u - 6 * u + 1)));
        }
        CHECK(B.monic_norm2(1) == Rational(1, 12));
    }

    TEST_CASE("polynomial calculus")
    {
        // 1 + 2u + 3u^2 in local coordinates of [1, 3]
        Poly p(Box({1.0}, {2.0}), MultiIndex{2}, {1.0, 2.0, 3.0});
        const Point x{2.0};
        CHECK(p(x) == doctest::Approx(1 + 2 * 0.5 + 3 * 0.25));
        const Poly dp = p.derivative(MultiIndex{1});
        CHECK(dp(x) == doctest::Approx((2 + 6 * 0.5) / 2.0));
        const Poly q = p.rebased(Box({0.0}, {1.0}));
        for (double t : {0.0, 1.3, 2.7})
            CHECK(q(Point{t}) == doctest::Approx(p(Point{t})));
        CHECK(p.derivative(MultiIndex{3}).max_abs_coeff() == 0.0);
    }

    TEST_CASE("projection of x^2 onto lines")
    {
        const FunctionOracle sq{[](std::span<const double> x) { return x[0] * x[0]; }, 1, MultiIndex{2}, "x^2"};
        const TensorPoly P = project(sq, Box::unit(1), MultiIndex{1});
        for (double x : {0.0, 0.3, 1.0})
            CHECK(P(Point{x}) == doctest::Approx(x - 1.0 / 6.0));
        // on [a, a + h]: best line is x^2 projected = (2a + h) x - a^2 - a h - h^2 / 6
        const double a = 0.4, h = 0.25;
        const TensorPoly Q = project(sq, Box({a}, {h}), MultiIndex{1});
        const double x = 0.5;
        CHECK(Q(Point{x}) == doctest::Approx((2 * a + h) * x - a * a - a * h - h * h / 6.0));
    }

    TEST_CASE("reproduction and kernel on random boxes")
    {
        std::mt19937_64 rng(3);
        std::normal_distribution<double> n(0.0, 1.0);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int t = 0; t < 10; ++t) {
            const Box box({u(rng), u(rng) - 1.0}, {0.1 + u(rng), 0.1 + u(rng)});
            Poly f(box, MultiIndex{2, 1});
            for (double& c : f.coeffs())
                c = n(rng);
            const FunctionOracle fo{[f](std::span<const double> x) { return f(x); }, 2, MultiIndex{2, 1}, "p"};
            const TensorPoly P = project(fo, box, MultiIndex{2, 1});
            const Point x = box.map_from_unit(Point{u(rng), u(rng)});
            CHECK(P(x) == doctest::Approx(f(x)).epsilon(1e-12));
            // P(f - Pf) = 0
            const FunctionOracle r{[fo, P](std::span<const double> y) { return std::sin(3 * y[0]) * y[1] - P(y); },
                                   2, std::nullopt, "r"};
            const TensorPoly Pr = project(r, box, MultiIndex{2, 1}, QuadSpec{8, 1});
            const TensorPoly Pr2 = project(FunctionOracle{[Pr, r](std::span<const double> y) { return r(y) - Pr(y); },
                                                          2, std::nullopt, "r2"},
                                           box, MultiIndex{2, 1}, QuadSpec{8, 1});
            for (double c : Pr2.coeffs())
                CHECK(std::abs(c) < 1e-12);
        }
    }

    TEST_CASE("axis operators")
    {
        const FunctionOracle f{[](std::span<const double> x) { return x[0] * x[0] * x[1] * x[1]; }, 2,
                               MultiIndex{2, 2}, "x^2 y^2"};
        const QuadSpec q{4, 1};
        const FunctionOracle Pf = tensor_apply({projector_op(0.0, 1.0, 1, q), identity_op()}, f, Box::unit(2));
        const Point x{0.3, 0.7};
        CHECK(Pf(x) == doctest::Approx((0.3 - 1.0 / 6.0) * 0.49));
        const FunctionOracle M = tensor_apply({masked_op(0.0, 0.5, identity_op()), identity_op()}, f, Box::unit(2));
        CHECK(M(Point{0.25, 0.5}) == doctest::Approx(f(Point{0.25, 0.5})));
        CHECK(M(Point{0.75, 0.5}) == 0.0);
        const FunctionOracle D =
            tensor_apply({difference_op(identity_op(), projector_op(0.0, 1.0, 2, q)), identity_op()}, f, Box::unit(2));
        CHECK(std::abs(D(x)) < 1e-12);
        const FunctionOracle C = tensor_apply(
            {compose_op(projector_op(0.0, 1.0, 0, q), projector_op(0.0, 1.0, 1, q)), identity_op()}, f, Box::unit(2));
        CHECK(C(x) == doctest::Approx((0.5 - 1.0 / 6.0) * 0.49));
    }

    TEST_CASE("masked projector")
    {
        const FunctionOracle f{[](std::span<const double> x) { return std::exp(x[0]) + x[1]; }, 2, std::nullopt, "e"};
        const Box cell({0.0, 0.5}, {0.5, 0.5});
        const Box mask({-1.0, -1.0}, {3.0, 3.0});
        const FunctionOracle G = masked_project(f, cell, mask, MultiIndex{1, 1}, QuadSpec{6, 1});
        const TensorPoly P = project(f, cell, MultiIndex{1, 1}, QuadSpec{6, 1});
        // polynomial continues outside the cell, stops at the mask
        CHECK(G(Point{1.5, -0.5}) == doctest::Approx(P(Point{1.5, -0.5})));
        CHECK(G(Point{2.5, 0.0}) == 0.0);
    }
}
