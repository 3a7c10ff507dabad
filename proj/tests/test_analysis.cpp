#include "doctest.h"

#include <cmath>
#include <limits>

#include "mixsmooth/analysis.hpp"
#include "mixsmooth/quadrature.hpp"

using namespace mixsmooth;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

ScalarFn identity_x()
{
    return [](std::span<const double> x) { return x[0]; };
}

}  // namespace

TEST_SUITE("analysis")
{
    TEST_CASE("smoothness order")
    {
        CHECK(l_of_alpha(std::vector<double>{0.5, 1.0, 1.5, 2.0}) == MultiIndex{1, 2, 2, 3});
        CHECK_THROWS_AS(l_of_alpha(std::vector<double>{0.0}), std::invalid_argument);
        CHECK_THROWS_AS(SmoothnessParams::make({1.5}, kInf, 2.0), std::invalid_argument);
        CHECK_THROWS_AS(SmoothnessParams::make({1.5}, 0.5, 2.0), std::invalid_argument);
        CHECK_THROWS_AS(SmoothnessParams::make({1.5}, 2.0, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(SmoothnessParams::make({1.5}, 2.0, 2.0, MultiIndex{2}), std::invalid_argument);
        CHECK_NOTHROW(SmoothnessParams::make({1.5}, 2.0, kInf, MultiIndex{1}));
    }

    TEST_CASE("mixed differences")
    {
        const ScalarFn f = [](std::span<const double> x) { return x[0] * x[0] * x[1]; };
        const Point h{0.1, 0.2}, x{0.2, 0.3};
        const auto dom = DiffDomain::cube(2);
        // Delta^{(2,1)} of x^2 y = 2 h1^2 * h2
        const auto v = mixed_difference(f, MultiIndex{2, 1}, h, x, dom);
        REQUIRE(v.has_value());
        CHECK(*v == doctest::Approx(2 * 0.01 * 0.2));
        CHECK_FALSE(mixed_difference(f, MultiIndex{2, 1}, Point{0.5, 0.1}, Point{0.2, 0.3}, dom).has_value());
        const auto r = difference_region(MultiIndex{2, 0}, Point{-0.1, 0.7}, dom);
        REQUIRE(r.has_value());
        CHECK(r->lo(0) == doctest::Approx(0.2));
        CHECK(r->hi(0) == doctest::Approx(1.0));
        CHECK(r->edge()[1] == doctest::Approx(1.0));
    }

    TEST_CASE("difference norm of a line")
    {
        for (double p : {1.0, 2.0, 3.0})
            for (double h : {0.05, 0.4, -0.3}) {
                const double v =
                    difference_norm(identity_x(), MultiIndex{1}, Point{h}, p, DiffDomain::cube(1), QuadSpec{4, 4});
                CHECK(v == doctest::Approx(std::abs(h) * std::pow(1 - std::abs(h), 1 / p)).epsilon(1e-12));
            }
    }

    TEST_CASE("moduli of f(x) = x")
    {
        // averaged: Omega'(t)^2 = t^2/3 - t^3/4, sup: max_{h<=t} h sqrt(1-h)
        for (double t : {0.125, 0.5, 0.75}) {
            const Point tv{t};
            const auto a = modulus_avg(identity_x(), MultiIndex{1}, tv, 2.0, DiffDomain::cube(1));
            CHECK(a.value == doctest::Approx(std::sqrt(t * t / 3 - t * t * t / 4)).epsilon(1e-10));
            const auto s = modulus_sup(identity_x(), MultiIndex{1}, tv, 2.0, DiffDomain::cube(1));
            const double hs = std::min(t, 2.0 / 3.0);
            CHECK(s.value <= hs * std::sqrt(1 - hs) + 1e-12);
            CHECK(s.value >= a.value);
        }
    }

    TEST_CASE("norms of trivial functions")
    {
        const auto sp = SmoothnessParams::make({1.5}, 2.0, 2.0);
        NormOptions o;
        o.kmax = 5;
        const ScalarFn zero = [](std::span<const double>) { return 0.0; };
        CHECK(besov_norm_prime(zero, sp, o).total == 0.0);
        const ScalarFn c = [](std::span<const double>) { return -3.0; };
        const NormReport r = besov_norm_prime(c, sp, o);
        CHECK(r.total == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(r.lp_term == doctest::Approx(3.0).epsilon(1e-12));
    }

    TEST_CASE("theta = inf routes to H'")
    {
        const auto sp = SmoothnessParams::make({0.5}, 2.0, kInf);
        NormOptions o;
        o.kmax = 4;
        const NormReport b = besov_norm_prime(identity_x(), sp, o);
        const NormReport h = nikolskii_norm_prime(identity_x(), sp, o);
        CHECK(b.routed_to_nikolskii);
        CHECK(b.total == doctest::Approx(h.total));
    }

    TEST_CASE("modulus table is monotone and dominates the average")
    {
        const ScalarFn f = [](std::span<const double> x) { return std::sin(5 * x[0]) * std::exp(x[1]); };
        const ModulusTable tab(f, MultiIndex{2, 1}, Point{1.0, 1.0}, 3, 2.0, DiffDomain::cube(2), {}, true);
        tab.levels().for_each([&](const MultiIndex& k) {
            CHECK(tab.avg(k) <= tab.sup(k) * (1 + 1e-12));
            if (k[0] > 0) {
                MultiIndex k2 = k;
                k2[0] -= 1;
                CHECK(tab.sup(k) <= tab.sup(k2) * (1 + 1e-12));
            }
        });
    }
}
