#include "doctest.h"

#include <cmath>

#include "mixsmooth/catalog.hpp"
#include "mixsmooth/extension.hpp"

using namespace mixsmooth;

TEST_SUITE("extension")
{
    TEST_CASE("zero extension and support box")
    {
        const FunctionOracle f = catalog_entry("exp_smooth", 2).oracle();
        const FunctionOracle z = zero_extend(f);
        CHECK(z(Point{1.0, 1.0}) == f(Point{1.0, 1.0}));
        CHECK(z(Point{1.01, 0.5}) == 0.0);
        CHECK(z(Point{0.5, -1e-9}) == 0.0);
        const Box Q = support_box(MultiIndex{2, 1});
        CHECK(Q.corner() == Point{-3.0, -2.0});
        CHECK(Q.edge() == Point{7.0, 5.0});
    }

    TEST_CASE("global projector needs a cube cell")
    {
        const FunctionOracle f = catalog_entry("sin_tensor", 1).oracle();
        CHECK_THROWS_AS(global_local_projector(MultiIndex{2}, MultiIndex{4}, MultiIndex{1}, MultiIndex{2}, f),
                        std::out_of_range);
        CHECK_THROWS_AS(global_local_projector(MultiIndex{2}, MultiIndex{-1}, MultiIndex{1}, MultiIndex{2}, f),
                        std::out_of_range);
    }

    TEST_CASE("global details lie in the boundary class")
    {
        for (std::size_t d : {1u, 2u}) {
            const FunctionOracle f = zero_extend(catalog_entry("exp_smooth", d).oracle());
            IntBox(MultiIndex(d, 0), MultiIndex(d, d == 1 ? 4 : 2)).for_each([&](const MultiIndex& k) {
                const GlobalPiecewisePoly G = global_detail(k, MultiIndex(d, 2), MultiIndex(d, 2), f);
                const ClassCheckReport r = class_check_Pprime(G);
                CHECK_MESSAGE(r.pass, r.message);
            });
        }
    }

    TEST_CASE("perturbed family is rejected with its axis")
    {
        GlobalPiecewisePoly F = random_pprime(MultiIndex{3, 2}, MultiIndex{1, 1}, MultiIndex{2, 2}, 9);
        REQUIRE(class_check_Pprime(F).pass);
        SplineBlend b = F.blend();
        // nu_1 = 2 is its own clamp class at kappa_1 = 3, so only axis 2 sees this
        b.family(MultiIndex{2, -2}).coeffs()[0] += 0.05;
        const ClassCheckReport r = class_check_Pprime(GlobalPiecewisePoly(b));
        CHECK_FALSE(r.pass);
        CHECK(r.axis == 2);
        CHECK(r.index == -2);
        CHECK(r.representative == 0);
    }

    TEST_CASE("family reconstruction")
    {
        const GlobalPiecewisePoly F = random_pprime(MultiIndex{1, 2}, MultiIndex{1, 2}, MultiIndex{1, 2}, 4);
        const Reconstruction R = reconstruct_family(F);
        CHECK(R.max_coeff_error < 1e-9);
        CHECK(R.max_value_error < 1e-9);
    }

    TEST_CASE("truncated extension")
    {
        const FunctionOracle f = catalog_entry("sin_tensor", 1).oracle();
        const auto sp = SmoothnessParams::make({1.5}, 2.0, 2.0);
        const ExtensionResult ext = extend(f, sp, MultiIndex{2}, 4);
        const QuasiInterpolant E = quasi_interp_E(MultiIndex{4}, sp.l, MultiIndex{2}, f);
        for (double x : {0.0, 0.13, 0.5, 0.999, 1.0})
            CHECK(ext(Point{x}) == doctest::Approx(E(Point{x})).epsilon(1e-12));
        CHECK(ext(Point{-3.1}) == 0.0);
        CHECK(ext(Point{4.1}) == 0.0);
        double shells = 0.0;
        const Point y{-0.07};
        for (int k = 0; k <= 4; ++k)
            shells += ext.shell(k, y);
        CHECK(shells == doctest::Approx(ext(y)).epsilon(1e-12));
        CHECK(ext.details.size() == 5);

        CHECK_THROWS_AS(extend(f, sp, MultiIndex{2}, -1), std::invalid_argument);
        CHECK_THROWS_AS(extend(f, sp, MultiIndex{0}, 2), std::invalid_argument);

        const auto j = to_json(ext);
        CHECK(j["schema"] == 1);
        CHECK(j["K"] == 4);
    }

    TEST_CASE("polynomials have no details above level 0")
    {
        const FunctionOracle p = catalog_entry("poly_linear", 2).oracle();
        const auto sp = SmoothnessParams::make({1.5, 1.2}, 2.0, 2.0);
        const ExtensionResult ext = extend(p, sp, MultiIndex{2, 2}, 2);
        for (const auto& ld : ext.details)
            if (ld.kappa.max() > 0)
                CHECK(ld.lp_norm < 1e-12);
    }

    TEST_CASE("Bernstein ratio grows like 2^k for one derivative")
    {
        const BernsteinRecord r = bernstein_experiment({MultiIndex{2}, MultiIndex{3}, MultiIndex{4}, MultiIndex{5}},
                                                       MultiIndex{1}, MultiIndex{2}, MultiIndex{1}, 2.0, 10, 1);
        REQUIRE(r.slopes.size() == 3);
        double mean = 0.0;
        for (double s : r.slopes)
            mean += s / 3.0;
        CHECK(mean == doctest::Approx(1.0).epsilon(0.5));
    }
}
