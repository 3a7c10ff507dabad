#include "doctest.h"

#include <set>

#include "mixsmooth/core_index.hpp"

using namespace mixsmooth;

TEST_SUITE("core_index")
{
    TEST_CASE("support set and indicator vector")
    {
        CHECK(support_set(MultiIndex{0, 3, 0, -1}) == std::vector<std::size_t>{1, 3});
        CHECK(support_set(MultiIndex{0, 0}).empty());
        const std::vector<std::size_t> J{0, 2};
        CHECK(indicator_vector(J, 4) == MultiIndex{1, 0, 1, 0});
        for (std::size_t d = 1; d <= 6; ++d)
            for (const auto& S : all_subsets(d, true))
                CHECK(support_set(indicator_vector(S, d)) == S);
    }

    TEST_CASE("subset enumeration")
    {
        CHECK(all_subsets(3, true).size() == 8);
        CHECK(all_subsets(3, false).size() == 7);
        std::set<std::vector<std::size_t>> seen;
        for (const auto& S : all_subsets(4, false))
            seen.insert(S);
        CHECK(seen.size() == 15);
        const std::vector<std::size_t> J{0, 2};
        CHECK(axis_set_label(J) == "{1,3}");
    }

    TEST_CASE("multi-index arithmetic and order")
    {
        const MultiIndex a{1, -2, 3}, b{2, 0, 3};
        CHECK(a.leq(b));
        CHECK_FALSE(b.leq(a));
        CHECK((a + b) == MultiIndex{3, -2, 6});
        CHECK((b - a) == MultiIndex{1, 2, 0});
        CHECK((a * 2) == MultiIndex{2, -4, 6});
        CHECK(a.plus_part() == MultiIndex{1, 0, 3});
        CHECK(a.sum() == 2);
        CHECK(a.max() == 3);
        CHECK(a.min() == -2);
        CHECK(pow2(MultiIndex{0, 3}) == MultiIndex{1, 8});
        const double y[] = {0.5, -0.25, 2.0};
        CHECK(min_coord(y) == -0.25);
    }

    TEST_CASE("integer boxes")
    {
        const IntBox box(MultiIndex{-1, 0}, MultiIndex{1, 2});
        CHECK(box.count() == 9);
        CHECK(box.contains(MultiIndex{0, 2}));
        CHECK_FALSE(box.contains(MultiIndex{2, 0}));
        // row-major, last axis fastest
        const auto all = box.members();
        REQUIRE(all.size() == 9);
        CHECK(all[0] == MultiIndex{-1, 0});
        CHECK(all[1] == MultiIndex{-1, 1});
        CHECK(all[3] == MultiIndex{0, 0});
        for (std::size_t i = 0; i < all.size(); ++i)
            CHECK(box.linear_index(all[i]) == i);
        CHECK(IntBox(MultiIndex{1}, MultiIndex{0}).empty());
        CHECK(IntBox(MultiIndex{1}, MultiIndex{0}).count() == 0);
    }

    TEST_CASE("binary masks below kappa")
    {
        const auto masks = masks_within(MultiIndex{2, 0, 1});
        CHECK(masks.size() == 4);
        int signs = 0;
        for (const auto& e : masks) {
            CHECK(e.subset_of(MultiIndex{2, 0, 1}));
            CHECK_FALSE(e.test(1));
            signs += e.sign();
        }
        CHECK(signs == 0);
        CHECK(masks_within(MultiIndex{0, 0}).size() == 1);
        CHECK(BinaryMask::from_bits(5u, 3).index() == MultiIndex{1, 0, 1});
    }

    TEST_CASE("dyadic cells and boxes")
    {
        const Box c = dyadic_cell(MultiIndex{2, 0}, MultiIndex{3, 0});
        CHECK(c.corner() == Point{0.75, 0.0});
        CHECK(c.edge() == Point{0.25, 1.0});
        CHECK(c.volume() == doctest::Approx(0.25));
        const Point inside{0.8, 0.5}, edge{1.0, 0.5};
        CHECK(c.contains_half_open(inside));
        CHECK_FALSE(c.contains_half_open(edge));
        CHECK(c.contains_closed(edge));
        CHECK(Box::unit(2).contains_box(c));
        CHECK(c.intersects_open(Box({0.9, 0.9}, {1.0, 1.0})));
        CHECK_FALSE(c.intersects_open(Box({1.0, 0.0}, {1.0, 1.0})));
        const Point u{0.5, 0.5};
        CHECK(c.map_from_unit(u) == Point{0.875, 0.5});
    }
}
