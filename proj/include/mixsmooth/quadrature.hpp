#pragma once

// Gauss-Legendre rules on [0,1] and their tensor/composite products on boxes.

#include <functional>
#include <span>
#include <vector>

#include "mixsmooth/core_index.hpp"

namespace mixsmooth {

struct GaussRule {
    std::vector<double> nodes;    // in (0,1), ascending
    std::vector<double> weights;  // sum to 1
};

// n-point rule on [0,1], exact for polynomials of degree <= 2n - 1. Cached.
const GaussRule& gauss_legendre(int n);

// Nodes per axis and composite subdivisions per axis for integration over a box.
struct QuadSpec {
    int nodes = 4;
    int subdivisions = 1;
};

// Integral of f over the box by a composite tensor Gauss rule.
double integrate_box(const std::function<double(std::span<const double>)>& f, const Box& box, const QuadSpec& q);

// Visits every (point, weight) of the composite tensor rule on the box.
// Weights include the box volume.
void for_each_quad_point(const Box& box, const QuadSpec& q,
                         const std::function<void(std::span<const double>, double)>& visit);

// L_p norm over a box from the composite rule; p = inf takes the maximum
// over the same nodes.
double lp_norm_box(const std::function<double(std::span<const double>)>& f, const Box& box, double p,
                   const QuadSpec& q);

// 1-D composite points on [a,b] with n Gauss nodes in each of s pieces.
void composite_points_1d(double a, double b, int n, int s, std::vector<double>& x, std::vector<double>& w);

}  // namespace mixsmooth
