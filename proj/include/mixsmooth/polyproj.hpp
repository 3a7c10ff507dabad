#pragma once

// Orthonormal polynomial bases on I, the local L2 projector onto P^{d,l}
// over a box, and per-axis operators lifted to d variables.

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixsmooth/core_index.hpp"
#include "mixsmooth/polynomial.hpp"
#include "mixsmooth/quadrature.hpp"
#include "mixsmooth/splines.hpp"

namespace mixsmooth {

using ScalarFn = std::function<double(std::span<const double>)>;

// Pointwise-evaluable function. `poly_degree`, when set, declares the
// oracle to be a polynomial of that degree; quadrature orders are then
// chosen to integrate projections exactly.
struct FunctionOracle {
    ScalarFn fn;
    std::size_t dim = 1;
    std::optional<MultiIndex> poly_degree;
    std::string name;

    double operator()(std::span<const double> x) const { return fn(x); }
};

// pi_0..pi_l orthonormal in L2(I), pi_i of exact degree i with positive
// leading coefficient.
class OrthoBasis1D {
public:
    explicit OrthoBasis1D(int l);

    int degree() const { return l_; }
    // Monomial coefficients of pi_i in u, ascending.
    const std::vector<double>& monomial(int i) const { return mono_[static_cast<std::size_t>(i)]; }
    // Exact monic orthogonal polynomial q_i and its squared norm, pi_i = q_i / |q_i|.
    const std::vector<Rational>& monic(int i) const { return monic_[static_cast<std::size_t>(i)]; }
    const Rational& monic_norm2(int i) const { return norm2_[static_cast<std::size_t>(i)]; }

    double eval(int i, double u) const;
    // pi_0(u)..pi_l(u) by the three-term recurrence.
    void eval_all(double u, std::span<double> out) const;
    // Matrix taking orthonormal coefficients to monomial coefficients.
    Matrix to_monomial() const;

private:
    int l_;
    std::vector<std::vector<Rational>> monic_;
    std::vector<Rational> norm2_;
    std::vector<std::vector<double>> mono_;
};

// Cached; bases up to degree 10 come from one shared exact computation.
const OrthoBasis1D& ortho_basis(int l);

// Element of P^{d,l} as coefficients over pi_lambda((x - corner) / edge).
class TensorPoly {
public:
    TensorPoly() = default;
    TensorPoly(Box box, MultiIndex l);
    TensorPoly(Box box, MultiIndex l, std::vector<double> coeffs);

    const Box& box() const { return box_; }
    const MultiIndex& degree() const { return l_; }
    const std::vector<double>& coeffs() const { return c_; }
    std::vector<double>& coeffs() { return c_; }
    double coeff(const MultiIndex& lambda) const;

    double operator()(std::span<const double> x) const;
    // Monomial form on the same box.
    Poly to_poly() const;
    // D^lambda, exact, in monomial form.
    Poly derivative(const MultiIndex& lambda) const { return to_poly().derivative(lambda); }
    // L2(box) norm: |box|^{1/2} times the l2 norm of the coefficients.
    double l2_norm() const;

private:
    Box box_;
    MultiIndex l_;
    std::vector<double> c_;
};

struct ProjectionDiagnostics {
    bool under_integrated = false;
    std::string message;
};

// Default rule for projecting f onto P^{d,l}: max(l)+3 nodes, raised to
// the exact order when f declares a polynomial degree.
QuadSpec projection_quad(const FunctionOracle& f, const MultiIndex& l);

// P^{d,l}_{edge,corner} f. Throws std::invalid_argument on dimension
// mismatch or negative degree (degenerate boxes are rejected by Box).
// An explicit `quad` below the exact order of a polynomial oracle is
// reported in `diag`.
TensorPoly project(const FunctionOracle& f, const Box& box, const MultiIndex& l,
                   std::optional<QuadSpec> quad = std::nullopt, ProjectionDiagnostics* diag = nullptr);

// 1-D linear operators acting on functions of one variable.
using Fn1D = std::function<double(double)>;

class AxisOperator {
public:
    virtual ~AxisOperator() = default;
    virtual double apply(const Fn1D& g, double x) const = 0;
    virtual std::string describe() const = 0;
};

using AxisOp = std::shared_ptr<const AxisOperator>;

AxisOp identity_op();
// L2 projection onto polynomials of degree l over [corner, corner + edge],
// continued polynomially to all of R.
AxisOp projector_op(double corner, double edge, int l, QuadSpec quad = {});
// chi_{[lo, lo + width)} times `inner`.
AxisOp masked_op(double lo, double width, AxisOp inner);
AxisOp difference_op(AxisOp a, AxisOp b);
// outer(inner(g))
AxisOp compose_op(AxisOp outer, AxisOp inner);

// (V_{order[0]}(ops[order[0]]) ... V_{order[d-1]}(ops[order[d-1]]) f)(x):
// the operator of the last axis in `order` acts first. Empty order means
// 0..d-1. Points outside the closed `domain` map to 0.
FunctionOracle tensor_apply(const std::vector<AxisOp>& ops, const FunctionOracle& f, const Box& domain,
                            std::vector<std::size_t> order = {});

// chi_{maskBox}(x) (P^{d,l}_{projBox} f)(x), maskBox half-open.
FunctionOracle masked_project(const FunctionOracle& f, const Box& proj_box, const Box& mask_box, const MultiIndex& l,
                              std::optional<QuadSpec> quad = std::nullopt);

}  // namespace mixsmooth
