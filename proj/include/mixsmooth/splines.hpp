#pragma once

// Cardinal B-splines psi^{1,m} (m-fold self-convolution of the indicator of
// (0,1)), their tensor products, dyadic shifts g_{kappa,nu}, refinement
// masks and support geometry.

#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mixsmooth/core_index.hpp"

namespace mixsmooth {

using Rational = boost::multiprecision::cpp_rational;

// psi^{1,m} as exact piecewise polynomials on the knot intervals [k, k+1],
// k = 0..m, each in the local variable u = x - k.
class SplineGen {
public:
    explicit SplineGen(int m);

    int order() const { return m_; }

    // lambda-th derivative at x. Right-continuous at knots, which only
    // matters for lambda == m where the derivative is piecewise constant.
    // Throws std::invalid_argument when lambda > m or lambda < 0.
    double eval(int lambda, double x) const;
    double operator()(double x) const { return eval(0, x); }

    // Coefficients (ascending powers of u) of the lambda-th derivative on
    // [k, k+1]. Empty for k outside 0..m.
    const std::vector<double>& piece(int k, int lambda = 0) const;
    const std::vector<Rational>& exact_piece(int k) const { return exact_[static_cast<std::size_t>(k)]; }

    // Exact value at a rational point (lambda = 0).
    Rational eval_exact(const Rational& x) const;

    // max |D^lambda psi| over the support; attained at a knot or at a
    // critical point of one piece, located by dense sampling plus knots.
    double sup_norm(int lambda) const;

private:
    int m_;
    std::vector<std::vector<Rational>> exact_;
    // derivs_[lambda][k] = coefficients of the lambda-th derivative on piece k
    std::vector<std::vector<std::vector<double>>> derivs_;
};

// Shared immutable instance per order.
const SplineGen& spline(int m);

struct RefinementMask {
    int order = 0;
    std::vector<double> coeffs;           // a_0 .. a_{m+1}
    std::vector<Rational> exact_coeffs;   // same, exact

    double operator[](int mu) const
    {
        return (mu < 0 || mu > order + 1) ? 0.0 : coeffs[static_cast<std::size_t>(mu)];
    }
};

// a_mu = 2^{-m} binom(m+1, mu), mu = 0..m+1.
RefinementMask refinement_coeffs(int m);

// psi^{d,m}(x) with optional derivative order per axis.
double eval_psi_tensor(const MultiIndex& m, const MultiIndex& lambda, std::span<const double> x);

// g_{kappa,nu}(x) = psi^{d,m}(2^kappa x - nu)
double eval_g(const MultiIndex& kappa, const MultiIndex& nu, const MultiIndex& m, std::span<const double> x);

// D^lambda g_{kappa,nu}(x), including the 2^{(kappa,lambda)} chain factor.
double eval_g_deriv(const MultiIndex& kappa, const MultiIndex& nu, const MultiIndex& m, const MultiIndex& lambda,
                    std::span<const double> x);

// Closed support box 2^{-kappa} nu + 2^{-kappa}(m + e) [0,1]^d.
Box support_g(const MultiIndex& kappa, const MultiIndex& nu, const MultiIndex& m);

// {nu : Q_{kappa,nu'} meets supp g_{kappa,nu}} = nu' + N_{-m,0}.
// Throws std::out_of_range unless 0 <= nu' <= 2^kappa - e.
IntBox interacting_indices(const MultiIndex& kappa, const MultiIndex& m, const MultiIndex& cell);

// N_{-m, 2^kappa - e}: every nu whose spline touches the open unit cube.
IntBox spline_indices(const MultiIndex& kappa, const MultiIndex& m);

// N_{0, 2^kappa - e}: the dyadic cells of the unit cube at level kappa.
IntBox cell_indices(const MultiIndex& kappa);

}  // namespace mixsmooth
