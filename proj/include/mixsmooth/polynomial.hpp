#pragma once

// Dense tensor-product polynomials in monomial form, written in coordinates
// local to a box: p(x) = sum_lambda c_lambda prod_j ((x_j - a_j) / b_j)^lambda_j.
// Coefficients are stored row-major over lambda (first axis slowest).

#include <span>
#include <vector>

#include "mixsmooth/core_index.hpp"

namespace mixsmooth {

// Dense row-major matrix, rows x cols.
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    double& operator()(std::size_t i, std::size_t k) { return data[i * cols + k]; }
    double operator()(std::size_t i, std::size_t k) const { return data[i * cols + k]; }
};

// Applies `m` along one axis of a row-major tensor with extents `dims`.
// The axis extent changes from m.cols to m.rows.
std::vector<double> apply_along_axis(std::span<const double> tensor, std::vector<std::size_t>& dims, std::size_t axis,
                                     const Matrix& m);

// Coefficient map of q(s) = p(shift + scale * s) for degree n.
Matrix affine_substitution(std::size_t n, double shift, double scale);

class Poly {
public:
    Poly() = default;
    Poly(Box box, MultiIndex degree);
    Poly(Box box, MultiIndex degree, std::vector<double> coeffs);

    const Box& box() const { return box_; }
    const MultiIndex& degree() const { return degree_; }
    std::size_t dim() const { return degree_.size(); }
    const std::vector<double>& coeffs() const { return coeffs_; }
    std::vector<double>& coeffs() { return coeffs_; }
    std::vector<std::size_t> extents() const;

    double coeff(const MultiIndex& lambda) const;
    void set_coeff(const MultiIndex& lambda, double value);

    // Value at a global point.
    double operator()(std::span<const double> x) const;
    // Value at local coordinates u (x = corner + edge * u).
    double eval_local(std::span<const double> u) const;

    // D^lambda with respect to the global variable x; same box, degree
    // lowered (floored at 0, yielding the zero polynomial beyond degree).
    Poly derivative(const MultiIndex& lambda) const;

    // The same function written in coordinates local to `target`.
    Poly rebased(const Box& target) const;

    // Pads to a higher degree with zero coefficients.
    Poly padded(const MultiIndex& degree) const;

    Poly& operator+=(const Poly& other);
    Poly& operator*=(double s);
    friend Poly operator*(double s, Poly p) { return p *= s; }
    // Product of polynomials on the same box.
    Poly times(const Poly& other) const;

    double max_abs_coeff() const;

private:
    Box box_;
    MultiIndex degree_;
    std::vector<double> coeffs_;
};

}  // namespace mixsmooth
