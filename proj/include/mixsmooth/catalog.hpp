#pragma once

// Test functions on I^d with exact derivatives and a smoothness tag.
// Every entry is a finite sum of tensor products of 1-D factors.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixsmooth/analysis.hpp"
#include "mixsmooth/polyproj.hpp"

namespace mixsmooth {

struct Factor1D {
    enum class Kind { polynomial, sine, exponential, abs_power, step };
    Kind kind = Kind::polynomial;
    std::vector<double> poly;  // ascending coefficients
    double a = 1.0, b = 0.0;   // sin(a x + b), exp(a x), |x - b|^a, 1{x >= b}

    double eval(int k, double x) const;
    // Highest derivative order available in closed form.
    int max_derivative() const;
    // Besov smoothness in L_p: the factor lies in B^s_{p,theta} for s < tag.
    double smoothness(double p) const;
    std::optional<int> poly_degree() const;
};

struct CatalogTerm {
    double coeff = 1.0;
    std::vector<Factor1D> factors;  // one per axis
};

struct CatalogFunction {
    std::string name;
    std::string description;
    std::size_t dim = 1;
    std::vector<CatalogTerm> terms;

    double operator()(std::span<const double> x) const { return derivative_value(MultiIndex(dim, 0), x); }
    double derivative_value(const MultiIndex& lambda, std::span<const double> x) const;

    FunctionOracle oracle() const;
    // Throws std::invalid_argument beyond max_derivative().
    ScalarFn derivative(const MultiIndex& lambda) const;
    DerivativeProvider provider() const;
    MultiIndex max_derivative() const;
    bool has_derivative(const MultiIndex& lambda) const { return lambda.leq(max_derivative()); }
    // Per-axis Besov smoothness tag in L_p (inf for C^infty factors).
    std::vector<double> smoothness(double p) const;
    bool infinitely_smooth() const;
    // Finite (S^alpha_{p,theta} B)' norm: tag_j > alpha_j on every axis.
    bool in_besov(std::span<const double> alpha, double p) const;
    std::optional<MultiIndex> poly_degree() const;
};

// zero, poly_linear, poly_mixed, sin_tensor, exp_smooth, abs_pow, abs_pow_rough, step.
std::vector<CatalogFunction> function_catalog(std::size_t d);
// Throws std::invalid_argument for an unknown name.
CatalogFunction catalog_entry(const std::string& name, std::size_t d);
std::vector<std::string> catalog_names();

// sum_{i<3} c_i prod_j sin(a_ij x_j + b_ij) with random parameters.
CatalogFunction random_smooth_function(std::size_t d, std::uint64_t seed);

}  // namespace mixsmooth
