#include "mixsmooth/catalog.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace mixsmooth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kSmoothOrder = 16;

// a (a-1) ... (a-k+1)
double falling(double a, int k)
{
    double r = 1.0;
    for (int i = 0; i < k; ++i)
        r *= a - i;
    return r;
}

Factor1D polynomial(std::vector<double> c)
{
    Factor1D f;
    f.kind = Factor1D::Kind::polynomial;
    f.poly = std::move(c);
    return f;
}

Factor1D sine(double a, double b)
{
    Factor1D f;
    f.kind = Factor1D::Kind::sine;
    f.a = a;
    f.b = b;
    return f;
}

Factor1D exponential(double a)
{
    Factor1D f;
    f.kind = Factor1D::Kind::exponential;
    f.a = a;
    return f;
}

Factor1D abs_power(double beta, double c)
{
    Factor1D f;
    f.kind = Factor1D::Kind::abs_power;
    f.a = beta;
    f.b = c;
    return f;
}

Factor1D step(double c)
{
    Factor1D f;
    f.kind = Factor1D::Kind::step;
    f.b = c;
    return f;
}

}  // namespace

double Factor1D::eval(int k, double x) const
{
    if (k < 0 || k > max_derivative())
        throw std::invalid_argument("Factor1D: derivative order " + std::to_string(k) + " not available");
    switch (kind) {
    case Kind::polynomial: {
        double acc = 0.0;
        for (std::size_t i = poly.size(); i-- > static_cast<std::size_t>(k);)
            acc = acc * x + poly[i] * falling(static_cast<double>(i), k);
        return acc;
    }
    case Kind::sine:
        return std::pow(a, k) * std::sin(a * x + b + k * std::numbers::pi / 2);
    case Kind::exponential:
        return std::pow(a, k) * std::exp(a * x);
    case Kind::abs_power: {
        const double y = x - b;
        if (y == 0.0)
            return 0.0;
        const double s = (k % 2 == 1 && y < 0) ? -1.0 : 1.0;
        return s * falling(a, k) * std::pow(std::abs(y), a - k);
    }
    case Kind::step:
        return x >= b ? 1.0 : 0.0;
    }
    return 0.0;
}

int Factor1D::max_derivative() const
{
    switch (kind) {
    case Kind::abs_power:
        return static_cast<int>(std::ceil(a)) - 1;
    case Kind::step:
        return 0;
    default:
        return kSmoothOrder;
    }
}

double Factor1D::smoothness(double p) const
{
    switch (kind) {
    case Kind::abs_power:
        return a + 1.0 / p;
    case Kind::step:
        return 1.0 / p;
    default:
        return kInf;
    }
}

std::optional<int> Factor1D::poly_degree() const
{
    if (kind != Kind::polynomial)
        return std::nullopt;
    return std::max(static_cast<int>(poly.size()) - 1, 0);
}

double CatalogFunction::derivative_value(const MultiIndex& lambda, std::span<const double> x) const
{
    double acc = 0.0;
    for (const CatalogTerm& t : terms) {
        double v = t.coeff;
        for (std::size_t j = 0; j < dim && v != 0.0; ++j)
            v *= t.factors[j].eval(lambda[j], x[j]);
        acc += v;
    }
    return acc;
}

FunctionOracle CatalogFunction::oracle() const
{
    return FunctionOracle{[self = *this](std::span<const double> x) { return self(x); }, dim, poly_degree(), name};
}

ScalarFn CatalogFunction::derivative(const MultiIndex& lambda) const
{
    if (lambda.size() != dim || !lambda.all_nonnegative() || !has_derivative(lambda))
        throw std::invalid_argument("catalog " + name + ": derivative " + lambda.str() + " not available");
    return [self = *this, lambda](std::span<const double> x) { return self.derivative_value(lambda, x); };
}

DerivativeProvider CatalogFunction::provider() const
{
    return [self = *this](const MultiIndex& lambda) { return self.derivative(lambda); };
}

MultiIndex CatalogFunction::max_derivative() const
{
    MultiIndex out(dim, kSmoothOrder);
    for (const CatalogTerm& t : terms)
        for (std::size_t j = 0; j < dim; ++j)
            out[j] = std::min(out[j], t.factors[j].max_derivative());
    return out;
}

std::vector<double> CatalogFunction::smoothness(double p) const
{
    std::vector<double> out(dim, kInf);
    for (const CatalogTerm& t : terms)
        for (std::size_t j = 0; j < dim; ++j)
            out[j] = std::min(out[j], t.factors[j].smoothness(p));
    return out;
}

bool CatalogFunction::infinitely_smooth() const
{
    for (double s : smoothness(1.0))
        if (!std::isinf(s))
            return false;
    return true;
}

bool CatalogFunction::in_besov(std::span<const double> alpha, double p) const
{
    const auto s = smoothness(p);
    for (std::size_t j = 0; j < dim; ++j)
        if (!(s[j] > alpha[j]))
            return false;
    return true;
}

std::optional<MultiIndex> CatalogFunction::poly_degree() const
{
    MultiIndex deg(dim, 0);
    for (const CatalogTerm& t : terms)
        for (std::size_t j = 0; j < dim; ++j) {
            const auto dj = t.factors[j].poly_degree();
            if (!dj)
                return std::nullopt;
            deg[j] = std::max(deg[j], *dj);
        }
    return deg;
}

std::vector<std::string> catalog_names()
{
    return {"zero", "poly_linear", "poly_mixed", "sin_tensor", "exp_smooth", "abs_pow", "abs_pow_rough", "step"};
}

CatalogFunction catalog_entry(const std::string& name, std::size_t d)
{
    if (d == 0)
        throw std::invalid_argument("catalog: dimension must be positive");
    CatalogFunction f;
    f.name = name;
    f.dim = d;
    const auto tensor = [&](double c, auto make) {
        CatalogTerm t{c, {}};
        for (std::size_t j = 0; j < d; ++j)
            t.factors.push_back(make(j));
        f.terms.push_back(std::move(t));
    };
    if (name == "zero") {
        f.description = "0";
        tensor(0.0, [](std::size_t) { return polynomial({0.0}); });
    } else if (name == "poly_linear") {
        f.description = "prod_j (0.5 + x_j)";
        tensor(1.0, [](std::size_t) { return polynomial({0.5, 1.0}); });
    } else if (name == "poly_mixed") {
        f.description = "prod_j (x_j^3 - 0.5 x_j^2 + 0.2) + 0.7 prod_j x_j^2 - 0.4 x_1";
        tensor(1.0, [](std::size_t) { return polynomial({0.2, 0.0, -0.5, 1.0}); });
        tensor(0.7, [](std::size_t) { return polynomial({0.0, 0.0, 1.0}); });
        tensor(-0.4, [](std::size_t j) { return j == 0 ? polynomial({0.0, 1.0}) : polynomial({1.0}); });
    } else if (name == "sin_tensor") {
        f.description = "prod_j sin(2 pi x_j + 0.3 j)";
        tensor(1.0, [](std::size_t j) { return sine(2.0 * std::numbers::pi, 0.3 * static_cast<double>(j)); });
    } else if (name == "exp_smooth") {
        f.description = "prod_j exp((0.8 - 0.3 j) x_j) + 0.5 prod_j cos(1.3 x_j)";
        tensor(1.0, [](std::size_t j) { return exponential(0.8 - 0.3 * static_cast<double>(j)); });
        tensor(0.5, [](std::size_t) { return sine(1.3, std::numbers::pi / 2); });
    } else if (name == "abs_pow") {
        f.description = "prod_j |x_j - 1/2|^1.5";
        tensor(1.0, [](std::size_t) { return abs_power(1.5, 0.5); });
    } else if (name == "abs_pow_rough") {
        f.description = "prod_j |x_j - 1/2|^0.7";
        tensor(1.0, [](std::size_t) { return abs_power(0.7, 0.5); });
    } else if (name == "step") {
        f.description = "1{x_1 >= 1/3}";
        tensor(1.0, [](std::size_t j) { return j == 0 ? step(1.0 / 3.0) : polynomial({1.0}); });
    } else {
        throw std::invalid_argument("catalog: unknown function '" + name + "'");
    }
    return f;
}

CatalogFunction random_smooth_function(std::size_t d, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> freq(0.5, 4.0), phase(0.0, 2.0 * std::numbers::pi);
    std::normal_distribution<double> normal(0.0, 1.0);
    CatalogFunction f;
    f.name = "random_smooth";
    f.description = "sum of three random tensor sines";
    f.dim = d;
    for (int i = 0; i < 3; ++i) {
        CatalogTerm t{normal(rng), {}};
        for (std::size_t j = 0; j < d; ++j) {
            const double a = freq(rng);
            t.factors.push_back(sine(a, phase(rng)));
        }
        f.terms.push_back(std::move(t));
    }
    return f;
}

std::vector<CatalogFunction> function_catalog(std::size_t d)
{
    std::vector<CatalogFunction> out;
    for (const auto& n : catalog_names())
        out.push_back(catalog_entry(n, d));
    return out;
}

}  // namespace mixsmooth
