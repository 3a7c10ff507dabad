#include "mixsmooth/splines.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace mixsmooth {

namespace {

using RPoly = std::vector<Rational>;

Rational eval_rpoly(const RPoly& p, const Rational& u)
{
    Rational acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it)
        acc = acc * u + *it;
    return acc;
}

// Antiderivative vanishing at u = 0.
RPoly integrate(const RPoly& p)
{
    RPoly out(p.size() + 1, Rational(0));
    for (std::size_t i = 0; i < p.size(); ++i)
        out[i + 1] = p[i] / Rational(static_cast<long>(i + 1));
    return out;
}

std::vector<double> derivative(const std::vector<double>& c)
{
    if (c.size() <= 1)
        return {0.0};
    std::vector<double> out(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i)
        out[i - 1] = c[i] * static_cast<double>(i);
    return out;
}

double horner(const std::vector<double>& c, double u)
{
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * u + *it;
    return acc;
}

}  // namespace

SplineGen::SplineGen(int m) : m_(m)
{
    if (m < 0)
        throw std::invalid_argument("SplineGen: order must be nonnegative");

    // psi^{1,0} = 1 on [0,1)
    std::vector<RPoly> pieces{RPoly{Rational(1)}};
    for (int order = 1; order <= m; ++order) {
        // psi^order(x) = Phi(x) - Phi(x-1), Phi the antiderivative of psi^{order-1}.
        const std::size_t n_prev = pieces.size();
        std::vector<RPoly> antider(n_prev);
        std::vector<Rational> offset(n_prev + 1, Rational(0));
        for (std::size_t k = 0; k < n_prev; ++k) {
            antider[k] = integrate(pieces[k]);
            offset[k + 1] = offset[k] + eval_rpoly(antider[k], Rational(1));
        }
        const Rational total = offset[n_prev];
        std::vector<RPoly> next(n_prev + 1);
        for (std::size_t k = 0; k <= n_prev; ++k) {
            // Phi(k + u)
            RPoly phi_hi = (k < n_prev) ? antider[k] : RPoly{};
            Rational c_hi = (k < n_prev) ? offset[k] : total;
            // Phi(k - 1 + u)
            RPoly phi_lo = (k >= 1) ? antider[k - 1] : RPoly{};
            Rational c_lo = (k >= 1) ? offset[k - 1] : Rational(0);
            RPoly p(static_cast<std::size_t>(order) + 1, Rational(0));
            for (std::size_t i = 0; i < phi_hi.size(); ++i)
                p[i] += phi_hi[i];
            for (std::size_t i = 0; i < phi_lo.size(); ++i)
                p[i] -= phi_lo[i];
            p[0] += c_hi - c_lo;
            next[k] = std::move(p);
        }
        pieces = std::move(next);
    }
    exact_ = pieces;

    derivs_.resize(static_cast<std::size_t>(m) + 1);
    for (std::size_t k = 0; k < exact_.size(); ++k) {
        std::vector<double> c;
        for (const auto& r : exact_[k])
            c.push_back(static_cast<double>(r));
        for (int lam = 0; lam <= m; ++lam) {
            derivs_[static_cast<std::size_t>(lam)].push_back(c);
            c = derivative(c);
        }
    }
}

double SplineGen::eval(int lambda, double x) const
{
    if (lambda < 0 || lambda > m_)
        throw std::invalid_argument("eval_psi: derivative order " + std::to_string(lambda)
                                    + " exceeds spline order " + std::to_string(m_));
    const double fk = std::floor(x);
    if (fk < 0.0 || fk > static_cast<double>(m_))
        return 0.0;
    const auto k = static_cast<std::size_t>(fk);
    return horner(derivs_[static_cast<std::size_t>(lambda)][k], x - fk);
}

const std::vector<double>& SplineGen::piece(int k, int lambda) const
{
    static const std::vector<double> none;
    if (k < 0 || k > m_ || lambda < 0 || lambda > m_)
        return none;
    return derivs_[static_cast<std::size_t>(lambda)][static_cast<std::size_t>(k)];
}

Rational SplineGen::eval_exact(const Rational& x) const
{
    using boost::multiprecision::cpp_int;
    // floor of a rational
    cpp_int num = boost::multiprecision::numerator(x);
    cpp_int den = boost::multiprecision::denominator(x);
    cpp_int q = num / den;
    if (num < 0 && q * den != num)
        q -= 1;
    if (q < 0 || q > m_)
        return Rational(0);
    const auto k = static_cast<std::size_t>(q.convert_to<long>());
    return eval_rpoly(exact_[k], x - Rational(q));
}

double SplineGen::sup_norm(int lambda) const
{
    double best = 0.0;
    const int samples = 2048;
    for (int k = 0; k <= m_; ++k) {
        const auto& c = piece(k, lambda);
        for (int i = 0; i <= samples; ++i)
            best = std::max(best, std::abs(horner(c, static_cast<double>(i) / samples)));
    }
    return best;
}

const SplineGen& spline(int m)
{
    static std::mutex mu;
    static std::map<int, std::unique_ptr<SplineGen>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[m];
    if (!slot)
        slot = std::make_unique<SplineGen>(m);
    return *slot;
}

RefinementMask refinement_coeffs(int m)
{
    if (m < 0)
        throw std::invalid_argument("refinement_coeffs: order must be nonnegative");
    RefinementMask mask;
    mask.order = m;
    boost::multiprecision::cpp_int binom = 1;
    const boost::multiprecision::cpp_int scale = boost::multiprecision::cpp_int(1) << m;
    for (int mu = 0; mu <= m + 1; ++mu) {
        if (mu > 0)
            binom = binom * (m + 2 - mu) / mu;
        Rational a(binom, scale);
        mask.exact_coeffs.push_back(a);
        mask.coeffs.push_back(static_cast<double>(a));
    }
    return mask;
}

double eval_psi_tensor(const MultiIndex& m, const MultiIndex& lambda, std::span<const double> x)
{
    double v = 1.0;
    for (std::size_t j = 0; j < m.size() && v != 0.0; ++j)
        v *= spline(m[j]).eval(lambda[j], x[j]);
    return v;
}

double eval_g(const MultiIndex& kappa, const MultiIndex& nu, const MultiIndex& m, std::span<const double> x)
{
    double v = 1.0;
    for (std::size_t j = 0; j < m.size() && v != 0.0; ++j)
        v *= spline(m[j]).eval(0, std::ldexp(x[j], kappa[j]) - nu[j]);
    return v;
}

double eval_g_deriv(const MultiIndex& kappa, const MultiIndex& nu, const MultiIndex& m, const MultiIndex& lambda,
                    std::span<const double> x)
{
    double v = 1.0;
    for (std::size_t j = 0; j < m.size() && v != 0.0; ++j)
        v *= std::ldexp(spline(m[j]).eval(lambda[j], std::ldexp(x[j], kappa[j]) - nu[j]), kappa[j] * lambda[j]);
    return v;
}

Box support_g(const MultiIndex& kappa, const MultiIndex& nu, const MultiIndex& m)
{
    Point corner(kappa.size()), edge(kappa.size());
    for (std::size_t j = 0; j < kappa.size(); ++j) {
        if (kappa[j] < 0)
            throw std::invalid_argument("support_g: negative level");
        const double h = std::ldexp(1.0, -kappa[j]);
        corner[j] = h * nu[j];
        edge[j] = h * (m[j] + 1);
    }
    return Box(std::move(corner), std::move(edge));
}

IntBox interacting_indices(const MultiIndex& kappa, const MultiIndex& m, const MultiIndex& cell)
{
    if (!cell_indices(kappa).contains(cell))
        throw std::out_of_range("interacting_indices: cell index " + cell.str() + " outside N_{0,2^kappa-e}");
    return IntBox(cell - m, cell);
}

IntBox spline_indices(const MultiIndex& kappa, const MultiIndex& m)
{
    return IntBox(m * -1, pow2(kappa) - MultiIndex(kappa.size(), 1));
}

IntBox cell_indices(const MultiIndex& kappa)
{
    return IntBox(MultiIndex(kappa.size(), 0), pow2(kappa) - MultiIndex(kappa.size(), 1));
}

}  // namespace mixsmooth
