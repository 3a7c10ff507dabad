#include "mixsmooth/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace mixsmooth {

namespace {

GaussRule build_rule(int n)
{
    // Newton iteration on P_n over [-1,1], then map to [0,1].
    GaussRule r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto idx = static_cast<std::size_t>(n - 1 - i);
        r.nodes[idx] = 0.5 * (x + 1.0);
        r.weights[idx] = 0.5 * w;
    }
    return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n)
{
    if (n < 1 || n > 200)
        throw std::invalid_argument("gauss_legendre: node count out of range");
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, build_rule(n)).first;
    return it->second;
}

void composite_points_1d(double a, double b, int n, int s, std::vector<double>& x, std::vector<double>& w)
{
    const GaussRule& g = gauss_legendre(n);
    x.clear();
    w.clear();
    const double h = (b - a) / s;
    for (int piece = 0; piece < s; ++piece) {
        const double lo = a + piece * h;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            x.push_back(lo + h * g.nodes[i]);
            w.push_back(h * g.weights[i]);
        }
    }
}

void for_each_quad_point(const Box& box, const QuadSpec& q,
                         const std::function<void(std::span<const double>, double)>& visit)
{
    const std::size_t d = box.dim();
    std::vector<std::vector<double>> xs(d), ws(d);
    for (std::size_t j = 0; j < d; ++j)
        composite_points_1d(box.lo(j), box.hi(j), q.nodes, q.subdivisions, xs[j], ws[j]);
    std::vector<std::size_t> idx(d, 0);
    Point x(d);
    const std::size_t n = xs.empty() ? 0 : xs[0].size();
    if (n == 0)
        return;
    while (true) {
        double w = 1.0;
        for (std::size_t j = 0; j < d; ++j) {
            x[j] = xs[j][idx[j]];
            w *= ws[j][idx[j]];
        }
        visit(x, w);
        std::size_t j = d;
        bool done = true;
        while (j > 0) {
            --j;
            if (++idx[j] < n) {
                done = false;
                break;
            }
            idx[j] = 0;
        }
        if (done)
            return;
    }
}

double integrate_box(const std::function<double(std::span<const double>)>& f, const Box& box, const QuadSpec& q)
{
    double acc = 0.0;
    for_each_quad_point(box, q, [&](std::span<const double> x, double w) { acc += w * f(x); });
    return acc;
}

double lp_norm_box(const std::function<double(std::span<const double>)>& f, const Box& box, double p,
                   const QuadSpec& q)
{
    if (std::isinf(p)) {
        double best = 0.0;
        for_each_quad_point(box, q, [&](std::span<const double> x, double) { best = std::max(best, std::abs(f(x))); });
        return best;
    }
    double acc = 0.0;
    for_each_quad_point(box, q, [&](std::span<const double> x, double w) { acc += w * std::pow(std::abs(f(x)), p); });
    return std::pow(acc, 1.0 / p);
}

}  // namespace mixsmooth
