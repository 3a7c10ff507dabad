#pragma once

// Mixed differences, sup and averaged mixed moduli of continuity, and the
// mixed-smoothness Besov / Nikolskii norms built from them.

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixsmooth/core_index.hpp"
#include "mixsmooth/polyproj.hpp"
#include "mixsmooth/quadrature.hpp"

namespace mixsmooth {

class PiecewisePoly;

struct SmoothnessParams {
    std::vector<double> alpha;
    double p = 2.0;
    double theta = 2.0;  // +inf allowed
    MultiIndex l;        // l(alpha)
    std::optional<MultiIndex> ell;

    // Validates alpha > 0, 1 <= p < inf, theta >= 1 and ell < alpha.
    static SmoothnessParams make(std::vector<double> alpha, double p, double theta,
                                 std::optional<MultiIndex> ell = std::nullopt);
    std::size_t dim() const { return alpha.size(); }
};

// l_j = min{m in N : alpha_j < m}. Throws std::invalid_argument if some alpha_j <= 0.
MultiIndex l_of_alpha(std::span<const double> alpha);

// Where differences live. On a cube domain D_h^l shrinks with h; with
// whole_space the domain is R^d and f is taken to vanish outside `box`.
struct DiffDomain {
    Box box;
    bool whole_space = false;

    static DiffDomain cube(std::size_t d) { return {Box::unit(d), false}; }
};

// (Delta_h^l f)(x), or nullopt when x is outside D_h^l.
std::optional<double> mixed_difference(const ScalarFn& f, const MultiIndex& l, std::span<const double> h,
                                       std::span<const double> x, const DiffDomain& dom);

// Integration box for ||Delta_h^l f||: D_h^l on a cube domain, the region
// where some f(x + k h) can be nonzero on R^d. nullopt when empty.
std::optional<Box> difference_region(const MultiIndex& l, std::span<const double> h, const DiffDomain& dom);

// ||Delta_h^l f||_{L_p(D_h^l)} by composite Gauss; inner.subdivisions is a
// density per unit length on each axis. 0 on an empty domain.
double difference_norm(const ScalarFn& f, const MultiIndex& l, std::span<const double> h, double p,
                       const DiffDomain& dom, const QuadSpec& inner);

struct ModulusOptions {
    QuadSpec inner{4, 8};
    int xi_nodes = 3;       // Gauss nodes per dyadic block of xi
    int xi_tail_blocks = 4; // blocks below the smallest tabulated t
    // Sup grid per active axis: h_j = fraction * t_j. Sign flips of single
    // components leave ||Delta_h f|| unchanged, so the 9-point grid
    // {0, +-t/4, +-t/2, +-3t/4, +-t} reduces to these.
    std::vector<double> shift_fractions{0.25, 0.5, 0.75, 1.0};
    // Also take the sup over the quadrature nodes of the averaged modulus.
    bool include_avg_nodes = true;
};

struct ModulusEstimate {
    MultiIndex order;
    Point t;
    double value = 0.0;
    std::string method;  // "sup-grid" or "averaged-quadrature"
    std::size_t samples = 0;
    bool lower_bound = false;
};

// Omega^order(f, t) as a grid maximum (a lower bound of the true sup).
ModulusEstimate modulus_sup(const ScalarFn& f, const MultiIndex& order, std::span<const double> t, double p,
                            const DiffDomain& dom, const ModulusOptions& opts = {});
// Omega'^order(f, t) by dyadic-block Gauss quadrature over the xi box.
ModulusEstimate modulus_avg(const ScalarFn& f, const MultiIndex& order, std::span<const double> t, double p,
                            const DiffDomain& dom, const ModulusOptions& opts = {});

// Both moduli tabulated on t_j = t0_j 2^{-k_j}, k_j = 0..kmax for active
// axes (k_j = 0 elsewhere). Shift norms are memoized, so the sup and the
// average share their samples.
class ModulusTable {
public:
    ModulusTable(ScalarFn f, MultiIndex order, Point t0, int kmax, double p, DiffDomain dom, ModulusOptions opts,
                 bool with_average);

    const MultiIndex& order() const { return order_; }
    int kmax() const { return kmax_; }
    IntBox levels() const;
    Point t_at(const MultiIndex& k) const;

    // Requires with_average.
    double avg(const MultiIndex& k) const;
    double sup(const MultiIndex& k) const;
    std::size_t samples() const { return memo_.size(); }

private:
    double shift_norm(const Point& h) const;

    ScalarFn f_;
    MultiIndex order_;
    Point t0_;
    int kmax_;
    double p_;
    DiffDomain dom_;
    ModulusOptions opts_;
    bool with_average_;
    std::vector<std::size_t> active_;
    mutable std::map<std::vector<double>, double> memo_;
    // Indexed by level tuple over the active axes, row-major.
    std::vector<double> avg_, sup_;
};

struct NormPart {
    std::vector<std::size_t> J;  // 0-based axes; empty for the L_p term
    double value = 0.0;
};

struct NormReport {
    std::string norm;  // "B'", "H'", "B^ell", "H^ell", "R^d-derivative"
    double total = 0.0;
    double lp_term = 0.0;
    std::vector<NormPart> parts;
    int kmax = 0;
    double theta = 0.0;
    bool routed_to_nikolskii = false;
    bool tail_upper_bound = false;  // t >= 1 contributions are upper envelopes
    bool sup_lower_bound = false;   // sup moduli are grid maxima
    std::vector<std::string> notes;
};

struct NormOptions {
    int kmax = 8;
    ModulusOptions modulus;
    QuadSpec lp{6, 4};
};

// ||f||_{(S^alpha_{p,theta} B)'(I^d)}; theta = inf gives the H' norm.
NormReport besov_norm_prime(const ScalarFn& f, const SmoothnessParams& sp, const NormOptions& opts = {});
NormReport nikolskii_norm_prime(const ScalarFn& f, const SmoothnessParams& sp, const NormOptions& opts = {});

// Derivatives of f by multi-index; used for the ell-norms.
using DerivativeProvider = std::function<ScalarFn(const MultiIndex&)>;

// ||f||_{(S^alpha_{p,theta} B)^ell(I^d)} with sp.ell set; theta = inf gives H^ell.
NormReport besov_norm_ell(const DerivativeProvider& deriv, const SmoothnessParams& sp, const NormOptions& opts = {});

// Per-J seminorms of D^lambda F on R^d with sup moduli of order
// (l - lambda) chi_J; J = {} gives ||D^lambda F||_{L_p(R^d)}. The t >= 1
// range uses ||Delta_h^r g||_p <= 2^{|r|} ||g||_p axis by axis.
NormReport derivative_besov_norm(const PiecewisePoly& F, const MultiIndex& lambda, const SmoothnessParams& sp,
                                 const NormOptions& opts);

// ||g||_{L_p} of a piecewise polynomial over all of R^d.
double lp_norm_whole_space(const PiecewisePoly& F, double p);

}  // namespace mixsmooth
