#pragma once

// Dyadic cell geometry on I^d, clamped local projectors, the quasi-
// interpolants E_kappa and their telescoped details built from the
// U_{kappa,nu} polynomials.

#include <map>
#include <optional>
#include <vector>

#include "mixsmooth/core_index.hpp"
#include "mixsmooth/polynomial.hpp"
#include "mixsmooth/polyproj.hpp"

namespace mixsmooth {

struct CellGeometry {
    MultiIndex kappa, nu, m;
    Point base_point;  // x_{kappa,nu} = 2^{-kappa}(nu - m)_+
    Point base_edge;   // min(2^kappa, m + 1) 2^{-kappa}
    Box base;          // D_{kappa,nu}
    Box wide;          // D'_{kappa,nu}
};

// nu ranges over N_{0, 2^kappa - e}; throws std::out_of_range otherwise.
CellGeometry cell_geometry(const MultiIndex& kappa, const MultiIndex& nu, const MultiIndex& m);

// nu_kappa(nu) = (2^kappa - m - e)_+ - (2^kappa - m - e - nu_+)_+.
// Throws std::out_of_range unless nu is in N_{-m, 2^kappa - e}.
MultiIndex index_clamp(const MultiIndex& kappa, const MultiIndex& m, const MultiIndex& nu);

// S_{kappa,nu}^{d,deg,m} f: projection onto P^{d,deg} over D_{kappa,nu}.
// With m = 0 this is the dyadic-cell projector.
TensorPoly local_projector_S(const MultiIndex& kappa, const MultiIndex& nu, const MultiIndex& deg, const MultiIndex& m,
                             const FunctionOracle& f, std::optional<QuadSpec> quad = std::nullopt);

// One polynomial per dyadic cell of level kappa, each written in the
// cell's local coordinates. Evaluation outside the stored cells gives 0.
class PiecewisePoly {
public:
    PiecewisePoly() = default;
    // closed_top: points on the upper faces of the stored cell range count
    // as inside the last cell (closure of a cube-side function).
    PiecewisePoly(MultiIndex kappa, IntBox cells, MultiIndex degree, bool closed_top);

    const MultiIndex& level() const { return kappa_; }
    const IntBox& cells() const { return cells_; }
    std::size_t dim() const { return kappa_.size(); }
    bool closed_top() const { return closed_top_; }
    Box cell_box(const MultiIndex& mu) const { return dyadic_cell(kappa_, mu); }
    // The union of the stored cells.
    Box extent() const;
    MultiIndex max_degree() const;

    Poly& cell(const MultiIndex& mu) { return polys_[cells_.linear_index(mu)]; }
    const Poly& cell(const MultiIndex& mu) const { return polys_[cells_.linear_index(mu)]; }
    // Cell containing x, if stored.
    std::optional<MultiIndex> locate(std::span<const double> x) const;

    double operator()(std::span<const double> x) const;
    PiecewisePoly derivative(const MultiIndex& lambda) const;

    // L_q norm over the stored cells (or the given sub-range). q = inf
    // takes the maximum over a uniform sample grid with the cell corners.
    double norm(double q, std::optional<IntBox> region = std::nullopt) const;

    // Adds scale * this into `fine`, whose level is componentwise >= ours
    // and whose cells are covered by ours or lie outside our support.
    void accumulate_into(PiecewisePoly& fine, double scale = 1.0) const;

    PiecewisePoly& operator+=(const PiecewisePoly& other);
    PiecewisePoly& operator*=(double s);

private:
    MultiIndex kappa_;
    IntBox cells_{MultiIndex{}, MultiIndex{}};
    bool closed_top_ = false;
    std::vector<Poly> polys_;
};

// sum_nu f_nu g_{kappa,nu} with nu in N_{-m, 2^kappa - e}, every f_nu a
// polynomial (written on any box).
class SplineBlend {
public:
    SplineBlend() = default;
    SplineBlend(MultiIndex kappa, MultiIndex m, MultiIndex degree);

    const MultiIndex& level() const { return kappa_; }
    const MultiIndex& order() const { return m_; }
    const MultiIndex& degree() const { return deg_; }
    std::size_t dim() const { return kappa_.size(); }
    IntBox indices() const { return spline_indices(kappa_, m_); }
    // Cells meeting some spline support: N_{-m, 2^kappa + m - e}.
    IntBox support_cells() const;

    Poly& family(const MultiIndex& nu) { return family_[indices().linear_index(nu)]; }
    const Poly& family(const MultiIndex& nu) const { return family_[indices().linear_index(nu)]; }

    // Direct sum over the splines that are nonzero at x; valid on R^d.
    double operator()(std::span<const double> x) const;
    // Per-cell form over `cells` (exact: f_nu times the spline pieces).
    PiecewisePoly cellwise(const IntBox& cells, bool closed_top) const;

private:
    MultiIndex kappa_, m_, deg_;
    std::vector<Poly> family_;
};

// A blend read on the closed cube I^d only.
class QuasiInterpolant {
public:
    QuasiInterpolant() = default;
    explicit QuasiInterpolant(SplineBlend blend);

    const SplineBlend& blend() const { return blend_; }
    const PiecewisePoly& cellwise() const { return cells_; }
    double operator()(std::span<const double> x) const { return cells_(x); }

private:
    SplineBlend blend_;
    PiecewisePoly cells_;
};

// Memo of dyadic-cell projections S_{kappa,nu}^{d,deg} f keyed by (kappa, nu).
class ProjectionCache {
public:
    ProjectionCache(const FunctionOracle& f, MultiIndex deg, std::optional<QuadSpec> quad = std::nullopt);
    const Poly& get(const MultiIndex& kappa, const MultiIndex& nu);
    const FunctionOracle& oracle() const { return f_; }
    const MultiIndex& degree() const { return deg_; }

private:
    FunctionOracle f_;
    MultiIndex deg_;
    std::optional<QuadSpec> quad_;
    struct KeyLess {
        bool operator()(const std::pair<MultiIndex, MultiIndex>& a, const std::pair<MultiIndex, MultiIndex>& b) const
        {
            return std::pair(a.first.values(), a.second.values()) < std::pair(b.first.values(), b.second.values());
        }
    };
    std::map<std::pair<MultiIndex, MultiIndex>, Poly, KeyLess> memo_;
};

// E_kappa^{d,l-e,m} f. Requires l >= e and m >= l - e componentwise.
QuasiInterpolant quasi_interp_E(const MultiIndex& kappa, const MultiIndex& l, const MultiIndex& m,
                                const FunctionOracle& f, std::optional<QuadSpec> quad = std::nullopt);
QuasiInterpolant quasi_interp_E(const MultiIndex& kappa, const MultiIndex& m, ProjectionCache& cache);

// Family {U_{kappa,nu} f} of the level-kappa detail, each written on
// supp g_{kappa,nu}. Shared by the cube and whole-space details.
SplineBlend detail_blend(const MultiIndex& kappa, const MultiIndex& m, ProjectionCache& cache);

// The telescoped detail on I^d, built from the U polynomials.
QuasiInterpolant telescoped_E(const MultiIndex& kappa, const MultiIndex& l, const MultiIndex& m,
                              const FunctionOracle& f, std::optional<QuadSpec> quad = std::nullopt);

// ||f - F||_{L_p(I^d)} with Gauss rules on F's cells split in two per axis.
double lp_error(const FunctionOracle& f, const PiecewisePoly& F, double p, int extra_nodes = 3);

void check_degree_pair(const MultiIndex& l, const MultiIndex& m);

struct LevelBoundRecord {
    MultiIndex kappa, lambda;
    double p = 2, q = 2;
    double lhs = 0;      // ||D^lambda detail_kappa f||_{L_q(I^d)}
    double modulus = 0;  // Omega'^{l chi_s(kappa)}(f, s 2^{-kappa}) or ||f||_p at kappa = 0
    double scale = 0;    // 2^{(kappa, lambda + (1/p - 1/q)_+ e)}
    double ratio = 0;    // lhs / (scale * modulus), 0 when both vanish
};

// Measures one instance of the detail-derivative bound. `s` scales the
// modulus argument.
LevelBoundRecord derivative_level_bound_report(const FunctionOracle& f, const MultiIndex& kappa,
                                               const MultiIndex& lambda, double p, double q, const MultiIndex& l,
                                               const MultiIndex& m, double s = 1.0);

}  // namespace mixsmooth
