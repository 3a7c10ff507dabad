#pragma once

// Whole-space side: zero extension, masked projectors, the global details
// as elements of the piecewise-polynomial classes, the boundary-class
// check, the truncated extension series and the Bernstein experiment.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "mixsmooth/analysis.hpp"
#include "mixsmooth/quasiinterp.hpp"

namespace mixsmooth {

// f on the closed cube, 0 elsewhere.
FunctionOracle zero_extend(const FunctionOracle& f);

// Q^{d,m} = -(m + e) + (2m + 3e) I^d
Box support_box(const MultiIndex& m);

// chi_{Q^{d,m}} P_{2^-kappa, 2^-kappa nu} f. nu must lie in N_{0,2^kappa-e}.
FunctionOracle global_local_projector(const MultiIndex& kappa, const MultiIndex& nu, const MultiIndex& deg,
                                      const MultiIndex& m, const FunctionOracle& f,
                                      std::optional<QuadSpec> quad = std::nullopt);

// sum_nu f_nu g_{kappa,nu} over nu in N_{-m,2^kappa-e}, evaluated on R^d.
class GlobalPiecewisePoly {
public:
    GlobalPiecewisePoly() = default;
    explicit GlobalPiecewisePoly(SplineBlend blend);

    const MultiIndex& level() const { return blend_.level(); }
    const MultiIndex& order() const { return blend_.order(); }
    const MultiIndex& degree() const { return blend_.degree(); }
    std::size_t dim() const { return blend_.dim(); }
    const SplineBlend& blend() const { return blend_; }
    // Per-cell form over N_{-m, 2^kappa + m - e}.
    const PiecewisePoly& cells() const { return cells_; }

    double operator()(std::span<const double> x) const { return cells_(x); }
    PiecewisePoly derivative(const MultiIndex& lambda) const { return cells_.derivative(lambda); }
    double norm_whole_space(double q) const { return cells_.norm(q); }
    double norm_cube(double q) const { return cells_.norm(q, cell_indices(level())); }

private:
    SplineBlend blend_;
    PiecewisePoly cells_;
};

// The level-kappa whole-space detail. Its family is the polynomial part of
// the U polynomials; projections only ever read f on I^d.
GlobalPiecewisePoly global_detail(const MultiIndex& kappa, const MultiIndex& l, const MultiIndex& m,
                                  const FunctionOracle& f, std::optional<QuadSpec> quad = std::nullopt);
GlobalPiecewisePoly global_detail(const MultiIndex& kappa, const MultiIndex& m, ProjectionCache& cache);

struct ClassCheckReport {
    bool pass = true;
    std::size_t axis = 0;   // 1-based, 0 when passing
    int index = 0;          // offending nu_j
    int representative = 0; // the index it should agree with
    double deviation = 0.0; // max |f^j_{nu_j} - f^j_{rep}| over the sample grid
    double scale = 0.0;     // max |f^j| over the sample grid
    std::string message;
};

// Membership in the boundary class: on every axis j the slice polynomials
// f^j_{nu_j} must agree with f^j at the clamped index. Checked on a sample
// grid of Q^{d,m} with `per_cell` points in every level-kappa cell per
// axis, tolerance rel_tol relative to the slice scale.
ClassCheckReport class_check_Pprime(const GlobalPiecewisePoly& F, double rel_tol = 1e-9, int per_cell = 0);

struct Reconstruction {
    SplineBlend family;
    double max_coeff_error = 0.0;  // vs the input family, local coefficients
    double max_value_error = 0.0;  // sample residual
};

// Recovers {f_nu} from samples of F by least squares and compares with F's
// own family.
Reconstruction reconstruct_family(const GlobalPiecewisePoly& F);

// Random element of the boundary class: standard-normal coefficients over
// the orthonormal basis on Q_{kappa, clamp(nu)} for every clamped index,
// copied to all nu with the same clamp.
GlobalPiecewisePoly random_pprime(const MultiIndex& kappa, const MultiIndex& deg, const MultiIndex& m,
                                  std::uint64_t seed);

struct BernsteinLevel {
    MultiIndex kappa;
    double max_ratio = 0.0;  // max over trials of ||D^lambda F||_{L_q(R^d)} / ||F||_{L_q(I^d)}
};

struct BernsteinRecord {
    MultiIndex lambda;
    double q = 2.0;
    std::vector<BernsteinLevel> levels;
    std::vector<double> slopes;  // log2 ratios between consecutive levels
};

// Runs the ratio experiment on each level in turn. Requires lambda <= m.
BernsteinRecord bernstein_experiment(const std::vector<MultiIndex>& kappas, const MultiIndex& deg, const MultiIndex& m,
                                     const MultiIndex& lambda, double q, int trials, std::uint64_t seed);

struct LevelDetail {
    MultiIndex kappa;
    GlobalPiecewisePoly detail;
    double lp_norm = 0.0;  // ||detail||_{L_p(R^d)}
};

struct ExtensionResult {
    SmoothnessParams params;
    MultiIndex m;
    int K = 0;
    std::string function_name;
    std::vector<LevelDetail> details;
    // Sum of all details on the level K e grid over the union of supports.
    PiecewisePoly sum;

    double operator()(std::span<const double> x) const { return sum(x); }
    PiecewisePoly derivative(const MultiIndex& lambda) const { return sum.derivative(lambda); }
    // Sum of the details with max_j kappa_j == k at x.
    double shell(int k, std::span<const double> x) const;
};

// Truncated series over kappa <= K e. Rejects alpha <= 0 and p = inf
// (through SmoothnessParams), K < 0 and m < l - e.
ExtensionResult extend(const FunctionOracle& f, const SmoothnessParams& sp, const MultiIndex& m, int K,
                       std::optional<QuadSpec> quad = std::nullopt);

nlohmann::json to_json(const Poly& p);
nlohmann::json to_json(const GlobalPiecewisePoly& F);
nlohmann::json to_json(const ExtensionResult& r);

}  // namespace mixsmooth
