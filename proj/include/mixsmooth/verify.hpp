#pragma once

// Verification suites driven by an ExperimentConfig, and the
// extension-norm experiment shared by `verify` and `norms`.

#include <string>
#include <vector>

#include "json.hpp"

#include "mixsmooth/config.hpp"

namespace mixsmooth {

struct CheckResult {
    std::string name;
    bool pass = true;
    nlohmann::json measured;
};

struct SuiteResult {
    std::string name;  // also the module it exercises
    std::vector<CheckResult> checks;
    bool pass() const;
};

// Every suite selected by cfg.suites, in a fixed order.
std::vector<SuiteResult> run_suites(const ExperimentConfig& cfg);
SuiteResult run_suite(const std::string& name, const ExperimentConfig& cfg);

// schema 1 report; byte-stable for a fixed config.
nlohmann::json verify_report(const ExperimentConfig& cfg, const std::vector<SuiteResult>& suites);

struct TheoremRow {
    std::string function;
    int K = 0;
    MultiIndex lambda;
    std::vector<std::size_t> J;  // 0-based; empty for the L_p term
    double lhs = 0.0;            // seminorm of D^lambda of the truncated extension on R^d
    double rhs = 0.0;            // ||f||_{B'(I^d)}
    double ratio = 0.0;
};

struct TheoremSummary {
    std::string function;
    MultiIndex lambda;
    std::vector<double> ratio_by_K;  // max over J, one per K
    bool finite = true;
    bool stable = true;              // last two K within 10%, or nonincreasing
};

struct TheoremReport {
    std::vector<TheoremRow> rows;
    std::vector<TheoremSummary> summaries;
    std::vector<std::string> functions;  // catalog entries used
    std::vector<std::string> excluded;   // with the reason
    double constant = 0.0;               // max ratio over everything
    bool routed_to_nikolskii = false;
};

// For every selected catalog entry with a finite B' norm and every
// lambda in {0..} with lambda < alpha, lambda <= m, compares the
// whole-space seminorms of the truncated extension (K in cfg.main_K)
// with ||f||_{B'(I^d)}.
TheoremReport main_theorem_experiment(const ExperimentConfig& cfg);
nlohmann::json to_json(const TheoremReport& r);

// lambda with lambda_j < alpha_j and lambda_j <= m_j, in row-major order.
std::vector<MultiIndex> admissible_lambdas(const std::vector<double>& alpha, const MultiIndex& m);

// Least-squares slope of ys against xs.
double fitted_slope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace mixsmooth
