#pragma once

// Flat key = value experiment configuration.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mixsmooth/analysis.hpp"
#include "mixsmooth/core_index.hpp"

namespace mixsmooth {

struct ExperimentConfig {
    std::size_t d = 1;
    std::vector<double> alpha{1.5};  // one value is broadcast to all axes
    double p = 2.0;
    double theta = 2.0;              // "inf" allowed
    std::vector<int> m;              // empty: m = l(alpha)
    int K = -1;                      // -1: 5 for d = 1, 4 otherwise
    std::string function = "sin_tensor";
    std::vector<std::string> functions{"all"};
    int quad_nodes = 0;              // 0: automatic projection rule
    int modulus_nodes = 4;
    int modulus_density = 8;
    int xi_nodes = 3;
    int xi_tail_blocks = 4;
    std::vector<double> shift_grid{0.25, 0.5, 0.75, 1.0};
    int norm_kmax = 8;
    std::vector<int> main_K;         // empty: {K-1, K}
    std::vector<double> grid_lo{-0.5};
    std::vector<double> grid_hi{1.5};
    int grid_n = 65;
    std::vector<int> lambda;         // derivative column for extend; empty: none
    std::uint64_t seed = 1;
    int trials = 20;
    int random_oracles = 100;
    std::vector<std::string> suites{"all"};
    std::string out = "out";
    bool inject_class_violation = false;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

    // Validates and fills the derived defaults; throws std::invalid_argument.
    void validate() const;
    std::vector<double> alpha_vec() const;
    MultiIndex m_vec() const;
    int K_value() const;
    std::vector<int> main_K_values() const;
    SmoothnessParams params() const;
    NormOptions norm_options() const;
    std::vector<double> grid_lo_vec() const;
    std::vector<double> grid_hi_vec() const;
    bool wants_suite(const std::string& name) const;
};

// Unknown keys, malformed values and duplicate keys throw std::invalid_argument
// with the offending line number.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
// Every key in a fixed order; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& c);
// Applies one "key=value" override.
void set_config_value(ExperimentConfig& c, const std::string& key, const std::string& value);

std::string format_double(double v);

}  // namespace mixsmooth
