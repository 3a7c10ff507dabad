#include "mixsmooth/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mixsmooth/catalog.hpp"
#include "mixsmooth/quasiinterp.hpp"

namespace mixsmooth {

std::string format_double(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    if (trim(s).empty())
        return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(trim(item));
    return out;
}

double parse_double(const std::string& key, const std::string& s)
{
    if (s == "inf")
        return std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument(key + ": not a number: '" + s + "'");
    return v;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& s)
{
    Int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument(key + ": not an integer: '" + s + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& s)
{
    if (s == "true" || s == "1")
        return true;
    if (s == "false" || s == "0")
        return false;
    throw std::invalid_argument(key + ": expected true or false, got '" + s + "'");
}

std::vector<double> doubles(const std::string& key, const std::string& s)
{
    std::vector<double> out;
    for (const auto& t : split_list(s))
        out.push_back(parse_double(key, t));
    return out;
}

std::vector<int> ints(const std::string& key, const std::string& s)
{
    std::vector<int> out;
    for (const auto& t : split_list(s))
        out.push_back(parse_int<int>(key, t));
    return out;
}

template <class T>
std::string join(const std::vector<T>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ",";
        if constexpr (std::is_same_v<T, double>)
            out += format_double(v[i]);
        else if constexpr (std::is_same_v<T, std::string>)
            out += v[i];
        else
            out += std::to_string(v[i]);
    }
    return out;
}

std::vector<double> broadcast(const std::vector<double>& v, std::size_t d, const char* key)
{
    if (v.size() == 1)
        return std::vector<double>(d, v[0]);
    if (v.size() != d)
        throw std::invalid_argument(std::string(key) + ": expected 1 or d values");
    return v;
}

const std::vector<std::string> kSuites{"core_index", "splines", "polyproj", "quasiinterp", "analysis", "extension",
                                       "main_theorem"};

}  // namespace

void set_config_value(ExperimentConfig& c, const std::string& key, const std::string& raw)
{
    const std::string v = trim(raw);
    if (key == "d")
        c.d = parse_int<std::size_t>(key, v);
    else if (key == "alpha")
        c.alpha = doubles(key, v);
    else if (key == "p")
        c.p = parse_double(key, v);
    else if (key == "theta")
        c.theta = parse_double(key, v);
    else if (key == "m")
        c.m = ints(key, v);
    else if (key == "K")
        c.K = parse_int<int>(key, v);
    else if (key == "function")
        c.function = v;
    else if (key == "functions")
        c.functions = split_list(v);
    else if (key == "quad_nodes")
        c.quad_nodes = parse_int<int>(key, v);
    else if (key == "modulus_nodes")
        c.modulus_nodes = parse_int<int>(key, v);
    else if (key == "modulus_density")
        c.modulus_density = parse_int<int>(key, v);
    else if (key == "xi_nodes")
        c.xi_nodes = parse_int<int>(key, v);
    else if (key == "xi_tail_blocks")
        c.xi_tail_blocks = parse_int<int>(key, v);
    else if (key == "shift_grid")
        c.shift_grid = doubles(key, v);
    else if (key == "norm_kmax")
        c.norm_kmax = parse_int<int>(key, v);
    else if (key == "main_K")
        c.main_K = ints(key, v);
    else if (key == "grid_lo")
        c.grid_lo = doubles(key, v);
    else if (key == "grid_hi")
        c.grid_hi = doubles(key, v);
    else if (key == "grid_n")
        c.grid_n = parse_int<int>(key, v);
    else if (key == "lambda")
        c.lambda = ints(key, v);
    else if (key == "seed")
        c.seed = parse_int<std::uint64_t>(key, v);
    else if (key == "trials")
        c.trials = parse_int<int>(key, v);
    else if (key == "random_oracles")
        c.random_oracles = parse_int<int>(key, v);
    else if (key == "suites")
        c.suites = split_list(v);
    else if (key == "out")
        c.out = v;
    else if (key == "inject_class_violation")
        c.inject_class_violation = parse_bool(key, v);
    else
        throw std::invalid_argument("unknown config key '" + key + "'");
}

ExperimentConfig parse_config(const std::string& text)
{
    ExperimentConfig c;
    std::istringstream in(text);
    std::string line;
    std::set<std::string> seen;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (!seen.insert(key).second)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        try {
            set_config_value(c, key, line.substr(eq + 1));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c)
{
    std::ostringstream o;
    o << "d = " << c.d << "\n";
    o << "alpha = " << join(c.alpha) << "\n";
    o << "p = " << format_double(c.p) << "\n";
    o << "theta = " << format_double(c.theta) << "\n";
    o << "m = " << join(c.m) << "\n";
    o << "K = " << c.K << "\n";
    o << "function = " << c.function << "\n";
    o << "functions = " << join(c.functions) << "\n";
    o << "quad_nodes = " << c.quad_nodes << "\n";
    o << "modulus_nodes = " << c.modulus_nodes << "\n";
    o << "modulus_density = " << c.modulus_density << "\n";
    o << "xi_nodes = " << c.xi_nodes << "\n";
    o << "xi_tail_blocks = " << c.xi_tail_blocks << "\n";
    o << "shift_grid = " << join(c.shift_grid) << "\n";
    o << "norm_kmax = " << c.norm_kmax << "\n";
    o << "main_K = " << join(c.main_K) << "\n";
    o << "grid_lo = " << join(c.grid_lo) << "\n";
    o << "grid_hi = " << join(c.grid_hi) << "\n";
    o << "grid_n = " << c.grid_n << "\n";
    o << "lambda = " << join(c.lambda) << "\n";
    o << "seed = " << c.seed << "\n";
    o << "trials = " << c.trials << "\n";
    o << "random_oracles = " << c.random_oracles << "\n";
    o << "suites = " << join(c.suites) << "\n";
    o << "out = " << c.out << "\n";
    o << "inject_class_violation = " << (c.inject_class_violation ? "true" : "false") << "\n";
    return o.str();
}

std::vector<double> ExperimentConfig::alpha_vec() const
{
    return broadcast(alpha, d, "alpha");
}

MultiIndex ExperimentConfig::m_vec() const
{
    if (m.empty())
        return l_of_alpha(alpha_vec());
    if (m.size() == 1)
        return MultiIndex(d, m[0]);
    if (m.size() != d)
        throw std::invalid_argument("m: expected 1 or d values");
    return MultiIndex(m);
}

int ExperimentConfig::K_value() const
{
    return K >= 0 ? K : (d == 1 ? 5 : 4);
}

std::vector<int> ExperimentConfig::main_K_values() const
{
    if (!main_K.empty())
        return main_K;
    const int k = K_value();
    return k > 0 ? std::vector<int>{k - 1, k} : std::vector<int>{k};
}

SmoothnessParams ExperimentConfig::params() const
{
    return SmoothnessParams::make(alpha_vec(), p, theta);
}

NormOptions ExperimentConfig::norm_options() const
{
    NormOptions o;
    o.kmax = norm_kmax;
    o.modulus.inner = {modulus_nodes, modulus_density};
    o.modulus.xi_nodes = xi_nodes;
    o.modulus.xi_tail_blocks = xi_tail_blocks;
    o.modulus.shift_fractions = shift_grid;
    return o;
}

std::vector<double> ExperimentConfig::grid_lo_vec() const
{
    return broadcast(grid_lo, d, "grid_lo");
}

std::vector<double> ExperimentConfig::grid_hi_vec() const
{
    return broadcast(grid_hi, d, "grid_hi");
}

bool ExperimentConfig::wants_suite(const std::string& name) const
{
    return std::find(suites.begin(), suites.end(), "all") != suites.end()
           || std::find(suites.begin(), suites.end(), name) != suites.end();
}

void ExperimentConfig::validate() const
{
    if (d < 1 || d > 4)
        throw std::invalid_argument("d must be in 1..4");
    const SmoothnessParams sp = params();
    const MultiIndex mm = m_vec();
    check_degree_pair(sp.l, mm);
    if (K < -1)
        throw std::invalid_argument("K must be >= 0 (or -1 for the default)");
    for (int k : main_K_values())
        if (k < 0)
            throw std::invalid_argument("main_K entries must be >= 0");
    if (quad_nodes < 0 || modulus_nodes < 1 || modulus_density < 1 || xi_nodes < 1 || xi_tail_blocks < 0)
        throw std::invalid_argument("quadrature settings out of range");
    if (shift_grid.empty())
        throw std::invalid_argument("shift_grid must not be empty");
    for (double s : shift_grid)
        if (!(s > 0.0 && s <= 1.0))
            throw std::invalid_argument("shift_grid fractions must lie in (0, 1]");
    if (norm_kmax < 1)
        throw std::invalid_argument("norm_kmax must be >= 1");
    const auto lo = grid_lo_vec(), hi = grid_hi_vec();
    for (std::size_t j = 0; j < d; ++j)
        if (!(hi[j] > lo[j]))
            throw std::invalid_argument("grid_hi must exceed grid_lo on every axis");
    if (grid_n < 2)
        throw std::invalid_argument("grid_n must be >= 2");
    if (!lambda.empty() && lambda.size() != 1 && lambda.size() != d)
        throw std::invalid_argument("lambda: expected 1 or d values");
    if (trials < 1 || random_oracles < 1)
        throw std::invalid_argument("trials and random_oracles must be positive");
    catalog_entry(function, d);
    for (const auto& f : functions)
        if (f != "all")
            catalog_entry(f, d);
    for (const auto& s : suites)
        if (s != "all" && std::find(kSuites.begin(), kSuites.end(), s) == kSuites.end())
            throw std::invalid_argument("unknown suite '" + s + "'");
}

}  // namespace mixsmooth
