#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

#include "mixsmooth/catalog.hpp"
#include "mixsmooth/commands.hpp"
#include "mixsmooth/config.hpp"

using namespace mixsmooth;

namespace {

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            row.push_back(cell);
        if (!line.empty() && line.back() == ',')
            row.emplace_back();
        rows.push_back(row);
    }
    return rows;
}

std::filesystem::path scratch(const std::string& name)
{
    auto p = std::filesystem::temp_directory_path() / ("mixsmooth_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}

}  // namespace

TEST_SUITE("cli")
{
    TEST_CASE("catalog derivatives match central differences")
    {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> u(0.02, 0.98);
        for (std::size_t d : {1u, 2u})
            for (const auto& f : function_catalog(d)) {
                for (std::size_t j = 0; j < d; ++j) {
                    MultiIndex lam(d, 0);
                    lam[j] = 1;
                    if (!f.has_derivative(lam))
                        continue;
                    const ScalarFn df = f.derivative(lam);
                    for (int t = 0; t < 50; ++t) {
                        Point x(d);
                        for (double& v : x)
                            v = u(rng);
                        if (f.name.rfind("abs_pow", 0) == 0 && std::abs(x[j] - 0.5) < 1e-3)
                            continue;
                        const double h = 1e-5;
                        Point xp = x, xm = x;
                        xp[j] += h;
                        xm[j] -= h;
                        const double fd = (f(xp) - f(xm)) / (2 * h);
                        const double ex = df(x);
                        CHECK_MESSAGE(std::abs(fd - ex) <= 1e-5 * std::max(1.0, std::abs(ex)), f.name);
                    }
                }
                CHECK_THROWS_AS(f.derivative(f.max_derivative() + MultiIndex(d, 1)), std::invalid_argument);
            }
    }

    TEST_CASE("catalog smoothness tags")
    {
        const auto abs = catalog_entry("abs_pow", 1);
        CHECK(abs.smoothness(2.0)[0] == doctest::Approx(2.0));
        CHECK(abs.in_besov(std::vector<double>{1.5}, 2.0));
        CHECK_FALSE(catalog_entry("step", 1).in_besov(std::vector<double>{1.5}, 2.0));
        CHECK(catalog_entry("sin_tensor", 2).infinitely_smooth());
        CHECK_THROWS_AS(catalog_entry("nope", 1), std::invalid_argument);
        CHECK(catalog_entry("poly_mixed", 2).poly_degree() == MultiIndex{3, 3});
    }

    TEST_CASE("config parse and serialize round trip")
    {
        ExperimentConfig c;
        c.d = 2;
        c.alpha = {1.5, 0.75};
        c.theta = std::numeric_limits<double>::infinity();
        c.m = {2, 1};
        c.functions = {"sin_tensor", "abs_pow"};
        c.seed = 99;
        const std::string text = serialize_config(c);
        const ExperimentConfig back = parse_config(text);
        CHECK(back == c);
        CHECK(serialize_config(back) == text);
        CHECK(parse_config(serialize_config(ExperimentConfig{})) == ExperimentConfig{});
    }

    TEST_CASE("config errors")
    {
        CHECK_THROWS_WITH_AS(parse_config("d = 1\nbogus = 3\n"), doctest::Contains("line 2"), std::invalid_argument);
        CHECK_THROWS_AS(parse_config("d = 1\nd = 2\n"), std::invalid_argument);
        CHECK_THROWS_AS(parse_config("p = two\n"), std::invalid_argument);
        CHECK_THROWS_AS(parse_config("p = inf\n").validate(), std::invalid_argument);
        CHECK_THROWS_AS(parse_config("d = 2\nalpha = 1, 2, 3\n").validate(), std::invalid_argument);
        CHECK_THROWS_AS(parse_config("suites = nonsense\n").validate(), std::invalid_argument);
        const ExperimentConfig ok = parse_config("# comment\n\nd = 2\nalpha = 1.5\n");
        CHECK(ok.alpha_vec() == std::vector<double>{1.5, 1.5});
        CHECK(ok.m_vec() == MultiIndex{2, 2});
        CHECK(ok.K_value() == 4);
        CHECK(ok.main_K_values() == std::vector<int>{3, 4});
        ExperimentConfig s;
        set_config_value(s, "seed", "7");
        CHECK(s.seed == 7);
        CHECK_THROWS_AS(set_config_value(s, "nope", "1"), std::invalid_argument);
    }

    TEST_CASE("extend writes the documented CSV")
    {
        ExperimentConfig c;
        c.function = "sin_tensor";
        c.K = 5;
        c.grid_lo = {-0.5};
        c.grid_hi = {1.5};
        c.grid_n = 81;
        c.out = scratch("extend").string();
        std::ostringstream log;
        REQUIRE(cmd_extend(c, log) == 0);
        const auto rows = read_csv(std::filesystem::path(c.out) / "extend.csv");
        REQUIRE(rows.size() == 82);
        const std::vector<std::string> header{"x1", "value", "level_0", "level_1", "level_2",
                                              "level_3", "level_4", "level_5", "restriction_error"};
        CHECK(rows[0] == header);
        const auto meta = nlohmann::json::parse(slurp(std::filesystem::path(c.out) / "extension.json"));
        CHECK(meta["schema"] == 1);
        double max_restr = 0.0;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            double sum = 0.0;
            for (int k = 0; k <= 5; ++k)
                sum += std::stod(rows[i][2 + static_cast<std::size_t>(k)]);
            CHECK(sum == doctest::Approx(std::stod(rows[i][1])).epsilon(1e-10));
            if (!rows[i][8].empty())
                max_restr = std::max(max_restr, std::stod(rows[i][8]));
        }
        CHECK(max_restr <= meta["E_K_sup_error_on_grid"].get<double>());
        CHECK(max_restr <= 1e-10);
    }

    TEST_CASE("extend outside the support writes zeros")
    {
        ExperimentConfig c;
        c.K = 2;
        c.grid_lo = {5.0};
        c.grid_hi = {6.0};
        c.grid_n = 5;
        c.lambda = {1};
        c.out = scratch("outside").string();
        std::ostringstream log;
        REQUIRE(cmd_extend(c, log) == 0);
        CHECK(log.str().find("warning") != std::string::npos);
        const auto rows = read_csv(std::filesystem::path(c.out) / "extend.csv");
        CHECK(rows[0][rows[0].size() - 2] == "d_lambda_value");
        for (std::size_t i = 1; i < rows.size(); ++i)
            for (std::size_t k = 1; k + 1 < rows[i].size(); ++k)
                CHECK(std::stod(rows[i][k]) == 0.0);
    }

    TEST_CASE("single lambda value is broadcast")
    {
        ExperimentConfig c;
        c.d = 2;
        c.K = 1;
        c.grid_n = 3;
        c.lambda = {1};
        c.out = scratch("lambda").string();
        std::ostringstream log;
        REQUIRE(cmd_extend(c, log) == 0);
        const auto meta = nlohmann::json::parse(slurp(std::filesystem::path(c.out) / "extension.json"));
        CHECK(meta["lambda"] == nlohmann::json::array({1, 1}));
        c.lambda = {1, 0, 1};
        CHECK_THROWS_AS(cmd_extend(c, log), std::invalid_argument);
    }

    TEST_CASE("norms of zero and theta routing")
    {
        ExperimentConfig c;
        c.function = "zero";
        c.norm_kmax = 4;
        c.out = scratch("norms").string();
        std::ostringstream log;
        REQUIRE(cmd_norms(c, false, log) == 0);
        auto j = nlohmann::json::parse(slurp(std::filesystem::path(c.out) / "norms.json"));
        CHECK(j["besov_prime"]["total"] == 0.0);
        CHECK(j["nikolskii_prime"]["total"] == 0.0);
        c.function = "sin_tensor";
        c.theta = std::numeric_limits<double>::infinity();
        REQUIRE(cmd_norms(c, false, log) == 0);
        j = nlohmann::json::parse(slurp(std::filesystem::path(c.out) / "norms.json"));
        CHECK(j["theta_inf_routed_to_H"] == true);
        CHECK(j["besov_prime"]["routed_to_nikolskii"] == true);
    }

    TEST_CASE("ratio table columns")
    {
        ExperimentConfig c;
        c.function = "exp_smooth";
        c.K = 3;
        c.norm_kmax = 5;
        c.out = scratch("ratio").string();
        std::ostringstream log;
        REQUIRE(cmd_norms(c, true, log) == 0);
        const auto j = nlohmann::json::parse(slurp(std::filesystem::path(c.out) / "norms.json"));
        const auto& rows = j["extension_ratio_table"]["rows"];
        REQUIRE(!rows.empty());
        for (const auto& r : rows) {
            CHECK(r.contains("lambda"));
            CHECK(r.contains("J"));
            CHECK(r["ratio"].get<double>() == doctest::Approx(r["lhs"].get<double>() / r["rhs"].get<double>()));
        }
    }
}
