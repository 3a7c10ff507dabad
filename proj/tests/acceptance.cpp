// One line per acceptance criterion; exit status 1 if any line fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mixsmooth/commands.hpp"
#include "mixsmooth/config.hpp"
#include "mixsmooth/verify.hpp"

using namespace mixsmooth;

namespace {

// Largest ratio seen when these were recorded, plus margin; see the notes
// in README.md.
const std::map<std::size_t, double> kPinnedConstant{{1, 25.0}, {2, 500.0}};

int failures = 0;

void line(const std::string& id, const std::string& what, bool pass, const std::string& detail)
{
    std::printf("criterion %-4s %-4s %s  %s\n", id.c_str(), pass ? "PASS" : "FAIL", what.c_str(), detail.c_str());
    std::fflush(stdout);
    failures += pass ? 0 : 1;
}

struct Runs {
    std::map<std::string, SuiteResult> by_suite;

    const CheckResult& check(const std::string& suite, const std::string& name) const
    {
        for (const auto& c : by_suite.at(suite).checks)
            if (c.name == name)
                return c;
        throw std::runtime_error("no check " + suite + "/" + name);
    }
};

Runs run(const ExperimentConfig& cfg, const std::vector<std::string>& suites)
{
    Runs r;
    for (const auto& s : suites)
        r.by_suite.emplace(s, run_suite(s, cfg));
    return r;
}

ExperimentConfig config_for(std::size_t d)
{
    ExperimentConfig c;
    c.d = d;
    c.seed = 1;
    c.random_oracles = 100;
    c.validate();
    return c;
}

void report(const std::string& id, const std::string& what, const std::map<std::size_t, Runs>& runs,
            const std::vector<std::pair<std::string, std::string>>& checks, std::size_t d)
{
    bool pass = true;
    std::string detail;
    for (const auto& [suite, name] : checks) {
        const CheckResult& c = runs.at(d).check(suite, name);
        pass = pass && c.pass;
        std::string m = c.measured.dump();
        if (m.size() > 160)
            m = m.substr(0, 157) + "...";
        detail += name + "=" + m + " ";
    }
    line(id, what + " [d=" + std::to_string(d) + "]", pass, detail);
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main()
{
    const std::vector<std::string> suites{"splines", "polyproj", "quasiinterp", "analysis", "extension"};
    std::map<std::size_t, Runs> runs;
    for (std::size_t d : {1u, 2u})
        runs.emplace(d, run(config_for(d), suites));

    for (std::size_t d : {1u, 2u}) {
        report("1a", "refinement and mask sums", runs,
               {{"splines", "refinement_float"}, {"splines", "refinement_exact"}, {"splines", "mask_parity_sums_exact"}},
               d);
        report("1b", "partition of unity", runs, {{"splines", "partition_of_unity"}}, d);
        report("1c", "projector reproduction and kernel", runs,
               {{"polyproj", "projector_reproduction"}, {"polyproj", "projector_kernel"}}, d);
        report("1d", "tensorization and masked projector", runs,
               {{"polyproj", "tensorization_commutes"},
                {"polyproj", "masked_projector_factorizes"},
                {"extension", "masked_projector_factorization"}},
               d);
        report("1e", "telescoping and global/cube consistency", runs,
               {{"quasiinterp", "telescoping_sum"},
                {"quasiinterp", "U_form_matches_alternating_sum"},
                {"extension", "global_cube_consistency"}},
               d);
        report("1f", "global details in the boundary class", runs,
               {{"extension", "global_details_in_boundary_class"}}, d);
    }
    for (std::size_t d : {1u, 2u}) {
        report("2a", "Jackson slopes", runs, {{"quasiinterp", "jackson_slope"}}, d);
        report("2b", "Bernstein slopes", runs, {{"extension", "bernstein_slopes"}}, d);
        report("2c", "detail-derivative bound ratio", runs, {{"quasiinterp", "detail_derivative_bound_ratio"}}, d);
    }

    for (std::size_t d : {1u, 2u}) {
        ExperimentConfig c = config_for(d);
        const auto t0 = std::chrono::steady_clock::now();
        const TheoremReport r = main_theorem_experiment(c);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool finite = !r.summaries.empty(), stable = true;
        std::string worst;
        double worst_change = 0.0;
        for (const auto& s : r.summaries) {
            finite = finite && s.finite;
            stable = stable && s.stable;
            const auto& v = s.ratio_by_K;
            const double change = v.size() >= 2 ? v.back() / v[v.size() - 2] - 1.0 : 0.0;
            if (change > worst_change) {
                worst_change = change;
                worst = s.function + " lambda=" + s.lambda.str();
            }
        }
        const double pinned = kPinnedConstant.at(d);
        char buf[400];
        std::snprintf(buf, sizeof buf, "K=%s max ratio %.6g (pinned %.6g), largest last-step change %+.1f%% (%s), %.0fs",
                      [&] {
                          std::string s;
                          for (int k : c.main_K_values())
                              s += (s.empty() ? "" : ",") + std::to_string(k);
                          return s;
                      }()
                          .c_str(),
                      r.constant, pinned, 100.0 * worst_change, worst.empty() ? "-" : worst.c_str(), secs);
        line("3", "extension norm ratio [d=" + std::to_string(d) + "] finite", finite, buf);
        line("3", "extension norm ratio [d=" + std::to_string(d) + "] stable in K", stable, buf);
        line("3", "extension norm ratio [d=" + std::to_string(d) + "] below pinned constant", r.constant <= pinned,
             buf);
        line("3", "runtime budget [d=" + std::to_string(d) + "]", d != 2 || secs <= 600.0, buf);
    }

    for (std::size_t d : {1u, 2u}) {
        report("4", "embeddings", runs,
               {{"analysis", "averaged_below_sup_modulus"},
                {"analysis", "nikolskii_below_c4_besov"},
                {"analysis", "besov_prime_below_besov_ell"}},
               d);
        report("5", "difference-derivative bound", runs, {{"analysis", "difference_derivative_bound"}}, d);
    }

    {
        const auto base = std::filesystem::temp_directory_path() / "mixsmooth_acceptance";
        std::filesystem::remove_all(base);
        ExperimentConfig a = config_for(1), b = config_for(1);
        a.out = (base / "a").string();
        b.out = (base / "b").string();
        std::ostringstream sink;
        const int ea = cmd_verify(a, sink), eb = cmd_verify(b, sink);
        std::string ra = slurp(base / "a" / "verify_report.json"), rb = slurp(base / "b" / "verify_report.json");
        // the out key is the only intended difference
        const auto strip = [](std::string s, const std::string& dir) {
            for (auto pos = s.find(dir); pos != std::string::npos; pos = s.find(dir))
                s.erase(pos, dir.size());
            return s;
        };
        ra = strip(ra, a.out);
        rb = strip(rb, b.out);
        line("6", "verify report byte-identical across runs", ea == eb && !ra.empty() && ra == rb,
             "exit " + std::to_string(ea) + "/" + std::to_string(eb) + ", " + std::to_string(ra.size()) + " bytes");
    }

    std::printf("%d criterion line(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
