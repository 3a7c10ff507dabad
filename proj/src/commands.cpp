#include "mixsmooth/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "mixsmooth/catalog.hpp"
#include "mixsmooth/extension.hpp"
#include "mixsmooth/verify.hpp"

namespace mixsmooth {

using nlohmann::json;

namespace {

std::filesystem::path prepare_out(const ExperimentConfig& cfg)
{
    std::filesystem::path dir(cfg.out);
    std::filesystem::create_directories(dir);
    return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << text;
}

json num(double v)
{
    if (std::isfinite(v))
        return v;
    return format_double(v);
}

}  // namespace

std::string csv_double(double v)
{
    return format_double(v);
}

json to_json(const NormReport& r)
{
    json parts = json::array();
    for (const auto& p : r.parts)
        parts.push_back({{"J", p.J.empty() ? std::string("Lp") : axis_set_label(p.J)}, {"value", num(p.value)}});
    return {{"norm", r.norm},
            {"total", num(r.total)},
            {"lp_term", num(r.lp_term)},
            {"parts", parts},
            {"kmax", r.kmax},
            {"theta", num(r.theta)},
            {"routed_to_nikolskii", r.routed_to_nikolskii},
            {"tail_upper_bound", r.tail_upper_bound},
            {"sup_lower_bound", r.sup_lower_bound},
            {"notes", r.notes}};
}

int cmd_verify(const ExperimentConfig& cfg, std::ostream& log)
{
    cfg.validate();
    const auto dir = prepare_out(cfg);
    const auto suites = run_suites(cfg);
    const json rep = verify_report(cfg, suites);
    write_text(dir / "verify_report.json", rep.dump(2) + "\n");
    bool all = true;
    for (const auto& s : suites) {
        for (const auto& c : s.checks)
            if (!c.pass)
                log << "FAIL " << s.name << "/" << c.name << " " << c.measured.dump() << "\n";
        log << (s.pass() ? "pass " : "FAIL ") << s.name << " (" << s.checks.size() << " checks)\n";
        all = all && s.pass();
    }
    log << "report: " << (dir / "verify_report.json").string() << "\n";
    return all ? 0 : 1;
}

int cmd_extend(const ExperimentConfig& cfg, std::ostream& log)
{
    cfg.validate();
    const std::size_t d = cfg.d;
    const SmoothnessParams sp = cfg.params();
    const MultiIndex m = cfg.m_vec();
    const int K = cfg.K_value();
    const CatalogFunction f = catalog_entry(cfg.function, d);
    const FunctionOracle fo = f.oracle();
    const std::optional<QuadSpec> quad =
        cfg.quad_nodes > 0 ? std::optional<QuadSpec>(QuadSpec{cfg.quad_nodes, 1}) : std::nullopt;

    std::vector<double> lo = cfg.grid_lo_vec(), hi = cfg.grid_hi_vec();
    const Box Q = support_box(m);
    bool disjoint = false;
    for (std::size_t j = 0; j < d; ++j)
        disjoint = disjoint || hi[j] < Q.lo(j) || lo[j] > Q.hi(j);
    json warnings = json::array();
    if (disjoint) {
        warnings.push_back("sample box lies outside the support box; the extension vanishes there");
    } else {
        bool clipped = false;
        for (std::size_t j = 0; j < d; ++j) {
            if (lo[j] < Q.lo(j) || hi[j] > Q.hi(j))
                clipped = true;
            lo[j] = std::max(lo[j], Q.lo(j));
            hi[j] = std::min(hi[j], Q.hi(j));
        }
        if (clipped)
            warnings.push_back("sample box clipped to the support box");
    }
    for (const auto& w : warnings)
        log << "warning: " << w.get<std::string>() << "\n";

    const ExtensionResult ext = extend(fo, sp, m, K, quad);
    const QuasiInterpolant EK = quasi_interp_E(MultiIndex(d, K), sp.l, m, fo, quad);
    std::optional<MultiIndex> lam;
    std::optional<PiecewisePoly> dext;
    if (!cfg.lambda.empty()) {
        lam = cfg.lambda.size() == 1 ? MultiIndex(d, cfg.lambda[0]) : MultiIndex(cfg.lambda);
        if (lam->size() != d)
            throw std::invalid_argument("lambda: expected 1 or d values");
        dext = ext.derivative(*lam);
    }

    std::string csv;
    for (std::size_t j = 0; j < d; ++j)
        csv += "x" + std::to_string(j + 1) + ",";
    csv += "value";
    for (int k = 0; k <= K; ++k)
        csv += ",level_" + std::to_string(k);
    if (lam)
        csv += ",d_lambda_value";
    csv += ",restriction_error\n";

    const int n = cfg.grid_n;
    double restr_max = 0.0, ek_err = 0.0, sum_err = 0.0;
    IntBox(MultiIndex(d, 0), MultiIndex(d, n - 1)).for_each([&](const MultiIndex& q) {
        Point x(d);
        bool inside = true;
        for (std::size_t j = 0; j < d; ++j) {
            x[j] = n == 1 ? lo[j] : lo[j] + (hi[j] - lo[j]) * q[j] / (n - 1);
            inside = inside && x[j] >= 0.0 && x[j] <= 1.0;
        }
        const double v = ext(x);
        double lsum = 0.0;
        for (std::size_t j = 0; j < d; ++j)
            csv += csv_double(x[j]) + ",";
        csv += csv_double(v);
        for (int k = 0; k <= K; ++k) {
            const double s = ext.shell(k, x);
            lsum += s;
            csv += "," + csv_double(s);
        }
        sum_err = std::max(sum_err, std::abs(lsum - v));
        if (lam)
            csv += "," + csv_double((*dext)(x));
        csv += ",";
        if (inside) {
            const double ek = EK(x);
            const double r = std::abs(v - ek);
            restr_max = std::max(restr_max, r);
            ek_err = std::max(ek_err, std::abs(fo(x) - ek));
            csv += csv_double(r);
        }
        csv += "\n";
    });

    const auto dir = prepare_out(cfg);
    write_text(dir / "extend.csv", csv);
    json meta{{"schema", 1},
              {"command", "extend"},
              {"function", f.name},
              {"grid_lo", lo},
              {"grid_hi", hi},
              {"grid_n", n},
              {"warnings", warnings},
              {"restriction_max_error", restr_max},
              {"E_K_sup_error_on_grid", ek_err},
              {"E_K_Lp_error", lp_error(fo, EK.cellwise(), sp.p)},
              {"level_sum_max_error", sum_err},
              {"extension", to_json(ext)}};
    if (lam)
        meta["lambda"] = lam->values();
    write_text(dir / "extension.json", meta.dump(2) + "\n");
    log << "wrote " << (dir / "extend.csv").string() << " and " << (dir / "extension.json").string() << "\n";
    return 0;
}

int cmd_norms(const ExperimentConfig& cfg, bool with_extension, std::ostream& log)
{
    cfg.validate();
    const SmoothnessParams sp = cfg.params();
    const NormOptions opts = cfg.norm_options();
    const CatalogFunction f = catalog_entry(cfg.function, cfg.d);
    const ScalarFn fn = f.oracle().fn;
    json rep{{"schema", 1}, {"command", "norms"}, {"function", f.name}};
    rep["besov_prime"] = to_json(besov_norm_prime(fn, sp, opts));
    const SmoothnessParams sph = SmoothnessParams::make(sp.alpha, sp.p, std::numeric_limits<double>::infinity(), sp.ell);
    rep["nikolskii_prime"] = to_json(nikolskii_norm_prime(fn, sph, opts));
    rep["theta_inf_routed_to_H"] = std::isinf(sp.theta);
    if (with_extension) {
        ExperimentConfig one = cfg;
        one.functions = {cfg.function};
        rep["extension_ratio_table"] = to_json(main_theorem_experiment(one));
    }
    const auto dir = prepare_out(cfg);
    write_text(dir / "norms.json", rep.dump(2) + "\n");
    log << "wrote " << (dir / "norms.json").string() << "\n";
    return 0;
}

}  // namespace mixsmooth
