#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mixsmooth/commands.hpp"
#include "mixsmooth/config.hpp"

namespace {

struct Common {
    std::string config;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out;
    std::vector<std::string> sets;
    bool print_config = false;
};

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--config", c.config, "config file (key = value lines)");
    sub->add_option("--seed", c.seed, "random seed")->each([&c](const std::string&) { c.seed_set = true; });
    sub->add_option("--out", c.out, "output directory");
    sub->add_option("--set", c.sets, "override one key, key=value")->take_all();
    sub->add_flag("--print-config", c.print_config, "print the effective config and exit");
}

mixsmooth::ExperimentConfig build(const Common& c)
{
    mixsmooth::ExperimentConfig cfg = c.config.empty() ? mixsmooth::ExperimentConfig{} : mixsmooth::load_config(c.config);
    for (const auto& kv : c.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        mixsmooth::set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (c.seed_set)
        cfg.seed = c.seed;
    if (!c.out.empty())
        cfg.out = c.out;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"mixed-smoothness extension toolkit"};
    app.require_subcommand(0, 1);
    Common top;
    app.add_flag("--print-config", top.print_config, "print the default config and exit");

    Common cv, ce, cn;
    bool with_extension = false;
    auto* verify = app.add_subcommand("verify", "run the verification suites");
    add_common(verify, cv);
    auto* extend = app.add_subcommand("extend", "compute and sample the extension of one catalog function");
    add_common(extend, ce);
    auto* norms = app.add_subcommand("norms", "estimate the cube norms of one catalog function");
    add_common(norms, cn);
    norms->add_flag("--extension", with_extension, "add the whole-space ratio table");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(verify) || app.got_subcommand(extend) || app.got_subcommand(norms)) {
            const Common& c = app.got_subcommand(verify) ? cv : app.got_subcommand(extend) ? ce : cn;
            const auto cfg = build(c);
            if (c.print_config) {
                std::cout << mixsmooth::serialize_config(cfg);
                return 0;
            }
            if (app.got_subcommand(verify))
                return mixsmooth::cmd_verify(cfg, std::cout);
            if (app.got_subcommand(extend))
                return mixsmooth::cmd_extend(cfg, std::cout);
            return mixsmooth::cmd_norms(cfg, with_extension, std::cout);
        }
        if (top.print_config) {
            std::cout << mixsmooth::serialize_config(mixsmooth::ExperimentConfig{});
            return 0;
        }
        std::cout << app.help();
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
