// Command-line front end: one subcommand per CSV table.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tcmerton/commands.hpp"

namespace {

struct Options {
    std::string config;
    std::string out;
    unsigned workers = 0;
    std::vector<std::string> overrides;
};

tcmerton::RunConfig load(const Options& opt) {
    std::ifstream in(opt.config, std::ios::binary);
    if (!in) throw tcmerton::Error(tcmerton::ErrorKind::ParseError, "cannot read " + opt.config);
    std::ostringstream text;
    text << in.rdbuf();
    auto doc = tcmerton::parse_ini(text.str());
    for (const auto& o : opt.overrides) tcmerton::apply_override(doc, o);
    auto cfg = tcmerton::build_config(doc);
    if (!opt.out.empty()) cfg.output_dir = opt.out;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Equilibrium consumption and investment under non-exponential discounting"};
    app.require_subcommand(1);

    Options opt;
    const char* names[] = {"coeffs", "solve-finite", "solve-infinite", "baseline", "verify", "demo-inconsistency"};
    const char* help[] = {
        "HJB coefficients of the discount function",
        "finite-horizon (f, g) solution and consumption fraction",
        "stationary equilibrium candidates and acceptance flags",
        "Merton reference at the long-run discount rate",
        "integral-equation, Monte Carlo and identity checks",
        "naive plans of several selves against one another",
    };
    for (std::size_t i = 0; i < std::size(names); ++i) {
        auto* sub = app.add_subcommand(names[i], help[i]);
        sub->add_option("--config", opt.config, "INI configuration file")->required();
        sub->add_option("--out", opt.out, "output directory (overrides output.dir)");
        sub->add_option("--workers", opt.workers, "worker threads for simulation (0: auto)");
        sub->add_option("--set", opt.overrides, "override a key, section.key=value");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : tcmerton::kExitInvalidInput;
    }

    tcmerton::RunConfig cfg;
    try {
        cfg = load(opt);
    } catch (const tcmerton::Error& e) {
        std::cerr << e.what() << "\n";
        return tcmerton::kExitInvalidInput;
    }
    return tcmerton::dispatch(app.get_subcommands().front()->get_name(), cfg, opt.workers, std::cout, std::cerr);
}
