#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "svar/pipeline.hpp"

namespace {

// Every subcommand funnels into the same stage runner the pipeline uses, so
// flag semantics and file formats are identical either way.
struct StageArgs {
    svar::StageParams params;
    std::string out_dir = ".";
};

void add_param_option(CLI::App* cmd, StageArgs& args, const std::string& flag,
                      const std::string& key, const std::string& help) {
    auto holder = std::make_shared<std::string>();
    cmd->add_option_function<std::string>(
        flag, [&args, key, holder](const std::string& v) { args.params[key] = v; }, help);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"survey-index, Bayesian VAR, and local-projection pipeline"};
    app.require_subcommand(1);

    std::uint64_t seed = 42;
    std::string out_dir = ".";
    int threads = 1;
    bool verbose = false;
    app.add_option("--seed", seed, "master seed");
    app.add_option("--out-dir", out_dir, "output directory");
    app.add_option("--threads", threads, "worker-count hint");
    app.add_flag("--verbose", verbose, "chatty progress output");

    std::map<std::string, StageArgs> stages;
    auto add_stage = [&](const std::string& name, const std::string& desc,
                         const std::vector<std::array<std::string, 3>>& options) {
        auto* cmd = app.add_subcommand(name, desc);
        cmd->fallthrough();  // let --seed / --out-dir appear after the subcommand
        auto& args = stages[name];
        for (const auto& [flag, key, help] : options)
            add_param_option(cmd, args, flag, key, help);
        return cmd;
    };

    add_stage("simulate", "generate ground-truth SVAR data",
              {{"--preset", "preset", "DGP preset (paper-like)"},
               {"--t", "t", "sample length"},
               {"--out", "out", "dataset CSV"},
               {"--shocks-out", "shocks-out", "true-shock CSV"},
               {"--lp-out", "lp-out", "LP-ready companion CSV"},
               {"--stage-seed", "seed", "stage-specific seed override"}});
    add_stage("indexes", "survey diffusion / uncertainty indexes",
              {{"--panel", "panel", "firm panel CSV"},
               {"--schema", "schema", "intensity label schema (key=value)"},
               {"--factor", "factor", "diffusion factor column"},
               {"--uncertainty", "uncertainty", "1 = round-number uncertainty index"},
               {"--base", "base", "roundness base"},
               {"--p0", "p0", "baseline round share"},
               {"--out", "out", "index CSV"}});
    add_stage("estimate", "reduced-form Bayesian VAR posterior",
              {{"--data", "data", "macro dataset CSV"},
               {"--lags", "lags", "lag order"},
               {"--delta", "delta", "prior mean of own first lag"},
               {"--lambda", "lambda", "overall tightness"},
               {"--optimize-lambda", "optimize-lambda", "1 = marginal-likelihood search"},
               {"--lambda-lo", "lambda-lo", "search lower bound"},
               {"--lambda-hi", "lambda-hi", "search upper bound"},
               {"--covid-correction", "covid-correction", "1 = estimate volatility profile"},
               {"--covid-onset", "covid-onset", "onset quarter (YYYYQn)"},
               {"--draws", "draws", "posterior draws"},
               {"--stage-seed", "seed", "stage-specific seed override"},
               {"--out", "out", "posterior bundle prefix"}});
    add_stage("identify", "sign/zero-restriction rotations",
              {{"--posterior", "posterior", "posterior bundle prefix"},
               {"--restrictions", "restrictions", "file or builtin:paper"},
               {"--accepted", "accepted", "target accepted rotations"},
               {"--max-tries", "max-tries", "rotation attempts per draw"},
               {"--data", "data", "dataset for shock extraction"},
               {"--shocks-out", "shocks-out", "median structural-shock CSV"},
               {"--stage-seed", "seed", "stage-specific seed override"},
               {"--out", "out", "drawset bundle prefix"}});
    add_stage("irf", "impulse responses with credible bands",
              {{"--drawset", "drawset", "drawset bundle prefix"},
               {"--horizon", "horizon", "max horizon"},
               {"--coverage", "coverage", "band coverage (0.68)"},
               {"--out", "out", "tidy IRF CSV"}});
    add_stage("hd", "historical decomposition at frozen parameters",
              {{"--drawset", "drawset", "drawset bundle prefix"},
               {"--data", "data", "full-span dataset CSV"},
               {"--out", "out", "tidy HD CSV"}});
    add_stage("girf", "recursive (Cholesky) generalized IRFs",
              {{"--data", "data", "dataset CSV, shock series first"},
               {"--lags", "lags", "lag order"},
               {"--delta", "delta", "prior mean of own first lag"},
               {"--lambda", "lambda", "overall tightness"},
               {"--optimize-lambda", "optimize-lambda", "1 = marginal-likelihood search"},
               {"--draws", "draws", "posterior draws"},
               {"--horizon", "horizon", "max horizon"},
               {"--coverage", "coverage", "band coverage"},
               {"--stage-seed", "seed", "stage-specific seed override"},
               {"--out", "out", "tidy GIRF CSV"}});
    add_stage("lp", "state-dependent local projections",
              {{"--data", "data", "CSV holding y/shock/z/s columns"},
               {"--y", "y", "dependent column"},
               {"--shock", "shock", "shock column"},
               {"--z", "z", "transition-probability column"},
               {"--s", "s", "tight-labor column (optional)"},
               {"--horizons", "horizons", "max horizon"},
               {"--lags", "lags", "dependent-variable lags"},
               {"--shock-lags", "shock-lags", "shock lags"},
               {"--nw", "nw", "HAC bandwidth or 'auto'"},
               {"--rho-d", "rho-d", "pandemic dummy decay"},
               {"--out", "out", "LP coefficient CSV"}});

    auto* run = app.add_subcommand("run", "run a declarative pipeline config");
    run->fallthrough();
    std::string config_path;
    run->add_option("--config", config_path, "pipeline config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            svar::PipelineConfig cfg = svar::load_pipeline_config(config_path);
            if (app.count("--out-dir")) cfg.out_dir = out_dir;
            if (app.count("--seed")) cfg.master_seed = seed;
            svar::run_pipeline(cfg);
            if (verbose) std::cout << "pipeline done, manifest at " << cfg.out_dir << "/manifest.txt\n";
            return 0;
        }
        for (auto& [name, args] : stages) {
            auto* cmd = app.get_subcommand(name);
            if (!cmd->parsed()) continue;
            auto written = svar::run_stage(name, args.params, out_dir, seed);
            if (verbose)
                for (const auto& f : written) std::cout << "wrote " << f << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
