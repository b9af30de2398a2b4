// Command-line front end for the simulation-kernel pipeline:
//   sim0    draw genomes and ground-truth outcomes
//   sim1    run perturbed trials and accumulate the similarity kernel
//   ml      benchmark standard vs kernelized learners
//   report  summarize an existing results.csv
#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "simkern/pipeline.hpp"

namespace {

struct CommonFlags {
    std::string config;
    std::string out_dir;
    std::string model;
    std::string scheme;
    std::uint64_t seed = 0;
    int workers = 0;
    bool has_seed = false;
    bool strict_scaling = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config, "configuration file of `key = value` lines");
    cmd->add_option("--out-dir", flags.out_dir, "output directory");
    cmd->add_option("--model", flags.model,
                    "model preset: radiation | boolean | network | custom-ode");
    cmd->add_option("--scheme", flags.scheme, "network perturbation scheme")
        ->check(CLI::IsMember({"less_noisy", "noisier"}));
    cmd->add_option("--seed", flags.seed, "master seed")->each([&](const std::string&) {
        flags.has_seed = true;
    });
    cmd->add_option("--workers", flags.workers, "worker thread count");
    cmd->add_flag("--strict-scaling", flags.strict_scaling,
                  "fit feature scaling on training statistics only");
}

simkern::PipelineConfig make_config(const CommonFlags& flags, int n_samples, int r_trials) {
    simkern::PipelineConfig cfg;
    if (!flags.config.empty()) simkern::load_config_file(cfg, flags.config);
    // flags override file values
    if (n_samples > 0) cfg.n_samples = n_samples;
    if (r_trials > 0) cfg.r_trials = r_trials;
    if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
    if (!flags.model.empty()) cfg.model = flags.model;
    if (!flags.scheme.empty()) cfg.scheme = flags.scheme;
    if (flags.has_seed) cfg.seed = flags.seed;
    if (flags.workers > 0) cfg.workers = flags.workers;
    if (flags.strict_scaling) cfg.strict_scaling = true;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulation-kernel pipeline"};
    app.require_subcommand(1);

    CommonFlags sim0_flags, sim1_flags, ml_flags, report_flags;
    int sim0_n = 0, sim1_n = 0, ml_n = 0;
    int sim1_r = 0;

    CLI::App* sim0 = app.add_subcommand("sim0", "generate ground-truth genomes and outcomes");
    add_common_flags(sim0, sim0_flags);
    sim0->add_option("-n,--samples", sim0_n, "number of samples N");

    CLI::App* sim1 = app.add_subcommand("sim1", "accumulate the similarity kernel over R trials");
    add_common_flags(sim1, sim1_flags);
    sim1->add_option("-n,--samples", sim1_n, "number of samples N");
    sim1->add_option("-r,--trials", sim1_r, "number of trials R");

    CLI::App* ml = app.add_subcommand("ml", "benchmark learners on the generated data");
    add_common_flags(ml, ml_flags);
    ml->add_option("-n,--samples", ml_n, "number of samples N");

    CLI::App* report = app.add_subcommand("report", "summarize results.csv");
    add_common_flags(report, report_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim0->parsed()) {
            simkern::cmd_sim0(make_config(sim0_flags, sim0_n, 0));
        } else if (sim1->parsed()) {
            simkern::cmd_sim1(make_config(sim1_flags, sim1_n, sim1_r));
        } else if (ml->parsed()) {
            simkern::cmd_ml(make_config(ml_flags, ml_n, 0));
        } else if (report->parsed()) {
            simkern::cmd_report(make_config(report_flags, 0, 0));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
