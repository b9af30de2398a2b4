#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "simkern/csv.hpp"
#include "simkern/errors.hpp"
#include "simkern/harness.hpp"
#include "simkern/models.hpp"
#include "simkern/similarity.hpp"

namespace simkern {

struct PipelineConfig {
    std::string model = "network";
    int n_samples = 40;  // N
    int r_trials = 5;    // R
    std::uint64_t seed = 1;
    int workers = 1;
    std::string out_dir = ".";
    std::string scheme = "less_noisy";
    bool strict_scaling = false;
    int repetitions = 10;
    std::string kernel_file;  // defaults to <out_dir>/SimilarityMatrixfinal.csv

    void validate() const {
        if (n_samples < 4) throw ConfigError("N must be >= 4");
        if (r_trials < 1) throw ConfigError("R must be >= 1");
        if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
        if (workers < 1) throw ConfigError("workers must be >= 1");
        parse_scheme(scheme);
        make_model(model);
    }

    std::string path(const std::string& file) const {
        return (std::filesystem::path(out_dir) / file).string();
    }
};

// Flat `key = value` configuration text; '#' starts a comment line.
inline std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos || line[a] == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected `key = value`");
        auto trim = [](std::string s) {
            std::size_t b = s.find_first_not_of(" \t\r");
            std::size_t e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        kv[key] = value;
    }
    return kv;
}

inline void apply_config_entry(PipelineConfig& cfg, const std::string& key,
                               const std::string& value) {
    try {
        if (key == "model")
            cfg.model = value;
        else if (key == "n" || key == "N" || key == "samples")
            cfg.n_samples = std::stoi(value);
        else if (key == "r" || key == "R" || key == "trials")
            cfg.r_trials = std::stoi(value);
        else if (key == "seed")
            cfg.seed = std::stoull(value);
        else if (key == "workers")
            cfg.workers = std::stoi(value);
        else if (key == "out_dir")
            cfg.out_dir = value;
        else if (key == "scheme")
            cfg.scheme = value;
        else if (key == "strict_scaling")
            cfg.strict_scaling = value == "true" || value == "1";
        else if (key == "ml.repetitions")
            cfg.repetitions = std::stoi(value);
        else if (key == "ml.kernel_file")
            cfg.kernel_file = value;
        else
            throw ConfigError("unknown configuration key `" + key + "`");
    } catch (const std::invalid_argument&) {
        throw ConfigError("malformed value `" + value + "` for key `" + key + "`");
    } catch (const std::out_of_range&) {
        throw ConfigError("out-of-range value `" + value + "` for key `" + key + "`");
    }
}

inline void load_config_file(PipelineConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file `" + path + "`");
    std::ostringstream text;
    text << in.rdbuf();
    for (const auto& [key, value] : parse_config_text(text.str()))
        apply_config_entry(cfg, key, value);
}

namespace detail {

inline void parallel_for(std::size_t count, int workers,
                         const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace detail

// Ground-truth stage: draw N genomes, simulate each once, and write
// Sim0Genomes.csv (header + one feature row per sample), Sim0Output.csv
// (one outcome per row), and the per-sample genome key files.
inline void cmd_sim0(const PipelineConfig& cfg, std::ostream& log = std::cout) {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);
    auto model = make_model(cfg.model, parse_scheme(cfg.scheme));

    const std::size_t n = static_cast<std::size_t>(cfg.n_samples);
    std::vector<std::vector<std::string>> genome_rows(n);
    std::vector<std::vector<std::string>> outcome_rows(n);
    std::vector<std::string> keys(n);

    detail::parallel_for(n, cfg.workers, [&](std::size_t i) {
        ParamAssignment genome = model->draw_genome(cfg.seed, static_cast<int>(i));
        for (double v : model->features(genome)) genome_rows[i].push_back(format_double(v));
        outcome_rows[i] = {format_double(model->outcome(genome))};
        keys[i] = render(model->genome_spec(), genome);
    });

    write_table_csv(cfg.path("Sim0Genomes.csv"), model->feature_names(), genome_rows);
    {
        std::ofstream out(cfg.path("Sim0Output.csv"));
        if (!out) throw ConfigError("cannot open Sim0Output.csv for writing");
        for (const auto& row : outcome_rows) out << row[0] << '\n';
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::ofstream out(cfg.path("genome" + std::to_string(i + 1) + "_key"));
        out << keys[i];
    }
    for (std::size_t i = 0; i < n; ++i)
        log << "sim0 sample " << (i + 1) << " seed "
            << derive_seed(cfg.seed, {hash_str("genome"), static_cast<std::uint64_t>(i)}) << "\n";
}

// Kernel stage: R perturbed trials, running-mean accumulation, per-trial
// snapshots from trial 3, the final alias, and the convergence curve.
inline SimilarityKernel cmd_sim1(const PipelineConfig& cfg, std::ostream& log = std::cout) {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);
    auto model = make_model(cfg.model, parse_scheme(cfg.scheme));
    const SimilarityConfig sim_cfg = model->similarity_config();

    const std::size_t n = static_cast<std::size_t>(cfg.n_samples);
    std::vector<ParamAssignment> genomes(n);
    for (std::size_t i = 0; i < n; ++i)
        genomes[i] = model->draw_genome(cfg.seed, static_cast<int>(i));

    SimilarityKernel kernel;
    Matrix previous;
    std::vector<std::vector<std::string>> convergence;
    for (int r = 1; r <= cfg.r_trials; ++r) {
        const std::uint64_t trial_seed =
            derive_seed(cfg.seed, {hash_str("trial"), static_cast<std::uint64_t>(r)});
        log << "sim1 trial " << r << " seed " << trial_seed << "\n";
        std::vector<TrialOutput> outputs(n);
        detail::parallel_for(n, cfg.workers, [&](std::size_t i) {
            try {
                outputs[i] = model->trial_output(genomes[i], trial_seed);
            } catch (const std::exception& e) {
                throw NonFiniteState("sample " + std::to_string(i + 1) + " trial " +
                                         std::to_string(r) + " (seed " +
                                         std::to_string(trial_seed) + "): " + e.what(),
                                     0.0);
            }
        });
        kernel.accumulate(trial_similarity_matrix(outputs, sim_cfg));
        if (r >= 2)
            convergence.push_back(
                {std::to_string(r), format_double_17(convergence_delta(kernel.K, previous))});
        if (r >= 3) write_matrix_csv(cfg.path("SimilarityMatrix" + std::to_string(r) + ".csv"),
                                     kernel.K);
        previous = kernel.K;
    }
    write_matrix_csv(cfg.path("SimilarityMatrixfinal.csv"), kernel.K);
    write_table_csv(cfg.path("convergence.csv"), {"r", "frobenius_delta"}, convergence);
    return kernel;
}

// Builds the learner dataset, preferring the sim0 artifacts on disk and
// recomputing them deterministically when absent.
inline Dataset build_dataset(const PipelineConfig& cfg, const Model& model) {
    Dataset data;
    data.feature_names = model.feature_names();
    data.kinds = model.feature_kinds();
    data.task = model.task();

    const std::string genomes_path = cfg.path("Sim0Genomes.csv");
    const std::string output_path = cfg.path("Sim0Output.csv");
    if (std::filesystem::exists(genomes_path) && std::filesystem::exists(output_path)) {
        CsvTable table = read_table_csv(genomes_path);
        if (table.header != data.feature_names)
            throw ConfigError("feature names in `" + genomes_path + "` do not match model `" +
                              model.name() + "`");
        data.x = Matrix(table.rows.size(), table.header.size());
        for (std::size_t i = 0; i < table.rows.size(); ++i)
            for (std::size_t c = 0; c < table.header.size(); ++c)
                data.x(i, c) = parse_double_field(table.rows[i][c]);
        std::ifstream in(output_path);
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) data.y.push_back(parse_double_field(line));
        if (data.y.size() != data.x.rows())
            throw ConfigError("Sim0Output.csv row count does not match Sim0Genomes.csv");
        return data;
    }

    const std::size_t n = static_cast<std::size_t>(cfg.n_samples);
    data.x = Matrix(n, data.feature_names.size());
    data.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        ParamAssignment genome = model.draw_genome(cfg.seed, static_cast<int>(i));
        std::vector<double> row = model.features(genome);
        for (std::size_t c = 0; c < row.size(); ++c) data.x(i, c) = row[c];
        data.y[i] = model.outcome(genome);
    }
    return data;
}

struct MlArtifacts {
    std::vector<ResultRecord> records;
    std::vector<BoxplotRow> boxplot;
    SelectBestResult best_standard, best_simkern;
};

// Benchmark stage: the precomputed kernel plus the feature dataset through
// the full repetition/subsample/algorithm/grid loop.
inline MlArtifacts cmd_ml(const PipelineConfig& cfg, std::ostream& log = std::cout) {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);
    auto model = make_model(cfg.model, parse_scheme(cfg.scheme));

    const std::string kernel_path =
        cfg.kernel_file.empty() ? cfg.path("SimilarityMatrixfinal.csv") : cfg.kernel_file;
    if (!std::filesystem::exists(kernel_path))
        throw KernelNotFound("no kernel at `" + kernel_path + "`; run sim1 first");
    Matrix kernel = read_matrix_csv(kernel_path);

    Dataset data = build_dataset(cfg, *model);
    if (kernel.rows() != data.n() || kernel.cols() != data.n())
        throw SizeMismatch("kernel size does not match sample count");

    ExperimentConfig ex;
    ex.repetitions = cfg.repetitions;
    ex.subsample_schedule = model->subsample_schedule();
    ex.algorithms = default_roster();
    ex.master_seed = cfg.seed;
    ex.strict_scaling = cfg.strict_scaling;
    ex.workers = cfg.workers;
    log << "ml master seed " << cfg.seed << " repetitions " << ex.repetitions << "\n";

    MlArtifacts out;
    out.records = run_experiment(data, &kernel, ex);
    out.boxplot = summarize_boxplot(out.records, ex.algorithms, ex.subsample_schedule);
    out.best_standard = select_best(out.records, "standard", ex.algorithms, ex.subsample_schedule);
    out.best_simkern = select_best(out.records, "simkern", ex.algorithms, ex.subsample_schedule);

    write_results_csv(cfg.path("results.csv"), out.records);
    write_boxplot_csv(cfg.path("boxplot.csv"), out.boxplot);
    write_lineplot_csv(cfg.path("lineplot.csv"), out.best_standard, out.best_simkern);
    return out;
}

// Human-readable summary of an existing results.csv.
inline void cmd_report(const PipelineConfig& cfg, std::ostream& out = std::cout) {
    auto model = make_model(cfg.model, parse_scheme(cfg.scheme));
    std::vector<ResultRecord> records = read_results_csv(cfg.path("results.csv"));
    const std::vector<std::string> roster = default_roster();
    const std::vector<double> schedule = model->subsample_schedule();

    out << "model " << cfg.model << ", " << records.size() << " records\n";
    out << "median test metric by algorithm and subsample:\n";
    for (const auto& row : summarize_boxplot(records, roster, schedule))
        out << "  " << row.algorithm << " s=" << format_double(row.subsample) << " median "
            << format_double(row.median) << " [q1 " << format_double(row.q1) << ", q3 "
            << format_double(row.q3) << "] outliers " << row.outliers.size() << "\n";
    SelectBestResult std_best = select_best(records, "standard", roster, schedule);
    SelectBestResult sk_best = select_best(records, "simkern", roster, schedule);
    out << "best standard algorithm: " << std_best.algorithm << "\n";
    out << "best simkern algorithm: " << sk_best.algorithm << "\n";
}

}  // namespace simkern
