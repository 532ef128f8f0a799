// blocksplit command-line driver: simulate, analyze, plot, verify, matrix.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "blocksplit/cli.hpp"
#include "blocksplit/errors.hpp"
#include "blocksplit/spectral.hpp"
#include "blocksplit/verify.hpp"

namespace bs = blocksplit;
using nlohmann::json;

namespace {

constexpr int exit_verify_failed = 1;
constexpr int exit_parameter = 2;
constexpr int exit_io = 3;

struct Options {
    std::string config;
    std::string strategy = "even";
    int block_size = 240;
    std::optional<int> batch;
    std::string batch_range;
    std::int64_t insertions = 200000;
    int runs = 10;
    std::uint64_t seed = 1;
    std::string seeding = "empty";
    std::string out = "-";
    std::string overlay = "none";
    bool relaxed_uneven = false;
    int threads = 0;
    std::vector<std::string> inputs;
    std::string level = "quick";
};

/// Fills every option the command line left unset from the JSON config.
void apply_config(Options& o, const CLI::App& app) {
    if (o.config.empty()) return;
    json cfg;
    try {
        cfg = json::parse(bs::read_text_file(o.config));
    } catch (const json::parse_error& e) {
        throw bs::ParameterError("config " + o.config + ": " + e.what());
    }
    if (!cfg.is_object()) throw bs::ParameterError("config must be a JSON object");
    const auto unset = [&](const std::string& flag) {
        const auto* opt = app.get_option_no_throw("--" + flag);
        return opt == nullptr || opt->count() == 0;
    };
    const auto take = [&](const char* key, const std::string& flag, auto& field) {
        if (cfg.contains(key) && unset(flag)) cfg.at(key).get_to(field);
    };
    try {
        take("strategy", "strategy", o.strategy);
        take("block_size", "block-size", o.block_size);
        if (cfg.contains("batch") && unset("batch")) o.batch = cfg.at("batch").get<int>();
        take("batch_range", "batch-range", o.batch_range);
        take("insertions", "insertions", o.insertions);
        take("runs", "runs", o.runs);
        take("seed", "seed", o.seed);
        take("seeding", "seeding", o.seeding);
        take("out", "out", o.out);
        take("overlay", "overlay", o.overlay);
        take("relaxed_uneven", "relaxed-uneven", o.relaxed_uneven);
        take("threads", "threads", o.threads);
        take("level", "level", o.level);
        if (cfg.contains("inputs") && o.inputs.empty()) cfg.at("inputs").get_to(o.inputs);
    } catch (const json::exception& e) {
        throw bs::ParameterError("config " + o.config + ": " + e.what());
    }
}

std::vector<int> batch_values(const Options& o) {
    if (o.batch && !o.batch_range.empty()) {
        throw bs::ParameterError("give either --batch or --batch-range, not both");
    }
    if (o.batch) return {*o.batch};
    if (!o.batch_range.empty()) return bs::parse_range(o.batch_range);
    throw bs::ParameterError("one of --batch or --batch-range is required");
}

bs::SeedingMode seeding_mode(const std::string& name) {
    if (name == "empty") return bs::SeedingMode::empty_with_dummy;
    if (name == "paper") return bs::SeedingMode::paper_seed;
    throw bs::ParameterError("seeding must be 'empty' or 'paper', got '" + name + "'");
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") std::cout << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Block splitting strategies under batched random insertions"};
    app.require_subcommand(1);
    Options o;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "JSON file with default option values");
        sub->add_option("--block-size,-B", o.block_size, "block capacity B");
        sub->add_option("--out,-o", o.out, "output path ('-' for standard output)");
    };
    const auto add_batches = [&](CLI::App* sub) {
        sub->add_option("--batch,-r", o.batch, "single batch size r");
        sub->add_option("--batch-range", o.batch_range, "batch sizes lo:hi[:step]");
    };

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo sweep over batch sizes, CSV output");
    add_common(simulate);
    add_batches(simulate);
    simulate->add_option("--strategy", o.strategy,
                         "even, deferred_even, uneven_regime1, uneven_regime2 or recommended");
    simulate->add_option("--insertions,-n", o.insertions, "keys inserted per run");
    simulate->add_option("--runs", o.runs, "independent runs per batch size");
    simulate->add_option("--seed", o.seed, "base seed; run k uses seed + k");
    simulate->add_option("--seeding", o.seeding, "initial state: empty or paper");
    simulate->add_flag("--relaxed-uneven", o.relaxed_uneven, "allow odd r in uneven regime II");
    simulate->add_option("--threads", o.threads, "worker threads (0 = all cores)");

    auto* analyze = app.add_subcommand("analyze", "Spectral prediction and closed forms, CSV output");
    add_common(analyze);
    add_batches(analyze);

    auto* plot = app.add_subcommand("plot", "Render simulation CSVs to SVG");
    add_common(plot);
    plot->add_option("inputs", o.inputs, "simulation CSV files");
    plot->add_option("--overlay", o.overlay, "none, lemma61 or table1");

    auto* verify = app.add_subcommand("verify", "Run the verification suite");
    verify->add_option("--level", o.level, "quick or full");
    verify->add_option("--threads", o.threads, "worker threads for sweeps (0 = all cores)");
    verify->add_option("--config", o.config, "JSON file with default option values");

    auto* matrix = app.add_subcommand("matrix", "Write the transition matrix A(B,r) as CSV");
    add_common(matrix);
    matrix->add_option("--batch,-r", o.batch, "batch size r");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_parameter;
    }

    try {
        if (simulate->parsed()) {
            apply_config(o, *simulate);
            bs::SweepSpec spec;
            spec.strategy = bs::parse_strategy(o.strategy);
            spec.block_size = o.block_size;
            spec.r_values = batch_values(o);
            spec.total_insertions = o.insertions;
            spec.runs = o.runs;
            spec.base_seed = o.seed;
            spec.seeding = seeding_mode(o.seeding);
            spec.uneven2_mode = o.relaxed_uneven ? bs::Uneven2Mode::relaxed : bs::Uneven2Mode::exact;
            spec.threads = o.threads;
            emit(bs::cmd_simulate(spec, o.out), o.out);
        } else if (analyze->parsed()) {
            apply_config(o, *analyze);
            emit(bs::cmd_analyze(o.block_size, batch_values(o), o.out), o.out);
        } else if (plot->parsed()) {
            apply_config(o, *plot);
            emit(bs::cmd_plot(o.inputs, o.block_size, bs::parse_overlay(o.overlay), o.out), o.out);
        } else if (verify->parsed()) {
            apply_config(o, *verify);
            bs::VerifyLevel level;
            if (o.level == "quick") {
                level = bs::VerifyLevel::quick;
            } else if (o.level == "full") {
                level = bs::VerifyLevel::full;
            } else {
                throw bs::ParameterError("level must be 'quick' or 'full'");
            }
            bs::VerifyOptions vo;
            vo.threads = o.threads;
            return bs::cmd_verify(level, std::cout, vo) == 0 ? 0 : exit_verify_failed;
        } else if (matrix->parsed()) {
            apply_config(o, *matrix);
            if (!o.batch) throw bs::ParameterError("--batch is required");
            const auto a = bs::build_matrix(bs::SplitParams(o.block_size, *o.batch));
            const std::string path = o.out.empty() || o.out == "-" ? "/dev/stdout" : o.out;
            bs::write_matrix_csv(a, path);
        }
    } catch (const bs::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    } catch (const bs::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    } catch (const bs::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_parameter;
    }
    return 0;
}
