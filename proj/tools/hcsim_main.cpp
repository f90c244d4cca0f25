// hcsim: batch front end for the Hadamard-CS image transmission simulator.
//
// Pipeline: gen-mask -> train -> design -> sweep -> report. Every command is
// deterministic given the config file and master seed; all outputs carry the
// config hash in a header comment.

#include "hcs/config.hpp"
#include "hcs/corpus.hpp"
#include "hcs/errors.hpp"
#include "hcs/evaluation.hpp"
#include "hcs/io.hpp"
#include "hcs/rng.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <thread>

namespace fs = std::filesystem;

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_override;
    std::optional<std::uint64_t> seed_override;
    int workers = 0;
    bool resume = false;
};

hcs::RunConfig effective_config(const CliOptions& opt) {
    hcs::RunConfig cfg = opt.config_path.empty() ? hcs::RunConfig{} : hcs::load_config(opt.config_path);
    if (const char* env = std::getenv("HCSIM_OUT_DIR"); env && *env) cfg.paths.out_dir = env;
    if (!opt.out_override.empty()) cfg.paths.out_dir = opt.out_override;
    if (opt.seed_override) cfg.master_seed = *opt.seed_override;
    return cfg;
}

fs::path out_path(const hcs::RunConfig& cfg, const std::string& file) {
    fs::create_directories(cfg.paths.out_dir);
    return fs::path(cfg.paths.out_dir) / file;
}

hcs::MaskMatrix build_mask(const hcs::RunConfig& cfg) {
    if (cfg.mask.kind == hcs::MaskKind::SylvesterHadamard) {
        return hcs::sylvester_hadamard(cfg.mask.sylvester_k);
    }
    return hcs::twin_prime_smatrix(cfg.mask.p, cfg.mask.q);
}

int cmd_gen_mask(const CliOptions& opt) {
    const hcs::RunConfig cfg = effective_config(opt);
    const std::string hash = hcs::config_hash(cfg);
    const hcs::MaskMatrix mask = build_mask(cfg);
    hcs::save_mask(mask, out_path(cfg, cfg.paths.mask_file).string());

    // Corpus artifacts ride along: letter PGMs and the fill-fraction manifest.
    const fs::path corpus_dir = out_path(cfg, "corpus");
    fs::create_directories(corpus_dir);
    std::ofstream manifest(corpus_dir / "manifest.csv");
    manifest << "# config=" << hash << "\nletter,fill_fraction\n";
    for (char c : cfg.eval.letters) {
        const hcs::Image img = hcs::render_letter(c, mask.p, mask.q);
        hcs::save_pgm(img, (corpus_dir / (std::string("letter_") + c + ".pgm")).string(),
                      "config=" + hash);
        manifest << c << ',' << hcs::format_double(hcs::fill_fraction(img)) << "\n";
    }
    std::cout << "wrote mask order " << mask.order << " (" << mask.p << "x" << mask.q << ") to "
              << out_path(cfg, cfg.paths.mask_file) << "\n";
    return 0;
}

int cmd_train(const CliOptions& opt) {
    const hcs::RunConfig cfg = effective_config(opt);
    const std::string hash = hcs::config_hash(cfg);
    const hcs::MaskMatrix mask = hcs::load_mask(out_path(cfg, cfg.paths.mask_file).string());

    std::vector<hcs::Image> corpus;
    for (char c : cfg.eval.letters) corpus.push_back(hcs::render_letter(c, mask.p, mask.q));

    // Training measures through the full mask (all shifts).
    std::vector<int> all(mask.order);
    std::iota(all.begin(), all.end(), 0);
    const hcs::SensingMatrix full = hcs::build_sensing_matrix(mask, all);

    hcs::TrainConfig tcfg = cfg.train;
    tcfg.seed = hcs::derive_seed(cfg.master_seed, "train");
    auto [stack, trace] = hcs::train(corpus, full, tcfg);

    hcs::save_stack(stack, out_path(cfg, cfg.paths.dict_file).string(), "config=" + hash);
    hcs::save_loss_csv(trace, out_path(cfg, "loss.csv").string(), "config=" + hash);
    std::cout << "trained " << stack.layers.size() << " layers; loss " << trace.front().total
              << " -> " << trace.back().total << "\n";
    return 0;
}

int cmd_design(const CliOptions& opt) {
    const hcs::RunConfig cfg = effective_config(opt);
    const std::string hash = hcs::config_hash(cfg);
    const hcs::MaskMatrix mask = hcs::load_mask(out_path(cfg, cfg.paths.mask_file).string());

    std::optional<hcs::DictionaryStack> stack;
    const fs::path dict_path = out_path(cfg, cfg.paths.dict_file);
    if (cfg.design.effective_target && fs::exists(dict_path)) {
        stack = hcs::load_stack(dict_path.string());
    }

    hcs::DesignConfig dcfg;
    dcfg.L = cfg.design.L;
    dcfg.strategy = cfg.design.strategy;
    dcfg.restarts = cfg.design.restarts;
    dcfg.seed = hcs::derive_seed(cfg.master_seed, "design");
    const hcs::SensingMatrix design =
        hcs::design_rows(mask, stack ? &*stack : nullptr, dcfg);
    const hcs::DesignReport report = hcs::design_report(design, stack ? &*stack : nullptr);

    hcs::save_shifts(design, out_path(cfg, cfg.paths.shifts_file).string(), "config=" + hash);
    std::cout << "designed L=" << design.rows << " rows, coherence mu=" << report.coherence.mu
              << (stack ? " (effective S*D)" : " (raw S)") << "\n";
    return 0;
}

int cmd_sweep(const CliOptions& opt) {
    const hcs::RunConfig cfg = effective_config(opt);
    const std::string hash = hcs::config_hash(cfg);
    const hcs::MaskMatrix mask = hcs::load_mask(out_path(cfg, cfg.paths.mask_file).string());

    std::optional<hcs::DictionaryStack> stack;
    bool needs_stack = false;
    for (const std::string& s : cfg.eval.solvers) needs_stack |= s == "dlcsnet";
    if (needs_stack) stack = hcs::load_stack(out_path(cfg, cfg.paths.dict_file).string());

    std::vector<int> order;
    const fs::path shifts_path = out_path(cfg, cfg.paths.shifts_file);
    if (fs::exists(shifts_path)) {
        const hcs::ShiftsFile f = hcs::load_shifts(shifts_path.string());
        if (f.n != mask.order) throw hcs::ConfigError("sweep: shifts file order != mask order");
        order = f.shifts;
    }

    const fs::path journal = out_path(cfg, cfg.paths.journal);
    if (fs::exists(journal) && !opt.resume) {
        throw hcs::ConfigError("sweep: journal " + journal.string() +
                               " exists; pass --resume or remove it");
    }

    hcs::EvalContext ctx(mask, order, stack ? &*stack : nullptr, hcs::make_eval_config(cfg));
    std::vector<char> letters(cfg.eval.letters.begin(), cfg.eval.letters.end());
    std::vector<hcs::SolverKind> solvers;
    for (const std::string& s : cfg.eval.solvers) solvers.push_back(hcs::solver_from_name(s));

    const int workers = opt.workers > 0 ? opt.workers
                                        : static_cast<int>(std::thread::hardware_concurrency());
    const hcs::SweepResult result =
        hcs::sweep(letters, cfg.eval.snr_grid, solvers, ctx, journal.string(), std::max(1, workers));

    hcs::save_records_csv(result.records, out_path(cfg, "records.csv").string(), "config=" + hash);
    hcs::save_summary_csv(result.summaries, out_path(cfg, "summary.csv").string(), "config=" + hash);

    // Per-letter M-vs-SNR curves.
    const fs::path curves = out_path(cfg, "curves");
    fs::create_directories(curves);
    for (char letter : letters) {
        std::ofstream out(curves / (std::string("curve_") + letter + ".csv"));
        out << "# config=" << hash << "\nsolver,snr_db,max_M\n";
        for (const hcs::SweepSummary& s : result.summaries) {
            out << hcs::solver_name(s.solver) << ',' << hcs::format_double(s.snr_db) << ','
                << hcs::format_double(s.per_letter_max_M.at(letter)) << "\n";
        }
    }
    for (const hcs::SweepSummary& s : result.summaries) {
        std::cout << hcs::solver_name(s.solver) << " @ " << s.snr_db << " dB: mean max-M "
                  << s.mean_M << ", median " << s.median_M << "\n";
    }
    return 0;
}

int cmd_report(const CliOptions& opt, const std::string& records_arg) {
    const hcs::RunConfig cfg = effective_config(opt);
    const std::string hash = hcs::config_hash(cfg);
    const std::string records_path =
        records_arg.empty() ? out_path(cfg, "records.csv").string() : records_arg;
    const std::vector<hcs::EvalRecord> records = hcs::load_records_csv(records_path);
    if (records.empty()) throw hcs::IoError("report: no records in " + records_path);

    // Group by (solver, snr) and summarize each slice.
    std::map<std::pair<std::string, double>, std::vector<hcs::EvalRecord>> slices;
    for (const hcs::EvalRecord& r : records) {
        slices[{hcs::solver_name(r.solver), r.snr_db}].push_back(r);
    }
    std::vector<hcs::SweepSummary> summaries;
    for (const auto& [key, slice] : slices) summaries.push_back(hcs::summarize(slice));
    hcs::save_summary_csv(summaries, out_path(cfg, "summary.csv").string(), "config=" + hash);

    // Required SNR per letter: lowest grid SNR reaching the target M.
    std::ofstream req(out_path(cfg, "required_snr.csv"));
    req << "# config=" << hash << "\nsolver,letter,required_snr_db\n";
    std::map<std::string, std::map<char, double>> best;
    for (const hcs::SweepSummary& s : summaries) {
        for (const auto& [letter, m] : s.per_letter_max_M) {
            if (m >= cfg.eval.required_snr_target_m) {
                auto& slot = best[hcs::solver_name(s.solver)];
                auto it = slot.find(letter);
                if (it == slot.end() || s.snr_db < it->second) slot[letter] = s.snr_db;
            }
        }
    }
    for (const auto& [solver, letters] : best) {
        for (const auto& [letter, snr] : letters) {
            req << solver << ',' << letter << ',' << hcs::format_double(snr) << "\n";
        }
    }
    for (const hcs::SweepSummary& s : summaries) {
        std::cout << hcs::solver_name(s.solver) << " @ " << s.snr_db << " dB: mean max-M "
                  << s.mean_M << ", median " << s.median_M << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hadamard compressed-sensing image transmission simulator"};
    app.require_subcommand(1);

    CliOptions opt;
    std::string records_arg;
    app.add_option("--config", opt.config_path, "JSON config file");
    app.add_option("--out", opt.out_override, "output directory override");
    std::uint64_t seed_value = 0;
    auto* seed_flag = app.add_option("--seed", seed_value, "master seed override");
    app.add_option("--workers", opt.workers, "worker threads for sweep");
    app.add_flag("--resume", opt.resume, "resume from an existing sweep journal");

    auto* gen = app.add_subcommand("gen-mask", "build and write the mask plus the letter corpus");
    auto* train = app.add_subcommand("train", "learn the dictionary stack over the corpus");
    auto* design = app.add_subcommand("design", "select measurement rows by coherence");
    auto* sweep = app.add_subcommand("sweep", "run the BER / compression-ratio harness");
    auto* report = app.add_subcommand("report", "summarize an existing records table");
    report->add_option("records", records_arg, "records CSV (default <out>/records.csv)");

    try {
        app.parse(argc, argv);
        if (seed_flag->count() > 0) opt.seed_override = seed_value;
        if (gen->parsed()) return cmd_gen_mask(opt);
        if (train->parsed()) return cmd_train(opt);
        if (design->parsed()) return cmd_design(opt);
        if (sweep->parsed()) return cmd_sweep(opt);
        if (report->parsed()) return cmd_report(opt, records_arg);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const hcs::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const hcs::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const hcs::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
