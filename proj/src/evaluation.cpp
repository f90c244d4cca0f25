#include "hcs/evaluation.hpp"

#include "hcs/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace hcs {
namespace {

double noise_sigma(double snr_db, double pixel_pow) {
    if (snr_db == std::numeric_limits<double>::infinity()) return 0.0;
    const double snr = std::max(snr_db, -240.0);
    return std::sqrt(pixel_pow * std::pow(10.0, -snr / 10.0));
}

int rows_for_ratio(int n, double m) {
    if (!(m >= 1.0)) throw std::invalid_argument("trial: compression ratio must be >= 1");
    const int l = static_cast<int>(std::lround(static_cast<double>(n) / m));
    if (l < 1) throw std::invalid_argument("trial: L = round(N/M) must be >= 1");
    return std::min(l, n);
}

}  // namespace

std::string solver_name(SolverKind k) {
    return k == SolverKind::Lasso ? "lasso" : "dlcsnet";
}

SolverKind solver_from_name(const std::string& name) {
    if (name == "lasso") return SolverKind::Lasso;
    if (name == "dlcsnet") return SolverKind::DLCSNet;
    throw std::invalid_argument("unknown solver name: " + name);
}

double ber(const Image& a, const Image& b) {
    if (a.p != b.p || a.q != b.q) throw std::invalid_argument("ber: image shapes differ");
    if (!a.is_binary() || !b.is_binary()) throw std::invalid_argument("ber: inputs must be binary");
    long diff = 0;
    for (long i = 0; i < a.pixels.size(); ++i) diff += a.pixels[i] != b.pixels[i];
    return static_cast<double>(diff) / static_cast<double>(a.size());
}

EvalContext::EvalContext(const MaskMatrix& mask, std::vector<int> design_order,
                         const DictionaryStack* stack, EvalConfig cfg)
    : mask_(&mask), design_order_(std::move(design_order)), stack_(stack), cfg_(std::move(cfg)) {
    // Extend the design order with unused shifts (ascending) so every prefix
    // length up to n exists.
    std::vector<bool> used(mask.order, false);
    for (int s : design_order_) {
        if (s < 0 || s >= mask.order || used[s]) {
            throw std::invalid_argument("EvalContext: design order must be distinct in-range shifts");
        }
        used[s] = true;
    }
    for (int s = 0; s < mask.order; ++s) {
        if (!used[s]) design_order_.push_back(s);
    }
    if (stack_) {
        if (stack_->input_dim() != mask.order) {
            throw std::invalid_argument("EvalContext: stack input dim != mask order");
        }
        chain_ = stack_->chain();
        layer_steps_ = layer_step_sizes(*stack_);
    }
}

const EvalContext::PrefixEntry& EvalContext::prefix(int L) {
    std::lock_guard lock(mutex_);
    auto it = prefixes_.find(L);
    if (it != prefixes_.end()) return *it->second;

    auto entry = std::make_unique<PrefixEntry>();
    entry->design = build_sensing_matrix(*mask_, {design_order_.begin(), design_order_.begin() + L});
    entry->snorm_s = spectral_norm_estimate(entry->design.m);
    entry->step_s = 1.0 / std::max(entry->snorm_s * entry->snorm_s * 1.02, 1e-30);
    entry->max_colnorm_s = entry->design.m.colwise().norm().maxCoeff();
    if (stack_) {
        entry->a_eff = entry->design.m * chain_;
        const double snorm_eff = spectral_norm_estimate(entry->a_eff);
        entry->step_eff = 1.0 / std::max(snorm_eff * snorm_eff * 1.02, 1e-30);
        entry->max_colnorm_eff = entry->a_eff.colwise().norm().maxCoeff();
    }
    return *prefixes_.emplace(L, std::move(entry)).first->second;
}

const Image& EvalContext::letter_image(char letter) {
    std::lock_guard lock(mutex_);
    auto it = images_.find(letter);
    if (it == images_.end()) {
        it = images_.emplace(letter, render_letter(letter, mask_->p, mask_->q)).first;
    }
    return it->second;
}

const Eigen::VectorXd& EvalContext::clean_measurement(char letter, int L) {
    const Image& img = letter_image(letter);
    const PrefixEntry& entry = prefix(L);
    std::lock_guard lock(mutex_);
    auto it = measurements_.find({letter, L});
    if (it == measurements_.end()) {
        it = measurements_.emplace(std::make_pair(letter, L), entry.design.m * img.pixels).first;
    }
    return it->second;
}

EvalRecord EvalContext::run_trial(char letter, double m_requested, double snr_db,
                                  std::uint64_t seed, SolverKind solver) {
    if (solver == SolverKind::DLCSNet && !stack_) {
        throw std::invalid_argument("run_trial: DLCSNet solver needs a dictionary stack");
    }
    const int n = mask_->order;
    const int L = rows_for_ratio(n, m_requested);
    const PrefixEntry& entry = prefix(L);
    const Image& img = letter_image(letter);
    const double pp = pixel_power(img);

    MeasurementVector t;
    t.values = clean_measurement(letter, L);
    const NoiseSpec spec{snr_db, derive_seed(cfg_.master_seed, "trial-noise",
                                             {static_cast<std::uint64_t>(letter - 'A'),
                                              static_cast<std::uint64_t>(L), seed})};
    t = add_noise(t, spec, pp);

    const double sigma = noise_sigma(snr_db, pp);
    Image recon(mask_->p, mask_->q);
    int iters = 0;
    if (solver == SolverKind::Lasso) {
        SolverConfig scfg;
        scfg.max_iters = cfg_.lasso_max_iters;
        scfg.tol = cfg_.lasso_tol;
        scfg.step = entry.step_s;
        const double lambda =
            cfg_.lambda_scale * sigma * std::sqrt(2.0 * std::log(static_cast<double>(n))) * entry.max_colnorm_s;
        const LassoSolution sol =
            lasso_solve(entry.design.m, t.values, lambda, scfg, Eigen::VectorXd::Zero(n));
        recon.pixels = sol.x;
        iters = sol.iters;
    } else {
        SolverConfig scfg;
        scfg.max_iters = cfg_.dl_max_iters;
        scfg.tol = cfg_.dl_tol;
        scfg.step = entry.step_eff;
        const double k_top = static_cast<double>(stack_->code_dim());
        const double lambda =
            stack_->alphas.back() / (2.0 * stack_->gamma) +
            cfg_.lambda_scale * sigma * std::sqrt(2.0 * std::log(k_top)) * entry.max_colnorm_eff;
        // Dictionary-initialized solve: codes of the back-projection seed FISTA.
        Eigen::VectorXd bp =
            entry.design.m.transpose() * t.values / std::max(entry.snorm_s * entry.snorm_s, 1e-30);
        const std::vector<Eigen::MatrixXd> init =
            encode_batch(*stack_, bp, stack_->alphas, cfg_.dl_init_code_iters, &layer_steps_);
        const LassoSolution sol = lasso_solve(entry.a_eff, t.values, lambda, scfg, init.back().col(0));
        recon.pixels = chain_ * sol.x;
        iters = sol.iters;
    }

    EvalRecord rec;
    rec.letter = letter;
    rec.M = static_cast<double>(n) / static_cast<double>(L);
    rec.L = L;
    rec.snr_db = snr_db;
    rec.seed = seed;
    rec.solver = solver;
    rec.ber = ber(binary_threshold(recon, cfg_.theta), img);
    rec.iters = iters;
    return rec;
}

EvalRecord trial(char letter, double m, double snr_db, std::uint64_t seed, SolverKind solver,
                 const SensingMatrix& design, const DictionaryStack* stack, const EvalConfig& cfg) {
    const int expected = rows_for_ratio(design.cols, m);
    if (design.rows != expected) {
        throw std::invalid_argument("trial: design has " + std::to_string(design.rows) +
                                    " rows but round(N/M) = " + std::to_string(expected));
    }
    // A one-off context over exactly this design keeps a single code path.
    MaskMatrix pseudo_mask;
    pseudo_mask.kind = design.kind;
    pseudo_mask.order = design.cols;
    pseudo_mask.p = design.p;
    pseudo_mask.q = design.q;
    pseudo_mask.entries = MaskEntries::Zero(design.cols, design.cols);
    for (int r = 0; r < design.rows; ++r) {
        for (int c = 0; c < design.cols; ++c) {
            pseudo_mask.entries(r, c) = static_cast<std::int8_t>(design.m(r, c));
        }
    }
    std::vector<int> order(design.cols);
    std::iota(order.begin(), order.end(), 0);
    EvalContext ctx(pseudo_mask, order, stack, cfg);
    return ctx.run_trial(letter, m, snr_db, seed, solver);
}

double max_lossless_M(char letter, double snr_db, SolverKind solver, int trials_per_M,
                      EvalContext& ctx) {
    if (trials_per_M < 1) throw std::invalid_argument("max_lossless_M: trials_per_M must be >= 1");
    double best = 1.0;
    for (int m : ctx.config().m_grid) {
        bool all_zero = true;
        for (int seed = 0; seed < trials_per_M && all_zero; ++seed) {
            const EvalRecord rec = ctx.run_trial(letter, m, snr_db, static_cast<std::uint64_t>(seed), solver);
            all_zero = rec.ber == 0.0;
        }
        if (all_zero) best = std::max(best, static_cast<double>(m));
    }
    return best;
}

SweepSummary summarize(const std::vector<EvalRecord>& records) {
    if (records.empty()) throw std::invalid_argument("summarize: no records");
    const double snr = records.front().snr_db;
    const SolverKind solver = records.front().solver;
    // Scan value M = round(N/L) groups trials; a scan point is lossless when
    // every recorded trial there has ber == 0.
    std::map<char, std::map<int, bool>> lossless;
    for (const EvalRecord& rec : records) {
        if (rec.snr_db != snr || rec.solver != solver) {
            throw std::invalid_argument("summarize: records mix SNRs or solvers");
        }
        const int n = static_cast<int>(std::lround(rec.M * rec.L));
        const int m = static_cast<int>(std::lround(static_cast<double>(n) / rec.L));
        auto& per = lossless[rec.letter];
        auto [it, inserted] = per.try_emplace(m, rec.ber == 0.0);
        if (!inserted) it->second = it->second && rec.ber == 0.0;
    }
    SweepSummary summary;
    summary.snr_db = snr;
    summary.solver = solver;
    for (char c = 'A'; c <= 'Z'; ++c) {
        auto it = lossless.find(c);
        if (it == lossless.end()) {
            throw std::invalid_argument(std::string("summarize: letter ") + c + " missing from records");
        }
        double best = 1.0;
        for (const auto& [m, ok] : it->second) {
            if (ok) best = std::max(best, static_cast<double>(m));
        }
        summary.per_letter_max_M[c] = best;
    }
    std::vector<double> ms;
    for (const auto& [c, m] : summary.per_letter_max_M) ms.push_back(m);
    summary.mean_M = std::accumulate(ms.begin(), ms.end(), 0.0) / static_cast<double>(ms.size());
    std::sort(ms.begin(), ms.end());
    const size_t h = ms.size() / 2;
    summary.median_M = ms.size() % 2 == 1 ? ms[h] : 0.5 * (ms[h - 1] + ms[h]);
    return summary;
}

namespace {

struct JournalKey {
    char letter;
    int m_grid;
    double snr_db;
    std::uint64_t seed;
    SolverKind solver;
    auto operator<=>(const JournalKey&) const = default;
};

// Append-only trial cache backing resumable sweeps.
class Journal {
public:
    explicit Journal(const std::string& path) : path_(path) {
        if (path_.empty()) return;
        std::ifstream in(path_);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#' || line.rfind("letter,", 0) == 0) continue;
            std::istringstream ss(line);
            std::string field;
            std::vector<std::string> fields;
            while (std::getline(ss, field, ',')) fields.push_back(field);
            if (fields.size() != 9) continue;
            EvalRecord rec;
            rec.letter = fields[0][0];
            const int m_grid = std::stoi(fields[1]);
            rec.M = std::stod(fields[2]);
            rec.L = std::stoi(fields[3]);
            rec.snr_db = std::stod(fields[4]);
            rec.seed = std::stoull(fields[5]);
            rec.solver = solver_from_name(fields[6]);
            rec.ber = std::stod(fields[7]);
            rec.iters = std::stoi(fields[8]);
            rows_[{rec.letter, m_grid, rec.snr_db, rec.seed, rec.solver}] = rec;
        }
    }

    std::optional<EvalRecord> lookup(const JournalKey& key) {
        std::lock_guard lock(mutex_);
        auto it = rows_.find(key);
        if (it == rows_.end()) return std::nullopt;
        return it->second;
    }

    void record(const JournalKey& key, const EvalRecord& rec) {
        std::lock_guard lock(mutex_);
        if (!rows_.emplace(key, rec).second) return;
        if (path_.empty()) return;
        std::ofstream out(path_, std::ios::app);
        if (!out) throw std::runtime_error("journal: cannot open " + path_ + " for append");
        out << rec.letter << ',' << key.m_grid << ',';
        char buf[360];
        std::snprintf(buf, sizeof(buf), "%.17g,%d,%.17g,%llu,%s,%.17g,%d\n", rec.M, rec.L,
                      rec.snr_db, static_cast<unsigned long long>(rec.seed),
                      solver_name(rec.solver).c_str(), rec.ber, rec.iters);
        out << buf;
        if (!out) throw std::runtime_error("journal: write failed on " + path_);
    }

private:
    std::string path_;
    std::mutex mutex_;
    std::map<JournalKey, EvalRecord> rows_;
};

struct SweepJob {
    char letter;
    double snr_db;
    SolverKind solver;
};

}  // namespace

SweepResult sweep(const std::vector<char>& letters, const std::vector<double>& snr_list,
                  const std::vector<SolverKind>& solvers, EvalContext& ctx,
                  const std::string& journal_path, int workers) {
    if (letters.empty() || snr_list.empty() || solvers.empty()) {
        throw std::invalid_argument("sweep: letters, snr_list and solvers must be nonempty");
    }
    for (char c : letters) {
        if (c < 'A' || c > 'Z') throw std::invalid_argument("sweep: letters must be in A..Z");
    }
    Journal journal(journal_path);

    std::vector<SweepJob> jobs;
    for (SolverKind solver : solvers) {
        for (double snr : snr_list) {
            for (char letter : letters) jobs.push_back({letter, snr, solver});
        }
    }

    // Each job scans the M grid with intra-M early abort; the executed trial
    // set is deterministic, so any worker count yields identical results.
    std::vector<std::vector<EvalRecord>> job_records(jobs.size());
    std::vector<double> job_max(jobs.size(), 1.0);
    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errors(std::max(workers, 1));

    auto run_jobs = [&](int worker_id) {
        try {
            for (size_t j = next.fetch_add(1); j < jobs.size(); j = next.fetch_add(1)) {
                const SweepJob& job = jobs[j];
                double best = 1.0;
                for (int m : ctx.config().m_grid) {
                    bool all_zero = true;
                    for (int seed = 0; seed < ctx.config().trials_per_M && all_zero; ++seed) {
                        const JournalKey key{job.letter, m, job.snr_db,
                                             static_cast<std::uint64_t>(seed), job.solver};
                        std::optional<EvalRecord> rec = journal.lookup(key);
                        if (!rec) {
                            rec = ctx.run_trial(job.letter, m, job.snr_db,
                                                static_cast<std::uint64_t>(seed), job.solver);
                            journal.record(key, *rec);
                        }
                        job_records[j].push_back(*rec);
                        all_zero = rec->ber == 0.0;
                    }
                    if (all_zero) best = std::max(best, static_cast<double>(m));
                }
                job_max[j] = best;
            }
        } catch (...) {
            errors[worker_id] = std::current_exception();
        }
    };

    const int pool = std::max(1, workers);
    std::vector<std::thread> threads;
    for (int w = 0; w < pool; ++w) threads.emplace_back(run_jobs, w);
    for (auto& th : threads) th.join();
    for (const auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }

    SweepResult result;
    for (size_t j = 0; j < jobs.size(); ++j) {
        result.records.insert(result.records.end(), job_records[j].begin(), job_records[j].end());
    }
    std::sort(result.records.begin(), result.records.end(),
              [](const EvalRecord& a, const EvalRecord& b) {
                  return std::tuple(solver_name(a.solver), a.snr_db, a.letter, -a.L, a.seed) <
                         std::tuple(solver_name(b.solver), b.snr_db, b.letter, -b.L, b.seed);
              });

    for (SolverKind solver : solvers) {
        for (double snr : snr_list) {
            SweepSummary summary;
            summary.snr_db = snr;
            summary.solver = solver;
            std::vector<double> ms;
            for (size_t j = 0; j < jobs.size(); ++j) {
                if (jobs[j].solver == solver && jobs[j].snr_db == snr) {
                    summary.per_letter_max_M[jobs[j].letter] = job_max[j];
                    ms.push_back(job_max[j]);
                }
            }
            summary.mean_M = std::accumulate(ms.begin(), ms.end(), 0.0) / static_cast<double>(ms.size());
            std::sort(ms.begin(), ms.end());
            const size_t h = ms.size() / 2;
            summary.median_M = ms.size() % 2 == 1 ? ms[h] : 0.5 * (ms[h - 1] + ms[h]);
            result.summaries.push_back(std::move(summary));
        }
    }
    return result;
}

}  // namespace hcs
