#pragma once

#include "hcs/channel.hpp"
#include "hcs/corpus.hpp"
#include "hcs/design.hpp"
#include "hcs/dictionary.hpp"
#include "hcs/reconstruction.hpp"
#include "hcs/sensing.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace hcs {

enum class SolverKind { Lasso, DLCSNet };

std::string solver_name(SolverKind k);
SolverKind solver_from_name(const std::string& name);

// One trial outcome. M is the ratio actually realized, N / L.
struct EvalRecord {
    char letter = '?';
    double M = 0.0;
    int L = 0;
    double snr_db = 0.0;
    std::uint64_t seed = 0;
    SolverKind solver = SolverKind::Lasso;
    double ber = 0.0;
    int iters = 0;
};

struct SweepSummary {
    std::map<char, double> per_letter_max_M;
    double mean_M = 0.0;
    double median_M = 0.0;
    double snr_db = 0.0;
    SolverKind solver = SolverKind::Lasso;
};

struct EvalConfig {
    std::vector<int> m_grid = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16};
    int trials_per_M = 10;
    double theta = 0.5;
    // Solver budgets; the l1 weight is lambda_scale * sigma * sqrt(2 ln cols)
    // * max column norm (plus alpha_K/(2 gamma) for the dictionary solver),
    // which vanishes in the noiseless case.
    int lasso_max_iters = 800;
    double lasso_tol = 1e-9;
    int dl_max_iters = 400;
    double dl_tol = 1e-9;
    int dl_init_code_iters = 50;
    double lambda_scale = 1.0;
    std::uint64_t master_seed = 0;
};

// Shared artifacts plus per-L caches for running many trials. The design
// order is extended with the unused shifts in ascending order so any prefix
// length up to n is available; prefixes of a greedy order are themselves
// greedy designs.
class EvalContext {
public:
    EvalContext(const MaskMatrix& mask, std::vector<int> design_order,
                const DictionaryStack* stack, EvalConfig cfg);

    const MaskMatrix& mask() const { return *mask_; }
    const DictionaryStack* stack() const { return stack_; }
    const EvalConfig& config() const { return cfg_; }
    int order() const { return mask_->order; }

    EvalRecord run_trial(char letter, double m_requested, double snr_db, std::uint64_t seed,
                         SolverKind solver);

private:
    struct PrefixEntry {
        SensingMatrix design;
        double step_s = 0.0;          // 1/Lipschitz of the raw rows
        double snorm_s = 0.0;
        double max_colnorm_s = 0.0;
        Eigen::MatrixXd a_eff;        // rows * chain, when a stack is present
        double step_eff = 0.0;
        double max_colnorm_eff = 0.0;
    };
    const PrefixEntry& prefix(int L);
    const Image& letter_image(char letter);
    const Eigen::VectorXd& clean_measurement(char letter, int L);

    const MaskMatrix* mask_;
    std::vector<int> design_order_;
    const DictionaryStack* stack_;
    EvalConfig cfg_;
    Eigen::MatrixXd chain_;
    std::vector<double> layer_steps_;

    std::mutex mutex_;
    std::map<int, std::unique_ptr<PrefixEntry>> prefixes_;
    std::map<char, Image> images_;
    std::map<std::pair<char, int>, Eigen::VectorXd> measurements_;
};

// Fraction of differing pixels between two binary images of the same shape.
double ber(const Image& a, const Image& b);

// render -> measure -> add_noise -> reconstruct -> threshold -> BER.
// Deterministic in (config master_seed, seed); the noise stream is shared
// across solvers and SNRs so comparisons run on the same draws.
EvalRecord trial(char letter, double m, double snr_db, std::uint64_t seed, SolverKind solver,
                 const SensingMatrix& design, const DictionaryStack* stack, const EvalConfig& cfg);

// Largest M on the scan grid whose trials_per_M seeds all reach BER = 0
// after thresholding; 1 if none does.
double max_lossless_M(char letter, double snr_db, SolverKind solver, int trials_per_M,
                      EvalContext& ctx);

struct SweepResult {
    std::vector<EvalRecord> records;      // sorted, deterministic
    std::vector<SweepSummary> summaries;  // one per (solver, snr)
};

// Full evaluation harness over letters x SNRs x solvers. Trials already in
// the journal are reused, new ones are appended, so an interrupted sweep
// resumes to an identical result. workers sets the thread pool size.
SweepResult sweep(const std::vector<char>& letters, const std::vector<double>& snr_list,
                  const std::vector<SolverKind>& solvers, EvalContext& ctx,
                  const std::string& journal_path, int workers);

// Mean and median of per-letter max lossless M recovered from a record table
// covering all 26 letters at one SNR for one solver.
SweepSummary summarize(const std::vector<EvalRecord>& records);

}  // namespace hcs
