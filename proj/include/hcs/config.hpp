#pragma once

#include "hcs/design.hpp"
#include "hcs/dictionary.hpp"
#include "hcs/evaluation.hpp"
#include "hcs/sensing.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hcs {

// Whole-pipeline run settings; see README for the key schema. All randomness
// downstream derives from master_seed.
struct RunConfig {
    std::uint64_t master_seed = 1;

    struct Mask {
        MaskKind kind = MaskKind::TwinPrimeS;
        int p = 41;
        int q = 43;
        int sylvester_k = 6;
    } mask;

    TrainConfig train;

    struct Design {
        int L = 882;
        DesignStrategy strategy = DesignStrategy::GreedyForward;
        int restarts = 1;
        bool effective_target = true;  // score S*D when a dictionary exists
    } design;

    struct Eval {
        std::string letters = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";
        std::vector<int> m_grid = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16};
        std::vector<double> snr_grid = {12.0};
        std::vector<std::string> solvers = {"dlcsnet", "lasso"};
        int trials_per_m = 10;
        double theta = 0.5;
        double lambda_scale = 1.0;
        int lasso_max_iters = 800;
        double lasso_tol = 1e-9;
        int dl_max_iters = 400;
        double dl_tol = 1e-9;
        int dl_init_code_iters = 50;
        double required_snr_target_m = 5.0;
    } eval;

    struct Paths {
        std::string out_dir = "out";
        std::string mask_file = "mask.txt";
        std::string dict_file = "dictionary.txt";
        std::string shifts_file = "shifts.txt";
        std::string journal = "journal.csv";
    } paths;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);
std::string config_to_json(const RunConfig& cfg);

// FNV-1a hash of the canonical JSON dump; stamped into output headers.
std::string config_hash(const RunConfig& cfg);

EvalConfig make_eval_config(const RunConfig& cfg);

}  // namespace hcs
