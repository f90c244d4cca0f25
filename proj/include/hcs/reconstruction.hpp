#pragma once

#include "hcs/channel.hpp"
#include "hcs/dictionary.hpp"
#include "hcs/image.hpp"
#include "hcs/sensing.hpp"

#include <optional>
#include <vector>

namespace hcs {

struct SolverConfig {
    // l1 weight; unset selects 0.05 * ||A^T t||_inf for the matrix being solved.
    std::optional<double> lambda;
    int max_iters = 1000;
    double tol = 1e-8;  // relative objective change stop, < 1
    // Step size; unset selects 1/Lipschitz from a 20-iteration power method.
    std::optional<double> step;
};

struct ReconResult {
    Image image;  // real-valued, pre-threshold
    int iters_used = 0;
    std::vector<double> objective_trace;  // non-increasing (monotone FISTA)
    bool converged = false;
};

double soft_threshold(double x, double t);

// Low-level monotone-FISTA entry over an explicit matrix:
// argmin_x 0.5*||a x - b||^2 + lambda*|x|_1 from start x0.
struct LassoSolution {
    Eigen::VectorXd x;
    std::vector<double> trace;
    int iters = 0;
    bool converged = false;
};
LassoSolution lasso_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double lambda,
                          const SolverConfig& cfg, const Eigen::VectorXd& x0);

// Monotone FISTA for 0.5*||S*P - T||^2 + lambda*|z|_1. When a basis is given
// the code vector z is the unknown and P = basis * z; otherwise z = P.
ReconResult lasso_fista(const SensingMatrix& s, const MeasurementVector& t,
                        const std::optional<Eigen::MatrixXd>& basis, const SolverConfig& cfg);

// Dictionary-initialized reconstruction: solves the inference restriction of
// the training loss with dictionaries frozen, i.e. FISTA over the top-layer
// code of gamma*||S*decode(z) - T||^2 + alpha_K*|z|_1, started from the codes
// of the matched-filter back-projection S^T*T/||S||^2. cfg.lambda overrides
// the alpha_K/(2*gamma) weight.
ReconResult reconstruct_dl(const SensingMatrix& s, const MeasurementVector& t,
                           const DictionaryStack& stack, const SolverConfig& cfg);

// pixel -> 1 if >= theta else 0. Idempotent on binary images for theta in (0,1].
Image binary_threshold(const Image& img, double theta);

// Spectral norm estimate by 20 power iterations on A^T A (deterministic start).
double spectral_norm_estimate(const Eigen::MatrixXd& a);

}  // namespace hcs
