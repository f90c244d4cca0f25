#pragma once

#include "hcs/channel.hpp"
#include "hcs/image.hpp"
#include "hcs/sensing.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace hcs {

// Layered dictionary basis. layers[i] has shape K_i x K_{i+1} with
// layer_dims = [N = K_1, K_2, ..., K_{K+1}]; the chain decodes top codes back
// to the image: P' = D(1) * D(2) * ... * D(K) * Z(K). Every dictionary column
// has unit l2 norm. Training weights travel with the stack so inference can
// reuse them.
struct DictionaryStack {
    std::vector<Eigen::MatrixXd> layers;
    std::vector<int> layer_dims;
    int p = 0;  // image geometry, p*q == layer_dims.front()
    int q = 0;
    std::vector<double> alphas;
    double beta = 1.0;
    double gamma = 1.0;
    std::uint64_t seed = 0;
    int epochs_trained = 0;

    int input_dim() const { return layer_dims.front(); }
    int code_dim() const { return layer_dims.back(); }

    // D(1) * ... * D(K), shape N x K_top.
    Eigen::MatrixXd chain() const;
};

// Per-layer sparse codes of a single image; codes[i] has length layer_dims[i+1].
struct CodeStack {
    std::vector<Eigen::VectorXd> codes;
};

struct TrainConfig {
    std::vector<double> alphas = {0.01, 0.01};
    double beta = 1.0;
    double gamma = 1.0;
    int epochs = 50;
    int code_iters = 40;
    double dict_step = 1.0;
    std::uint64_t seed = 0;
    // Network shape [N, K_2, ..., K_top]; empty selects {N, 512, 128} clamped to N.
    std::vector<int> layer_dims;
};

// The three loss terms: total = l1_codes + beta * image_mse + gamma * meas_mse,
// where l1_codes already carries the per-layer alpha weights and the two
// squared-error terms are reported unweighted.
struct LossBreakdown {
    double l1_codes = 0.0;
    double image_mse = 0.0;
    double meas_mse = 0.0;
    double total = 0.0;
};

// Gaussian-initialized stack with unit-norm columns; deterministic in seed.
// Geometry (p, q) defaults to a single-row aperture when unspecified.
DictionaryStack init_stack(const std::vector<int>& layer_dims, std::uint64_t seed,
                           int p = 0, int q = 0);

// Layer-by-layer ISTA sparse coding: Z(1) approximates
// argmin 0.5*||P - D(1) z||^2 + alpha_1 |z|_1, then each Z(i+1) is coded
// against Z(i). Runs cfg.code_iters ISTA steps per layer from a zero start.
CodeStack encode(const DictionaryStack& stack, const Image& img, const TrainConfig& cfg);

// P' = chain * Z(K), reshaped to the stack geometry.
Image decode(const DictionaryStack& stack, const CodeStack& codes);

LossBreakdown loss(const DictionaryStack& stack, const CodeStack& codes, const Image& img,
                   const SensingMatrix& s, const MeasurementVector& t, const TrainConfig& cfg);

// Alternating minimization over the corpus: encode all images, take a
// backtracked gradient step on the dictionaries against beta*E1 + gamma*E2,
// re-normalize columns. Returns the trained stack and one mean LossBreakdown
// per epoch (entry 0 is the pre-training loss); the recorded totals are
// non-increasing.
std::pair<DictionaryStack, std::vector<LossBreakdown>> train(const std::vector<Image>& corpus,
                                                             const SensingMatrix& s,
                                                             const TrainConfig& cfg);

// Coherence of the effective matrix S * chain.
CoherenceReport mutual_coherence_effective(const SensingMatrix& s, const DictionaryStack& stack);

// Shared with the evaluation pipeline: batched layer-wise ISTA over a column
// matrix of images; returns per-layer code matrices. layer_steps, when given,
// supplies precomputed 1/Lipschitz step sizes per layer.
std::vector<Eigen::MatrixXd> encode_batch(const DictionaryStack& stack, const Eigen::MatrixXd& images,
                                          const std::vector<double>& alphas, int code_iters,
                                          const std::vector<double>* layer_steps = nullptr);

// 1/Lipschitz ISTA steps per layer, from the power-method spectral estimate.
std::vector<double> layer_step_sizes(const DictionaryStack& stack);

}  // namespace hcs
