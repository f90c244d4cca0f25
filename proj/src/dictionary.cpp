#include "hcs/dictionary.hpp"

#include "hcs/reconstruction.hpp"
#include "hcs/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace hcs {
namespace {

void normalize_columns(Eigen::MatrixXd& d, std::uint64_t reseed_key) {
    for (long c = 0; c < d.cols(); ++c) {
        double norm = d.col(c).norm();
        if (norm < 1e-12) {
            // Collapsed atom: redraw deterministically.
            const CounterRng rng(derive_seed(reseed_key, "atom-reseed", {static_cast<std::uint64_t>(c)}));
            for (long r = 0; r < d.rows(); ++r) d(r, c) = rng.gaussian(static_cast<std::uint64_t>(r));
            norm = d.col(c).norm();
        }
        d.col(c) /= norm;
    }
}

Eigen::MatrixXd soft_threshold_matrix(const Eigen::MatrixXd& z, double t) {
    if (t <= 0.0) return z;
    return z.array().sign() * (z.array().abs() - t).max(0.0);
}

struct BatchLoss {
    LossBreakdown mean;
};

// Mean Eq-style loss over image columns; T' = S * chain * Ztop.
BatchLoss batch_loss(const DictionaryStack& stack, const std::vector<Eigen::MatrixXd>& codes,
                     const Eigen::MatrixXd& images, const SensingMatrix& s,
                     const Eigen::MatrixXd& t, const std::vector<double>& alphas) {
    const double m = static_cast<double>(images.cols());
    BatchLoss out;
    for (size_t i = 0; i < codes.size(); ++i) {
        out.mean.l1_codes += alphas[i] * codes[i].cwiseAbs().sum() / m;
    }
    const Eigen::MatrixXd decoded = stack.chain() * codes.back();
    out.mean.image_mse = (decoded - images).squaredNorm() / m;
    out.mean.meas_mse = (s.m * decoded - t).squaredNorm() / m;
    out.mean.total = out.mean.l1_codes + stack.beta * out.mean.image_mse + stack.gamma * out.mean.meas_mse;
    return out;
}

}  // namespace

Eigen::MatrixXd DictionaryStack::chain() const {
    Eigen::MatrixXd c = layers.front();
    for (size_t i = 1; i < layers.size(); ++i) c *= layers[i];
    return c;
}

DictionaryStack init_stack(const std::vector<int>& layer_dims, std::uint64_t seed, int p, int q) {
    if (layer_dims.size() < 2) {
        throw std::invalid_argument("init_stack: need at least [input_dim, code_dim]");
    }
    for (int d : layer_dims) {
        if (d < 1) throw std::invalid_argument("init_stack: all dimensions must be >= 1");
    }
    DictionaryStack stack;
    stack.layer_dims = layer_dims;
    stack.seed = seed;
    if (p > 0 && q > 0) {
        if (static_cast<long>(p) * q != layer_dims.front()) {
            throw std::invalid_argument("init_stack: p*q must equal layer_dims[0]");
        }
        stack.p = p;
        stack.q = q;
    } else {
        stack.p = 1;
        stack.q = layer_dims.front();
    }
    stack.alphas.assign(layer_dims.size() - 1, 0.01);
    for (size_t i = 0; i + 1 < layer_dims.size(); ++i) {
        Eigen::MatrixXd d(layer_dims[i], layer_dims[i + 1]);
        const CounterRng rng(derive_seed(seed, "init-stack", {static_cast<std::uint64_t>(i)}));
        for (long c = 0; c < d.cols(); ++c) {
            for (long r = 0; r < d.rows(); ++r) {
                d(r, c) = rng.gaussian(static_cast<std::uint64_t>(c * d.rows() + r));
            }
        }
        normalize_columns(d, derive_seed(seed, "init-reseed", {static_cast<std::uint64_t>(i)}));
        stack.layers.push_back(std::move(d));
    }
    return stack;
}

std::vector<double> layer_step_sizes(const DictionaryStack& stack) {
    std::vector<double> steps;
    steps.reserve(stack.layers.size());
    for (const Eigen::MatrixXd& d : stack.layers) {
        const double snorm = spectral_norm_estimate(d);
        steps.push_back(1.0 / std::max(snorm * snorm * 1.02, 1e-30));
    }
    return steps;
}

std::vector<Eigen::MatrixXd> encode_batch(const DictionaryStack& stack, const Eigen::MatrixXd& images,
                                          const std::vector<double>& alphas, int code_iters,
                                          const std::vector<double>* layer_steps) {
    if (images.rows() != stack.input_dim()) {
        throw std::invalid_argument("encode: image length != stack input dimension");
    }
    if (alphas.size() != stack.layers.size()) {
        throw std::invalid_argument("encode: alphas count != layer count");
    }
    if (code_iters < 1) throw std::invalid_argument("encode: code_iters must be positive");

    const std::vector<double> computed_steps = layer_steps ? std::vector<double>{} : layer_step_sizes(stack);
    const std::vector<double>& steps = layer_steps ? *layer_steps : computed_steps;

    std::vector<Eigen::MatrixXd> codes;
    codes.reserve(stack.layers.size());
    Eigen::MatrixXd target = images;
    for (size_t i = 0; i < stack.layers.size(); ++i) {
        const Eigen::MatrixXd& d = stack.layers[i];
        const double step = steps[i];
        Eigen::MatrixXd z = Eigen::MatrixXd::Zero(d.cols(), target.cols());
        for (int it = 0; it < code_iters; ++it) {
            z = soft_threshold_matrix(z - step * (d.transpose() * (d * z - target)), step * alphas[i]);
        }
        codes.push_back(std::move(z));
        target = codes.back();
    }
    return codes;
}

CodeStack encode(const DictionaryStack& stack, const Image& img, const TrainConfig& cfg) {
    const std::vector<Eigen::MatrixXd> batch =
        encode_batch(stack, img.pixels, cfg.alphas, cfg.code_iters);
    CodeStack out;
    for (const auto& z : batch) out.codes.push_back(z.col(0));
    return out;
}

Image decode(const DictionaryStack& stack, const CodeStack& codes) {
    if (codes.codes.size() != stack.layers.size()) {
        throw std::invalid_argument("decode: code stack depth != layer count");
    }
    if (codes.codes.back().size() != stack.code_dim()) {
        throw std::invalid_argument("decode: top code length != top layer width");
    }
    Image img(stack.p, stack.q);
    img.pixels = stack.chain() * codes.codes.back();
    return img;
}

LossBreakdown loss(const DictionaryStack& stack, const CodeStack& codes, const Image& img,
                   const SensingMatrix& s, const MeasurementVector& t, const TrainConfig& cfg) {
    if (img.size() != stack.input_dim() || s.cols != stack.input_dim() ||
        t.values.size() != s.rows) {
        throw std::invalid_argument("loss: inconsistent shapes");
    }
    if (cfg.alphas.size() != stack.layers.size()) {
        throw std::invalid_argument("loss: alphas count != layer count");
    }
    LossBreakdown out;
    for (size_t i = 0; i < codes.codes.size(); ++i) {
        out.l1_codes += cfg.alphas[i] * codes.codes[i].lpNorm<1>();
    }
    const Eigen::VectorXd decoded = stack.chain() * codes.codes.back();
    out.image_mse = (decoded - img.pixels).squaredNorm();
    out.meas_mse = (s.m * decoded - t.values).squaredNorm();
    out.total = out.l1_codes + cfg.beta * out.image_mse + cfg.gamma * out.meas_mse;
    return out;
}

std::pair<DictionaryStack, std::vector<LossBreakdown>> train(const std::vector<Image>& corpus,
                                                             const SensingMatrix& s,
                                                             const TrainConfig& cfg) {
    if (corpus.empty()) throw std::invalid_argument("train: empty corpus");
    if (!(cfg.beta > 0.0) && !(cfg.gamma > 0.0)) {
        throw std::invalid_argument("train: at least one of beta, gamma must be positive");
    }
    if (cfg.epochs < 1) throw std::invalid_argument("train: epochs must be positive");
    const int p = corpus.front().p, q = corpus.front().q;
    const long n = corpus.front().size();
    for (const Image& img : corpus) {
        if (img.p != p || img.q != q) throw std::invalid_argument("train: corpus images differ in shape");
    }
    if (s.cols != n) throw std::invalid_argument("train: sensing matrix columns != image size");

    std::vector<int> dims = cfg.layer_dims;
    if (dims.empty()) {
        dims = {static_cast<int>(n), static_cast<int>(std::min<long>(512, n)),
                static_cast<int>(std::min<long>(128, n))};
    }
    if (dims.front() != n) throw std::invalid_argument("train: layer_dims[0] != image size");
    if (cfg.alphas.size() != dims.size() - 1) {
        throw std::invalid_argument("train: alphas count != layer count");
    }

    const long m = static_cast<long>(corpus.size());
    Eigen::MatrixXd images(n, m);
    for (long j = 0; j < m; ++j) images.col(j) = corpus[j].pixels;
    const Eigen::MatrixXd t = s.m * images;

    DictionaryStack stack = init_stack(dims, cfg.seed, p, q);
    stack.alphas = cfg.alphas;
    stack.beta = cfg.beta;
    stack.gamma = cfg.gamma;

    std::vector<Eigen::MatrixXd> codes = encode_batch(stack, images, cfg.alphas, cfg.code_iters);
    LossBreakdown rec = batch_loss(stack, codes, images, s, t, cfg.alphas).mean;
    std::vector<LossBreakdown> trace{rec};
    if (!(rec.total < 1e12)) throw std::runtime_error("train: diverging loss at initialization");

    const size_t n_layers = stack.layers.size();
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        // Gradient of beta*E1 + gamma*E2 through the decode chain at fixed codes.
        const Eigen::MatrixXd chain = stack.chain();
        const Eigen::MatrixXd decoded = chain * codes.back();
        const Eigen::MatrixXd d_chain =
            (2.0 * cfg.beta / m) * (decoded - images) * codes.back().transpose() +
            (2.0 * cfg.gamma / m) * (s.m.transpose() * (s.m * decoded - t)) * codes.back().transpose();

        std::vector<Eigen::MatrixXd> prefix(n_layers), suffix(n_layers);
        for (size_t i = 0; i < n_layers; ++i) {
            prefix[i] = i == 0 ? Eigen::MatrixXd::Identity(n, n).eval()
                               : Eigen::MatrixXd(prefix[i - 1] * stack.layers[i - 1]);
        }
        for (size_t i = n_layers; i-- > 0;) {
            suffix[i] = (i == n_layers - 1)
                            ? Eigen::MatrixXd::Identity(stack.code_dim(), stack.code_dim()).eval()
                            : Eigen::MatrixXd(stack.layers[i + 1] * suffix[i + 1]);
        }
        std::vector<Eigen::MatrixXd> grads(n_layers);
        for (size_t i = 0; i < n_layers; ++i) {
            grads[i] = prefix[i].transpose() * d_chain * suffix[i].transpose();
        }

        // Whole-epoch backtracking: candidate step + renormalize + re-encode
        // must not increase the recorded mean total; eta -> 0 reproduces the
        // previous state exactly, so the trace is non-increasing.
        double eta = cfg.dict_step;
        bool accepted = false;
        for (int attempt = 0; attempt < 40 && !accepted; ++attempt, eta *= 0.5) {
            DictionaryStack cand = stack;
            for (size_t i = 0; i < n_layers; ++i) {
                cand.layers[i] -= eta * grads[i];
                normalize_columns(cand.layers[i],
                                  derive_seed(cfg.seed, "train-reseed",
                                              {static_cast<std::uint64_t>(epoch), static_cast<std::uint64_t>(i)}));
            }
            std::vector<Eigen::MatrixXd> cand_codes = encode_batch(cand, images, cfg.alphas, cfg.code_iters);
            LossBreakdown cand_rec = batch_loss(cand, cand_codes, images, s, t, cfg.alphas).mean;
            if (cand_rec.total <= rec.total) {
                stack = std::move(cand);
                codes = std::move(cand_codes);
                rec = cand_rec;
                accepted = true;
            }
        }
        trace.push_back(rec);
        if (!(rec.total < 1e12)) throw std::runtime_error("train: diverging loss");
        if (!accepted) {
            // Stalled: the state no longer changes, pad the remaining epochs.
            for (int e = epoch + 1; e <= cfg.epochs; ++e) trace.push_back(rec);
            break;
        }
    }
    stack.epochs_trained = cfg.epochs;
    return {std::move(stack), std::move(trace)};
}

CoherenceReport mutual_coherence_effective(const SensingMatrix& s, const DictionaryStack& stack) {
    if (stack.input_dim() != s.cols) {
        throw std::invalid_argument("mutual_coherence_effective: stack input dim != sensing columns");
    }
    return mutual_coherence(Eigen::MatrixXd(s.m * stack.chain()));
}

}  // namespace hcs
