#include "hcs/reconstruction.hpp"

#include "hcs/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace hcs {
namespace {

double objective(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double lambda,
                 const Eigen::VectorXd& x) {
    return 0.5 * (a * x - b).squaredNorm() + lambda * x.lpNorm<1>();
}

}  // namespace

// Monotone FISTA: the accepted iterate never increases the objective.
LassoSolution lasso_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double lambda,
                          const SolverConfig& cfg, const Eigen::VectorXd& x0) {
    if (cfg.max_iters <= 0 || cfg.max_iters > 1000000) {
        throw std::invalid_argument("lasso_solve: max_iters must be in [1, 1e6]");
    }
    if (!(cfg.tol > 0.0) || cfg.tol >= 1.0) {
        throw std::invalid_argument("lasso_solve: tol must be in (0, 1)");
    }
    double step;
    if (cfg.step) {
        if (!(*cfg.step > 0.0)) throw std::invalid_argument("lasso_solve: step must be positive");
        step = *cfg.step;
    } else {
        const double snorm = spectral_norm_estimate(a);
        // 20 power iterations slightly underestimate the top singular value.
        step = 1.0 / std::max(snorm * snorm * 1.02, 1e-30);
    }

    LassoSolution out;
    Eigen::VectorXd x = x0;
    Eigen::VectorXd x_prev = x;
    Eigen::VectorXd y = x;
    double fx = objective(a, b, lambda, x);
    double t = 1.0;
    out.trace.push_back(fx);

    for (int k = 0; k < cfg.max_iters; ++k) {
        const Eigen::VectorXd grad = a.transpose() * (a * y - b);
        Eigen::VectorXd z = y - step * grad;
        const double thresh = lambda * step;
        for (long i = 0; i < z.size(); ++i) z[i] = soft_threshold(z[i], thresh);

        const double fz = objective(a, b, lambda, z);
        x_prev = x;
        const double fx_prev = fx;
        if (fz <= fx) {
            x = z;
            fx = fz;
        }
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        y = x + (t / t_next) * (z - x) + ((t - 1.0) / t_next) * (x - x_prev);
        t = t_next;

        out.trace.push_back(fx);
        out.iters = k + 1;
        if (std::abs(fx_prev - fx) <= cfg.tol * (1.0 + std::abs(fx_prev))) {
            out.converged = true;
            break;
        }
    }
    out.x = std::move(x);
    return out;
}

double soft_threshold(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

double spectral_norm_estimate(const Eigen::MatrixXd& a) {
    const CounterRng rng(0x9E3779B97F4A7C15ull);
    Eigen::VectorXd v(a.cols());
    for (long i = 0; i < v.size(); ++i) v[i] = rng.gaussian(static_cast<std::uint64_t>(i));
    v.normalize();
    double sigma = 0.0;
    for (int it = 0; it < 20; ++it) {
        Eigen::VectorXd w = a.transpose() * (a * v);
        const double norm = w.norm();
        if (norm < 1e-300) return 0.0;
        sigma = std::sqrt(norm);  // ||A^T A v|| -> top eigenvalue of A^T A
        v = w / norm;
    }
    return sigma;
}

ReconResult lasso_fista(const SensingMatrix& s, const MeasurementVector& t,
                        const std::optional<Eigen::MatrixXd>& basis, const SolverConfig& cfg) {
    if (t.values.size() != s.rows) {
        throw std::invalid_argument("lasso_fista: measurement length != sensing rows");
    }
    Eigen::MatrixXd a;
    if (basis) {
        if (basis->rows() != s.cols) {
            throw std::invalid_argument("lasso_fista: basis rows != sensing columns");
        }
        a = s.m * (*basis);
    } else {
        a = s.m;
    }
    const double lambda = cfg.lambda ? *cfg.lambda : 0.05 * (a.transpose() * t.values).lpNorm<Eigen::Infinity>();
    if (lambda < 0.0) throw std::invalid_argument("lasso_fista: lambda must be nonnegative");

    const LassoSolution sol = lasso_solve(a, t.values, lambda, cfg, Eigen::VectorXd::Zero(a.cols()));

    ReconResult result;
    result.image.p = s.p;
    result.image.q = s.q;
    result.image.pixels = basis ? Eigen::VectorXd((*basis) * sol.x) : sol.x;
    result.iters_used = sol.iters;
    result.objective_trace = sol.trace;
    result.converged = sol.converged;
    return result;
}

ReconResult reconstruct_dl(const SensingMatrix& s, const MeasurementVector& t,
                           const DictionaryStack& stack, const SolverConfig& cfg) {
    if (stack.input_dim() != s.cols) {
        throw std::invalid_argument("reconstruct_dl: stack input dimension != sensing columns");
    }
    if (t.values.size() != s.rows) {
        throw std::invalid_argument("reconstruct_dl: measurement length != sensing rows");
    }
    double lambda;
    if (cfg.lambda) {
        lambda = *cfg.lambda;
    } else {
        if (!(stack.gamma > 0.0)) {
            throw std::invalid_argument("reconstruct_dl: stack gamma must be positive without an explicit lambda");
        }
        lambda = stack.alphas.back() / (2.0 * stack.gamma);
    }

    const Eigen::MatrixXd chain = stack.chain();
    const Eigen::MatrixXd a = s.m * chain;

    // Matched-filter back-projection seeds the code estimate.
    const double snorm = spectral_norm_estimate(s.m);
    Image bp(s.p > 0 ? s.p : 1, s.p > 0 ? s.q : s.cols);
    bp.pixels = s.m.transpose() * t.values / std::max(snorm * snorm, 1e-30);
    TrainConfig enc_cfg;
    enc_cfg.alphas = stack.alphas;
    enc_cfg.code_iters = 50;
    const CodeStack init = encode(stack, bp, enc_cfg);

    SolverConfig inner = cfg;
    inner.lambda = lambda;
    const LassoSolution sol = lasso_solve(a, t.values, lambda, inner, init.codes.back());

    ReconResult result;
    result.image.p = stack.p > 0 ? stack.p : (s.p > 0 ? s.p : 1);
    result.image.q = stack.q > 0 ? stack.q : (s.q > 0 ? s.q : s.cols);
    result.image.pixels = chain * sol.x;
    result.iters_used = sol.iters;
    result.objective_trace = sol.trace;
    result.converged = sol.converged;
    return result;
}

Image binary_threshold(const Image& img, double theta) {
    Image out = img;
    for (long i = 0; i < out.pixels.size(); ++i) {
        out.pixels[i] = img.pixels[i] >= theta ? 1.0 : 0.0;
    }
    return out;
}

}  // namespace hcs
