// Python bindings over the main hcsim operations. Matrices cross the boundary
// as numpy arrays; images travel as (pixels, p, q).

#include "hcs/channel.hpp"
#include "hcs/corpus.hpp"
#include "hcs/design.hpp"
#include "hcs/dictionary.hpp"
#include "hcs/evaluation.hpp"
#include "hcs/io.hpp"
#include "hcs/reconstruction.hpp"
#include "hcs/rng.hpp"
#include "hcs/sensing.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace hcs;

namespace {

Image image_from_array(const Eigen::VectorXd& pixels, int p, int q, char label) {
    if (pixels.size() != static_cast<long>(p) * q) {
        throw std::invalid_argument("pixels length must equal p*q");
    }
    Image img(p, q, label);
    img.pixels = pixels;
    return img;
}

SolverConfig solver_config(std::optional<double> lambda, int max_iters, double tol) {
    SolverConfig cfg;
    cfg.lambda = lambda;
    cfg.max_iters = max_iters;
    cfg.tol = tol;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(hcsim, m) {
    m.doc() = "Hadamard compressed-sensing image transmission simulator";

    py::enum_<MaskKind>(m, "MaskKind")
        .value("SylvesterHadamard", MaskKind::SylvesterHadamard)
        .value("TwinPrimeS", MaskKind::TwinPrimeS);

    py::class_<MaskMatrix>(m, "MaskMatrix")
        .def_readonly("kind", &MaskMatrix::kind)
        .def_readonly("order", &MaskMatrix::order)
        .def_readonly("p", &MaskMatrix::p)
        .def_readonly("q", &MaskMatrix::q)
        .def_property_readonly("entries",
                               [](const MaskMatrix& mask) { return mask.entries.cast<int>().eval(); });

    py::class_<SensingMatrix>(m, "SensingMatrix")
        .def_readonly("rows", &SensingMatrix::rows)
        .def_readonly("cols", &SensingMatrix::cols)
        .def_readonly("shifts", &SensingMatrix::shifts)
        .def_readonly("p", &SensingMatrix::p)
        .def_readonly("q", &SensingMatrix::q)
        .def_readonly("matrix", &SensingMatrix::m);

    py::class_<CoherenceReport>(m, "CoherenceReport")
        .def_readonly("mu", &CoherenceReport::mu)
        .def_readonly("worst_pair", &CoherenceReport::worst_pair)
        .def_readonly("gram_offdiag_max", &CoherenceReport::gram_offdiag_max)
        .def_readonly("excluded_columns", &CoherenceReport::excluded_columns);

    py::class_<Image>(m, "Image")
        .def(py::init([](const Eigen::VectorXd& pixels, int p, int q, char label) {
                 return image_from_array(pixels, p, q, label);
             }),
             py::arg("pixels"), py::arg("p"), py::arg("q"), py::arg("label") = '\0')
        .def_readonly("p", &Image::p)
        .def_readonly("q", &Image::q)
        .def_readonly("pixels", &Image::pixels)
        .def_readonly("label", &Image::label);

    py::class_<DictionaryStack>(m, "DictionaryStack")
        .def_readonly("layer_dims", &DictionaryStack::layer_dims)
        .def_readonly("layers", &DictionaryStack::layers)
        .def_readonly("alphas", &DictionaryStack::alphas)
        .def_readonly("beta", &DictionaryStack::beta)
        .def_readonly("gamma", &DictionaryStack::gamma)
        .def("chain", &DictionaryStack::chain);

    py::class_<LossBreakdown>(m, "LossBreakdown")
        .def_readonly("l1_codes", &LossBreakdown::l1_codes)
        .def_readonly("image_mse", &LossBreakdown::image_mse)
        .def_readonly("meas_mse", &LossBreakdown::meas_mse)
        .def_readonly("total", &LossBreakdown::total);

    py::class_<ReconResult>(m, "ReconResult")
        .def_readonly("image", &ReconResult::image)
        .def_readonly("iters_used", &ReconResult::iters_used)
        .def_readonly("objective_trace", &ReconResult::objective_trace)
        .def_readonly("converged", &ReconResult::converged);

    m.def("sylvester_hadamard", &sylvester_hadamard, py::arg("k"));
    m.def("twin_prime_smatrix", &twin_prime_smatrix, py::arg("p"), py::arg("q"));
    m.def("build_sensing_matrix", &build_sensing_matrix, py::arg("mask"), py::arg("shifts"));
    m.def("mutual_coherence",
          py::overload_cast<const Eigen::MatrixXd&>(&mutual_coherence), py::arg("matrix"));
    m.def("mutual_coherence_of_design",
          py::overload_cast<const SensingMatrix&>(&mutual_coherence), py::arg("design"));

    m.def(
        "measure",
        [](const SensingMatrix& s, const Image& img) { return measure(s, img).values; },
        py::arg("design"), py::arg("image"));
    m.def(
        "add_noise",
        [](const Eigen::VectorXd& values, double snr_db, std::uint64_t seed, double pixel_pow) {
            MeasurementVector t;
            t.values = values;
            return add_noise(t, NoiseSpec{snr_db, seed}, pixel_pow).values;
        },
        py::arg("values"), py::arg("snr_db"), py::arg("seed"), py::arg("pixel_power"));
    m.def("pixel_power", &pixel_power, py::arg("image"));

    m.def("soft_threshold", &soft_threshold, py::arg("x"), py::arg("t"));
    m.def(
        "lasso_fista",
        [](const SensingMatrix& s, const Eigen::VectorXd& t, std::optional<Eigen::MatrixXd> basis,
           std::optional<double> lambda, int max_iters, double tol) {
            MeasurementVector mv;
            mv.values = t;
            return lasso_fista(s, mv, basis, solver_config(lambda, max_iters, tol));
        },
        py::arg("design"), py::arg("measurement"), py::arg("basis") = std::nullopt,
        py::arg("lam") = std::nullopt, py::arg("max_iters") = 1000, py::arg("tol") = 1e-8);
    m.def(
        "reconstruct_dl",
        [](const SensingMatrix& s, const Eigen::VectorXd& t, const DictionaryStack& stack,
           std::optional<double> lambda, int max_iters, double tol) {
            MeasurementVector mv;
            mv.values = t;
            return reconstruct_dl(s, mv, stack, solver_config(lambda, max_iters, tol));
        },
        py::arg("design"), py::arg("measurement"), py::arg("stack"), py::arg("lam") = std::nullopt,
        py::arg("max_iters") = 1000, py::arg("tol") = 1e-8);
    m.def("binary_threshold", &binary_threshold, py::arg("image"), py::arg("theta") = 0.5);

    m.def("init_stack", &init_stack, py::arg("layer_dims"), py::arg("seed"), py::arg("p") = 0,
          py::arg("q") = 0);
    m.def(
        "train",
        [](const std::vector<Image>& corpus, const SensingMatrix& s, std::vector<double> alphas,
           double beta, double gamma, int epochs, int code_iters, double dict_step,
           std::uint64_t seed, std::vector<int> layer_dims) {
            TrainConfig cfg;
            cfg.alphas = std::move(alphas);
            cfg.beta = beta;
            cfg.gamma = gamma;
            cfg.epochs = epochs;
            cfg.code_iters = code_iters;
            cfg.dict_step = dict_step;
            cfg.seed = seed;
            cfg.layer_dims = std::move(layer_dims);
            return train(corpus, s, cfg);
        },
        py::arg("corpus"), py::arg("design"), py::arg("alphas") = std::vector<double>{0.01, 0.01},
        py::arg("beta") = 1.0, py::arg("gamma") = 1.0, py::arg("epochs") = 50,
        py::arg("code_iters") = 40, py::arg("dict_step") = 1.0, py::arg("seed") = 0,
        py::arg("layer_dims") = std::vector<int>{});
    m.def("mutual_coherence_effective", &mutual_coherence_effective, py::arg("design"),
          py::arg("stack"));

    m.def(
        "design_rows",
        [](const MaskMatrix& mask, const DictionaryStack* stack, int L, const std::string& strategy,
           int restarts, std::uint64_t seed) {
            DesignConfig cfg;
            cfg.L = L;
            cfg.strategy = strategy == "random" ? DesignStrategy::RandomBaseline
                                                : DesignStrategy::GreedyForward;
            cfg.restarts = restarts;
            cfg.seed = seed;
            return design_rows(mask, stack, cfg);
        },
        py::arg("mask"), py::arg("stack") = nullptr, py::arg("L") = 1,
        py::arg("strategy") = "greedy", py::arg("restarts") = 1, py::arg("seed") = 0);

    m.def("render_letter", &render_letter, py::arg("letter"), py::arg("p"), py::arg("q"));
    m.def("full_corpus", &full_corpus, py::arg("p"), py::arg("q"));
    m.def("fill_fraction", &fill_fraction, py::arg("image"));

    m.def("ber", &ber, py::arg("a"), py::arg("b"));
    m.def(
        "trial",
        [](char letter, double m_ratio, double snr_db, std::uint64_t seed, const std::string& solver,
           const SensingMatrix& design, const DictionaryStack* stack, std::uint64_t master_seed) {
            EvalConfig cfg;
            cfg.master_seed = master_seed;
            const EvalRecord rec =
                trial(letter, m_ratio, snr_db, seed, solver_from_name(solver), design, stack, cfg);
            py::dict d;
            d["letter"] = std::string(1, rec.letter);
            d["M"] = rec.M;
            d["L"] = rec.L;
            d["snr_db"] = rec.snr_db;
            d["seed"] = rec.seed;
            d["solver"] = solver_name(rec.solver);
            d["ber"] = rec.ber;
            d["iters"] = rec.iters;
            return d;
        },
        py::arg("letter"), py::arg("m"), py::arg("snr_db"), py::arg("seed"), py::arg("solver"),
        py::arg("design"), py::arg("stack") = nullptr, py::arg("master_seed") = 0);

    m.def("derive_seed", [](std::uint64_t master, const std::string& purpose) {
        return derive_seed(master, purpose);
    });
}
