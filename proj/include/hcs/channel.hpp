#pragma once

#include "hcs/image.hpp"
#include "hcs/sensing.hpp"

#include <cstdint>
#include <optional>

namespace hcs {

// Length-L transform vector, optionally tagged with the noise settings that
// produced it.
struct MeasurementVector {
    Eigen::VectorXd values;
    std::optional<double> snr_db;
    std::optional<std::uint64_t> seed;
};

// Pixel-equivalent power SNR in dB; +infinity means noiseless.
struct NoiseSpec {
    double snr_db = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;
};

// T = S * flatten(img). Exact linear algebra, no noise.
MeasurementVector measure(const SensingMatrix& s, const Image& img);

// Adds i.i.d. zero-mean Gaussian noise with variance
// sigma^2 = pixel_power * 10^(-snr_db/10) per measurement. The input vector
// is left unmodified; identical (seed, L) give identical noise.
MeasurementVector add_noise(const MeasurementVector& t, const NoiseSpec& spec, double pixel_power);

// Mean squared pixel value over the aperture; the fill fraction for binary
// images. Zero for an all-zero image (callers must guard before add_noise).
double pixel_power(const Image& img);

}  // namespace hcs
