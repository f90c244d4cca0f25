#include "hcs/channel.hpp"

#include "hcs/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace hcs {

MeasurementVector measure(const SensingMatrix& s, const Image& img) {
    if (s.cols != img.size()) {
        throw std::invalid_argument("measure: sensing matrix columns != image pixel count");
    }
    MeasurementVector t;
    t.values = s.m * img.pixels;
    return t;
}

MeasurementVector add_noise(const MeasurementVector& t, const NoiseSpec& spec, double pixel_power) {
    if (!(pixel_power > 0.0)) {
        throw std::invalid_argument("add_noise: pixel_power must be positive");
    }
    MeasurementVector out = t;
    out.snr_db = spec.snr_db;
    out.seed = spec.seed;
    if (spec.snr_db == std::numeric_limits<double>::infinity()) {
        return out;  // noiseless sentinel
    }
    // Floor at -240 dB so sigma stays finite; anything below is already pure noise.
    const double snr = std::max(spec.snr_db, -240.0);
    const double sigma = std::sqrt(pixel_power * std::pow(10.0, -snr / 10.0));
    const CounterRng rng(spec.seed);
    for (long i = 0; i < out.values.size(); ++i) {
        out.values[i] += sigma * rng.gaussian(static_cast<std::uint64_t>(i));
    }
    return out;
}

double pixel_power(const Image& img) {
    if (img.size() == 0) return 0.0;
    return img.pixels.squaredNorm() / static_cast<double>(img.size());
}

}  // namespace hcs
