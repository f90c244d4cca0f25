#pragma once

#include <Eigen/Core>

#include <stdexcept>

namespace hcs {

// A p x q picture stored as its row-major flattened N-vector. Binary corpus
// images contain only {0,1}; reconstructions are real-valued.
struct Image {
    int p = 0;  // rows
    int q = 0;  // cols
    Eigen::VectorXd pixels;  // length p*q, pixels[r*q + c]
    char label = '\0';

    Image() = default;
    Image(int rows, int cols, char tag = '\0')
        : p(rows), q(cols), pixels(Eigen::VectorXd::Zero(static_cast<long>(rows) * cols)), label(tag) {
        if (rows <= 0 || cols <= 0) throw std::invalid_argument("Image: dimensions must be positive");
    }

    long size() const { return pixels.size(); }

    double operator()(int r, int c) const { return pixels[static_cast<long>(r) * q + c]; }
    double& operator()(int r, int c) { return pixels[static_cast<long>(r) * q + c]; }

    bool is_binary() const {
        for (long i = 0; i < pixels.size(); ++i) {
            if (pixels[i] != 0.0 && pixels[i] != 1.0) return false;
        }
        return true;
    }
};

}  // namespace hcs
