#pragma once

#include "hcs/image.hpp"

#include <array>
#include <string>
#include <vector>

namespace hcs {

// One embedded letter stencil: a fixed 7x9 (cols x rows) block-letter bitmap.
struct Glyph {
    char ch;
    std::array<std::string, 9> bitmap;  // rows of '.'/'#'
    double fill_fraction;               // ones / 63 in the base bitmap
};

const Glyph& glyph(char c);

// Nearest-neighbor upscale of the base bitmap into a centered
// (p-2) x (q-2) region with a one-pixel blank border. Binary, deterministic.
// Requires p >= 11 and q >= 9 so the bitmap never downsamples.
Image render_letter(char c, int p, int q);

// All 26 letters in alphabetical order.
std::vector<Image> full_corpus(int p, int q);

// Fraction of on-pixels in a rendered image.
double fill_fraction(const Image& img);

}  // namespace hcs
