#include "hcs/corpus.hpp"

#include <stdexcept>

namespace hcs {
namespace {

// 9 rows x 7 cols block letters. '#' = open pixel.
constexpr std::array<std::array<const char*, 9>, 26> kFont = {{
    {"..###..", ".#...#.", "#.....#", "#.....#", "#######", "#.....#", "#.....#", "#.....#", "#.....#"},  // A
    {"######.", "#.....#", "#.....#", "######.", "#.....#", "#.....#", "#.....#", "#.....#", "######."},  // B
    {".#####.", "#.....#", "#......", "#......", "#......", "#......", "#......", "#.....#", ".#####."},  // C
    {"######.", "#.....#", "#.....#", "#.....#", "#.....#", "#.....#", "#.....#", "#.....#", "######."},  // D
    {"#######", "#......", "#......", "#####..", "#......", "#......", "#......", "#......", "#######"},  // E
    {"#######", "#......", "#......", "#####..", "#......", "#......", "#......", "#......", "#......"},  // F
    {".#####.", "#.....#", "#......", "#......", "#..####", "#.....#", "#.....#", "#.....#", ".#####."},  // G
    {"#.....#", "#.....#", "#.....#", "#######", "#.....#", "#.....#", "#.....#", "#.....#", "#.....#"},  // H
    {"..###..", "...#...", "...#...", "...#...", "...#...", "...#...", "...#...", "...#...", "..###.."},  // I
    {"....###", ".....#.", ".....#.", ".....#.", ".....#.", ".....#.", ".....#.", "#....#.", ".####.."},  // J
    {"#....#.", "#...#..", "#..#...", "#.#....", "##.....", "#.#....", "#..#...", "#...#..", "#....#."},  // K
    {"#......", "#......", "#......", "#......", "#......", "#......", "#......", "#......", "#######"},  // L
    {"#.....#", "##...##", "#.#.#.#", "#..#..#", "#.....#", "#.....#", "#.....#", "#.....#", "#.....#"},  // M
    {"#.....#", "##....#", "#.#...#", "#..#..#", "#...#.#", "#....##", "#.....#", "#.....#", "#.....#"},  // N
    {".#####.", "#.....#", "#.....#", "#.....#", "#.....#", "#.....#", "#.....#", "#.....#", ".#####."},  // O
    {"######.", "#.....#", "#.....#", "######.", "#......", "#......", "#......", "#......", "#......"},  // P
    {".#####.", "#.....#", "#.....#", "#.....#", "#.....#", "#.....#", "#...#.#", "#....#.", ".####.#"},  // Q
    {"######.", "#.....#", "#.....#", "######.", "#.#....", "#..#...", "#...#..", "#....#.", "#.....#"},  // R
    {".#####.", "#.....#", "#......", ".####..", ".....#.", "......#", "#.....#", "#.....#", ".#####."},  // S
    {"#######", "...#...", "...#...", "...#...", "...#...", "...#...", "...#...", "...#...", "...#..."},  // T
    {"#.....#", "#.....#", "#.....#", "#.....#", "#.....#", "#.....#", "#.....#", "#.....#", ".#####."},  // U
    {"#.....#", "#.....#", "#.....#", "#.....#", ".#...#.", ".#...#.", ".#...#.", "..#.#..", "...#..."},  // V
    {"#.....#", "#.....#", "#.....#", "#.....#", "#..#..#", "#..#..#", "#.#.#.#", "##...##", "#.....#"},  // W
    {"#.....#", ".#...#.", "..#.#..", "...#...", "...#...", "...#...", "..#.#..", ".#...#.", "#.....#"},  // X
    {"#.....#", ".#...#.", "..#.#..", "...#...", "...#...", "...#...", "...#...", "...#...", "...#..."},  // Y
    {"#######", ".....#.", "....#..", "...#...", "...#...", "..#....", ".#.....", "#......", "#######"},  // Z
}};

Glyph make_glyph(char c) {
    Glyph g;
    g.ch = c;
    int ones = 0;
    const auto& rows = kFont[c - 'A'];
    for (int r = 0; r < 9; ++r) {
        g.bitmap[r] = rows[r];
        for (char px : g.bitmap[r]) ones += px == '#';
    }
    g.fill_fraction = ones / 63.0;
    return g;
}

}  // namespace

const Glyph& glyph(char c) {
    if (c < 'A' || c > 'Z') throw std::invalid_argument("glyph: character must be in A..Z");
    static const std::array<Glyph, 26> table = [] {
        std::array<Glyph, 26> t;
        for (int i = 0; i < 26; ++i) t[i] = make_glyph(static_cast<char>('A' + i));
        return t;
    }();
    return table[c - 'A'];
}

Image render_letter(char c, int p, int q) {
    const Glyph& g = glyph(c);
    if (p < 11 || q < 9) {
        throw std::invalid_argument("render_letter: need p >= 11 and q >= 9 to upscale the 7x9 bitmap");
    }
    Image img(p, q, c);
    const int rows = p - 2, cols = q - 2;
    for (int i = 0; i < rows; ++i) {
        const int si = i * 9 / rows;
        for (int j = 0; j < cols; ++j) {
            const int sj = j * 7 / cols;
            img(i + 1, j + 1) = g.bitmap[si][sj] == '#' ? 1.0 : 0.0;
        }
    }
    return img;
}

std::vector<Image> full_corpus(int p, int q) {
    std::vector<Image> corpus;
    corpus.reserve(26);
    for (char c = 'A'; c <= 'Z'; ++c) corpus.push_back(render_letter(c, p, q));
    return corpus;
}

double fill_fraction(const Image& img) {
    return img.pixels.sum() / static_cast<double>(img.size());
}

}  // namespace hcs
