#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <utility>
#include <vector>

namespace hcs {

enum class MaskKind { SylvesterHadamard, TwinPrimeS };

using MaskEntries = Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic>;

// An order-n mask matrix. Entries are {0,1} for TwinPrimeS (open/closed
// aperture pixels) and {-1,+1} for SylvesterHadamard. Row s of a TwinPrimeS
// matrix is the base aperture pattern advanced by s in the doubly-cyclic
// (CRT) index, evaluated over pixels in row-major order.
struct MaskMatrix {
    MaskKind kind = MaskKind::TwinPrimeS;
    int order = 0;  // n
    int p = 0;      // aperture rows
    int q = 0;      // aperture cols, p*q == order
    MaskEntries entries;  // order x order
};

// L x N measurement matrix: row r is mask row shifts[r].
struct SensingMatrix {
    int rows = 0;  // L
    int cols = 0;  // N
    std::vector<int> shifts;
    MaskKind kind = MaskKind::TwinPrimeS;
    int p = 0;
    int q = 0;
    Eigen::MatrixXd m;
};

struct CoherenceReport {
    double mu = 0.0;                    // max normalized |<ci,cj>|, i != j
    std::pair<int, int> worst_pair{-1, -1};
    double gram_offdiag_max = 0.0;      // equals mu on unit-normalized columns
    std::vector<int> excluded_columns;  // columns with norm < 1e-12, skipped
};

// Order-2^k Sylvester-Hadamard matrix, entries {-1,+1}. k <= 14.
MaskMatrix sylvester_hadamard(int k);

// Circulant {0,1} S-matrix of order p*q from the twin-prime difference set.
// Requires q == p + 2, both prime, p*q <= 10000. Row weight (n+1)/2 and
// S*S^T = ((n+1)/4)(I+J) hold exactly.
MaskMatrix twin_prime_smatrix(int p, int q);

// Maps the aperture pixel (a,b) to its doubly-cyclic index t with
// t = a (mod p), t = b (mod q). Valid for coprime p, q.
int crt_index(int a, int b, int p, int q);

SensingMatrix build_sensing_matrix(const MaskMatrix& mask, const std::vector<int>& shifts);

CoherenceReport mutual_coherence(const Eigen::MatrixXd& m);
CoherenceReport mutual_coherence(const SensingMatrix& s);

bool is_prime(int n);

}  // namespace hcs
