#include "hcs/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace hcs {
namespace {

// Legendre symbol of a mod prime r: +1 quadratic residue, -1 non-residue, 0 if r | a.
int legendre(int a, int r) {
    a %= r;
    if (a < 0) a += r;
    if (a == 0) return 0;
    // Euler's criterion by fast exponentiation; r <= 100 here so this is cheap.
    long long result = 1, base = a, e = (r - 1) / 2;
    while (e > 0) {
        if (e & 1) result = result * base % r;
        base = base * base % r;
        e >>= 1;
    }
    return result == 1 ? 1 : -1;
}

long long mod_inverse(long long a, long long m) {
    long long t = 0, nt = 1, r = m, nr = a % m;
    while (nr != 0) {
        long long qt = r / nr;
        std::swap(t -= qt * nt, nt);
        std::swap(r -= qt * nr, nr);
    }
    return t < 0 ? t + m : t;
}

}  // namespace

bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; static_cast<long long>(d) * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

int crt_index(int a, int b, int p, int q) {
    const long long n = static_cast<long long>(p) * q;
    const long long mp = q * mod_inverse(q, p) % n;  // = 1 mod p, 0 mod q
    const long long mq = p * mod_inverse(p, q) % n;  // = 0 mod p, 1 mod q
    return static_cast<int>((a * mp + b * mq) % n);
}

MaskMatrix sylvester_hadamard(int k) {
    if (k < 0) throw std::invalid_argument("sylvester_hadamard: k must be nonnegative");
    if (k > 14) throw std::length_error("sylvester_hadamard: order 2^k exceeds capacity (k <= 14)");
    const int n = 1 << k;
    MaskMatrix mask;
    mask.kind = MaskKind::SylvesterHadamard;
    mask.order = n;
    mask.p = 1 << ((k + 1) / 2);
    mask.q = 1 << (k / 2);
    mask.entries = MaskEntries::Constant(n, n, 1);
    // Kronecker doubling: H_{2m} = [[H, H], [H, -H]].
    for (int m = 1; m < n; m <<= 1) {
        for (int r = 0; r < m; ++r) {
            for (int c = 0; c < m; ++c) {
                const std::int8_t v = mask.entries(r, c);
                mask.entries(r, c + m) = v;
                mask.entries(r + m, c) = v;
                mask.entries(r + m, c + m) = static_cast<std::int8_t>(-v);
            }
        }
    }
    return mask;
}

MaskMatrix twin_prime_smatrix(int p, int q) {
    if (q != p + 2 || !is_prime(p) || !is_prime(q)) {
        throw std::invalid_argument("twin_prime_smatrix: p and q=p+2 must be twin primes");
    }
    if (static_cast<long long>(p) * q > 10000) {
        throw std::length_error("twin_prime_smatrix: order p*q exceeds capacity 10000");
    }
    const int n = p * q;

    // Base pattern = complement of the twin-prime difference set: position t,
    // with a = t mod p and b = t mod q, is open iff b != 0 and
    // legendre_p(a) * legendre_q(b) != 1. Gives weight (n+1)/2 per row.
    std::vector<std::int8_t> base(n);
    for (int t = 0; t < n; ++t) {
        const int a = t % p, b = t % q;
        base[t] = static_cast<std::int8_t>(b != 0 && legendre(a, p) * legendre(b, q) != 1);
    }

    // Column c sits at aperture pixel (c / q, c % q); its cyclic index is the
    // CRT image of that pixel. Row s advances the pattern by s.
    std::vector<int> cyclic(n);
    for (int c = 0; c < n; ++c) cyclic[c] = crt_index(c / q, c % q, p, q);

    MaskMatrix mask;
    mask.kind = MaskKind::TwinPrimeS;
    mask.order = n;
    mask.p = p;
    mask.q = q;
    mask.entries.resize(n, n);
    for (int s = 0; s < n; ++s) {
        for (int c = 0; c < n; ++c) {
            mask.entries(s, c) = base[(cyclic[c] + s) % n];
        }
    }
    return mask;
}

SensingMatrix build_sensing_matrix(const MaskMatrix& mask, const std::vector<int>& shifts) {
    if (shifts.empty()) throw std::invalid_argument("build_sensing_matrix: shifts must be nonempty");
    std::unordered_set<int> seen;
    for (int s : shifts) {
        if (s < 0 || s >= mask.order) {
            throw std::invalid_argument("build_sensing_matrix: shift out of range [0, n)");
        }
        if (!seen.insert(s).second) {
            throw std::invalid_argument("build_sensing_matrix: duplicate shift");
        }
    }
    SensingMatrix s;
    s.rows = static_cast<int>(shifts.size());
    s.cols = mask.order;
    s.shifts = shifts;
    s.kind = mask.kind;
    s.p = mask.p;
    s.q = mask.q;
    s.m.resize(s.rows, s.cols);
    for (int r = 0; r < s.rows; ++r) {
        s.m.row(r) = mask.entries.row(shifts[r]).cast<double>();
    }
    return s;
}

CoherenceReport mutual_coherence(const Eigen::MatrixXd& m) {
    if (m.cols() < 2) throw std::invalid_argument("mutual_coherence: need at least 2 columns");
    const long nc = m.cols();
    CoherenceReport report;
    std::vector<double> inv_norm(nc, 0.0);
    std::vector<int> usable;
    usable.reserve(nc);
    for (long j = 0; j < nc; ++j) {
        const double norm = m.col(j).norm();
        if (norm < 1e-12) {
            report.excluded_columns.push_back(static_cast<int>(j));
        } else {
            inv_norm[j] = 1.0 / norm;
            usable.push_back(static_cast<int>(j));
        }
    }
    if (usable.size() < 2) {
        throw std::invalid_argument("mutual_coherence: fewer than 2 nonzero columns");
    }
    // Gram of the usable block; one gemm then an off-diagonal scan.
    const long nu = static_cast<long>(usable.size());
    Eigen::MatrixXd cols(m.rows(), nu);
    for (long j = 0; j < nu; ++j) cols.col(j) = m.col(usable[j]) * inv_norm[usable[j]];
    const Eigen::MatrixXd gram = cols.transpose() * cols;
    double best = -1.0;
    for (long i = 0; i < nu; ++i) {
        for (long j = i + 1; j < nu; ++j) {
            const double v = std::abs(gram(i, j));
            if (v > best) {
                best = v;
                report.worst_pair = {usable[i], usable[j]};
            }
        }
    }
    report.mu = std::min(best, 1.0);
    report.gram_offdiag_max = best;
    return report;
}

CoherenceReport mutual_coherence(const SensingMatrix& s) { return mutual_coherence(s.m); }

}  // namespace hcs
