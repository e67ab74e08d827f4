#pragma once

// Arithmetic side conditions for mixing.
//
// GCD condition: with r = (1,...,1), the row vector r*M^n lists the lengths
// of the n-fold letter images.  The condition asks gcd(r*M^n) = 1 for every
// n >= 1.  Only primes dividing det(M) can ever divide all entries (for any
// other prime M is invertible mod p and r*M^n stays nonzero), and for each
// such prime the orbit of r*M^n mod p is eventually periodic, so scanning
// until the first repeated vector decides the condition with an auditable
// certificate: either a zero vector appears (condition fails at that power)
// or the exhibited cycle proves it never does.
//
// Tile lengths: a choice of positive lengths (t0, t1) for the two letters,
// either user supplied or the left eigenvector of the leading eigenvalue.
// Their ratio being rational or irrational is decided exactly.
//
// bezout: minimal integer coefficients r, s with r*l0 + s*l1 = 1.

#include "quadratic.hpp"
#include "spectral.hpp"
#include "word.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace submix {

// ---------------------------------------------------------------------------
// GCD condition, stated for a general m x m integer matrix.
// ---------------------------------------------------------------------------

using GeneralMatrix = std::vector<std::vector<long long>>;  // row-major, square

inline GeneralMatrix to_general(const IntMatrix2& m) {
    return {{m.m00, m.m01}, {m.m10, m.m11}};
}

// Exact determinant by fraction-free elimination.
inline BigInt general_det(const GeneralMatrix& m) {
    const std::size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw std::invalid_argument("general_det: matrix not square");
    std::vector<std::vector<BigInt>> a(n, std::vector<BigInt>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && a[swap_row][k] == 0) ++swap_row;
            if (swap_row == n) return 0;
            std::swap(a[k], a[swap_row]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

struct PrimeOrbit {
    long long prime = 0;
    // Vectors r*M^n mod p for n = 0, 1, ..., ending with the first vector
    // that repeats an earlier one.  orbit[cycle_start] == orbit.back().
    std::vector<std::vector<long long>> orbit;
    std::size_t cycle_start = 0;
    std::optional<std::size_t> zero_index;  // first n >= 1 with r*M^n == 0 mod p
};

struct GcdCertificate {
    bool holds = true;
    std::optional<long long> failing_prime;
    std::optional<std::size_t> failing_power;
    std::vector<PrimeOrbit> orbits;  // one per tested prime
};

namespace detail {

inline std::vector<long long> prime_factors(long long n) {
    std::vector<long long> primes;
    if (n < 0) n = -n;
    for (long long f = 2; f * f <= n; ++f) {
        if (n % f == 0) {
            primes.push_back(f);
            while (n % f == 0) n /= f;
        }
    }
    if (n > 1) primes.push_back(n);
    return primes;
}

}  // namespace detail

inline GcdCertificate gcd_condition(const GeneralMatrix& m) {
    const std::size_t dim = m.size();
    if (dim == 0) throw std::invalid_argument("gcd_condition: empty matrix");
    BigInt det = general_det(m);
    if (det == 0)
        throw std::domain_error("gcd_condition: determinant is zero; the length vectors eventually share every factor of the kernel direction and the condition is not meaningful");
    if (det > BigInt(std::numeric_limits<long long>::max()) ||
        det < BigInt(std::numeric_limits<long long>::min()))
        throw std::overflow_error("gcd_condition: determinant exceeds 64-bit range");

    GcdCertificate cert;
    constexpr std::size_t kOrbitBudget = 2'000'000;
    for (long long p : detail::prime_factors(det.convert_to<long long>())) {
        PrimeOrbit po;
        po.prime = p;
        std::vector<long long> v(dim, 1 % p);  // r = (1,...,1), the n = 0 seed
        std::map<std::vector<long long>, std::size_t> seen;
        std::size_t step = 0;
        while (true) {
            auto it = seen.find(v);
            po.orbit.push_back(v);
            if (it != seen.end()) {
                po.cycle_start = it->second;
                break;
            }
            seen.emplace(v, step);
            if (step >= 1 && std::all_of(v.begin(), v.end(), [](long long x) { return x == 0; }) &&
                !po.zero_index) {
                po.zero_index = step;  // zero is absorbing: the next step closes the cycle
            }
            if (po.orbit.size() > kOrbitBudget)
                throw std::length_error("gcd_condition: mod-p orbit exceeds scan budget");
            // v <- v * M  (mod p)
            std::vector<long long> next(dim, 0);
            for (std::size_t j = 0; j < dim; ++j) {
                long long acc = 0;
                for (std::size_t i = 0; i < dim; ++i)
                    acc = (acc + v[i] % p * (m[i][j] % p)) % p;
                next[j] = ((acc % p) + p) % p;
            }
            v = std::move(next);
            ++step;
        }
        if (po.zero_index) {
            cert.holds = false;
            if (!cert.failing_prime) {
                cert.failing_prime = p;
                cert.failing_power = *po.zero_index;
            }
        }
        cert.orbits.push_back(std::move(po));
    }
    return cert;
}

inline GcdCertificate gcd_condition(const IntMatrix2& m) { return gcd_condition(to_general(m)); }
inline GcdCertificate gcd_condition(const Substitution& s) {
    return gcd_condition(substitution_matrix(s));
}

// ---------------------------------------------------------------------------
// Tile lengths.
// ---------------------------------------------------------------------------

struct TileLengths {
    QuadraticNumber t0;
    QuadraticNumber t1;
    enum class Provenance { UserGiven, PFEigenvector };
    Provenance provenance = Provenance::UserGiven;
};

inline void validate_tiles(const TileLengths& t) {
    if (t.t0.sign() <= 0 || t.t1.sign() <= 0)
        throw std::invalid_argument("tile lengths must be positive");
}

// Left eigenvector of the leading eigenvalue, scaled so t0 = 1.  Tilings
// built from these lengths are self-similar under the substitution.
inline TileLengths pf_tile_lengths(const IntMatrix2& m) {
    SpectralData sd = eigen_data(m);
    TileLengths t;
    t.t0 = QuadraticNumber(1);
    t.t1 = (sd.theta1 - QuadraticNumber(m.m00)) / QuadraticNumber(m.m10);
    t.provenance = TileLengths::Provenance::PFEigenvector;
    return t;
}

enum class RatioClass { Rational, Irrational };

// t1/t0 with t_i = p_i + q_i*sqrt(d_i) is rational iff the radicands agree
// (after normalisation, q = 0 forces d = 0) and p1*q0 == p0*q1.
inline RatioClass tile_ratio_class(const TileLengths& t) {
    validate_tiles(t);
    if (t.t0.radicand() != t.t1.radicand()) return RatioClass::Irrational;
    if (t.t0.is_rational()) return RatioClass::Rational;  // both rational
    Rational cross_a = t.t1.rational_part() * t.t0.surd_part();
    Rational cross_b = t.t0.rational_part() * t.t1.surd_part();
    return cross_a == cross_b ? RatioClass::Rational : RatioClass::Irrational;
}

// ---------------------------------------------------------------------------
// Bezout coefficients.
// ---------------------------------------------------------------------------

struct BezoutPair {
    long long r = 0;
    long long s = 0;
};

class BezoutError : public std::domain_error {
  public:
    BezoutError(long long gcd)
        : std::domain_error("bezout: inputs are not coprime, gcd = " + std::to_string(gcd)),
          gcd_(gcd) {}
    long long gcd() const { return gcd_; }

  private:
    long long gcd_;
};

// Minimal pair r*l0 + s*l1 = 1 with |r| <= l1 and |s| <= l0.
inline BezoutPair bezout(long long l0, long long l1) {
    if (l0 <= 0 || l1 <= 0) throw std::invalid_argument("bezout: lengths must be positive");
    long long g = std::gcd(l0, l1);
    if (g != 1) throw BezoutError(g);
    // Extended Euclid.
    long long old_r = l0, r = l1;
    long long old_s = 1, s = 0;
    long long old_t = 0, t = 1;
    while (r != 0) {
        long long q = old_r / r;
        std::tie(old_r, r) = std::pair(r, old_r - q * r);
        std::tie(old_s, s) = std::pair(s, old_s - q * s);
        std::tie(old_t, t) = std::pair(t, old_t - q * t);
    }
    BezoutPair best{old_s, old_t};
    // Shift along the lattice (r, s) -> (r + k*l1, s - k*l0) to minimise.
    auto weight = [&](const BezoutPair& p) {
        return std::abs(p.r) + std::abs(p.s);
    };
    for (long long k = -2; k <= 2; ++k) {
        BezoutPair cand{old_s + k * l1, old_t - k * l0};
        if (weight(cand) < weight(best)) best = cand;
    }
    if (std::abs(best.r) > l1 || std::abs(best.s) > l0)
        throw std::logic_error("bezout: minimised pair escaped its bounds");
    return best;
}

}  // namespace submix
