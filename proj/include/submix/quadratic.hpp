#pragma once

// Exact arithmetic in real quadratic fields Q(sqrt(d)).
//
// A QuadraticNumber stores p + q*sqrt(d) with p, q exact rationals and d a
// square-free non-negative integer.  All comparisons are exact: deciding the
// sign of p + q*sqrt(d) reduces to comparing p^2 with q^2*d, which stays in
// rational arithmetic.  This is what lets the rest of the library classify
// second eigenvalues against 1 and tile-length ratios against rationality
// without ever trusting floating point.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace submix {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Largest square factor extraction: n = s^2 * d with d square-free.
// Trial division; inputs at desk scale are discriminants of small integer
// matrices, so this is never the bottleneck.
struct SquareFreeSplit {
    long long s = 1;  // extracted square root factor
    long long d = 1;  // square-free remainder
};

inline SquareFreeSplit square_free_split(long long n) {
    if (n < 0) throw std::domain_error("square_free_split: negative input");
    SquareFreeSplit out;
    if (n == 0) {
        out.s = 0;
        out.d = 0;
        return out;
    }
    long long rest = n;
    for (long long f = 2; f * f * f * f <= n || f * f <= rest; ++f) {
        while (rest % (f * f) == 0) {
            rest /= f * f;
            out.s *= f;
        }
        if (f * f > rest) break;
    }
    out.d = rest;
    return out;
}

class QuadraticNumber {
  public:
    QuadraticNumber() = default;
    QuadraticNumber(long long value) : p_(value) {}  // NOLINT(google-explicit-constructor)
    QuadraticNumber(const Rational& value) : p_(value) {}  // NOLINT(google-explicit-constructor)

    // p + q*sqrt(d); d need not be square-free, it is normalised here.
    QuadraticNumber(Rational p, Rational q, long long d) : p_(std::move(p)) {
        if (d < 0) throw std::domain_error("QuadraticNumber: negative radicand");
        SquareFreeSplit sf = square_free_split(d);
        q_ = std::move(q) * sf.s;
        d_ = sf.d;
        normalize();
    }

    static QuadraticNumber sqrt_of(long long n) { return QuadraticNumber(0, 1, n); }

    const Rational& rational_part() const { return p_; }
    const Rational& surd_part() const { return q_; }
    long long radicand() const { return d_; }
    bool is_rational() const { return q_ == 0; }

    // -1, 0, +1 — decided exactly.
    int sign() const {
        int sp = p_.sign();
        int sq = q_.sign();
        if (sq == 0) return sp;
        if (sp == 0) return sq;
        if (sp == sq) return sp;
        // Opposite signs: |p| vs |q|*sqrt(d)  <=>  p^2 vs q^2*d.
        Rational lhs = p_ * p_;
        Rational rhs = q_ * q_ * d_;
        if (lhs == rhs) return 0;
        return (lhs > rhs) ? sp : sq;
    }

    QuadraticNumber operator-() const { return raw(-p_, -q_, d_); }

    QuadraticNumber abs() const { return sign() < 0 ? -*this : *this; }

    friend QuadraticNumber operator+(const QuadraticNumber& a, const QuadraticNumber& b) {
        long long d = merge_radicand(a, b);
        return raw(a.p_ + b.p_, a.q_ + b.q_, d);
    }
    friend QuadraticNumber operator-(const QuadraticNumber& a, const QuadraticNumber& b) {
        long long d = merge_radicand(a, b);
        return raw(a.p_ - b.p_, a.q_ - b.q_, d);
    }
    friend QuadraticNumber operator*(const QuadraticNumber& a, const QuadraticNumber& b) {
        long long d = merge_radicand(a, b);
        return raw(a.p_ * b.p_ + a.q_ * b.q_ * d, a.p_ * b.q_ + a.q_ * b.p_, d);
    }
    friend QuadraticNumber operator/(const QuadraticNumber& a, const QuadraticNumber& b) {
        long long d = merge_radicand(a, b);
        // 1/(p + q*sqrt(d)) = (p - q*sqrt(d)) / (p^2 - q^2 d)
        Rational norm = b.p_ * b.p_ - b.q_ * b.q_ * d;
        if (norm == 0) throw std::domain_error("QuadraticNumber: division by zero");
        return raw((a.p_ * b.p_ - a.q_ * b.q_ * d) / norm, (a.q_ * b.p_ - a.p_ * b.q_) / norm, d);
    }

    QuadraticNumber& operator+=(const QuadraticNumber& o) { return *this = *this + o; }
    QuadraticNumber& operator-=(const QuadraticNumber& o) { return *this = *this - o; }
    QuadraticNumber& operator*=(const QuadraticNumber& o) { return *this = *this * o; }
    QuadraticNumber& operator/=(const QuadraticNumber& o) { return *this = *this / o; }

    friend bool operator==(const QuadraticNumber& a, const QuadraticNumber& b) {
        if (a.q_ != 0 && b.q_ != 0 && a.d_ != b.d_) return false;  // distinct fields
        return a.p_ == b.p_ && a.q_ == b.q_;
    }
    friend bool operator!=(const QuadraticNumber& a, const QuadraticNumber& b) { return !(a == b); }
    friend bool operator<(const QuadraticNumber& a, const QuadraticNumber& b) {
        return (a - b).sign() < 0;
    }
    friend bool operator>(const QuadraticNumber& a, const QuadraticNumber& b) { return b < a; }
    friend bool operator<=(const QuadraticNumber& a, const QuadraticNumber& b) { return !(b < a); }
    friend bool operator>=(const QuadraticNumber& a, const QuadraticNumber& b) { return !(a < b); }

    double to_double() const {
        return p_.convert_to<double>() + q_.convert_to<double>() * std::sqrt(static_cast<double>(d_));
    }

    // Exact integer floor, computed from a floating estimate and then verified
    // by exact comparison (the estimate can be off by at most one).
    long long floor() const {
        long long guess = static_cast<long long>(std::floor(to_double()));
        while (QuadraticNumber(guess) > *this) --guess;
        while (QuadraticNumber(guess + 1) <= *this) ++guess;
        return guess;
    }

    // "p/q" or "p" for the rational part of the printed form; see also
    // decimal_string for a fixed 12-place rendering.
    static std::string rational_string(const Rational& r) {
        BigInt num = boost::multiprecision::numerator(r);
        BigInt den = boost::multiprecision::denominator(r);
        std::string out = num.str();
        if (den != 1) out += "/" + den.str();
        return out;
    }

    std::string to_string() const {
        if (q_ == 0) return rational_string(p_);
        std::string out;
        if (p_ != 0) out += rational_string(p_) + (q_ > 0 ? "+" : "");
        if (q_ == 1) {
            out += "sqrt(" + std::to_string(d_) + ")";
        } else if (q_ == -1) {
            out += "-sqrt(" + std::to_string(d_) + ")";
        } else {
            out += rational_string(q_) + "*sqrt(" + std::to_string(d_) + ")";
        }
        return out;
    }

    std::string decimal_string(int places = 12) const {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*f", places, to_double());
        return std::string(buf);
    }

  private:
    Rational p_ = 0;
    Rational q_ = 0;
    long long d_ = 0;  // square-free; 0 exactly when q == 0

    void normalize() {
        if (q_ == 0 || d_ == 0) {
            q_ = 0;
            d_ = 0;
        } else if (d_ == 1) {  // sqrt(1) collapses into the rational part
            p_ += q_;
            q_ = 0;
            d_ = 0;
        }
    }

    static QuadraticNumber raw(Rational p, Rational q, long long d) {
        QuadraticNumber out;
        out.p_ = std::move(p);
        out.q_ = std::move(q);
        out.d_ = d;
        out.normalize();
        return out;
    }

    // Operations are defined within a single quadratic field; purely rational
    // operands are compatible with any radicand.
    static long long merge_radicand(const QuadraticNumber& a, const QuadraticNumber& b) {
        if (a.q_ == 0) return b.d_;
        if (b.q_ == 0) return a.d_;
        if (a.d_ != b.d_)
            throw std::domain_error("QuadraticNumber: mixed radicands " + std::to_string(a.d_) +
                                    " and " + std::to_string(b.d_));
        return a.d_;
    }
};

}  // namespace submix
