#pragma once

// Spectral data of a primitive 2x2 substitution matrix.
//
// A primitive 2x2 non-negative integer matrix has both off-diagonal entries
// positive, so its characteristic polynomial x^2 - tr*x + det has positive
// discriminant: the eigenvalues are real, distinct, exactly representable as
// quadratic numbers, and the leading one exceeds 1.  The classification of
// |theta2| against 1 therefore never needs floating point: with theta1 > 1,
//   |theta2| < 1  <=>  f(1) < 0 and f(-1) > 0,
//   |theta2| = 1  <=>  f(1) = 0 or  f(-1) = 0,
// where f is the characteristic polynomial — all integer sign tests.  The
// complex-pair branch (negative discriminant, |theta2|^2 = |det|) is kept
// for completeness but is unreachable for primitive input.

#include "quadratic.hpp"
#include "substitution.hpp"
#include "word.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace submix {

enum class Theta2Class { LT1, EQ1, GT1 };

inline const char* to_string(Theta2Class c) {
    switch (c) {
        case Theta2Class::LT1: return "LT1";
        case Theta2Class::EQ1: return "EQ1";
        case Theta2Class::GT1: return "GT1";
    }
    return "?";
}

// Exact classification of the second eigenvalue's modulus against 1.
inline Theta2Class second_eigen_class(const IntMatrix2& m) {
    if (!is_primitive(m).primitive)
        throw std::domain_error("second_eigen_class: matrix not primitive");
    const long long tr = m.trace();
    const long long det = m.det();
    const long long disc = tr * tr - 4 * det;
    if (disc < 0) {
        // Complex pair: |theta2|^2 = |det|.  Unreachable when primitive.
        if (det == 1 || det == -1) return Theta2Class::EQ1;
        return (det > 1 || det < -1) ? Theta2Class::GT1 : Theta2Class::LT1;
    }
    const long long f_plus = 1 - tr + det;   // f(1)
    const long long f_minus = 1 + tr + det;  // f(-1)
    if (f_plus == 0 || f_minus == 0) return Theta2Class::EQ1;
    if (f_plus < 0 && f_minus > 0) return Theta2Class::LT1;
    return Theta2Class::GT1;
}

// A 2-vector with exact quadratic entries.
struct Vec2Q {
    QuadraticNumber x;
    QuadraticNumber y;
};

// log|theta2| / log(theta1) as a floating value, tagged with the integer
// trace and determinant that define it exactly.
struct AlphaValue {
    double value = 0.0;
    long long trace = 0;
    long long det = 0;
};

struct SpectralData {
    IntMatrix2 matrix;
    QuadraticNumber theta1;      // leading eigenvalue, > 1
    QuadraticNumber theta2;      // second eigenvalue (real case)
    bool complex_pair = false;   // theta2 not real; |theta2|^2 = |det|
    Vec2Q e1;                    // right eigenvector for theta1, x-component 1
    Vec2Q e2;                    // right eigenvector for theta2, x-component -1
    QuadraticNumber gamma;       // slope of e1: gamma = e1.y / e1.x
    AlphaValue alpha;            // log|theta2| / log(theta1)
    Theta2Class theta2_class = Theta2Class::LT1;
};

inline SpectralData eigen_data(const IntMatrix2& m) {
    if (!is_primitive(m).primitive)
        throw std::domain_error("eigen_data: matrix not primitive, eigenvector structure unavailable");

    const long long tr = m.trace();
    const long long det = m.det();
    const long long disc = tr * tr - 4 * det;  // > 0 for primitive input

    SpectralData out;
    out.matrix = m;
    out.alpha.trace = tr;
    out.alpha.det = det;
    out.theta2_class = second_eigen_class(m);

    if (disc < 0) {
        out.complex_pair = true;
        out.theta1 = QuadraticNumber(Rational(tr, 2));
        out.theta2 = out.theta1;
        out.alpha.value =
            0.5 * std::log(std::abs(static_cast<double>(det))) / std::log(out.theta1.to_double());
        return out;
    }

    QuadraticNumber root = QuadraticNumber(0, Rational(1, 2), disc);  // sqrt(disc)/2
    QuadraticNumber half_tr{Rational(tr, 2)};
    out.theta1 = half_tr + root;
    out.theta2 = half_tr - root;

    // (M - theta I) v = 0 with m01 > 0 gives v = (1, (theta - m00)/m01).
    QuadraticNumber m00{m.m00};
    QuadraticNumber m01{m.m01};
    out.gamma = (out.theta1 - m00) / m01;
    out.e1 = {QuadraticNumber(1), out.gamma};
    out.e2 = {QuadraticNumber(-1), (m00 - out.theta2) / m01};

    const double t1 = out.theta1.to_double();
    const double t2 = std::abs(out.theta2.to_double());
    out.alpha.value = (t2 == 0.0) ? 0.0 : std::log(t2) / std::log(t1);
    return out;
}

inline SpectralData eigen_data(const Substitution& s) { return eigen_data(substitution_matrix(s)); }

// Coordinates adapted to the expanding direction: for w = (x, y),
//   along(w)  = x + gamma*y   (grows like theta1 under the matrix),
//   across(w) = y - gamma*x   (scales by exactly theta2 under the matrix).
struct Projection {
    QuadraticNumber along;
    QuadraticNumber across;
};

inline Projection project(PopulationVector w, const QuadraticNumber& gamma) {
    QuadraticNumber x{w.zeros};
    QuadraticNumber y{w.ones};
    return {x + gamma * y, y - gamma * x};
}

inline Projection project(const Vec2Q& w, const QuadraticNumber& gamma) {
    return {w.x + gamma * w.y, w.y - gamma * w.x};
}

// Floating version for bulk geometry scans.
inline double project_across(double x, double y, double gamma) { return y - gamma * x; }

}  // namespace submix
