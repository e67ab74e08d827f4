#pragma once

// Words over the two-letter alphabet {0, 1}, their population vectors
// (#zeros, #ones), and 2x2 integer matrices acting on populations.

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace submix {

using Letter = std::uint8_t;  // always 0 or 1 internally

struct Word {
    std::vector<Letter> letters;

    Word() = default;
    explicit Word(std::vector<Letter> l) : letters(std::move(l)) {}

    static Word from_string(const std::string& s) {
        Word w;
        w.letters.reserve(s.size());
        for (char c : s) {
            if (c != '0' && c != '1') throw std::invalid_argument("Word::from_string: letters must be 0 or 1");
            w.letters.push_back(static_cast<Letter>(c - '0'));
        }
        return w;
    }

    std::string to_string() const {
        std::string s;
        s.reserve(letters.size());
        for (Letter l : letters) s.push_back(static_cast<char>('0' + l));
        return s;
    }

    std::size_t size() const { return letters.size(); }
    bool empty() const { return letters.empty(); }
    Letter operator[](std::size_t i) const { return letters[i]; }

    void push_back(Letter l) { letters.push_back(l); }
    void append(const Word& o) { letters.insert(letters.end(), o.letters.begin(), o.letters.end()); }

    Word sub(std::size_t pos, std::size_t len) const {
        if (pos + len > letters.size()) throw std::out_of_range("Word::sub");
        return Word(std::vector<Letter>(letters.begin() + pos, letters.begin() + pos + len));
    }

    friend bool operator==(const Word& a, const Word& b) { return a.letters == b.letters; }
    friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }
    friend bool operator<(const Word& a, const Word& b) { return a.letters < b.letters; }
};

// Population vector: components count letter 0 and letter 1 occurrences.
struct PopulationVector {
    long long zeros = 0;
    long long ones = 0;

    friend PopulationVector operator+(PopulationVector a, PopulationVector b) {
        return {a.zeros + b.zeros, a.ones + b.ones};
    }
    friend PopulationVector operator-(PopulationVector a, PopulationVector b) {
        return {a.zeros - b.zeros, a.ones - b.ones};
    }
    friend bool operator==(PopulationVector a, PopulationVector b) {
        return a.zeros == b.zeros && a.ones == b.ones;
    }
    friend bool operator!=(PopulationVector a, PopulationVector b) { return !(a == b); }
    long long total() const { return zeros + ones; }
};

inline PopulationVector population(const Word& w) {
    PopulationVector p;
    for (Letter l : w.letters) {
        if (l == 0)
            ++p.zeros;
        else
            ++p.ones;
    }
    return p;
}

// 2x2 integer matrix; column j is the population vector of the image of
// letter j under a substitution, so M * l(V) = l(image of V).
struct IntMatrix2 {
    long long m00 = 0, m01 = 0;
    long long m10 = 0, m11 = 0;

    static IntMatrix2 identity() { return {1, 0, 0, 1}; }

    long long trace() const { return m00 + m11; }
    long long det() const { return m00 * m11 - m01 * m10; }
    bool is_positive() const { return m00 > 0 && m01 > 0 && m10 > 0 && m11 > 0; }
    bool is_nonnegative() const { return m00 >= 0 && m01 >= 0 && m10 >= 0 && m11 >= 0; }

    friend IntMatrix2 operator*(const IntMatrix2& a, const IntMatrix2& b) {
        return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
                a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
    }
    friend bool operator==(const IntMatrix2& a, const IntMatrix2& b) {
        return a.m00 == b.m00 && a.m01 == b.m01 && a.m10 == b.m10 && a.m11 == b.m11;
    }
    friend bool operator!=(const IntMatrix2& a, const IntMatrix2& b) { return !(a == b); }

    IntMatrix2 pow(unsigned k) const {
        IntMatrix2 out = identity();
        IntMatrix2 base = *this;
        while (k) {
            if (k & 1u) out = out * base;
            base = base * base;
            k >>= 1u;
        }
        return out;
    }

    // Column action on a population vector.
    PopulationVector apply(PopulationVector v) const {
        return {m00 * v.zeros + m01 * v.ones, m10 * v.zeros + m11 * v.ones};
    }

    // Row action: (r0, r1) * M.  Row vector (|image of 0|, |image of 1|)
    // iterates under this map.
    std::array<long long, 2> apply_row(std::array<long long, 2> r) const {
        return {r[0] * m00 + r[1] * m10, r[0] * m01 + r[1] * m11};
    }
};

struct WordHash {
    std::size_t operator()(const Word& w) const {
        // FNV-1a over the letter bytes.
        std::size_t h = 1469598103934665603ull;
        for (Letter l : w.letters) {
            h ^= l;
            h *= 1099511628211ull;
        }
        return h;
    }
};

}  // namespace submix
