#pragma once

// Two-letter substitutions: parsing, the abelianisation matrix, primitivity,
// powers, normal form (image of 0 starts with 0), the one-sided fixed point,
// and a periodicity / aperiodicity check for that fixed point.

#include "word.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace submix {

// Input rules longer than this are rejected: every analysis here assumes
// short rules and grows words by iterating, not by accepting huge inputs.
inline constexpr std::size_t kMaxRuleLength = 10000;

// Soft cap (in letters) for any internally generated word; exceeding it
// raises std::length_error instead of exhausting memory.
inline constexpr std::size_t kLetterBudget = std::size_t{1} << 27;

// Records how a substitution was brought to normal form: the original was
// raised to the given power, and the two letters were optionally swapped.
struct Normalization {
    int power = 1;
    bool swapped = false;
};

struct Substitution {
    Word rule0;  // image of letter 0
    Word rule1;  // image of letter 1
    std::array<char, 2> input_letters = {'0', '1'};  // display names from the parsed text
    Normalization norm;  // how this substitution was derived from the parsed one

    const Word& rule(Letter l) const { return l == 0 ? rule0 : rule1; }
    std::size_t max_rule_length() const { return std::max(rule0.size(), rule1.size()); }
    std::size_t min_rule_length() const { return std::min(rule0.size(), rule1.size()); }
};

// ---------------------------------------------------------------------------
// Parsing.  Grammar:  <letter>-><word> ; <letter>-><word>   with optional
// whitespace around tokens.  Any two distinct printable characters may serve
// as letters; the first rule's left-hand side becomes internal letter 0 and
// the second becomes letter 1.
// ---------------------------------------------------------------------------

inline Substitution parse_substitution(const std::string& text) {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("parse_substitution: " + msg); };

    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ';') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    if (parts.size() < 2) fail("missing rule: expected two rules separated by ';'");
    if (parts.size() > 2) fail("too many rules: the alphabet has exactly two letters");

    std::array<char, 2> lhs{};
    std::array<std::string, 2> rhs{};
    for (int i = 0; i < 2; ++i) {
        const std::string& part = parts[i];
        std::size_t pos = 0;
        auto skip_ws = [&] {
            while (pos < part.size() && std::isspace(static_cast<unsigned char>(part[pos]))) ++pos;
        };
        skip_ws();
        if (pos == part.size()) fail("empty rule");
        char letter = part[pos];
        if (!std::isprint(static_cast<unsigned char>(letter)) || letter == '-' || letter == '>')
            fail("invalid letter on left-hand side");
        ++pos;
        skip_ws();
        if (pos >= part.size() || part[pos] != '-' || pos + 1 >= part.size() || part[pos + 1] != '>')
            fail("expected '->' after letter");
        pos += 2;
        skip_ws();
        std::string image;
        while (pos < part.size() && !std::isspace(static_cast<unsigned char>(part[pos]))) {
            image.push_back(part[pos]);
            ++pos;
        }
        skip_ws();
        if (pos != part.size()) fail("unexpected trailing text in rule");
        if (image.empty()) fail("empty rule");
        if (image.size() > kMaxRuleLength) fail("rule longer than " + std::to_string(kMaxRuleLength) + " letters");
        lhs[i] = letter;
        rhs[i] = image;
    }
    if (lhs[0] == lhs[1]) fail("duplicate rule for letter '" + std::string(1, lhs[0]) + "'");

    Substitution s;
    s.input_letters = lhs;
    auto map_word = [&](const std::string& image) {
        Word w;
        w.letters.reserve(image.size());
        for (char c : image) {
            if (c == lhs[0])
                w.push_back(0);
            else if (c == lhs[1])
                w.push_back(1);
            else
                fail("letter '" + std::string(1, c) + "' is outside the alphabet {" +
                     std::string(1, lhs[0]) + "," + std::string(1, lhs[1]) + "}");
        }
        return w;
    };
    s.rule0 = map_word(rhs[0]);
    s.rule1 = map_word(rhs[1]);
    return s;
}

// ---------------------------------------------------------------------------
// Abelianisation and primitivity.
// ---------------------------------------------------------------------------

// Column j holds the population vector of the image of letter j.
inline IntMatrix2 substitution_matrix(const Substitution& s) {
    PopulationVector c0 = population(s.rule0);
    PopulationVector c1 = population(s.rule1);
    return {c0.zeros, c1.zeros, c0.ones, c1.ones};
}

struct PrimitivityResult {
    bool primitive = false;
    int power = 0;  // smallest k with M^k entrywise positive, when primitive
};

// For 2x2 non-negative matrices a positive power appears by exponent 4 if it
// appears at all, so checking k = 1..4 decides primitivity.
inline PrimitivityResult is_primitive(const IntMatrix2& m) {
    IntMatrix2 acc = m;
    for (int k = 1; k <= 4; ++k) {
        if (acc.is_positive()) return {true, k};
        acc = acc * m;
    }
    return {false, 0};
}

inline PrimitivityResult is_primitive(const Substitution& s) { return is_primitive(substitution_matrix(s)); }

// ---------------------------------------------------------------------------
// Applying and iterating substitutions.
// ---------------------------------------------------------------------------

inline Word apply(const Substitution& s, const Word& w) {
    std::size_t len = 0;
    for (Letter l : w.letters) len += s.rule(l).size();
    if (len > kLetterBudget) throw std::length_error("apply: image exceeds letter budget");
    Word out;
    out.letters.reserve(len);
    for (Letter l : w.letters) out.append(s.rule(l));
    return out;
}

// The k-th power: rules are the k-fold images of each letter.
inline Substitution power(const Substitution& s, int k) {
    if (k < 1) throw std::invalid_argument("power: exponent must be >= 1");
    Substitution out = s;
    for (int i = 1; i < k; ++i) {
        out.rule0 = apply(s, out.rule0);
        out.rule1 = apply(s, out.rule1);
    }
    out.norm.power = s.norm.power * k;
    return out;
}

// Swap the roles of the two letters: rules are exchanged and relabelled.
inline Substitution rename_letters(const Substitution& s) {
    auto flip = [](const Word& w) {
        Word out;
        out.letters.reserve(w.size());
        for (Letter l : w.letters) out.push_back(static_cast<Letter>(1 - l));
        return out;
    };
    Substitution out;
    out.rule0 = flip(s.rule1);
    out.rule1 = flip(s.rule0);
    out.input_letters = {s.input_letters[1], s.input_letters[0]};
    out.norm.power = s.norm.power;
    out.norm.swapped = !s.norm.swapped;
    return out;
}

// Normal form: pass to a power and/or rename letters so that the image of 0
// starts with 0.  The first-letter map f(i) = first letter of the image of i
// acts on two letters, so one of three cases applies:
//   f(0) = 0            : already in normal form
//   f(1) = 1            : swap the letters
//   f(0) = 1, f(1) = 0  : square the substitution
// The recorded Normalization composes with any already present.
inline Substitution normalize(const Substitution& s) {
    Letter f0 = s.rule0[0];
    if (f0 == 0) return s;
    Letter f1 = s.rule1[0];
    if (f1 == 1) return rename_letters(s);
    return power(s, 2);  // f(0)=1, f(1)=0: the square fixes letter 0
}

inline bool is_normalized(const Substitution& s) { return s.rule0[0] == 0; }

// ---------------------------------------------------------------------------
// Fixed point.  For a normalized substitution the images of 0 nest:
// each is a prefix of the next, and their limit u satisfies u = image(u).
// The stream below expands u in place: u = image(u_1) image(u_2) ... where
// the read head always trails the write head.  Memory stays at n letters
// plus one rule image.
// ---------------------------------------------------------------------------

inline Word fixed_point_prefix(const Substitution& s, std::size_t n) {
    if (!is_normalized(s)) throw std::domain_error("fixed_point_prefix: substitution not in normal form");
    if (s.rule0.size() < 2)
        throw std::domain_error("fixed_point_prefix: image of 0 must have length >= 2 (otherwise the fixed point is a single letter)");
    if (n > kLetterBudget) throw std::length_error("fixed_point_prefix: request exceeds letter budget");
    Word u;
    if (n == 0) return u;
    u.letters.reserve(n + s.max_rule_length());
    u.append(s.rule0);  // = image(u_1), since u_1 = 0
    std::size_t read = 1;
    while (u.size() < n) {
        u.append(s.rule(u[read]));
        ++read;
    }
    u.letters.resize(n);
    return u;
}

// ---------------------------------------------------------------------------
// Periodicity of the fixed point.
//
// Periodic(p): certified.  If the prefix is p-periodic over a window of
// length >= 4*p*max_rule_length, and the image of v = u[0..p) is v repeated
// (in particular p divides its length), then v^infinity is a fixed point of
// the substitution starting with 0, hence equals u.  For the minimal period
// the divisibility always holds, so the scan finds it.
//
// Aperiodic: heuristic.  If every window length n <= depth shows at least
// n+1 distinct factors in a long prefix, the complexity threshold for
// eventual periodicity is cleared at every tested depth.  This does not
// prove aperiodicity for all n; callers treat the verdict accordingly.
//
// Undetermined: neither certificate was found.
// ---------------------------------------------------------------------------

struct AperiodicityVerdict {
    enum class Kind { Periodic, Aperiodic, Undetermined };
    Kind kind = Kind::Undetermined;
    long long period = 0;  // set when kind == Periodic
    int depth = 0;         // complexity depth that was checked
};

inline AperiodicityVerdict check_aperiodic(const Substitution& s, int depth = 64) {
    if (depth < 1) throw std::invalid_argument("check_aperiodic: depth must be >= 1");
    if (!is_primitive(s).primitive) throw std::domain_error("check_aperiodic: substitution not primitive");
    if (!is_normalized(s)) throw std::domain_error("check_aperiodic: substitution not in normal form");

    const std::size_t maxrule = s.max_rule_length();
    const std::size_t want =
        std::min<std::size_t>(std::max<std::size_t>(4 * static_cast<std::size_t>(depth) * maxrule, 1 << 14),
                              kLetterBudget);
    Word u = fixed_point_prefix(s, want);

    // Certified periodicity, smallest period first.
    for (long long p = 1; p <= depth; ++p) {
        std::size_t window = 4 * static_cast<std::size_t>(p) * maxrule;
        if (window > u.size()) break;
        bool periodic = true;
        for (std::size_t i = static_cast<std::size_t>(p); i < window; ++i) {
            if (u[i] != u[i - p]) {
                periodic = false;
                break;
            }
        }
        if (!periodic) continue;
        Word v = u.sub(0, static_cast<std::size_t>(p));
        Word image = apply(s, v);
        if (image.size() % p != 0) continue;
        bool propagates = true;
        for (std::size_t i = 0; i < image.size(); ++i) {
            if (image[i] != v[i % p]) {
                propagates = false;
                break;
            }
        }
        if (propagates) {
            AperiodicityVerdict verdict;
            verdict.kind = AperiodicityVerdict::Kind::Periodic;
            verdict.period = p;
            verdict.depth = depth;
            return verdict;
        }
    }

    // Complexity threshold: count distinct windows of each length <= depth.
    for (int n = 1; n <= depth; ++n) {
        std::unordered_set<Word, WordHash> seen;
        const std::size_t nn = static_cast<std::size_t>(n);
        for (std::size_t i = 0; i + nn <= u.size(); ++i) seen.insert(u.sub(i, nn));
        if (seen.size() < nn + 1) {
            AperiodicityVerdict verdict;
            verdict.kind = AperiodicityVerdict::Kind::Undetermined;
            verdict.depth = depth;
            return verdict;
        }
    }
    AperiodicityVerdict verdict;
    verdict.kind = AperiodicityVerdict::Kind::Aperiodic;
    verdict.depth = depth;
    return verdict;
}

}  // namespace submix
