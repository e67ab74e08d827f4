#pragma once

// The factor language of the fixed point, computed without materialising it.
//
// Core device: covering strings.  The fixed point u is a concatenation of
// level-k supertiles (the k-fold images of its letters).  Pick k minimal so
// that every letter's k-fold image has length >= n; then every length-n
// factor of u lies inside the image of two adjacent letters, i.e. inside
// image_k(a) image_k(b) for some allowed two-letter block ab — and every
// window of such a string is a factor.  Factor enumeration, occurrence
// scanning and the zero-count extremes a(n), b(n) all reduce to sliding
// windows over at most four strings of length O(n).
//
// Allowed two-letter blocks are the closure of the first block of u under
// ab -> adjacent pairs of image(a) image(b); images of the seed exhaust
// arbitrarily long prefixes of u, so the closure is exactly the set of
// two-letter factors.

#include "substitution.hpp"
#include "word.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace submix {

struct TwoBlockSet {
    std::array<std::array<bool, 2>, 2> allowed = {{{false, false}, {false, false}}};

    bool contains(Letter a, Letter b) const { return allowed[a][b]; }
    void insert(Letter a, Letter b) { allowed[a][b] = true; }
    int count() const {
        int c = 0;
        for (const auto& row : allowed)
            for (bool v : row) c += v ? 1 : 0;
        return c;
    }
    std::vector<std::pair<Letter, Letter>> blocks() const {
        std::vector<std::pair<Letter, Letter>> out;
        for (Letter a = 0; a < 2; ++a)
            for (Letter b = 0; b < 2; ++b)
                if (allowed[a][b]) out.emplace_back(a, b);
        return out;
    }
};

inline TwoBlockSet allowed_two_blocks(const Substitution& s) {
    if (!is_normalized(s)) throw std::domain_error("allowed_two_blocks: substitution not in normal form");
    if (!is_primitive(s).primitive) throw std::domain_error("allowed_two_blocks: substitution not primitive");
    Word seed = fixed_point_prefix(s, 2);
    TwoBlockSet set;
    set.insert(seed[0], seed[1]);
    bool grew = true;
    while (grew) {
        grew = false;
        for (auto [a, b] : set.blocks()) {
            Word img = apply(s, Word({std::vector<Letter>{a, b}}));
            for (std::size_t i = 0; i + 1 < img.size(); ++i) {
                if (!set.contains(img[i], img[i + 1])) {
                    set.insert(img[i], img[i + 1]);
                    grew = true;
                }
            }
        }
    }
    return set;
}

// ---------------------------------------------------------------------------
// Covering strings.
// ---------------------------------------------------------------------------

struct CoveringStrings {
    int level = 0;  // k: number of substitution iterations applied
    std::vector<std::vector<Letter>> strings;  // image_k(a) image_k(b) per allowed block
};

namespace detail {

inline std::vector<Letter> iterate_letter(const Substitution& s, Letter l, int k) {
    Word w({std::vector<Letter>{l}});
    for (int i = 0; i < k; ++i) w = apply(s, w);
    return w.letters;
}

}  // namespace detail

// Smallest level whose letter images all reach length n, and the
// corresponding two-block concatenations.
inline CoveringStrings covering_strings(const Substitution& s, std::size_t n) {
    if (!is_normalized(s)) throw std::domain_error("covering_strings: substitution not in normal form");
    TwoBlockSet blocks = allowed_two_blocks(s);
    int k = 0;
    std::array<std::size_t, 2> len = {1, 1};
    while (std::min(len[0], len[1]) < n) {
        std::array<std::size_t, 2> next{};
        for (Letter l = 0; l < 2; ++l) {
            std::size_t acc = 0;
            for (Letter r : s.rule(l).letters) acc += len[r];
            next[l] = acc;
        }
        len = next;
        ++k;
        if (std::max(len[0], len[1]) > kLetterBudget)
            throw std::length_error("covering_strings: window length exceeds letter budget");
    }
    CoveringStrings out;
    out.level = k;
    std::array<std::vector<Letter>, 2> image;
    for (Letter l = 0; l < 2; ++l) image[l] = detail::iterate_letter(s, l, k);
    for (auto [a, b] : blocks.blocks()) {
        std::vector<Letter> cat;
        cat.reserve(image[a].size() + image[b].size());
        cat.insert(cat.end(), image[a].begin(), image[a].end());
        cat.insert(cat.end(), image[b].begin(), image[b].end());
        out.strings.push_back(std::move(cat));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Factor enumeration.
// ---------------------------------------------------------------------------

using FactorSet = std::set<Word>;

// All length-n factors, as windows of the covering strings.
inline FactorSet factors(const Substitution& s, std::size_t n) {
    if (n == 0) return {Word{}};
    CoveringStrings cov = covering_strings(s, n);
    FactorSet out;
    for (const auto& str : cov.strings) {
        for (std::size_t i = 0; i + n <= str.size(); ++i)
            out.insert(Word(std::vector<Letter>(str.begin() + i, str.begin() + i + n)));
    }
    return out;
}

// Oracle used by tests: windows of a plain fixed-point prefix.  Converges to
// the true factor set once the prefix passes the recurrence length.
inline FactorSet brute_force_factors(const Substitution& s, std::size_t n, std::size_t prefix_len) {
    Word u = fixed_point_prefix(s, prefix_len);
    FactorSet out;
    if (n == 0) return {Word{}};
    for (std::size_t i = 0; i + n <= u.size(); ++i) out.insert(u.sub(i, n));
    return out;
}

inline bool is_factor(const Substitution& s, const Word& w) {
    if (w.empty()) return true;
    CoveringStrings cov = covering_strings(s, w.size());
    for (const auto& str : cov.strings) {
        auto it = std::search(str.begin(), str.end(), w.letters.begin(), w.letters.end());
        if (it != str.end()) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Excess profile: a(n) = fewest zeros over length-n factors, b(n) = most.
// The gap b(n) - a(n) (the "excess") is the central finite-size quantity in
// the mixing analysis: bounded away from infinity along a subsequence means
// no mixing in the borderline spectral class, growth supports it.
// ---------------------------------------------------------------------------

struct ExcessProfile {
    int N = 0;
    std::vector<long long> a;  // a[n-1] = min zeros over length-n factors
    std::vector<long long> b;  // b[n-1] = max zeros over length-n factors

    long long a_at(int n) const { return a.at(static_cast<std::size_t>(n) - 1); }
    long long b_at(int n) const { return b.at(static_cast<std::size_t>(n) - 1); }
    long long excess(int n) const { return b_at(n) - a_at(n); }
};

// One covering level serves every window length n <= N; per length, a single
// pass over zero-count prefix sums finds both extremes.
inline ExcessProfile excess_profile(const Substitution& s, int N) {
    if (N < 1) throw std::invalid_argument("excess_profile: N must be >= 1");
    CoveringStrings cov = covering_strings(s, static_cast<std::size_t>(N));
    std::vector<std::vector<std::int32_t>> zeros;  // prefix sums per covering string
    zeros.reserve(cov.strings.size());
    for (const auto& str : cov.strings) {
        std::vector<std::int32_t> z(str.size() + 1, 0);
        for (std::size_t i = 0; i < str.size(); ++i)
            z[i + 1] = z[i] + (str[i] == 0 ? 1 : 0);
        zeros.push_back(std::move(z));
    }
    ExcessProfile profile;
    profile.N = N;
    profile.a.resize(static_cast<std::size_t>(N));
    profile.b.resize(static_cast<std::size_t>(N));
    for (int n = 1; n <= N; ++n) {
        std::int32_t lo = std::numeric_limits<std::int32_t>::max();
        std::int32_t hi = std::numeric_limits<std::int32_t>::min();
        for (const auto& z : zeros) {
            const std::size_t limit = z.size() - 1;
            if (limit < static_cast<std::size_t>(n)) continue;
            for (std::size_t i = 0; i + n <= limit; ++i) {
                std::int32_t c = z[i + n] - z[i];
                lo = std::min(lo, c);
                hi = std::max(hi, c);
            }
        }
        profile.a[static_cast<std::size_t>(n) - 1] = lo;
        profile.b[static_cast<std::size_t>(n) - 1] = hi;
    }
    return profile;
}

inline std::string excess_csv(const ExcessProfile& profile) {
    std::ostringstream out;
    out << "n,a(n),b(n),excess\n";
    for (int n = 1; n <= profile.N; ++n)
        out << n << ',' << profile.a_at(n) << ',' << profile.b_at(n) << ',' << profile.excess(n) << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// Connector lengths: the set { |B| <= kmax : W1 B W2 is a factor }.
// Scanned over covering strings long enough that every candidate occurrence
// fits inside one string; pairs of occurrence positions are combined through
// a shifted bitset union.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::size_t> occurrences(const std::vector<Letter>& hay, const Word& needle) {
    std::vector<std::size_t> out;
    if (needle.empty() || needle.size() > hay.size()) return out;
    auto it = hay.begin();
    while (true) {
        it = std::search(it, hay.end(), needle.letters.begin(), needle.letters.end());
        if (it == hay.end()) break;
        out.push_back(static_cast<std::size_t>(it - hay.begin()));
        ++it;
    }
    return out;
}

}  // namespace detail

inline std::vector<long long> connector_lengths(const Substitution& s, const Word& w1, const Word& w2,
                                                long long kmax) {
    if (kmax < 0) throw std::invalid_argument("connector_lengths: kmax must be >= 0");
    if (w1.empty() || w2.empty())
        throw std::invalid_argument("connector_lengths: boundary words must be nonempty");
    if (!is_factor(s, w1) || !is_factor(s, w2))
        throw std::invalid_argument("connector_lengths: boundary words must be factors");

    const std::size_t total = static_cast<std::size_t>(kmax) + w1.size() + w2.size();
    CoveringStrings cov = covering_strings(s, total);
    const std::size_t nbits = static_cast<std::size_t>(kmax) + 1;
    const std::size_t nwords = (nbits + 63) / 64;
    std::vector<std::uint64_t> result(nwords, 0);

    for (const auto& str : cov.strings) {
        std::vector<std::size_t> starts1 = detail::occurrences(str, w1);
        std::vector<std::size_t> starts2 = detail::occurrences(str, w2);
        if (starts1.empty() || starts2.empty()) continue;
        // Bitset of W2 start positions.
        const std::size_t plen = str.size();
        std::vector<std::uint64_t> pos2((plen + 64) / 64, 0);
        for (std::size_t j : starts2) pos2[j / 64] |= std::uint64_t{1} << (j % 64);
        auto bits_from = [&](std::size_t bit, std::size_t word_index) -> std::uint64_t {
            const std::size_t base = bit / 64 + word_index;
            const unsigned sh = static_cast<unsigned>(bit % 64);
            std::uint64_t lo = base < pos2.size() ? pos2[base] : 0;
            std::uint64_t hi = (sh && base + 1 < pos2.size()) ? pos2[base + 1] : 0;
            return sh ? (lo >> sh) | (hi << (64 - sh)) : lo;
        };
        for (std::size_t i : starts1) {
            const std::size_t gap_origin = i + w1.size();  // connector length 0 sits here
            if (gap_origin >= plen) continue;
            for (std::size_t wi = 0; wi < nwords; ++wi) result[wi] |= bits_from(gap_origin, wi);
        }
    }
    // Mask the tail beyond kmax.
    if (nbits % 64) result[nwords - 1] &= (std::uint64_t{1} << (nbits % 64)) - 1;

    std::vector<long long> lengths;
    for (std::size_t bit = 0; bit < nbits; ++bit)
        if (result[bit / 64] >> (bit % 64) & 1u) lengths.push_back(static_cast<long long>(bit));
    return lengths;
}

}  // namespace submix
