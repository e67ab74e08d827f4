#pragma once

// Shared fixtures for the test suites: the six reference substitutions and a
// few brute-force oracles that recompute library results by a different
// method (plain prefix scans, direct big-integer arithmetic).

#include <submix/submix.hpp>

#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace testutil {

using namespace submix;

// Reference substitutions used throughout the suites.
inline Substitution fib() { return parse_substitution("0->01;1->0"); }       // |theta2| < 1
inline Substitution pd() { return parse_substitution("0->02;2->00"); }       // |theta2| = 1, gcd fails
inline Substitution mpd() { return parse_substitution("0->011;1->0"); }      // |theta2| = 1, gcd holds
inline Substitution dk1() { return parse_substitution("0->001;1->11100"); }  // |theta2| = 1, excess grows
inline Substitution dk2() { return parse_substitution("0->001;1->11001"); }  // |theta2| = 1, excess recurs low
inline Substitution gt1() { return parse_substitution("0->001;1->01111"); }  // |theta2| > 1

inline std::vector<Substitution> all_six() {
    return {fib(), pd(), mpd(), dk1(), dk2(), gt1()};
}

inline std::vector<std::string> all_six_names() {
    return {"fib", "pd", "mpd", "dk1", "dk2", "gt1"};
}

// Direct scan of a long fixed-point prefix for connector lengths; converges
// to the library result once the prefix covers the recurrence scale of the
// windows involved.
inline std::set<long long> brute_connector_lengths(const Substitution& s, const Word& w1,
                                                   const Word& w2, long long kmax,
                                                   std::size_t prefix_len) {
    Word u = fixed_point_prefix(s, prefix_len);
    std::set<long long> out;
    std::vector<std::size_t> starts1, starts2;
    auto collect = [&](const Word& w, std::vector<std::size_t>& dst) {
        for (std::size_t i = 0; i + w.size() <= u.size(); ++i) {
            bool hit = true;
            for (std::size_t t = 0; t < w.size(); ++t)
                if (u[i + t] != w[t]) { hit = false; break; }
            if (hit) dst.push_back(i);
        }
    };
    collect(w1, starts1);
    collect(w2, starts2);
    for (std::size_t i : starts1)
        for (std::size_t j : starts2) {
            if (j < i + w1.size()) continue;
            long long gap = static_cast<long long>(j - i - w1.size());
            if (gap <= kmax && j + w2.size() <= u.size()) out.insert(gap);
        }
    return out;
}

// Direct gcd of the entries of (1,...,1) * M^n computed in exact integers.
inline long long row_gcd_at_power(const IntMatrix2& m, int n) {
    IntMatrix2 p = m.pow(static_cast<unsigned>(n));
    long long r0 = p.m00 + p.m10;  // (1,1) * column 0
    long long r1 = p.m01 + p.m11;
    return std::gcd(r0, r1);
}

// Deterministic RNG for property sampling.
inline std::mt19937& rng() {
    static std::mt19937 gen(20260823u);
    return gen;
}

}  // namespace testutil
