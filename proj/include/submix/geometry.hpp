#pragma once

// Lattice geometry of the fixed point.
//
// The population path Gamma tracks (zeros, ones) counts of the prefixes of
// u; each step moves by (1,0) or (0,1).  The strip Phi between the envelope
// paths built from a(n) and b(n) contains Gamma, and its chord widths in a
// direction transverse to x + gamma*y measure the excess.  An accordion
// decomposition rewrites an occurrence of a factor as boundary scraps of
// letter images at increasing substitution levels, which is what makes the
// transverse coordinate of factor populations geometrically summable.

#include "language.hpp"
#include "spectral.hpp"
#include "substitution.hpp"
#include "word.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace submix {

// ---------------------------------------------------------------------------
// Population path.
// ---------------------------------------------------------------------------

struct LatticePoint {
    long long x = 0;  // zeros
    long long y = 0;  // ones
    friend bool operator==(LatticePoint a, LatticePoint b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(LatticePoint a, LatticePoint b) { return !(a == b); }
    friend LatticePoint operator+(LatticePoint a, LatticePoint b) { return {a.x + b.x, a.y + b.y}; }
    friend LatticePoint operator-(LatticePoint a, LatticePoint b) { return {a.x - b.x, a.y - b.y}; }
};

struct PopulationPath {
    std::vector<LatticePoint> points;  // points[j] = populations of u[0..j)

    std::size_t steps() const { return points.empty() ? 0 : points.size() - 1; }
};

inline PopulationPath gamma_path(const Substitution& s, std::size_t J) {
    Word u = fixed_point_prefix(s, J);
    PopulationPath path;
    path.points.reserve(J + 1);
    LatticePoint p;
    path.points.push_back(p);
    for (std::size_t j = 0; j < u.size(); ++j) {
        if (u[j] == 0)
            ++p.x;
        else
            ++p.y;
        path.points.push_back(p);
    }
    return path;
}

// ---------------------------------------------------------------------------
// The strip between the envelope paths.
// ---------------------------------------------------------------------------

struct PhiStrip {
    // upper[n] = (a(n), n - a(n)): fewest zeros, so most ones — upper-left.
    // lower[n] = (b(n), n - b(n)): most zeros — lower-right.
    // Index 0 is the origin for both.
    std::vector<LatticePoint> upper;
    std::vector<LatticePoint> lower;

    int levels() const { return static_cast<int>(upper.size()) - 1; }
};

inline PhiStrip phi_strip(const ExcessProfile& profile) {
    PhiStrip strip;
    strip.upper.reserve(static_cast<std::size_t>(profile.N) + 1);
    strip.lower.reserve(static_cast<std::size_t>(profile.N) + 1);
    strip.upper.push_back({0, 0});
    strip.lower.push_back({0, 0});
    for (int n = 1; n <= profile.N; ++n) {
        strip.upper.push_back({profile.a_at(n), n - profile.a_at(n)});
        strip.lower.push_back({profile.b_at(n), n - profile.b_at(n)});
    }
    return strip;
}

// Chord length cut from the strip by the line x + gamma*y = r.  Both
// envelopes are staircase paths along which x + gamma*y strictly increases
// (each step adds 1 or gamma), so the line meets each exactly once; the
// chord runs between those two crossings.
inline double width(const PhiStrip& strip, double gamma, double r) {
    if (gamma <= 0) throw std::invalid_argument("width: gamma must be positive");
    if (r < 0) throw std::domain_error("width: level must be non-negative");
    auto crossing = [&](const std::vector<LatticePoint>& env) {
        auto value = [&](LatticePoint p) { return static_cast<double>(p.x) + gamma * static_cast<double>(p.y); };
        if (r > value(env.back()))
            throw std::domain_error("width: level beyond the range covered by the envelopes");
        for (std::size_t i = 0; i + 1 < env.size(); ++i) {
            double v0 = value(env[i]);
            double v1 = value(env[i + 1]);
            if (r <= v1) {
                double t = (v1 == v0) ? 0.0 : (r - v0) / (v1 - v0);
                return std::pair<double, double>(env[i].x + t * (env[i + 1].x - env[i].x),
                                                env[i].y + t * (env[i + 1].y - env[i].y));
            }
        }
        return std::pair<double, double>(static_cast<double>(env.back().x),
                                         static_cast<double>(env.back().y));
    };
    auto [ux, uy] = crossing(strip.upper);
    auto [lx, ly] = crossing(strip.lower);
    return std::hypot(ux - lx, uy - ly);
}

// ---------------------------------------------------------------------------
// Accordion decomposition of one occurrence u[j .. j+n).
//
// Peeling the supertile structure level by level writes the occurrence as
//   s_1 . img(s_2) . img^2(s_3) ... img^{k-1}(s_k)
//       . img^k(core)
//       . img^{k-1}(p_k) ... img(p_2) . p_1
// where s_i is a (possibly empty) suffix and p_i a prefix of a single letter
// image, and core is either empty or a chunk strictly inside one letter
// image (this happens when the whole remaining interval sits inside a
// single supertile and touches neither of its ends).  Every piece is
// shorter than the longest rule.
// ---------------------------------------------------------------------------

struct AccordionDecomposition {
    int k = 0;                   // number of peeled levels
    std::vector<Word> suffixes;  // s_1 .. s_k (level i-1 applies img^{i-1})
    std::vector<Word> prefixes;  // p_1 .. p_k
    Word core;                   // applied at level k
    std::size_t nonempty_parts() const {
        std::size_t c = core.empty() ? 0 : 1;
        for (const auto& w : suffixes) c += w.empty() ? 0 : 1;
        for (const auto& w : prefixes) c += w.empty() ? 0 : 1;
        return c;
    }
};

inline AccordionDecomposition accordion_decompose(const Substitution& s, std::size_t j, std::size_t n) {
    if (n == 0) throw std::invalid_argument("accordion_decompose: empty occurrence");
    // The supertile sequence of u is indexed by u itself; boundaries come
    // from the rule lengths of successive fixed-point letters.
    Word u = fixed_point_prefix(s, j + n + 2);
    std::vector<std::size_t> boundary;  // boundary[q] = total length of the first q letter images
    boundary.push_back(0);
    while (boundary.back() < j + n) {
        Letter l = u[boundary.size() - 1];
        boundary.push_back(boundary.back() + s.rule(l).size());
    }
    // locate(pos): supertile index q (1-based) and offset within it (1-based).
    auto locate = [&](std::size_t pos) {
        auto it = std::lower_bound(boundary.begin(), boundary.end(), pos);
        std::size_t q = static_cast<std::size_t>(it - boundary.begin());
        return std::pair<std::size_t, std::size_t>(q, pos - boundary[q - 1]);
    };

    AccordionDecomposition dec;
    std::size_t lo = j + 1, hi = j + n;  // 1-based inclusive interval in u
    while (true) {
        if (lo > hi) break;  // empty middle: clean accordion
        auto [qa, offa] = locate(lo);
        auto [qb, offb] = locate(hi);
        const Word& rule_a = s.rule(u[qa - 1]);
        const Word& rule_b = s.rule(u[qb - 1]);
        if (qa == qb) {
            if (offa == 1 && offb == rule_a.size()) {
                // Exactly one full supertile: de-substitute it.
                dec.suffixes.emplace_back();
                dec.prefixes.emplace_back();
                ++dec.k;
                lo = hi = qa;
                continue;
            }
            Word chunk = rule_a.sub(offa - 1, hi - lo + 1);
            if (offa == 1) {
                dec.suffixes.emplace_back();
                dec.prefixes.push_back(std::move(chunk));  // proper prefix of one image
                ++dec.k;
            } else if (offb == rule_a.size()) {
                dec.suffixes.push_back(std::move(chunk));  // proper suffix of one image
                dec.prefixes.emplace_back();
                ++dec.k;
            } else {
                dec.core = std::move(chunk);  // strictly interior chunk
            }
            break;
        }
        Word s_part, p_part;
        std::size_t next_lo, next_hi;
        if (offa == 1) {
            next_lo = qa;
        } else {
            s_part = rule_a.sub(offa - 1, rule_a.size() - (offa - 1));
            next_lo = qa + 1;
        }
        if (offb == rule_b.size()) {
            next_hi = qb;
        } else {
            p_part = rule_b.sub(0, offb);
            next_hi = qb - 1;
        }
        dec.suffixes.push_back(std::move(s_part));
        dec.prefixes.push_back(std::move(p_part));
        ++dec.k;
        lo = next_lo;
        hi = next_hi;
    }
    return dec;
}

// Rebuild the decomposed word: fold from the innermost level outwards.
inline Word accordion_reconstruct(const Substitution& s, const AccordionDecomposition& dec) {
    Word w = dec.core;
    for (int i = dec.k; i >= 1; --i) {
        Word out = dec.suffixes[static_cast<std::size_t>(i) - 1];
        out.append(apply(s, w));
        out.append(dec.prefixes[static_cast<std::size_t>(i) - 1]);
        w = std::move(out);
    }
    return w;
}

// Exact population identity: l(V) = sum_i M^{i-1} (l(s_i) + l(p_i)) + M^k l(core).
inline PopulationVector accordion_population(const IntMatrix2& m, const AccordionDecomposition& dec) {
    PopulationVector total{0, 0};
    IntMatrix2 mp = IntMatrix2::identity();
    for (int i = 1; i <= dec.k; ++i) {
        PopulationVector level = population(dec.suffixes[static_cast<std::size_t>(i) - 1]) +
                                 population(dec.prefixes[static_cast<std::size_t>(i) - 1]);
        total = total + mp.apply(level);
        mp = mp * m;
    }
    total = total + mp.apply(population(dec.core));
    return total;
}

// ---------------------------------------------------------------------------
// Growth-law fit for the expanding second-eigenvalue class.
//
// When |theta2| > 1 the transverse coordinate of envelope points grows like
// x^alpha with alpha = log|theta2| / log(theta1); equivalently the excess
// grows like n^alpha.  The fit reports the smallest upper constant C2 with
// |across(w)| <= C2 * w_x^alpha over envelope points, the largest lower
// constant c1 with excess(n) >= c1 * n^alpha on [n_lo, N], and the log-log
// regression slope of excess against n.
// ---------------------------------------------------------------------------

struct BoundReport {
    double alpha = 0.0;
    double gamma = 0.0;
    double c2 = 0.0;     // min constant bounding |across| from above
    double c1 = 0.0;     // max constant bounding the excess from below
    double slope = 0.0;  // log-log regression slope of excess vs n
    int n_lo = 64;
    int n_hi = 0;
    std::size_t envelope_points = 0;  // points with w_x >= 4 entering the c2 fit
};

inline BoundReport bound_check(const Substitution& s, const ExcessProfile& profile, int n_lo = 64) {
    SpectralData sd = eigen_data(s);
    if (sd.theta2_class != Theta2Class::GT1)
        throw std::domain_error("bound_check: growth law requires |theta2| > 1");
    BoundReport report;
    report.alpha = sd.alpha.value;
    report.gamma = sd.gamma.to_double();
    report.n_lo = n_lo;
    report.n_hi = profile.N;

    for (int n = 1; n <= profile.N; ++n) {
        for (LatticePoint w : {LatticePoint{profile.a_at(n), n - profile.a_at(n)},
                               LatticePoint{profile.b_at(n), n - profile.b_at(n)}}) {
            if (w.x < 4) continue;
            double across = std::abs(project_across(static_cast<double>(w.x),
                                                    static_cast<double>(w.y), report.gamma));
            double ratio = across / std::pow(static_cast<double>(w.x), report.alpha);
            report.c2 = std::max(report.c2, ratio);
            ++report.envelope_points;
        }
    }

    double sum_x = 0, sum_y = 0, sum_xx = 0, sum_xy = 0;
    std::size_t count = 0;
    report.c1 = std::numeric_limits<double>::infinity();
    for (int n = n_lo; n <= profile.N; ++n) {
        long long e = profile.excess(n);
        if (e < 1) {
            report.c1 = 0.0;
            continue;
        }
        report.c1 = std::min(report.c1, static_cast<double>(e) /
                                            std::pow(static_cast<double>(n), report.alpha));
        double lx = std::log(static_cast<double>(n));
        double ly = std::log(static_cast<double>(e));
        sum_x += lx;
        sum_y += ly;
        sum_xx += lx * lx;
        sum_xy += lx * ly;
        ++count;
    }
    if (count >= 2) {
        double denom = static_cast<double>(count) * sum_xx - sum_x * sum_x;
        report.slope = (static_cast<double>(count) * sum_xy - sum_x * sum_y) / denom;
    }
    if (!std::isfinite(report.c1)) report.c1 = 0.0;
    return report;
}

// ---------------------------------------------------------------------------
// Intermediate-value search along the path.
//
// A lattice vector w is a population difference of two path points iff some
// z on Gamma has z + w on Gamma.  Walking z along the path, z + w can only
// change from (strictly) below the path to (strictly) above it by landing on
// it, so scanning the horizon either produces an exact witness pair or
// reports that every probe stayed on one side.
// ---------------------------------------------------------------------------

struct IvtResult {
    bool found = false;
    // When found: path indices j1 < j2 with points[j2] - points[j1] == w.
    std::size_t j1 = 0, j2 = 0;
    LatticePoint z;        // points[j1]
    LatticePoint z_prime;  // points[j2]
    bool saw_below = false, saw_above = false;  // probe classifications seen
};

inline IvtResult ivt_search(const Substitution& s, LatticePoint w, std::size_t horizon) {
    if (w.x < 0 || w.y < 0) throw std::invalid_argument("ivt_search: population vector must be non-negative");
    // Extend the path beyond the horizon until every probe column exists.
    std::size_t extra = static_cast<std::size_t>(w.x + w.y) + 2;
    PopulationPath path = gamma_path(s, horizon + extra * 4);
    while (path.points.back().x <= path.points[std::min(horizon, path.steps())].x + w.x)
        path = gamma_path(s, path.steps() * 2);
    const long long maxcol = path.points.back().x;
    std::vector<long long> ylo(static_cast<std::size_t>(maxcol) + 1, -1);
    std::vector<long long> yhi(static_cast<std::size_t>(maxcol) + 1, -1);
    for (const LatticePoint& p : path.points) {
        auto cx = static_cast<std::size_t>(p.x);
        if (ylo[cx] < 0) ylo[cx] = p.y;
        yhi[cx] = p.y;
    }

    IvtResult res;
    const std::size_t end = std::min(horizon, path.steps());
    for (std::size_t j = 0; j <= end; ++j) {
        LatticePoint q = path.points[j] + w;
        if (q.x > maxcol) break;  // past the tabulated columns; safety net
        auto cx = static_cast<std::size_t>(q.x);
        if (q.y > yhi[cx]) {
            res.saw_above = true;
        } else if (q.y < ylo[cx]) {
            res.saw_below = true;
        } else {
            // On the path: levels index points uniquely, so verify directly.
            std::size_t level = static_cast<std::size_t>(q.x + q.y);
            if (level < path.points.size() && path.points[level] == q) {
                res.found = true;
                res.j1 = j;
                res.j2 = level;
                res.z = path.points[j];
                res.z_prime = q;
                return res;
            }
        }
    }
    return res;
}

}  // namespace submix
