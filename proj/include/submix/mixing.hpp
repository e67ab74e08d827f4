#pragma once

// Mixing verdicts for the shift action (Z) and the suspension flow over
// chosen tile lengths (R).
//
// Decision logic, with theta2_class the exact modulus class of the second
// eigenvalue and "gcd condition" / "tile ratio" the arithmetic side checks:
//
//   Z:  |theta2| < 1                      -> NotMixing   (eigenfunction obstruction)
//       gcd condition fails               -> NotMixing   (length residues trap return times)
//       |theta2| > 1 and gcd holds        -> Mixing
//       |theta2| = 1 and gcd holds        -> UndeterminedEvidence
//
//   R:  tile ratio rational               -> NotMixing   (flow has a circle factor)
//       |theta2| < 1                      -> NotMixing
//       |theta2| > 1 and ratio irrational -> Mixing
//       |theta2| = 1 and ratio irrational -> UndeterminedEvidence
//
// In the borderline class |theta2| = 1, whether mixing holds is equivalent
// to the excess b(n) - a(n) tending to infinity; no finite computation
// settles a limit, so the classifier never hard-decides there.  It instead
// reports excess-trend evidence: the tail minimum, the minimum along a
// dyadic subsequence, and the growth of the running maximum.  If the
// aperiodicity check is Undetermined, every verdict is downgraded to
// UndeterminedEvidence with a warning, because each criterion above assumes
// an aperiodic fixed point.

#include "arith.hpp"
#include "language.hpp"
#include "spectral.hpp"
#include "substitution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace submix {

enum class Action { Z, R };
enum class Verdict { Mixing, NotMixing, UndeterminedEvidence };

inline const char* to_string(Action a) { return a == Action::Z ? "Z" : "R"; }
inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Mixing: return "Mixing";
        case Verdict::NotMixing: return "NotMixing";
        case Verdict::UndeterminedEvidence: return "UndeterminedEvidence";
    }
    return "?";
}

struct ExcessEvidence {
    int N = 0;
    long long tail_min = 0;    // min excess over n in [N/2, N]
    long long dyadic_min = 0;  // min excess over n = 16, 32, ..., <= N
    std::vector<std::pair<int, long long>> running_max;  // (checkpoint, max excess up to it)
};

inline ExcessEvidence excess_evidence(const ExcessProfile& profile) {
    ExcessEvidence ev;
    ev.N = profile.N;
    ev.tail_min = std::numeric_limits<long long>::max();
    for (int n = profile.N / 2; n <= profile.N; ++n) ev.tail_min = std::min(ev.tail_min, profile.excess(n));
    ev.dyadic_min = std::numeric_limits<long long>::max();
    for (int n = 16; n <= profile.N; n *= 2) ev.dyadic_min = std::min(ev.dyadic_min, profile.excess(n));
    long long running = 0;
    int next_checkpoint = 16;
    for (int n = 1; n <= profile.N; ++n) {
        running = std::max(running, profile.excess(n));
        if (n == next_checkpoint) {
            ev.running_max.emplace_back(n, running);
            next_checkpoint *= 2;
        }
    }
    return ev;
}

struct ClassifyOptions {
    int excess_N = 4096;          // depth of the evidence profile (borderline class only)
    int aperiodicity_depth = 64;  // passed to check_aperiodic
};

struct MixingVerdict {
    Action action = Action::Z;
    Verdict verdict = Verdict::NotMixing;
    std::string basis;  // which rule of the decision logic fired
    Theta2Class theta2_class = Theta2Class::LT1;
    bool gcd_holds = false;                       // Z action
    std::optional<RatioClass> ratio_class;        // R action
    std::optional<ExcessEvidence> evidence;       // borderline class
    std::vector<std::string> warnings;
};

namespace detail {

inline void require_not_periodic(const Substitution& s, const AperiodicityVerdict& ap) {
    if (ap.kind == AperiodicityVerdict::Kind::Periodic)
        throw std::domain_error("classify: fixed point is periodic (period " +
                                std::to_string(ap.period) + "); mixing analysis does not apply");
    (void)s;
}

inline void apply_aperiodicity_downgrade(MixingVerdict& v, const AperiodicityVerdict& ap) {
    if (ap.kind == AperiodicityVerdict::Kind::Undetermined) {
        v.verdict = Verdict::UndeterminedEvidence;
        v.warnings.push_back(
            "aperiodicity undetermined at depth " + std::to_string(ap.depth) +
            ": verdict downgraded to UndeterminedEvidence");
    }
}

}  // namespace detail

inline MixingVerdict classify_Z(const Substitution& s, const ClassifyOptions& opts = {}) {
    if (!is_primitive(s).primitive) throw std::domain_error("classify_Z: substitution not primitive");
    if (!is_normalized(s)) throw std::domain_error("classify_Z: substitution not in normal form");
    AperiodicityVerdict ap = check_aperiodic(s, opts.aperiodicity_depth);
    detail::require_not_periodic(s, ap);

    MixingVerdict v;
    v.action = Action::Z;
    const IntMatrix2 m = substitution_matrix(s);
    v.theta2_class = second_eigen_class(m);
    // det = 0 forces |theta2| = 0 < 1, so the verdict never consults the gcd
    // certificate there (which gcd_condition rejects as degenerate).
    std::optional<GcdCertificate> gcd;
    if (m.det() != 0) {
        gcd = gcd_condition(m);
        v.gcd_holds = gcd->holds;
    } else {
        v.gcd_holds = false;
        v.warnings.push_back("determinant is zero: gcd certificate degenerate, skipped");
    }

    if (v.theta2_class == Theta2Class::LT1) {
        v.verdict = Verdict::NotMixing;
        v.basis = "second eigenvalue inside the unit circle: continuous eigenfunctions obstruct mixing";
    } else if (!gcd->holds) {
        v.verdict = Verdict::NotMixing;
        v.basis = "gcd condition fails at prime " + std::to_string(*gcd->failing_prime) + ", power " +
                  std::to_string(*gcd->failing_power) + ": image lengths share a residue obstruction";
    } else if (v.theta2_class == Theta2Class::GT1) {
        v.verdict = Verdict::Mixing;
        v.basis = "second eigenvalue outside the unit circle and gcd condition holds";
    } else {
        v.verdict = Verdict::UndeterminedEvidence;
        v.basis = "second eigenvalue on the unit circle: mixing is equivalent to unbounded excess growth, "
                  "which finite evidence cannot settle";
        v.evidence = excess_evidence(excess_profile(s, opts.excess_N));
    }
    detail::apply_aperiodicity_downgrade(v, ap);
    return v;
}

inline MixingVerdict classify_R(const Substitution& s, const TileLengths& t,
                                const ClassifyOptions& opts = {}) {
    if (!is_primitive(s).primitive) throw std::domain_error("classify_R: substitution not primitive");
    if (!is_normalized(s)) throw std::domain_error("classify_R: substitution not in normal form");
    validate_tiles(t);
    AperiodicityVerdict ap = check_aperiodic(s, opts.aperiodicity_depth);
    detail::require_not_periodic(s, ap);

    MixingVerdict v;
    v.action = Action::R;
    v.theta2_class = second_eigen_class(substitution_matrix(s));
    v.ratio_class = tile_ratio_class(t);

    if (*v.ratio_class == RatioClass::Rational) {
        v.verdict = Verdict::NotMixing;
        v.basis = "tile length ratio rational: the flow factors onto a circle rotation";
    } else if (v.theta2_class == Theta2Class::LT1) {
        v.verdict = Verdict::NotMixing;
        v.basis = "second eigenvalue inside the unit circle: continuous eigenfunctions obstruct mixing";
    } else if (v.theta2_class == Theta2Class::GT1) {
        v.verdict = Verdict::Mixing;
        v.basis = "second eigenvalue outside the unit circle and tile length ratio irrational";
    } else {
        v.verdict = Verdict::UndeterminedEvidence;
        v.basis = "second eigenvalue on the unit circle: mixing is equivalent to unbounded excess growth, "
                  "which finite evidence cannot settle";
        v.evidence = excess_evidence(excess_profile(s, opts.excess_N));
    }
    detail::apply_aperiodicity_downgrade(v, ap);
    return v;
}

// ---------------------------------------------------------------------------
// Psi density scan.
//
// Psi(W1, W2) = { tiled length of W1 V : W1 V W2 a factor }, the set of
// time offsets at which a cylinder on W1 can return to one on W2 under the
// flow.  Mixing forces these sets to become asymptotically dense; the scan
// collects all values up to radius R from occurrence pairs in covering
// strings and reports the largest gap in the upper half [R/2, R].
// ---------------------------------------------------------------------------

struct DensityScan {
    std::vector<double> values;  // sorted distinct tiled lengths <= R
    std::vector<PopulationVector> populations;  // matching exact populations
    double radius = 0;
    double max_gap_tail = 0;     // largest gap inside [R/2, R], with sentinels at both ends
};

namespace detail {

// Sort values (with their populations) and merge entries that denote the same
// real number.  Distinct populations can collide -- rational tile lengths
// make z*t0 + o*t1 degenerate -- and such pairs are one value, not two values
// at distance zero.  When both tile lengths live in a single quadratic field
// the comparison is exact; otherwise values within 1e-9 of each other merge.
inline void sort_and_merge_values(const TileLengths& t, std::vector<double>& values,
                                  std::vector<PopulationVector>& pops) {
    bool exact = true;
    try {
        (void)(t.t0 + t.t1);
    } catch (const std::domain_error&) {
        exact = false;  // mixed radicands: no common field, fall back to tolerance
    }
    auto exact_value = [&](PopulationVector p) {
        return t.t0 * QuadraticNumber(p.zeros) + t.t1 * QuadraticNumber(p.ones);
    };
    std::vector<std::size_t> order(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (values[a] != values[b]) return values[a] < values[b];
        if (pops[a].zeros != pops[b].zeros) return pops[a].zeros < pops[b].zeros;
        return pops[a].ones < pops[b].ones;
    });
    std::vector<double> merged_values;
    std::vector<PopulationVector> merged_pops;
    merged_values.reserve(order.size());
    merged_pops.reserve(order.size());
    for (std::size_t idx : order) {
        if (!merged_pops.empty()) {
            bool same = exact ? exact_value(merged_pops.back()) == exact_value(pops[idx])
                              : std::abs(values[idx] - merged_values.back()) <= 1e-9;
            if (same) continue;
        }
        merged_values.push_back(values[idx]);
        merged_pops.push_back(pops[idx]);
    }
    values = std::move(merged_values);
    pops = std::move(merged_pops);
}

}  // namespace detail

inline DensityScan psi_density_scan(const Substitution& s, const TileLengths& t, const Word& w1,
                                    const Word& w2, double R) {
    validate_tiles(t);
    if (w1.empty() || w2.empty())
        throw std::invalid_argument("psi_density_scan: boundary words must be nonempty");
    if (!is_factor(s, w1) || !is_factor(s, w2))
        throw std::invalid_argument("psi_density_scan: boundary words must be factors");
    if (R <= 0) throw std::invalid_argument("psi_density_scan: radius must be positive");

    const double t0 = t.t0.to_double();
    const double t1 = t.t1.to_double();
    const double tmin = std::min(t0, t1);
    const std::size_t max_word = static_cast<std::size_t>(R / tmin) + w2.size() + 2;
    CoveringStrings cov = covering_strings(s, max_word);

    // Distinct populations (zeros, length) of windows W1...V, marked in a flat bitmap.
    const std::size_t stride = max_word + 1;
    std::vector<std::uint8_t> seen(stride * stride, 0);
    DensityScan scan;
    scan.radius = R;
    for (const auto& str : cov.strings) {
        std::vector<std::int32_t> zp(str.size() + 1, 0);
        for (std::size_t i = 0; i < str.size(); ++i) zp[i + 1] = zp[i] + (str[i] == 0 ? 1 : 0);
        std::vector<std::size_t> starts1 = detail::occurrences(str, w1);
        std::vector<std::size_t> starts2 = detail::occurrences(str, w2);
        for (std::size_t i : starts1) {
            for (std::size_t j : starts2) {
                if (j < i + w1.size()) continue;
                const std::size_t len = j - i;  // |W1 V|
                if (len >= stride) break;       // starts2 is sorted: longer only from here on
                const auto z = static_cast<std::size_t>(zp[j] - zp[i]);
                const double value = static_cast<double>(z) * t0 + static_cast<double>(len - z) * t1;
                if (value > R) break;  // every further j adds at least one tile
                seen[len * stride + z] = 1;
            }
        }
    }
    for (std::size_t len = 0; len < stride; ++len) {
        for (std::size_t z = 0; z <= len; ++z) {
            if (!seen[len * stride + z]) continue;
            double value = static_cast<double>(z) * t0 + static_cast<double>(len - z) * t1;
            if (value > R) continue;
            scan.values.push_back(value);
            scan.populations.push_back({static_cast<long long>(z), static_cast<long long>(len - z)});
        }
    }
    detail::sort_and_merge_values(t, scan.values, scan.populations);

    // Largest empty interval in [R/2, R]; the interval ends act as sentinels.
    double prev = R / 2;
    double gap = 0;
    for (double v : scan.values) {
        if (v < R / 2 || v > R) continue;
        gap = std::max(gap, v - prev);
        prev = v;
    }
    gap = std::max(gap, R - prev);
    scan.max_gap_tail = gap;
    return scan;
}

// ---------------------------------------------------------------------------
// Meyer diagnostic.
//
// Lambda is the set of tile endpoints of the half-line tiling read off the
// fixed point.  The diagnostic examines the difference set Lambda - Lambda
// within [0, R]: values of distinct populations that collide within eps
// witness a failure of uniform discreteness, and the largest empty interval
// in the upper half [R/2, R] witnesses a failure of eventual density (a
// point set with both failures cannot be Meyer).
// ---------------------------------------------------------------------------

struct SeparationViolation {
    double value_a = 0, value_b = 0;
    PopulationVector pop_a, pop_b;
};

struct MeyerReport {
    std::size_t lambda_size = 0;      // endpoints of the tiling of [0, R]
    std::size_t distinct_differences = 0;
    std::size_t violation_count = 0;  // distinct difference values closer than eps
    std::vector<SeparationViolation> violations;  // capped sample
    double eps = 0;
    double radius = 0;
    double tail_gap = 0;              // largest empty interval of the difference set in [R/2, R]
    double tail_gap_lo = 0, tail_gap_hi = 0;
    static constexpr std::size_t kMaxExamples = 32;
};

inline MeyerReport meyer_diagnostic(const Substitution& s, const TileLengths& t, double R, double eps) {
    validate_tiles(t);
    if (R <= 0 || eps <= 0) throw std::invalid_argument("meyer_diagnostic: R and eps must be positive");
    const double t0 = t.t0.to_double();
    const double t1 = t.t1.to_double();
    const double tmin = std::min(t0, t1);

    MeyerReport report;
    report.eps = eps;
    report.radius = R;

    const std::size_t max_tiles = static_cast<std::size_t>(R / tmin) + 2;
    Word u = fixed_point_prefix(s, max_tiles);
    // Prefix zero counts; endpoint i sits at z_i*t0 + (i - z_i)*t1.
    std::vector<long long> zp(u.size() + 1, 0);
    for (std::size_t i = 0; i < u.size(); ++i) zp[i + 1] = zp[i] + (u[i] == 0 ? 1 : 0);
    std::size_t count = 0;
    for (std::size_t i = 0; i <= u.size(); ++i) {
        double x = static_cast<double>(zp[i]) * t0 + static_cast<double>(i - zp[i]) * t1;
        if (x > R) break;
        count = i + 1;
    }
    report.lambda_size = count;

    // Distinct positive differences, deduplicated by exact population.
    const std::size_t stride = count;
    std::vector<std::uint8_t> seen(stride * stride, 0);
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = i + 1; j < count; ++j) {
            const auto len = j - i;
            const auto z = static_cast<std::size_t>(zp[j] - zp[i]);
            seen[len * stride + z] = 1;
        }
    }
    std::vector<double> values;
    std::vector<PopulationVector> pops;
    for (std::size_t len = 1; len < stride; ++len) {
        for (std::size_t z = 0; z <= len && z < stride; ++z) {
            if (!seen[len * stride + z]) continue;
            double v = static_cast<double>(z) * t0 + static_cast<double>(len - z) * t1;
            if (v > R) continue;
            values.push_back(v);
            pops.push_back({static_cast<long long>(z), static_cast<long long>(len - z)});
        }
    }
    detail::sort_and_merge_values(t, values, pops);
    report.distinct_differences = values.size();

    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        if (values[i + 1] - values[i] < eps) {
            ++report.violation_count;
            if (report.violations.size() < MeyerReport::kMaxExamples)
                report.violations.push_back({values[i], values[i + 1], pops[i], pops[i + 1]});
        }
    }

    double prev = R / 2;
    for (double v : values) {
        if (v < R / 2 || v > R) continue;
        if (v - prev > report.tail_gap) {
            report.tail_gap = v - prev;
            report.tail_gap_lo = prev;
            report.tail_gap_hi = v;
        }
        prev = v;
    }
    if (R - prev > report.tail_gap) {
        report.tail_gap = R - prev;
        report.tail_gap_lo = prev;
        report.tail_gap_hi = R;
    }
    return report;
}

}  // namespace submix
