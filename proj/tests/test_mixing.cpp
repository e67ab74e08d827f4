// Mixing verdicts for the shift and the suspension flow, the excess-trend
// evidence in the borderline class, the return-time density scan, and the
// difference-set separation diagnostic.

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>

using namespace submix;

namespace {

TileLengths tiles(QuadraticNumber a, QuadraticNumber b) {
    return TileLengths{std::move(a), std::move(b), TileLengths::Provenance::UserGiven};
}

}  // namespace

TEST_CASE("excess evidence summarises the profile faithfully", "[mixing]") {
    for (const Substitution& s : {testutil::mpd(), testutil::dk1(), testutil::dk2()}) {
        ExcessProfile profile = excess_profile(s, 4096);
        ExcessEvidence ev = excess_evidence(profile);
        CHECK(ev.N == 4096);
        long long tail = std::numeric_limits<long long>::max();
        for (int n = 2048; n <= 4096; ++n) tail = std::min(tail, profile.excess(n));
        CHECK(ev.tail_min == tail);
        long long dyadic = std::numeric_limits<long long>::max();
        for (int n = 16; n <= 4096; n *= 2) dyadic = std::min(dyadic, profile.excess(n));
        CHECK(ev.dyadic_min == dyadic);
        REQUIRE(ev.running_max.size() == 9);  // checkpoints 16, 32, ..., 4096
        CHECK(ev.running_max.front().first == 16);
        CHECK(ev.running_max.back().first == 4096);
        for (std::size_t i = 0; i + 1 < ev.running_max.size(); ++i)
            CHECK(ev.running_max[i].second <= ev.running_max[i + 1].second);
    }
}

TEST_CASE("the excess tails separate the two look-alike substitutions", "[mixing]") {
    ExcessEvidence e1 = excess_evidence(excess_profile(testutil::dk1(), 4096));
    ExcessEvidence e2 = excess_evidence(excess_profile(testutil::dk2(), 4096));
    CHECK(e1.tail_min == 11);
    CHECK(e2.tail_min == 2);
    CHECK(e1.running_max.back().second == 17);
    CHECK(e2.running_max.back().second == 10);
    ExcessEvidence em = excess_evidence(excess_profile(testutil::mpd(), 4096));
    CHECK(em.tail_min == 2);
}

TEST_CASE("shift-action verdicts cover all four decision branches", "[mixing]") {
    MixingVerdict fib = classify_Z(testutil::fib());
    CHECK(fib.verdict == Verdict::NotMixing);
    CHECK(fib.theta2_class == Theta2Class::LT1);
    CHECK(fib.gcd_holds);
    CHECK(fib.basis.find("unit circle") != std::string::npos);
    CHECK_FALSE(fib.evidence.has_value());

    MixingVerdict pd = classify_Z(testutil::pd());
    CHECK(pd.verdict == Verdict::NotMixing);
    CHECK(pd.theta2_class == Theta2Class::EQ1);
    CHECK_FALSE(pd.gcd_holds);
    CHECK(pd.basis.find("gcd condition fails at prime 2") != std::string::npos);

    MixingVerdict gt1 = classify_Z(testutil::gt1());
    CHECK(gt1.verdict == Verdict::Mixing);
    CHECK(gt1.theta2_class == Theta2Class::GT1);
    CHECK(gt1.gcd_holds);

    MixingVerdict mpd = classify_Z(testutil::mpd());
    CHECK(mpd.verdict == Verdict::UndeterminedEvidence);
    CHECK(mpd.theta2_class == Theta2Class::EQ1);
    CHECK(mpd.gcd_holds);
    REQUIRE(mpd.evidence.has_value());
    CHECK(mpd.evidence->N == 4096);
    CHECK(mpd.evidence->tail_min == 2);

    MixingVerdict dk1 = classify_Z(testutil::dk1());
    CHECK(dk1.verdict == Verdict::UndeterminedEvidence);
    REQUIRE(dk1.evidence.has_value());
    CHECK(dk1.evidence->tail_min == 11);

    CHECK(std::string(to_string(Action::Z)) == "Z");
    CHECK(std::string(to_string(Verdict::Mixing)) == "Mixing");
    CHECK(std::string(to_string(Verdict::UndeterminedEvidence)) == "UndeterminedEvidence");
}

TEST_CASE("flow-action verdicts weigh the tile ratio first", "[mixing]") {
    MixingVerdict fib = classify_R(testutil::fib(), pf_tile_lengths(substitution_matrix(testutil::fib())));
    CHECK(fib.verdict == Verdict::NotMixing);
    REQUIRE(fib.ratio_class.has_value());
    CHECK(*fib.ratio_class == RatioClass::Irrational);
    CHECK(fib.basis.find("unit circle") != std::string::npos);

    MixingVerdict pd = classify_R(testutil::pd(), pf_tile_lengths(substitution_matrix(testutil::pd())));
    CHECK(pd.verdict == Verdict::NotMixing);
    CHECK(*pd.ratio_class == RatioClass::Rational);
    CHECK(pd.basis.find("circle rotation") != std::string::npos);

    // Rational tiles silence even a growing-excess system.
    MixingVerdict dk1 = classify_R(testutil::dk1(), pf_tile_lengths(substitution_matrix(testutil::dk1())));
    CHECK(dk1.verdict == Verdict::NotMixing);
    CHECK(*dk1.ratio_class == RatioClass::Rational);

    MixingVerdict gt1 = classify_R(testutil::gt1(), pf_tile_lengths(substitution_matrix(testutil::gt1())));
    CHECK(gt1.verdict == Verdict::Mixing);
    CHECK(*gt1.ratio_class == RatioClass::Irrational);

    MixingVerdict mpd = classify_R(testutil::mpd(), tiles(QuadraticNumber(1), QuadraticNumber::sqrt_of(2)));
    CHECK(mpd.verdict == Verdict::UndeterminedEvidence);
    CHECK(*mpd.ratio_class == RatioClass::Irrational);
    REQUIRE(mpd.evidence.has_value());
    CHECK(mpd.evidence->tail_min == 2);

    CHECK_THROWS_AS(classify_R(testutil::mpd(), tiles(QuadraticNumber(0), QuadraticNumber(1))),
                    std::invalid_argument);
}

TEST_CASE("the borderline class never gets a hard verdict", "[mixing]") {
    ClassifyOptions quick;
    quick.excess_N = 256;
    for (const Substitution& s : {testutil::pd(), testutil::mpd(), testutil::dk1(), testutil::dk2()}) {
        REQUIRE(second_eigen_class(substitution_matrix(s)) == Theta2Class::EQ1);
        MixingVerdict z = classify_Z(s, quick);
        CHECK(z.verdict != Verdict::Mixing);  // NotMixing only via the gcd route
        MixingVerdict r = classify_R(s, tiles(QuadraticNumber(1), QuadraticNumber::sqrt_of(2)), quick);
        CHECK(r.verdict != Verdict::Mixing);
        CHECK(r.verdict == Verdict::UndeterminedEvidence);
    }
}

TEST_CASE("verdicts are stable under squaring the substitution", "[mixing]") {
    ClassifyOptions quick;
    quick.excess_N = 256;
    Substitution g2 = power(testutil::gt1(), 2);
    CHECK(classify_Z(g2, quick).verdict == Verdict::Mixing);
    CHECK(classify_R(g2, pf_tile_lengths(substitution_matrix(g2)), quick).verdict == Verdict::Mixing);
    // The squared matrix shares the eigenvector, hence the same tile lengths.
    CHECK(pf_tile_lengths(substitution_matrix(g2)).t1 ==
          QuadraticNumber(1) + QuadraticNumber::sqrt_of(2));

    Substitution f2 = power(testutil::fib(), 2);
    CHECK(classify_Z(f2, quick).verdict == Verdict::NotMixing);
}

TEST_CASE("periodic fixed points are rejected, degenerate spectra handled", "[mixing]") {
    CHECK_THROWS_AS(classify_Z(parse_substitution("0->01;1->01")), std::domain_error);
    CHECK_THROWS_AS(classify_R(parse_substitution("0->01;1->01"),
                               tiles(QuadraticNumber(1), QuadraticNumber(1))),
                    std::domain_error);
    CHECK_THROWS_AS(classify_Z(parse_substitution("0->00;1->11")), std::domain_error);

    // Zero determinant: second eigenvalue 0, still classified, gcd skipped.
    MixingVerdict v = classify_Z(parse_substitution("0->0011;1->01"));
    CHECK(v.verdict == Verdict::NotMixing);
    CHECK(v.theta2_class == Theta2Class::LT1);
    CHECK_FALSE(v.gcd_holds);
    bool warned = false;
    for (const std::string& w : v.warnings)
        if (w.find("determinant is zero") != std::string::npos) warned = true;
    CHECK(warned);
}

TEST_CASE("return-time scans grow denser with the radius", "[mixing]") {
    Word z = Word::from_string("0");
    Substitution gt1 = testutil::gt1();
    TileLengths t = pf_tile_lengths(substitution_matrix(gt1));
    std::vector<std::size_t> counts;
    std::vector<double> gaps;
    for (double R : {128.0, 256.0, 512.0, 1024.0}) {
        DensityScan scan = psi_density_scan(gt1, t, z, z, R);
        counts.push_back(scan.values.size());
        gaps.push_back(scan.max_gap_tail);
        CHECK(scan.radius == R);
        REQUIRE(scan.values.size() == scan.populations.size());
        // Values are sorted, distinct, within budget, and recompute exactly
        // from their populations.
        for (std::size_t i = 0; i < scan.values.size(); ++i) {
            double v = scan.populations[i].zeros * t.t0.to_double() +
                       scan.populations[i].ones * t.t1.to_double();
            REQUIRE(scan.values[i] == Catch::Approx(v).margin(1e-9));
            REQUIRE(scan.values[i] <= R + 1e-9);
            if (i) REQUIRE(scan.values[i] > scan.values[i - 1]);
        }
    }
    CHECK(counts == std::vector<std::size_t>{178, 473, 1124, 3064});
    CHECK(gaps[0] == Catch::Approx(1.0).margin(1e-6));
    CHECK(gaps[1] == Catch::Approx(0.828427).margin(1e-6));
    CHECK(gaps[2] == Catch::Approx(0.828427).margin(1e-6));
    CHECK(gaps[3] == Catch::Approx(0.757359).margin(1e-6));
    for (std::size_t i = 0; i + 1 < gaps.size(); ++i) CHECK(gaps[i + 1] <= gaps[i] + 1e-12);
    CHECK(gaps.back() < gaps.front());
}

TEST_CASE("return-time scans for the borderline example keep a unit gap", "[mixing]") {
    Word z = Word::from_string("0");
    Substitution mpd = testutil::mpd();
    TileLengths t = tiles(QuadraticNumber(1), QuadraticNumber::sqrt_of(2));
    std::vector<std::size_t> counts;
    for (double R : {128.0, 256.0, 512.0, 1024.0}) {
        DensityScan scan = psi_density_scan(mpd, t, z, z, R);
        counts.push_back(scan.values.size());
        CHECK(scan.max_gap_tail == Catch::Approx(1.0).margin(1e-6));
    }
    CHECK(counts == std::vector<std::size_t>{223, 506, 1115, 2449});

    // Radius below the shortest tile: nothing returns, the gap is the whole
    // upper half interval.
    DensityScan empty = psi_density_scan(mpd, t, z, z, 0.5);
    CHECK(empty.values.empty());
    CHECK(empty.max_gap_tail == Catch::Approx(0.25).margin(1e-12));

    CHECK_THROWS_AS(psi_density_scan(mpd, t, Word{}, z, 8.0), std::invalid_argument);
    CHECK_THROWS_AS(psi_density_scan(mpd, t, Word::from_string("0000"), z, 8.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(psi_density_scan(mpd, t, z, z, 0.0), std::invalid_argument);
}

TEST_CASE("value merging collapses exact collisions only", "[mixing]") {
    // Rational tiles make distinct populations collide: with t = (1, 2) the
    // populations (2,0) and (0,1) both sit at 2.
    TileLengths t12 = tiles(QuadraticNumber(1), QuadraticNumber(2));
    std::vector<double> values = {2.0, 2.0, 3.0};
    std::vector<PopulationVector> pops = {{2, 0}, {0, 1}, {3, 0}};
    detail::sort_and_merge_values(t12, values, pops);
    REQUIRE(values.size() == 2);
    CHECK(values[0] == 2.0);
    CHECK(values[1] == 3.0);

    // Irrational tiles in one field: distinct populations never merge.
    TileLengths tq = tiles(QuadraticNumber(1), QuadraticNumber::sqrt_of(2));
    std::vector<double> v2 = {1.0, 1.4142135623730951, 2.0};
    std::vector<PopulationVector> p2 = {{1, 0}, {0, 1}, {2, 0}};
    detail::sort_and_merge_values(tq, v2, p2);
    CHECK(v2.size() == 3);
}

TEST_CASE("the separation diagnostic reports frozen difference-set statistics", "[mixing]") {
    Substitution mpd = testutil::mpd();
    TileLengths t = tiles(QuadraticNumber(1), QuadraticNumber::sqrt_of(2));

    MeyerReport fine = meyer_diagnostic(mpd, t, 1024.0, 1e-3);
    CHECK(fine.lambda_size == 849);
    CHECK(fine.distinct_differences == 4230);
    CHECK(fine.violation_count == 0);  // minimum spacing at this radius is |7 - 5*sqrt(2)| ~ 0.0711
    CHECK(fine.tail_gap == Catch::Approx(1.0).margin(1e-6));
    CHECK(fine.tail_gap_lo == Catch::Approx(617.038672).margin(1e-4));
    CHECK(fine.tail_gap_hi == Catch::Approx(618.038672).margin(1e-4));

    MeyerReport coarse = meyer_diagnostic(mpd, t, 1024.0, 0.08);
    CHECK(coarse.violation_count == 120);
    REQUIRE_FALSE(coarse.violations.empty());
    CHECK(coarse.violations.size() <= MeyerReport::kMaxExamples);
    const SeparationViolation& first = coarse.violations.front();
    CHECK(first.value_a == Catch::Approx(136.367532).margin(1e-4));
    CHECK(first.value_b == Catch::Approx(136.438600).margin(1e-4));
    CHECK(first.pop_a == PopulationVector{60, 54});
    CHECK(first.pop_b == PopulationVector{53, 59});
    // Every reported violation is a genuine close pair of distinct values.
    for (const SeparationViolation& v : coarse.violations) {
        CHECK(v.value_b - v.value_a >= 0);
        CHECK(v.value_b - v.value_a < 0.08);
        CHECK(v.pop_a != v.pop_b);
    }

    // Integer tiles: the difference set is a set of integers, no collisions
    // closer than 1, tail gap exactly 1.
    MeyerReport integral = meyer_diagnostic(mpd, tiles(QuadraticNumber(1), QuadraticNumber(1)), 256.0, 1e-3);
    CHECK(integral.violation_count == 0);
    CHECK(integral.tail_gap == Catch::Approx(1.0).margin(1e-9));

    CHECK_THROWS_AS(meyer_diagnostic(mpd, t, 0.0, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(meyer_diagnostic(mpd, t, 256.0, 0.0), std::invalid_argument);
}
