#pragma once

// JSON serialisation of analysis results.  Field order is fixed (insertion
// order via ordered_json) and every numeric quantity appears both exactly —
// quadratic numbers as (p, q, d) triples with rational strings — and as a
// 12-place decimal rendering, so reports are byte-stable and auditable.

#include "arith.hpp"
#include "figure.hpp"
#include "geometry.hpp"
#include "language.hpp"
#include "mixing.hpp"
#include "quadratic.hpp"
#include "spectral.hpp"
#include "substitution.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace submix {

using Json = nlohmann::ordered_json;

inline Json to_json(const QuadraticNumber& x) {
    Json j;
    j["p"] = QuadraticNumber::rational_string(x.rational_part());
    j["q"] = QuadraticNumber::rational_string(x.surd_part());
    j["d"] = x.radicand();
    j["decimal"] = x.decimal_string();
    return j;
}

inline std::string decimal12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", v);
    return std::string(buf);
}

inline Json to_json(const SpectralData& sd) {
    Json j;
    j["matrix"] = Json{{"m00", sd.matrix.m00}, {"m01", sd.matrix.m01},
                       {"m10", sd.matrix.m10}, {"m11", sd.matrix.m11}};
    j["trace"] = sd.matrix.trace();
    j["det"] = sd.matrix.det();
    j["theta1"] = to_json(sd.theta1);
    if (sd.complex_pair) {
        j["theta2"] = Json{{"complex_pair", true}, {"modulus_squared", std::abs(sd.matrix.det())}};
    } else {
        j["theta2"] = to_json(sd.theta2);
    }
    j["theta2_class"] = to_string(sd.theta2_class);
    j["e1"] = Json{{"x", to_json(sd.e1.x)}, {"y", to_json(sd.e1.y)}};
    j["e2"] = Json{{"x", to_json(sd.e2.x)}, {"y", to_json(sd.e2.y)}};
    j["gamma"] = to_json(sd.gamma);
    j["alpha"] = Json{{"value", decimal12(sd.alpha.value)},
                      {"trace", sd.alpha.trace},
                      {"det", sd.alpha.det}};
    return j;
}

inline Json to_json(const GcdCertificate& cert) {
    Json j;
    j["holds"] = cert.holds;
    if (cert.failing_prime) j["failing_prime"] = *cert.failing_prime;
    if (cert.failing_power) j["failing_power"] = static_cast<long long>(*cert.failing_power);
    Json orbits = Json::array();
    for (const PrimeOrbit& po : cert.orbits) {
        Json o;
        o["prime"] = po.prime;
        o["orbit"] = po.orbit;
        o["cycle_start"] = static_cast<long long>(po.cycle_start);
        if (po.zero_index) o["zero_index"] = static_cast<long long>(*po.zero_index);
        orbits.push_back(std::move(o));
    }
    j["orbits"] = std::move(orbits);
    return j;
}

inline Json to_json(const AperiodicityVerdict& ap) {
    Json j;
    switch (ap.kind) {
        case AperiodicityVerdict::Kind::Periodic:
            j["verdict"] = "Periodic";
            j["period"] = ap.period;
            break;
        case AperiodicityVerdict::Kind::Aperiodic:
            j["verdict"] = "Aperiodic";
            break;
        case AperiodicityVerdict::Kind::Undetermined:
            j["verdict"] = "Undetermined";
            break;
    }
    j["depth"] = ap.depth;
    return j;
}

inline Json to_json(const ExcessEvidence& ev) {
    Json j;
    j["N"] = ev.N;
    j["tail_min"] = ev.tail_min;
    j["dyadic_min"] = ev.dyadic_min;
    Json rm = Json::array();
    for (auto [n, m] : ev.running_max) rm.push_back(Json{{"n", n}, {"max_excess", m}});
    j["running_max"] = std::move(rm);
    return j;
}

inline Json to_json(const MixingVerdict& v) {
    Json j;
    j["action"] = to_string(v.action);
    j["verdict"] = to_string(v.verdict);
    j["basis"] = v.basis;
    j["theta2_class"] = to_string(v.theta2_class);
    if (v.action == Action::Z) j["gcd_holds"] = v.gcd_holds;
    if (v.ratio_class)
        j["tile_ratio"] = (*v.ratio_class == RatioClass::Rational) ? "Rational" : "Irrational";
    if (v.evidence) j["evidence"] = to_json(*v.evidence);
    if (!v.warnings.empty()) j["warnings"] = v.warnings;
    return j;
}

inline Json to_json(const TileLengths& t) {
    Json j;
    j["t0"] = to_json(t.t0);
    j["t1"] = to_json(t.t1);
    j["provenance"] =
        t.provenance == TileLengths::Provenance::PFEigenvector ? "pf-eigenvector" : "user-given";
    return j;
}

inline Json to_json(const BoundReport& br) {
    Json j;
    j["alpha"] = decimal12(br.alpha);
    j["gamma"] = decimal12(br.gamma);
    j["c2"] = decimal12(br.c2);
    j["c1"] = decimal12(br.c1);
    j["slope"] = decimal12(br.slope);
    j["n_lo"] = br.n_lo;
    j["n_hi"] = br.n_hi;
    j["envelope_points"] = static_cast<long long>(br.envelope_points);
    return j;
}

inline Json to_json(const DensityScan& scan) {
    Json j;
    j["radius"] = decimal12(scan.radius);
    j["count"] = static_cast<long long>(scan.values.size());
    j["max_gap_tail"] = decimal12(scan.max_gap_tail);
    Json vals = Json::array();
    for (std::size_t i = 0; i < scan.values.size(); ++i) {
        vals.push_back(Json{{"value", decimal12(scan.values[i])},
                            {"zeros", scan.populations[i].zeros},
                            {"ones", scan.populations[i].ones}});
    }
    j["values"] = std::move(vals);
    return j;
}

inline Json to_json(const MeyerReport& report) {
    Json j;
    j["radius"] = decimal12(report.radius);
    j["eps"] = decimal12(report.eps);
    j["lambda_size"] = static_cast<long long>(report.lambda_size);
    j["distinct_differences"] = static_cast<long long>(report.distinct_differences);
    j["violation_count"] = static_cast<long long>(report.violation_count);
    Json examples = Json::array();
    for (const SeparationViolation& v : report.violations) {
        examples.push_back(Json{{"value_a", decimal12(v.value_a)},
                                {"value_b", decimal12(v.value_b)},
                                {"pop_a", Json{{"zeros", v.pop_a.zeros}, {"ones", v.pop_a.ones}}},
                                {"pop_b", Json{{"zeros", v.pop_b.zeros}, {"ones", v.pop_b.ones}}}});
    }
    j["violations"] = std::move(examples);
    j["tail_gap"] = decimal12(report.tail_gap);
    j["tail_gap_interval"] = Json::array({decimal12(report.tail_gap_lo), decimal12(report.tail_gap_hi)});
    return j;
}

struct ReportOptions {
    int excess_N = 4096;
    int aperiodicity_depth = 64;
    bool include_excess_table = false;  // inline the full a/b table (large)
};

// The full analysis report for one substitution (and optionally one choice
// of tile lengths, which enables the R-action verdict).
inline Json build_report(const Substitution& s, const std::optional<TileLengths>& tiles,
                         const ReportOptions& opts = {}) {
    Json j;
    j["schema"] = 1;

    Json input;
    input["rule0"] = s.rule0.to_string();
    input["rule1"] = s.rule1.to_string();
    input["letters"] = std::string(1, s.input_letters[0]) + std::string(1, s.input_letters[1]);
    input["normalization"] = Json{{"power", s.norm.power}, {"swapped", s.norm.swapped}};
    j["substitution"] = std::move(input);

    PrimitivityResult prim = is_primitive(s);
    j["primitive"] = Json{{"value", prim.primitive}, {"power", prim.power}};

    AperiodicityVerdict ap = check_aperiodic(s, opts.aperiodicity_depth);
    j["aperiodicity"] = to_json(ap);

    j["spectral"] = to_json(eigen_data(s));
    if (substitution_matrix(s).det() != 0) {
        j["gcd"] = to_json(gcd_condition(s));
    } else {
        j["gcd"] = Json{{"holds", false}, {"degenerate", "zero determinant"}, {"orbits", Json::array()}};
    }

    ClassifyOptions copts;
    copts.excess_N = opts.excess_N;
    copts.aperiodicity_depth = opts.aperiodicity_depth;

    Json verdicts;
    verdicts["Z"] = to_json(classify_Z(s, copts));
    if (tiles) {
        j["tiles"] = to_json(*tiles);
        verdicts["R"] = to_json(classify_R(s, *tiles, copts));
    }
    j["verdicts"] = std::move(verdicts);

    if (opts.include_excess_table) {
        ExcessProfile profile = excess_profile(s, opts.excess_N);
        Json table = Json::array();
        for (int n = 1; n <= profile.N; ++n)
            table.push_back(Json::array({n, profile.a_at(n), profile.b_at(n)}));
        j["excess_table"] = std::move(table);
    }
    return j;
}

}  // namespace submix
