// Command-line front end: parse a substitution (inline or from a config
// file), run the requested pipeline, and write reports, CSV tables, and SVG
// figures.  All outputs are written atomically (temp file + rename) and are
// byte-identical across runs for identical configuration.
//
// Exit codes: 0 success, 1 internal error, 2 invalid input,
//             3 aperiodicity undetermined under --strict.

#include <submix/submix.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace submix;

namespace {

// ---------------------------------------------------------------------------
// Configuration.
// ---------------------------------------------------------------------------

struct RunConfig {
    std::string subst;        // inline rule string
    std::string config_file;  // key/value file; may itself carry the rules
    std::string tiles;        // tile-length pair or "pf"
    int N = 4096;             // excess-profile depth
    double R = 1024.0;        // scan radius
    std::string outdir = ".";
    std::string formats;      // comma list; empty = command default
    bool strict = false;
    bool fit = false;
    bool excess_table = false;
    std::string w1, w2;       // boundary words (default: first alphabet letter)
    long long kmax = 200;
    double eps = 1e-3;
    long long path_len = 64;
};

struct StrictUndetermined : std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[noreturn]] void invalid(const std::string& msg) { throw std::invalid_argument(msg); }

// ---------------------------------------------------------------------------
// Config file: one `key = value` pair per line, '#' comments.  Keys mirror
// the long command-line flags; the rules may be given either as a single
// `subst` entry or as a `rule0` / `rule1` pair.
// ---------------------------------------------------------------------------

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    invalid("config key '" + key + "': expected a boolean, got '" + v + "'");
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

void load_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in.good()) invalid("cannot read config file '" + path + "'");
    std::string rule0, rule1;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            invalid("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        auto as_ll = [&](const std::string& v) {
            try {
                std::size_t used = 0;
                long long out = std::stoll(v, &used);
                if (used != v.size()) throw std::invalid_argument(v);
                return out;
            } catch (const std::exception&) {
                invalid("config key '" + key + "': expected an integer, got '" + v + "'");
            }
        };
        auto as_double = [&](const std::string& v) {
            try {
                std::size_t used = 0;
                double out = std::stod(v, &used);
                if (used != v.size()) throw std::invalid_argument(v);
                return out;
            } catch (const std::exception&) {
                invalid("config key '" + key + "': expected a number, got '" + v + "'");
            }
        };
        if (key == "subst") cfg.subst = value;
        else if (key == "rule0") rule0 = value;
        else if (key == "rule1") rule1 = value;
        else if (key == "tiles") cfg.tiles = value;
        else if (key == "N") cfg.N = static_cast<int>(as_ll(value));
        else if (key == "R") cfg.R = as_double(value);
        else if (key == "out") cfg.outdir = value;
        else if (key == "formats") cfg.formats = value;
        else if (key == "strict") cfg.strict = parse_bool(value, key);
        else if (key == "fit") cfg.fit = parse_bool(value, key);
        else if (key == "excess-table") cfg.excess_table = parse_bool(value, key);
        else if (key == "w1") cfg.w1 = value;
        else if (key == "w2") cfg.w2 = value;
        else if (key == "kmax") cfg.kmax = as_ll(value);
        else if (key == "eps") cfg.eps = as_double(value);
        else if (key == "path-len") cfg.path_len = as_ll(value);
        else invalid("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (!rule0.empty() || !rule1.empty()) {
        if (rule0.empty() || rule1.empty())
            invalid("config file: rule0 and rule1 must be given together");
        if (!cfg.subst.empty())
            invalid("config file: give either subst or rule0/rule1, not both");
        cfg.subst = "0->" + rule0 + ";1->" + rule1;
    }
}

// ---------------------------------------------------------------------------
// Tile-length grammar: "pf", or two comma-separated terms, each one of
//   INT        a/b        sqrtD        sqrt(D)
//   q*sqrt(D)  p+q*sqrt(D)  p-q*sqrt(D)       (p, q rationals)
// ---------------------------------------------------------------------------

Rational parse_rational(const std::string& text, const std::string& what) {
    if (text.empty()) invalid(what + ": empty number");
    try {
        return Rational(text);
    } catch (const std::exception&) {
        invalid(what + ": cannot parse '" + text + "' as a rational");
    }
}

QuadraticNumber parse_tile_term(const std::string& raw) {
    std::string text = trim(raw);
    if (text.empty()) invalid("tiles: empty term");
    std::size_t k = text.find("sqrt");
    if (k == std::string::npos) return QuadraticNumber(parse_rational(text, "tiles"));

    // Radicand: "sqrt(D)" or the bare shorthand "sqrtD".
    std::string rad = text.substr(k + 4);
    if (!rad.empty() && rad.front() == '(') {
        if (rad.back() != ')') invalid("tiles: unbalanced parens in '" + text + "'");
        rad = rad.substr(1, rad.size() - 2);
    }
    if (rad.empty()) invalid("tiles: missing radicand in '" + text + "'");
    long long d = 0;
    try {
        std::size_t used = 0;
        d = std::stoll(rad, &used);
        if (used != rad.size()) throw std::invalid_argument(rad);
    } catch (const std::exception&) {
        invalid("tiles: radicand '" + rad + "' is not an integer");
    }
    if (d < 0) invalid("tiles: negative radicand");

    // Coefficients: everything before "sqrt", i.e. "", "q*", "p+", "p-",
    // "p+q*", or "p-q*".
    std::string coef = text.substr(0, k);
    if (!coef.empty() && coef.back() == '*') coef.pop_back();
    Rational p = 0, q = 1;
    std::size_t split = std::string::npos;
    for (std::size_t i = coef.size(); i-- > 1;) {
        if (coef[i] == '+' || coef[i] == '-') { split = i; break; }
    }
    if (split != std::string::npos) {
        p = parse_rational(coef.substr(0, split), "tiles");
        std::string qs = coef.substr(split + 1);
        q = qs.empty() ? Rational(1) : parse_rational(qs, "tiles");
        if (coef[split] == '-') q = -q;
    } else if (coef == "-") {
        q = -1;
    } else if (!coef.empty() && coef != "+") {
        q = parse_rational(coef, "tiles");
    }
    return QuadraticNumber(p, q, d);
}

std::optional<TileLengths> resolve_tiles(const RunConfig& cfg, const IntMatrix2& m) {
    if (cfg.tiles.empty()) return std::nullopt;
    if (trim(cfg.tiles) == "pf") return pf_tile_lengths(m);
    std::size_t comma = cfg.tiles.find(',');
    if (comma == std::string::npos)
        invalid("tiles: expected two comma-separated lengths or 'pf', got '" + cfg.tiles + "'");
    TileLengths t;
    t.t0 = parse_tile_term(cfg.tiles.substr(0, comma));
    t.t1 = parse_tile_term(cfg.tiles.substr(comma + 1));
    t.provenance = TileLengths::Provenance::UserGiven;
    validate_tiles(t);
    return t;
}

// ---------------------------------------------------------------------------
// Substitution resolution and word translation.
// ---------------------------------------------------------------------------

Substitution resolve_substitution(const RunConfig& cfg) {
    if (cfg.subst.empty()) invalid("missing rule: give -s or a config file with subst/rule0/rule1");
    Substitution parsed = parse_substitution(cfg.subst);
    Substitution s = normalize(parsed);
    if (!is_primitive(s).primitive)
        invalid("substitution is not primitive; the analyses here assume primitivity");
    return s;
}

Word translate_word(const std::string& text, const Substitution& s, const std::string& flag) {
    Word w;
    if (text.empty()) {
        w.push_back(0);
        return w;
    }
    for (char c : text) {
        if (c == s.input_letters[0])
            w.push_back(0);
        else if (c == s.input_letters[1])
            w.push_back(1);
        else
            invalid(flag + ": letter '" + std::string(1, c) + "' is outside the alphabet {" +
                    std::string(1, s.input_letters[0]) + "," + std::string(1, s.input_letters[1]) + "}");
    }
    return w;
}

// ---------------------------------------------------------------------------
// Output plumbing.
// ---------------------------------------------------------------------------

void write_atomic(const fs::path& path, const std::string& data) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out.good()) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out << data;
        if (!out.good()) throw std::runtime_error("short write to '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
    std::cout << "wrote " << path.string() << " (" << data.size() << " bytes)\n";
}

std::vector<std::string> split_formats(const std::string& text, const std::string& fallback) {
    std::vector<std::string> out;
    std::string src = text.empty() ? fallback : text;
    std::stringstream ss(src);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void check_formats(const std::vector<std::string>& formats, std::initializer_list<const char*> allowed) {
    for (const std::string& f : formats) {
        bool ok = false;
        for (const char* a : allowed)
            if (f == a) ok = true;
        if (!ok) invalid("unsupported format '" + f + "'");
    }
}

bool has_format(const std::vector<std::string>& formats, const char* f) {
    for (const std::string& g : formats)
        if (g == f) return true;
    return false;
}

std::string json_bytes(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Subcommands.
// ---------------------------------------------------------------------------

void require_depth(const RunConfig& cfg) {
    if (cfg.N < 16) invalid("N must be >= 16");
}

int run_analyze(const RunConfig& cfg) {
    require_depth(cfg);
    Substitution s = resolve_substitution(cfg);
    std::optional<TileLengths> tiles = resolve_tiles(cfg, substitution_matrix(s));
    std::vector<std::string> formats = split_formats(cfg.formats, "json");
    check_formats(formats, {"json", "csv", "svg"});

    if (cfg.strict) {
        AperiodicityVerdict ap = check_aperiodic(s, 64);
        if (ap.kind == AperiodicityVerdict::Kind::Undetermined)
            throw StrictUndetermined("aperiodicity undetermined at depth " +
                                     std::to_string(ap.depth));
    }

    ReportOptions opts;
    opts.excess_N = cfg.N;
    opts.include_excess_table = cfg.excess_table;
    Json report = build_report(s, tiles, opts);

    fs::path dir(cfg.outdir);
    if (has_format(formats, "json")) write_atomic(dir / "report.json", json_bytes(report));
    if (has_format(formats, "csv"))
        write_atomic(dir / "excess.csv", excess_csv(excess_profile(s, cfg.N)));
    if (has_format(formats, "svg")) {
        ExcessProfile profile = excess_profile(s, 64);
        write_atomic(dir / "figure.svg", export_figure(s, 64, &profile).svg);
    }

    std::cout << "Z: " << report["verdicts"]["Z"]["verdict"].get<std::string>() << "\n";
    if (report["verdicts"].contains("R"))
        std::cout << "R: " << report["verdicts"]["R"]["verdict"].get<std::string>() << "\n";
    return 0;
}

// Unlike analyze (whose verdict evidence needs a minimum depth), the raw
// excess table is meaningful for any positive depth.
int run_excess(const RunConfig& cfg) {
    if (cfg.N < 1) invalid("N must be >= 1");
    Substitution s = resolve_substitution(cfg);
    ExcessProfile profile = excess_profile(s, cfg.N);
    fs::path dir(cfg.outdir);
    write_atomic(dir / "excess.csv", excess_csv(profile));
    if (cfg.fit) {
        if (second_eigen_class(substitution_matrix(s)) == Theta2Class::GT1) {
            BoundReport fit = bound_check(s, profile);
            write_atomic(dir / "fit.json", json_bytes(to_json(fit)));
        } else {
            std::cerr << "note: --fit needs |theta2| > 1; no fit.json written\n";
        }
    }
    return 0;
}

int run_figure(const RunConfig& cfg) {
    Substitution s = resolve_substitution(cfg);
    if (cfg.path_len < 0) invalid("path-len must be >= 0");
    std::vector<std::string> formats = split_formats(cfg.formats, "svg,csv");
    check_formats(formats, {"svg", "csv"});
    std::optional<ExcessProfile> profile;
    if (cfg.path_len >= 1) profile = excess_profile(s, static_cast<int>(cfg.path_len));
    FigureBundle bundle =
        export_figure(s, static_cast<std::size_t>(cfg.path_len), profile ? &*profile : nullptr);
    fs::path dir(cfg.outdir);
    if (has_format(formats, "svg")) write_atomic(dir / "figure.svg", bundle.svg);
    if (has_format(formats, "csv")) {
        write_atomic(dir / "figure.path.csv", bundle.path_csv);
        if (!bundle.envelopes_csv.empty())
            write_atomic(dir / "figure.envelopes.csv", bundle.envelopes_csv);
    }
    return 0;
}

int run_scan(const RunConfig& cfg) {
    Substitution s = resolve_substitution(cfg);
    std::optional<TileLengths> tiles = resolve_tiles(cfg, substitution_matrix(s));
    if (!tiles) invalid("scan requires tile lengths (-t LENGTHS or -t pf)");
    if (cfg.R <= 0) invalid("R must be positive");
    Word w1 = translate_word(cfg.w1, s, "--w1");
    Word w2 = translate_word(cfg.w2, s, "--w2");
    DensityScan scan = psi_density_scan(s, *tiles, w1, w2, cfg.R);
    write_atomic(fs::path(cfg.outdir) / "scan.json", json_bytes(to_json(scan)));
    std::cout << "values: " << scan.values.size() << "\n";
    std::cout << "max_gap_tail: " << decimal12(scan.max_gap_tail) << "\n";
    return 0;
}

int run_meyer(const RunConfig& cfg) {
    Substitution s = resolve_substitution(cfg);
    std::optional<TileLengths> tiles = resolve_tiles(cfg, substitution_matrix(s));
    if (!tiles) invalid("meyer requires tile lengths (-t LENGTHS or -t pf)");
    if (cfg.R <= 0) invalid("R must be positive");
    if (cfg.eps <= 0) invalid("eps must be positive");
    MeyerReport report = meyer_diagnostic(s, *tiles, cfg.R, cfg.eps);
    write_atomic(fs::path(cfg.outdir) / "meyer.json", json_bytes(to_json(report)));
    std::cout << "violations: " << report.violation_count << "\n";
    std::cout << "tail_gap: " << decimal12(report.tail_gap) << "\n";
    return 0;
}

int run_connectors(const RunConfig& cfg) {
    Substitution s = resolve_substitution(cfg);
    if (cfg.kmax < 0) invalid("kmax must be >= 0");
    Word w1 = translate_word(cfg.w1, s, "--w1");
    Word w2 = translate_word(cfg.w2, s, "--w2");
    std::vector<long long> lengths = connector_lengths(s, w1, w2, cfg.kmax);
    std::ostringstream csv;
    csv << "k\n";
    for (long long k : lengths) csv << k << "\n";
    write_atomic(fs::path(cfg.outdir) / "connectors.csv", csv.str());
    std::cout << "realised: " << lengths.size() << " of " << (cfg.kmax + 1) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Topological-mixing analysis for two-letter substitutions"};
    app.require_subcommand(1);

    RunConfig cfg;    // effective configuration (defaults <- file <- flags)
    RunConfig flags;  // raw flag values
    std::vector<std::function<void()>> overrides;

    auto add_common = [&](CLI::App* sub) {
        auto track = [&](CLI::Option* opt, std::function<void()> apply) {
            overrides.push_back([opt, apply]() {
                if (opt->count() > 0) apply();
            });
        };
        track(sub->add_option("-s,--subst", flags.subst, "Substitution rules, e.g. \"0->011;1->0\""),
              [&] { cfg.subst = flags.subst; });
        track(sub->add_option("-f,--file", flags.config_file, "Config file of key = value lines"),
              [&] { cfg.config_file = flags.config_file; });
        track(sub->add_option("-t,--tiles", flags.tiles,
                              "Tile lengths: INT, a/b, p+q*sqrt(d), sqrtD, or pf"),
              [&] { cfg.tiles = flags.tiles; });
        track(sub->add_option("-N", flags.N, "Excess-profile depth (>= 16)"),
              [&] { cfg.N = flags.N; });
        track(sub->add_option("-R", flags.R, "Scan radius"), [&] { cfg.R = flags.R; });
        track(sub->add_option("-o", flags.outdir, "Output directory"),
              [&] { cfg.outdir = flags.outdir; });
        track(sub->add_option("--formats", flags.formats, "Comma-separated output formats"),
              [&] { cfg.formats = flags.formats; });
        track(sub->add_flag("--strict", flags.strict, "Exit 3 if aperiodicity is undetermined"),
              [&] { cfg.strict = flags.strict; });
        track(sub->add_flag("--fit", flags.fit, "Add the growth-law fit (excess command)"),
              [&] { cfg.fit = flags.fit; });
        track(sub->add_flag("--excess-table", flags.excess_table,
                            "Inline the full excess table into the report"),
              [&] { cfg.excess_table = flags.excess_table; });
        track(sub->add_option("--w1", flags.w1, "Left boundary word"), [&] { cfg.w1 = flags.w1; });
        track(sub->add_option("--w2", flags.w2, "Right boundary word"), [&] { cfg.w2 = flags.w2; });
        track(sub->add_option("--kmax", flags.kmax, "Largest connector length scanned"),
              [&] { cfg.kmax = flags.kmax; });
        track(sub->add_option("--eps", flags.eps, "Separation threshold"),
              [&] { cfg.eps = flags.eps; });
        track(sub->add_option("--path-len", flags.path_len, "Path horizon for figures"),
              [&] { cfg.path_len = flags.path_len; });
    };

    CLI::App* analyze = app.add_subcommand("analyze", "Full pipeline: spectral data, certificates, verdicts");
    CLI::App* excess = app.add_subcommand("excess", "Zero-count extremes a(n), b(n) as CSV");
    CLI::App* figure = app.add_subcommand("figure", "Population path and envelope strip as SVG/CSV");
    CLI::App* scan = app.add_subcommand("scan", "Return-time density scan");
    CLI::App* meyer = app.add_subcommand("meyer", "Difference-set separation diagnostic");
    CLI::App* connectors = app.add_subcommand("connectors", "Realised connector lengths between two words");
    for (CLI::App* sub : {analyze, excess, figure, scan, meyer, connectors}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        // Precedence: built-in defaults, then the config file, then flags.
        if (analyze->count("-f") || excess->count("-f") || figure->count("-f") ||
            scan->count("-f") || meyer->count("-f") || connectors->count("-f")) {
            if (flags.subst.empty()) {
                load_config_file(flags.config_file, cfg);
            } else {
                invalid("give either -s or -f, not both");
            }
        }
        for (const auto& apply : overrides) apply();

        if (analyze->parsed()) return run_analyze(cfg);
        if (excess->parsed()) return run_excess(cfg);
        if (figure->parsed()) return run_figure(cfg);
        if (scan->parsed()) return run_scan(cfg);
        if (meyer->parsed()) return run_meyer(cfg);
        if (connectors->parsed()) return run_connectors(cfg);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const StrictUndetermined& e) {
        std::cerr << "strict: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::length_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
