// End-to-end tests for the command-line tool.  The binary under test is
// located through the SUBMIX_BIN environment variable (set by CTest); each
// test works in its own scratch directory and inspects the files written.

#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr interleaved
};

std::string cli_binary() {
    const char* bin = std::getenv("SUBMIX_BIN");
    REQUIRE(bin != nullptr);
    return bin;
}

std::string shell_quote(const std::string& arg) { return "'" + arg + "'"; }

RunResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream cmd;
    cmd << shell_quote(cli_binary());
    for (const std::string& a : args) cmd << ' ' << shell_quote(a);
    cmd << " 2>&1";
    FILE* pipe = popen(cmd.str().c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, got);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

fs::path fresh_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / "submix-cli-tests" / tag;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> data_rows(const std::string& csv) {
    std::vector<std::string> rows;
    std::istringstream ss(csv);
    std::string line;
    bool first = true;
    while (std::getline(ss, line)) {
        if (first) {
            first = false;  // skip header
            continue;
        }
        if (!line.empty()) rows.push_back(line);
    }
    return rows;
}

using Json = nlohmann::ordered_json;

}  // namespace

TEST_CASE("missing rule exits with code 2", "[cli]") {
    RunResult r = run_cli({"analyze"});
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("missing rule") != std::string::npos);
}

TEST_CASE("analyze reports the on-circle class and a passing gcd certificate", "[cli]") {
    fs::path dir = fresh_dir("analyze-eq1");
    RunResult r = run_cli({"analyze", "-s", "0->011;1->0", "-t", "1,sqrt2", "-o", dir.string()});
    REQUIRE(r.exit_code == 0);
    Json report = Json::parse(slurp(dir / "report.json"));
    CHECK(report["spectral"]["theta2_class"] == "EQ1");
    CHECK(report["gcd"]["holds"] == true);
    CHECK(report["tiles"]["t1"]["d"] == 2);
    CHECK(report["verdicts"]["Z"]["verdict"] == "UndeterminedEvidence");
    CHECK(report["verdicts"]["R"]["verdict"] == "UndeterminedEvidence");
}

TEST_CASE("analyze prints and records not-mixing verdicts for the golden-mean rules", "[cli]") {
    fs::path dir = fresh_dir("analyze-notmixing");
    RunResult r = run_cli({"analyze", "-s", "0->01;1->0", "-o", dir.string()});
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("Z: NotMixing") != std::string::npos);
    Json report = Json::parse(slurp(dir / "report.json"));
    CHECK(report["verdicts"]["Z"]["verdict"] == "NotMixing");
    CHECK(report["spectral"]["theta2_class"] == "LT1");
    CHECK_FALSE(report["verdicts"].contains("R"));  // no tiles given
}

TEST_CASE("repeated runs produce byte-identical outputs", "[cli]") {
    fs::path d1 = fresh_dir("det-1");
    fs::path d2 = fresh_dir("det-2");
    std::vector<std::string> base = {"analyze", "-s", "0->011;1->0", "-t", "pf",
                                     "--formats", "json,csv,svg", "-N", "128"};
    std::vector<std::string> a1 = base, a2 = base;
    a1.insert(a1.end(), {"-o", d1.string()});
    a2.insert(a2.end(), {"-o", d2.string()});
    REQUIRE(run_cli(a1).exit_code == 0);
    REQUIRE(run_cli(a2).exit_code == 0);
    for (const char* name : {"report.json", "excess.csv", "figure.svg"}) {
        CAPTURE(name);
        CHECK(slurp(d1 / name) == slurp(d2 / name));
    }
}

TEST_CASE("excess table for the period-doubling rules has excess 1 at powers of two", "[cli]") {
    fs::path dir = fresh_dir("excess-pd");
    RunResult r = run_cli({"excess", "-s", "0->01;1->00", "-N", "4096", "-o", dir.string()});
    REQUIRE(r.exit_code == 0);
    std::vector<std::string> rows = data_rows(slurp(dir / "excess.csv"));
    REQUIRE(rows.size() == 4096);
    for (int n = 1; n <= 4096; n *= 2) {
        std::istringstream line(rows[static_cast<std::size_t>(n) - 1]);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(line, cell, ',')) cells.push_back(cell);
        REQUIRE(cells.size() == 4);
        CAPTURE(n, rows[static_cast<std::size_t>(n) - 1]);
        CHECK(cells[0] == std::to_string(n));
        CHECK(cells[3] == "1");
    }
}

TEST_CASE("excess honours small depths", "[cli]") {
    fs::path dir = fresh_dir("excess-n8");
    RunResult r = run_cli({"excess", "-s", "0->01;1->00", "-N", "8", "-o", dir.string()});
    REQUIRE(r.exit_code == 0);
    CHECK(data_rows(slurp(dir / "excess.csv")).size() == 8);
}

TEST_CASE("excess --fit emits a growth-law file with a slope", "[cli]") {
    fs::path dir = fresh_dir("excess-fit");
    RunResult r = run_cli({"excess", "-s", "0->001;1->01111", "-N", "512", "--fit",
                           "-o", dir.string()});
    REQUIRE(r.exit_code == 0);
    Json fit = Json::parse(slurp(dir / "fit.json"));
    CHECK(fit.contains("slope"));
    CHECK(fit.contains("c1"));
    CHECK(std::stod(fit["slope"].get<std::string>()) > 0.0);
}

TEST_CASE("excess --fit on an on-circle example writes no fit file", "[cli]") {
    fs::path dir = fresh_dir("excess-fit-eq1");
    RunResult r = run_cli({"excess", "-s", "0->011;1->0", "-N", "64", "--fit", "-o", dir.string()});
    REQUIRE(r.exit_code == 0);
    CHECK_FALSE(fs::exists(dir / "fit.json"));
    CHECK(r.output.find("no fit.json") != std::string::npos);
}

TEST_CASE("figure with a zero-length path draws only the frame", "[cli]") {
    fs::path dir = fresh_dir("figure-j0");
    RunResult r = run_cli({"figure", "-s", "0->011;1->0", "--path-len", "0", "-o", dir.string()});
    REQUIRE(r.exit_code == 0);
    std::string svg = slurp(dir / "figure.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<polyline") == std::string::npos);
    CHECK(svg.find("<polygon") == std::string::npos);
    CHECK(data_rows(slurp(dir / "figure.path.csv")).size() == 1);  // the origin row
    CHECK_FALSE(fs::exists(dir / "figure.envelopes.csv"));
}

TEST_CASE("figure path table has one row per step plus the origin", "[cli]") {
    fs::path dir = fresh_dir("figure-j64");
    RunResult r = run_cli({"figure", "-s", "0->011;1->0", "--path-len", "64", "-o", dir.string()});
    REQUIRE(r.exit_code == 0);
    CHECK(data_rows(slurp(dir / "figure.path.csv")).size() == 65);
    CHECK(data_rows(slurp(dir / "figure.envelopes.csv")).size() == 65);
    std::string svg = slurp(dir / "figure.svg");
    CHECK(svg.find("<polygon") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
}

TEST_CASE("config files mirror the flags and flags win on conflict", "[cli]") {
    fs::path dir = fresh_dir("config-file");
    fs::path cfg = dir / "job.cfg";
    {
        std::ofstream out(cfg);
        out << "# analysis job\n"
            << "rule0 = 011\n"
            << "rule1 = 0\n"
            << "N = 64\n"
            << "out = " << (dir / "from-file").string() << "\n";
    }
    RunResult r1 = run_cli({"analyze", "-f", cfg.string()});
    REQUIRE(r1.exit_code == 0);
    Json rep1 = Json::parse(slurp(dir / "from-file" / "report.json"));
    CHECK(rep1["verdicts"]["Z"]["evidence"]["N"] == 64);

    RunResult r2 = run_cli({"analyze", "-f", cfg.string(), "-N", "128",
                            "-o", (dir / "override").string()});
    REQUIRE(r2.exit_code == 0);
    Json rep2 = Json::parse(slurp(dir / "override" / "report.json"));
    CHECK(rep2["verdicts"]["Z"]["evidence"]["N"] == 128);
}

TEST_CASE("invalid inputs exit with code 2", "[cli]") {
    fs::path dir = fresh_dir("invalid");
    fs::path cfg = dir / "job.cfg";
    {
        std::ofstream out(cfg);
        out << "subst = 0->011;1->0\n";
    }
    struct Case {
        const char* label;
        std::vector<std::string> args;
    };
    const Case cases[] = {
        {"both sources", {"analyze", "-s", "0->01;1->0", "-f", cfg.string()}},
        {"malformed rules", {"analyze", "-s", "0->01"}},
        {"non-primitive", {"analyze", "-s", "0->01;1->1"}},
        {"zero tile", {"analyze", "-s", "0->011;1->0", "-t", "0,1"}},
        {"bad tile syntax", {"analyze", "-s", "0->011;1->0", "-t", "1,sqrt(-2)"}},
        {"unknown format", {"analyze", "-s", "0->011;1->0", "--formats", "pdf"}},
        {"analyze depth too small", {"analyze", "-s", "0->011;1->0", "-N", "8"}},
        {"periodic fixed point", {"analyze", "-s", "0->01;1->01"}},
        {"scan without tiles", {"scan", "-s", "0->011;1->0"}},
        {"unreadable config file", {"analyze", "-f", "/nonexistent/job.cfg"}},
    };
    for (const Case& c : cases) {
        CAPTURE(c.label);
        CHECK(run_cli(c.args).exit_code == 2);
    }
}

TEST_CASE("scan writes a density report with frozen counts", "[cli]") {
    fs::path dir = fresh_dir("scan");
    RunResult r = run_cli({"scan", "-s", "0->011;1->0", "-t", "1,sqrt2", "-R", "64",
                           "-o", dir.string()});
    REQUIRE(r.exit_code == 0);
    Json scan = Json::parse(slurp(dir / "scan.json"));
    CHECK(scan["values"].size() == 102);
    CHECK(scan["max_gap_tail"] == "1.000000000000");
    CHECK(r.output.find("values: 102") != std::string::npos);
}

TEST_CASE("meyer writes a separation report", "[cli]") {
    fs::path dir = fresh_dir("meyer");
    RunResult r = run_cli({"meyer", "-s", "0->011;1->0", "-t", "1,sqrt(2)", "-R", "64",
                           "--eps", "0.001", "-o", dir.string()});
    REQUIRE(r.exit_code == 0);
    Json report = Json::parse(slurp(dir / "meyer.json"));
    CHECK(report["violation_count"] == 0);
    CHECK(report["lambda_size"] == 53);
    CHECK(report["tail_gap"] == "1.230447378300");
}

TEST_CASE("connectors lists every realised length for a complete pair", "[cli]") {
    fs::path dir = fresh_dir("connectors");
    RunResult r = run_cli({"connectors", "-s", "0->001;1->11100", "--w1", "0", "--w2", "0",
                           "--kmax", "5", "-o", dir.string()});
    REQUIRE(r.exit_code == 0);
    std::vector<std::string> rows = data_rows(slurp(dir / "connectors.csv"));
    REQUIRE(rows.size() == 6);
    for (int k = 0; k <= 5; ++k) CHECK(rows[static_cast<std::size_t>(k)] == std::to_string(k));
    CHECK(r.output.find("realised: 6 of 6") != std::string::npos);
}

TEST_CASE("strict mode accepts certified-aperiodic input", "[cli]") {
    fs::path dir = fresh_dir("strict-ok");
    RunResult r = run_cli({"analyze", "--strict", "-s", "0->001;1->11100", "-o", dir.string()});
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir / "report.json"));
}
