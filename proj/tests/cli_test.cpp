// End-to-end checks of the command-line front end: exit codes, report
// contents, and byte-level determinism. Invoked with the binary path as
// argv[1]; all fixture and output files live in the working directory.

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vbs/aklt.hpp"
#include "vbs/hqmm.hpp"
#include "vbs/serialize.hpp"

namespace {

#define REQUIRE(cond, msg)                                                      \
    do {                                                                        \
        if (!(cond)) {                                                          \
            std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " " << msg \
                      << "\n";                                                  \
            std::exit(1);                                                       \
        }                                                                       \
    } while (0)

std::string g_cli;

int run_cli(const std::string& args, const std::string& out_file = "cli_out.txt",
            const std::string& err_file = "cli_err.txt") {
    std::string cmd = "\"" + g_cli + "\" " + args + " > " + out_file + " 2> " + err_file;
    int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1, "system() failed to launch the binary");
    REQUIRE(WIFEXITED(rc), "binary did not exit normally for: " + args);
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(bool(in), "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::vector<std::string> fields;
        std::istringstream fs(line);
        std::string field;
        while (std::getline(fs, field, ',')) fields.push_back(field);
        if (!line.empty() && line.back() == ',') fields.push_back("");
        rows.push_back(std::move(fields));
    }
    return rows;
}

// value_re for a named row of a (path, value_re, value_im) table
double csv_value(const std::vector<std::vector<std::string>>& rows, const std::string& key,
                 int column = 1) {
    for (const auto& r : rows)
        if (!r.empty() && r[0] == key) {
            REQUIRE(static_cast<int>(r.size()) > column, "row " + key + " too short");
            return std::strtod(r[column].c_str(), nullptr);
        }
    REQUIRE(false, "row not found: " + key);
    return 0.0;
}

bool has_row(const std::vector<std::vector<std::string>>& rows, const std::string& key) {
    for (const auto& r : rows)
        if (!r.empty() && r[0] == key) return true;
    return false;
}

void write_fixtures() {
    vbs::Spin1Operators s1 = vbs::spin1_operators();
    vbs::ObservableSpec szsz = vbs::ObservableSpec::factored_form({s1.sz, s1.sz});
    write_file("szsz.json", vbs::to_json(szsz).dump());
    write_file("id3.json", vbs::to_json(vbs::ObservableSpec::identity(3)).dump());
    write_file("channel.json", vbs::to_json(vbs::transfer_channel()).dump());
    write_file("model.json", vbs::to_json(vbs::aklt_hqmm_model()).dump());
    // Valid model whose observation process is NOT the chain state: same
    // transitions, but a pure-state initial functional instead of the
    // normalized trace.
    vbs::HqmmModel skewed = vbs::aklt_hqmm_model();
    skewed.initial_state = vbs::HqmmModel::Functional::Density;
    skewed.density = vbs::ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, 0.0}});
    write_file("model_skewed.json", vbs::to_json(skewed).dump());
    write_file("malformed.json", "{ this is not json");
    write_file("unknown_kind.json", R"({"foo": 1})");
}

void test_expect() {
    REQUIRE(run_cli("expect --input szsz.json") == 0, "expect exits 0");
    auto rows = parse_csv(slurp("cli_out.txt"));
    REQUIRE(rows.size() >= 6, "expect emits all rows");
    REQUIRE(rows[0][0] == "path", "expect header");
    REQUIRE(std::abs(csv_value(rows, "finite_chain") - (-8.0 / 9.0)) < 1e-12,
            "finite-chain value");
    REQUIRE(std::abs(csv_value(rows, "infinite_volume") - (-4.0 / 9.0)) < 1e-12,
            "infinite-volume value");
    REQUIRE(std::abs(csv_value(rows, "exact_oracle") - (-8.0 / 9.0)) < 1e-12, "oracle value");
    REQUIRE(csv_value(rows, "dev_finite_vs_oracle") < 1e-9, "finite/oracle deviation");
    REQUIRE(csv_value(rows, "dev_infinite_vs_embedded") < 1e-9, "embedded deviation");
    REQUIRE(csv_value(rows, "dev_infinite_vs_fcs_form") < 1e-9, "iterated-map deviation");

    // identity observable in JSON format
    REQUIRE(run_cli("expect --input id3.json --format json") == 0, "expect json exits 0");
    nlohmann::json doc = nlohmann::json::parse(slurp("cli_out.txt"));
    bool found = false;
    for (const auto& row : doc["rows"])
        if (row["path"] == "infinite_volume") {
            found = true;
            REQUIRE(std::abs(row["value_re"].get<double>() - 1.0) < 1e-10,
                    "normalization in json report");
        }
    REQUIRE(found, "json report has the infinite-volume row");

    // determinism: identical invocations produce identical bytes
    REQUIRE(run_cli("expect --input szsz.json", "rerun.txt") == 0, "expect rerun exits 0");
    REQUIRE(slurp("cli_out.txt") != "", "expect produced output");
    REQUIRE(run_cli("expect --input szsz.json", "rerun2.txt") == 0, "expect rerun2 exits 0");
    REQUIRE(slurp("rerun.txt") == slurp("rerun2.txt"), "expect output is deterministic");

    // --out writes the same bytes to a file
    REQUIRE(run_cli("expect --input szsz.json --out viafile.csv") == 0, "expect --out exits 0");
    REQUIRE(slurp("viafile.csv") == slurp("rerun.txt"), "--out matches stdout bytes");

    REQUIRE(run_cli("expect --input malformed.json") == 2, "malformed input exits 2");
    REQUIRE(slurp("cli_out.txt").empty(), "no partial report on parse error");
    REQUIRE(run_cli("expect") == 3, "missing --input exits 3");
}

void test_correlate() {
    REQUIRE(run_cli("correlate --max-distance 5") == 0, "correlate exits 0");
    auto rows = parse_csv(slurp("cli_out.txt"));
    REQUIRE(rows.size() == 6, "header plus five rows");
    REQUIRE(rows[1][2].empty(), "first ratio column is blank");
    REQUIRE(std::abs(std::strtod(rows[1][1].c_str(), nullptr) - (-4.0 / 9.0)) < 1e-10,
            "distance-1 value");
    for (std::size_t i = 2; i < rows.size(); ++i) {
        double ratio = std::strtod(rows[i][2].c_str(), nullptr);
        REQUIRE(std::abs(ratio - (-1.0 / 3.0)) < 1e-9, "geometric ratio at row " + rows[i][0]);
    }

    REQUIRE(run_cli("correlate --max-distance 5 --axis x", "xaxis.txt") == 0,
            "correlate x exits 0");
    auto xrows = parse_csv(slurp("xaxis.txt"));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        double vz = std::strtod(rows[i][1].c_str(), nullptr);
        double vx = std::strtod(xrows[i][1].c_str(), nullptr);
        REQUIRE(std::abs(vz - vx) < 1e-10, "axis symmetry at row " + rows[i][0]);
    }

    REQUIRE(run_cli("correlate --max-distance 0") == 3, "zero distance exits 3");
    REQUIRE(run_cli("correlate --max-distance 21") == 3, "distance over bound exits 3");
    REQUIRE(run_cli("correlate --axis q") == 3, "bad axis exits 3");
}

void test_converge() {
    REQUIRE(run_cli("converge --input szsz.json --m-max 2 --p-max 2") == 0, "converge exits 0");
    auto rows = parse_csv(slurp("cli_out.txt"));
    REQUIRE(rows.size() == 10, "header plus 3x3 grid");
    REQUIRE(rows[0][4] == "abs_error_vs_omega", "error column present");
    double err00 = std::strtod(rows[1][4].c_str(), nullptr);       // (m,p) = (0,0)
    double err22 = std::strtod(rows.back()[4].c_str(), nullptr);   // (m,p) = (2,2)
    REQUIRE(std::abs(err00 - 4.0 / 9.0) < 1e-10, "zero-padding error is the finite-chain gap");
    REQUIRE(std::abs(err22 - err00 / 81.0) < 1e-12, "error drops by 81 after two pads each side");

    REQUIRE(run_cli("converge --input szsz.json --m-max 201") == 3, "padding over bound exits 3");
    REQUIRE(run_cli("converge --m-max 2") == 3, "missing input exits 3");
}

void test_hqmm_verify() {
    REQUIRE(run_cli("hqmm-verify --n-sites 2 --trials 5 --seed 7", "hv1.txt") == 0,
            "verification passes at default tolerance");
    REQUIRE(run_cli("hqmm-verify --n-sites 2 --trials 5 --seed 7", "hv2.txt") == 0,
            "verification rerun");
    REQUIRE(slurp("hv1.txt") == slurp("hv2.txt"), "same seed gives identical bytes");

    auto rows = parse_csv(slurp("hv1.txt"));
    REQUIRE(has_row(rows, "trials"), "trial section present");
    double gap = 0.0;
    for (const auto& r : rows)
        if (r.size() >= 3 && r[0] == "witness" && r[1] == "analytic_gap")
            gap = std::strtod(r[2].c_str(), nullptr);
    REQUIRE(std::abs(gap - 4.0 / 3.0) < 1e-12, "analytic composition-order witness gap");

    // zero trials: empty trial section, witness still reported, exit 0
    REQUIRE(run_cli("hqmm-verify --trials 0") == 0, "zero trials exits 0");
    auto zrows = parse_csv(slurp("cli_out.txt"));
    bool has_dev = false;
    for (const auto& r : zrows)
        if (r.size() >= 2 && r[1] == "max_abs_deviation") has_dev = true;
    REQUIRE(!has_dev, "no deviation row without trials");
    bool has_witness = false;
    for (const auto& r : zrows)
        if (!r.empty() && r[0] == "witness") has_witness = true;
    REQUIRE(has_witness, "witness search runs even with zero trials");

    // supplied model file is accepted and behaves identically to the builtin
    REQUIRE(run_cli("hqmm-verify --input model.json --n-sites 2 --trials 4 --seed 9") == 0,
            "serialized model verifies");

    // a valid model that is NOT the chain state fails verification: exit 1,
    // offending observable dumped to standard error
    REQUIRE(run_cli("hqmm-verify --input model_skewed.json --n-sites 3 --trials 6 --seed 1") ==
                1,
            "skewed model exits 1");
    std::string err = slurp("cli_err.txt");
    REQUIRE(err.find("verification failure") != std::string::npos, "failure diagnostic");
    REQUIRE(err.find("factors") != std::string::npos, "offending observable dumped as JSON");
    auto frows = parse_csv(slurp("cli_out.txt"));
    bool verdict_fail = false;
    for (const auto& r : frows)
        if (r.size() >= 3 && r[1] == "verdict" && r[2] == "fail") verdict_fail = true;
    REQUIRE(verdict_fail, "report records the failing verdict");

    REQUIRE(run_cli("hqmm-verify --n-sites 7") == 3, "n-sites over bound exits 3");
    REQUIRE(run_cli("hqmm-verify --trials 10001") == 3, "trials over bound exits 3");
    REQUIRE(run_cli("hqmm-verify --tol -1") == 3, "negative tolerance exits 3");
}

void test_validate() {
    REQUIRE(run_cli("validate --input szsz.json") == 0, "observable validates");
    auto rows = parse_csv(slurp("cli_out.txt"));
    bool kind_ok = false, herm_ok = false;
    for (const auto& r : rows) {
        if (r.size() >= 3 && r[1] == "kind" && r[2] == "observable") kind_ok = true;
        if (r.size() >= 3 && r[1] == "hermitian" && r[2] == "yes") herm_ok = true;
    }
    REQUIRE(kind_ok, "kind detected as observable");
    REQUIRE(herm_ok, "hermiticity reported");

    REQUIRE(run_cli("validate --input channel.json") == 0, "channel validates");
    rows = parse_csv(slurp("cli_out.txt"));
    bool unital = false, tp = false;
    for (const auto& r : rows) {
        if (r.size() >= 3 && r[1] == "unital" && r[2] == "yes") unital = true;
        if (r.size() >= 3 && r[1] == "trace_preserving" && r[2] == "yes") tp = true;
    }
    REQUIRE(unital && tp, "channel flags reported");

    REQUIRE(run_cli("validate --input model.json") == 0, "model validates");
    rows = parse_csv(slurp("cli_out.txt"));
    bool causal = false;
    for (const auto& r : rows)
        if (r.size() >= 3 && r[1] == "ordering" && r[2] == "causal") causal = true;
    REQUIRE(causal, "model ordering reported");

    REQUIRE(run_cli("validate --input unknown_kind.json") == 2, "unrecognized document exits 2");
    REQUIRE(run_cli("validate --input malformed.json") == 2, "malformed document exits 2");
    REQUIRE(run_cli("validate --input does_not_exist.json") == 3, "missing file exits 3");
}

void test_spectrum() {
    REQUIRE(run_cli("spectrum") == 0, "default spectrum exits 0");
    auto rows = parse_csv(slurp("cli_out.txt"));
    std::vector<double> eigs;
    double rate = 0.0;
    bool has_steps = false;
    for (const auto& r : rows) {
        if (r.size() >= 3 && r[0] == "eigenvalue") eigs.push_back(std::strtod(r[2].c_str(), nullptr));
        if (r.size() >= 3 && r[0] == "rate") rate = std::strtod(r[2].c_str(), nullptr);
        if (!r.empty() && r[0] == "steps") has_steps = true;
    }
    REQUIRE(eigs.size() == 4, "four eigenvalues for a qubit channel");
    for (int i = 0; i < 3; ++i)
        REQUIRE(std::abs(eigs[i] - (-1.0 / 3.0)) < 1e-10, "subleading eigenvalue");
    REQUIRE(std::abs(eigs[3] - 1.0) < 1e-10, "leading eigenvalue");
    REQUIRE(std::abs(rate - 1.0 / 3.0) < 0.02, "fitted decay rate");
    REQUIRE(has_steps, "steps row present");

    REQUIRE(run_cli("spectrum --input channel.json", "spec2.txt") == 0,
            "explicit channel spectrum exits 0");
    REQUIRE(run_cli("spectrum", "spec3.txt") == 0, "spectrum rerun");
    REQUIRE(slurp("spec3.txt") == slurp("cli_out.txt"), "spectrum output is deterministic");
    REQUIRE(slurp("spec2.txt") == slurp("spec3.txt"), "built-in equals serialized channel");
}

void test_global_flags() {
    REQUIRE(run_cli("") == 3, "missing subcommand exits 3");
    REQUIRE(run_cli("frobnicate") == 3, "unknown subcommand exits 3");
    REQUIRE(run_cli("expect --input szsz.json --format xml") == 3, "unknown format exits 3");
    REQUIRE(run_cli("--help") == 0, "help exits 0");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "[FAIL] usage: cli_test <path-to-cli-binary>\n";
        return 1;
    }
    g_cli = argv[1];
    write_fixtures();

    test_expect();
    std::cout << "[PASS] expect command\n";
    test_correlate();
    std::cout << "[PASS] correlate command\n";
    test_converge();
    std::cout << "[PASS] converge command\n";
    test_hqmm_verify();
    std::cout << "[PASS] hqmm-verify command\n";
    test_validate();
    std::cout << "[PASS] validate command\n";
    test_spectrum();
    std::cout << "[PASS] spectrum command\n";
    test_global_flags();
    std::cout << "[PASS] global flag handling\n";
    return 0;
}
