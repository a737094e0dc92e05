// End-to-end checks of the command line tool. The binary path comes in
// through the GRADREC_CLI environment variable (set by the test harness).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

std::string cli_path() {
    const char* path = std::getenv("GRADREC_CLI");
    REQUIRE_MESSAGE(path != nullptr, "GRADREC_CLI must point at the gradrec binary");
    return path;
}

fs::path work_dir() {
    const fs::path dir = fs::temp_directory_path() / "gradrec_cli_tests";
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args, const fs::path& stderr_to = {}) {
    std::string command = cli_path() + " " + args;
    if (!stderr_to.empty()) {
        command += " 2>" + stderr_to.string();
    } else {
        command += " 2>/dev/null";
    }
    command += " >/dev/null";
    const int status = std::system(command.c_str());
    return WEXITSTATUS(status);
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<std::string> read_lines(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

} // namespace

TEST_CASE("generate writes the test signal and reruns byte-identically") {
    const fs::path dir = work_dir();
    const fs::path first = dir / "s1.csv";
    const fs::path second = dir / "s2.csv";
    CHECK(run_cli("generate --n 128 --component 3:10 --component 1:15 --out " + first.string()) ==
          0);
    CHECK(run_cli("generate --n 128 --component 3:10 --component 1:15 --out " + second.string()) ==
          0);

    const auto lines = read_lines(first);
    REQUIRE(lines.size() == 129);
    CHECK(lines[0] == "index,value");
    CHECK(lines[1] == "0,0");
    CHECK(read_file(first) == read_file(second));
}

TEST_CASE("generate then reconstruct with nothing missing round-trips the file") {
    const fs::path dir = work_dir();
    const fs::path signal = dir / "signal.csv";
    const fs::path mask = dir / "mask0.csv";
    const fs::path out = dir / "recon.csv";
    REQUIRE(run_cli("generate --out " + signal.string()) == 0);
    REQUIRE(run_cli("mask --n 128 --num-missing 0 --seed 1 --out " + mask.string()) == 0);
    REQUIRE(run_cli("reconstruct --in " + signal.string() + " --mask " + mask.string() +
                    " --out " + out.string()) == 0);
    CHECK(read_file(out) == read_file(signal));
}

TEST_CASE("bare reconstruct with defaults reproduces the headline run") {
    const fs::path dir = work_dir();
    const fs::path out = dir / "headline.csv";
    const fs::path trace = dir / "headline_trace.csv";
    REQUIRE(run_cli("reconstruct --num-missing 64 --seed 1 --out " + out.string() + " --trace " +
                    trace.string()) == 0);

    const auto lines = read_lines(trace);
    REQUIRE(lines.size() == 322);  // header + 321 rows
    CHECK(lines[0] == "iteration,measure,mae,d,mu");

    // the mae column (field 3) reaches the scaled tolerance
    double best = 1e300;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::stringstream row(lines[i]);
        std::string field;
        std::getline(row, field, ',');
        std::getline(row, field, ',');
        std::getline(row, field, ',');
        best = std::min(best, std::stod(field));
    }
    CHECK(best <= 1e-12);

    // identical invocation, identical bytes
    const fs::path out2 = dir / "headline2.csv";
    REQUIRE(run_cli("reconstruct --num-missing 64 --seed 1 --out " + out2.string()) == 0);
    CHECK(read_file(out) == read_file(out2));
}

TEST_CASE("mask subcommand is deterministic per seed") {
    const fs::path dir = work_dir();
    const fs::path a = dir / "mask_a.csv";
    const fs::path b = dir / "mask_b.csv";
    REQUIRE(run_cli("mask --n 128 --num-missing 94 --seed 9 --out " + a.string()) == 0);
    REQUIRE(run_cli("mask --n 128 --num-missing 94 --seed 9 --out " + b.string()) == 0);
    CHECK(read_file(a) == read_file(b));
    const auto lines = read_lines(a);
    REQUIRE(lines.size() == 129);
    CHECK(lines[0] == "index,available");
}

TEST_CASE("diagnostics: unknown flags, missing seeds, unreadable and malformed input") {
    const fs::path dir = work_dir();
    const fs::path err = dir / "stderr.txt";

    CHECK(run_cli("reconstruct --definitely-not-a-flag 1", err) != 0);
    CHECK(read_file(err).find("--definitely-not-a-flag") != std::string::npos);

    // --num-missing without --seed: seeds are never defaulted
    CHECK(run_cli("reconstruct --num-missing 64", err) != 0);
    CHECK(read_file(err).find("--seed") != std::string::npos);

    CHECK(run_cli("reconstruct --in " + (dir / "nope.csv").string() + " --num-missing 4 --seed 1",
                  err) != 0);
    CHECK(read_file(err).find("cannot open") != std::string::npos);

    const fs::path bad = dir / "bad.csv";
    std::ofstream(bad) << "index,value\n0,notanumber\n";
    CHECK(run_cli("reconstruct --in " + bad.string() + " --num-missing 4 --seed 1", err) != 0);
    CHECK(read_file(err).find("malformed") != std::string::npos);

    CHECK(run_cli("mask --n 128 --num-missing 200 --seed 1 --out " + (dir / "m.csv").string(),
                  err) != 0);
    CHECK(run_cli("sweep-params --pair 10:20 --missing 8 --out " + (dir / "x.csv").string(),
                  err) != 0);
    CHECK(read_file(err).find("--seeds") != std::string::npos);
}

TEST_CASE("sweeps and case studies write their files") {
    const fs::path dir = work_dir();
    const fs::path rows = dir / "rows.csv";
    const fs::path summary = dir / "summary.csv";
    REQUIRE(run_cli("sweep-params --pair 10:20 --pair 10:10 --missing 8 --seed 1 --seed 2 "
                    "--iterations 40 --out " + rows.string() + " --summary " + summary.string()) ==
            0);
    auto lines = read_lines(rows);
    CHECK(lines[0] == "d0,mu0,num_missing,variance,seed,mae_min,iter_of_min,snr_db");
    CHECK(lines.size() == 5);  // 2 pairs x 1 missing count x 2 seeds
    CHECK(read_lines(summary).size() == 3);

    REQUIRE(run_cli("sweep-noise --variance 0.1 --missing 8 --seed 1 --iterations 40 --out " +
                    rows.string()) == 0);
    lines = read_lines(rows);
    CHECK(lines.size() == 2);

    const fs::path trace = dir / "case_trace.csv";
    const fs::path overlay = dir / "case_overlay.csv";
    REQUIRE(run_cli("case --id case3 --seed 1 --trace " + trace.string() + " --overlay " +
                    overlay.string()) == 0);
    CHECK(read_lines(overlay)[0] == "index,original,noisy,available,reconstructed");
    REQUIRE(run_cli("case --id case1_constant --seed 1 --trace " + trace.string() +
                    " --overlay " + overlay.string()) == 0);
    CHECK(read_lines(overlay)[0] == "index,original,available,reconstructed");
}

TEST_CASE("stdout output works with the - path") {
    const fs::path dir = work_dir();
    const fs::path captured = dir / "stdout.csv";
    const std::string command = cli_path() + " generate --n 16 --component 1:3 --out - > " +
                                captured.string() + " 2>/dev/null";
    REQUIRE(WEXITSTATUS(std::system(command.c_str())) == 0);
    const auto lines = read_lines(captured);
    REQUIRE(lines.size() == 17);
    CHECK(lines[0] == "index,value");
}
