// End-to-end CLI checks: exit codes, report artifacts, determinism, and the
// documented flag surface, driven through a real subprocess.

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <qwse/qwse.hpp>

namespace fs = std::filesystem;

namespace {

struct CmdResult {
    int exit_code = -1;
    std::string output;
};

const fs::path& scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("qwse-cli-test-" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CmdResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    static int counter = 0;
    const fs::path capture = scratch_dir() / ("stdout-" + std::to_string(counter++) + ".txt");
    std::string cmd;
    if (!env_prefix.empty()) cmd += "env " + env_prefix + " ";
    cmd += std::string(QWSE_CLI_PATH) + " " + args + " > \"" + capture.string() + "\" 2>&1";
    const int raw = std::system(cmd.c_str());
    CmdResult result;
    result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    result.output = read_file(capture);
    return result;
}

}  // namespace

TEST_CASE("help and usage errors") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("engineer --help").exit_code == 0);
    CHECK(run_cli("").exit_code == 2);                      // subcommand required
    CHECK(run_cli("frobnicate").exit_code == 2);            // unknown subcommand
    CHECK(run_cli("engineer").exit_code == 2);              // missing --target
    CHECK(run_cli("engineer --target cat:phi=0 --bogus-flag 1").exit_code == 2);
}

TEST_CASE("engineer writes a gated report") {
    const fs::path report_path = scratch_dir() / "cat.json";
    const CmdResult r = run_cli(
        "engineer --target cat:phi=0 --steps 5 --seed 11 --starts 8 --out \"" +
        report_path.string() + "\"");
    REQUIRE(r.exit_code == 0);
    REQUIRE(fs::exists(report_path));

    const std::string raw = read_file(report_path);
    const auto j = qwse::ordered_json::parse(raw);
    CHECK(j["schema"].get<int>() == 1);
    CHECK(j["target_spec"].get<std::string>() == "cat:phi=0");
    CHECK(j["lattice"]["n_steps"].get<int>() == 5);
    CHECK(j["result"]["fidelity"].get<double>() >= 0.999);
    CHECK(std::abs(j["result"]["probability"].get<double>() - 0.5) <= 0.02);
    CHECK(j["master_seed"].get<std::uint64_t>() == 11);
    CHECK_FALSE(j["result"]["below_threshold"].get<bool>());

    // The on-disk artifact round-trips byte-identically through the library.
    const qwse::RunReport parsed = qwse::report_from_json(j);
    CHECK(qwse::serialize_report(parsed) == raw);
}

TEST_CASE("engineer is deterministic for a fixed seed") {
    const fs::path a = scratch_dir() / "det-a.json";
    const fs::path b = scratch_dir() / "det-b.json";
    REQUIRE(run_cli("engineer --target fourier:k=2 --seed 99 --starts 8 --out \"" +
                    a.string() + "\"")
                .exit_code == 0);
    REQUIRE(run_cli("engineer --target fourier:k=2 --seed 99 --starts 8 --out \"" +
                    b.string() + "\"")
                .exit_code == 0);
    auto ja = qwse::ordered_json::parse(read_file(a));
    auto jb = qwse::ordered_json::parse(read_file(b));
    ja.erase("timestamp");
    jb.erase("timestamp");
    CHECK(ja.dump() == jb.dump());
}

TEST_CASE("engineer without a seed generates and records one") {
    const fs::path a = scratch_dir() / "noseed.json";
    REQUIRE(run_cli("engineer --target cat:phi=0 --starts 4 --out \"" + a.string() + "\"")
                .exit_code == 0);
    const auto j = qwse::ordered_json::parse(read_file(a));
    CHECK(j["master_seed"].get<std::uint64_t>() == j["result"]["seed"].get<std::uint64_t>());
}

TEST_CASE("engineer attaches optics and counting sections on request") {
    const fs::path p = scratch_dir() / "full.json";
    const CmdResult r = run_cli(
        "engineer --target cat:phi=0 --seed 5 --starts 8 --compile --alpha0 0.3 "
        "--shots 20000 --out \"" + p.string() + "\"");
    REQUIRE(r.exit_code == 0);
    const auto j = qwse::ordered_json::parse(read_file(p));
    REQUIRE(j.contains("optics"));
    CHECK(j["optics"]["fidelity_vs_ideal"].get<double>() >= 1.0 - 1e-9);
    CHECK(j["optics"]["steps"].size() == 5);
    REQUIRE(j.contains("sim_estimate"));
    std::int64_t total = 0;
    for (const auto& c : j["sim_estimate"]["counts"]) total += c.get<std::int64_t>();
    CHECK(total == 20000);
    CHECK(j["sim_estimate"]["f_hat"].get<double>() >= 0.99);
    // Sigma may legitimately be zero when every count lands in one bucket.
    CHECK(j["sim_estimate"]["sigma"].get<double>() >= 0.0);
    // Basis probabilities: target bucket carries the fidelity, plus a sink.
    REQUIRE(j["basis_probabilities"].size() == 7);
    CHECK(j["basis_probabilities"][0].get<double>() >= 0.999);
}

TEST_CASE("engineer exit codes for bad targets") {
    CHECK(run_cli("engineer --target amps:[1,0,0,0,0] --steps 5").exit_code == 2);
    CHECK(run_cli("engineer --target nonsense:a=1 --steps 5").exit_code == 2);
    CHECK(run_cli("engineer --target fourier:k=9 --steps 5").exit_code == 2);
    // A zero-step walk cannot be asked to engineer anything.
    CHECK(run_cli("engineer --target amps:[1] --steps 0").exit_code == 2);
}

TEST_CASE("qfunc emits grids and rejects malformed ones") {
    const fs::path csv = scratch_dir() / "interf.csv";
    const CmdResult r = run_cli("qfunc --state psi2 --field interf --grid 12x24 --out \"" +
                                csv.string() + "\"");
    REQUIRE(r.exit_code == 0);
    std::istringstream in(read_file(csv));
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "alpha,beta,value");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 12 * 24);

    CHECK(run_cli("qfunc --grid 12y24 --out \"" + csv.string() + "\"").exit_code == 2);
    CHECK(run_cli("qfunc --grid x24 --out \"" + csv.string() + "\"").exit_code == 2);
    CHECK(run_cli("qfunc --grid 1x8 --out \"" + csv.string() + "\"").exit_code == 2);
    CHECK(run_cli("qfunc --state psi3 --out \"" + csv.string() + "\"").exit_code == 2);
    CHECK(run_cli("qfunc --field warp --out \"" + csv.string() + "\"").exit_code == 2);

    // Identical args produce identical bytes.
    const fs::path csv2 = scratch_dir() / "interf2.csv";
    REQUIRE(run_cli("qfunc --state psi2 --field interf --grid 12x24 --out \"" +
                    csv2.string() + "\"")
                .exit_code == 0);
    CHECK(read_file(csv) == read_file(csv2));

    // Polar export switches the header.
    const fs::path polar = scratch_dir() / "polar.csv";
    REQUIRE(run_cli("qfunc --state psi1 --field q --grid 8x16 --polar --out \"" +
                    polar.string() + "\"")
                .exit_code == 0);
    std::istringstream pin(read_file(polar));
    REQUIRE(std::getline(pin, line));
    CHECK(line == "x,y,z,value");
}

TEST_CASE("the default output directory comes from the environment") {
    const fs::path dir = scratch_dir() / "envout";
    fs::create_directories(dir);
    const CmdResult r = run_cli("qfunc --state psi1 --field qinc --grid 4x4",
                                "QWSE_OUT_DIR=\"" + dir.string() + "\"");
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(dir / "qfunc.csv"));
}

TEST_CASE("compile prints the element table and catches bad input") {
    const CmdResult r =
        run_cli("compile --coins \"0.7,0.1,-0.2;1.1,0,0.4\" --alpha0 0.15");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("QWP") != std::string::npos);
    CHECK(r.output.find("HWP") != std::string::npos);
    CHECK(r.output.find("QPLATE") != std::string::npos);

    const fs::path j = scratch_dir() / "circuit.json";
    REQUIRE(run_cli("compile --coins \"0.7,0.1,-0.2\" --json \"" + j.string() + "\"")
                .exit_code == 0);
    const auto parsed = qwse::ordered_json::parse(read_file(j));
    CHECK(parsed["fidelity_vs_ideal"].get<double>() >= 1.0 - 1e-9);
    REQUIRE(parsed["steps"].size() == 1);

    CHECK(run_cli("compile --coins \"0.7,0.1\"").exit_code == 2);           // missing zeta
    CHECK(run_cli("compile --coins \"a,b,c\"").exit_code == 2);
    CHECK(run_cli("compile --coins \"0.7,0.1,0.2\" --q 0.75").exit_code == 2);
    CHECK(run_cli("compile --coins \"0.7,0.1,0.2;1,0,0\" --alpha0 \"0.1;0.2;0.3\"")
              .exit_code == 2);  // wrong alpha0 count
}

TEST_CASE("simulate reports site probabilities and deterministic counts") {
    const std::string coins = "--coins \"0.785398163397448,0,3.141592653589793;"
                              "0.785398163397448,0,3.141592653589793\"";
    const CmdResult r = run_cli("simulate " + coins + " --shots 5000 --seed 31");
    REQUIRE(r.exit_code == 0);
    const auto j = qwse::ordered_json::parse(r.output);
    CHECK(j["lattice"]["n_steps"].get<int>() == 2);
    REQUIRE(j["site_probabilities"].size() == 3);
    double total_p = 0.0;
    for (const auto& p : j["site_probabilities"]) total_p += p.get<double>();
    CHECK(std::abs(total_p - 1.0) < 1e-9);
    std::int64_t shots = 0;
    for (const auto& c : j["counts"]) shots += c.get<std::int64_t>();
    CHECK(shots == 5000);
    CHECK(j["seed"].get<std::uint64_t>() == 31);

    const CmdResult again = run_cli("simulate " + coins + " --shots 5000 --seed 31");
    CHECK(again.output == r.output);

    CHECK(run_cli("simulate --coins \"\"").exit_code == 2);
}

TEST_CASE("batch runs the full catalog once", "[suite]") {
    const fs::path dir = scratch_dir() / "batch";
    const CmdResult r =
        run_cli("batch --suite table1 --seed 20260814 --out \"" + dir.string() + "\"");
    REQUIRE(r.exit_code == 0);

    const fs::path summary = dir / "summary.csv";
    REQUIRE(fs::exists(summary));
    std::istringstream in(read_file(summary));
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "target,fidelity,probability");
    std::size_t rows = 0;
    std::size_t half_rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        const std::size_t c1 = line.find(',');
        const std::size_t c2 = line.find(',', c1 + 1);
        REQUIRE(c1 != std::string::npos);
        REQUIRE(c2 != std::string::npos);
        const double fidelity = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        const double probability = std::stod(line.substr(c2 + 1));
        REQUIRE(fidelity >= 0.999);
        REQUIRE(probability >= 0.10 - 1e-9);
        if (std::abs(probability - 0.5) <= 0.02) ++half_rows;
    }
    CHECK(rows == 32);
    CHECK(half_rows >= 10);

    // One JSON report per target, named by row index.
    std::size_t reports = 0;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".json") ++reports;
    CHECK(reports == 32);

    CHECK(run_cli("batch --suite nope --out \"" + dir.string() + "\"").exit_code == 2);
}
