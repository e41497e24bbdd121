// End-to-end checks of the command-line runner: exit codes, file outputs,
// reproducibility. The binary path arrives via the QSEC_CLI environment
// variable set by CTest.
#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qsec/io.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* p = std::getenv("QSEC_CLI");
    REQUIRE(p != nullptr);
    return p;
}

int run(const std::string& args) {
    std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

fs::path fresh_dir(const std::string& name) {
    fs::path d = fs::temp_directory_path() / ("qsec_cli_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) { return qsec::io::read_file(p.string()); }

}  // namespace

TEST_CASE("validate: default config is accepted, bad configs are rejected with exit 1") {
    CHECK(run("validate") == 0);

    fs::path dir = fresh_dir("validate");
    fs::path bad = dir / "bad.json";
    qsec::io::write_file(bad.string(), R"({"n_ec": 3})");
    CHECK(run("validate --config " + bad.string()) == 1);

    fs::path neg = dir / "neg.json";
    qsec::io::write_file(neg.string(), R"({"dephasing": {"t_dephase_s": -1.0}})");
    CHECK(run("validate --config " + neg.string()) == 1);

    fs::path mangled = dir / "mangled.json";
    qsec::io::write_file(mangled.string(), "{not json");
    CHECK(run("validate --config " + mangled.string()) == 1);

    CHECK(run("validate --config /nonexistent/path.json") == 1);
}

TEST_CASE("reset-coherence writes the calibrated curve and a manifest") {
    fs::path dir = fresh_dir("reset");
    CHECK(run("reset-coherence --resets 20 --out " + dir.string()) == 0);
    qsec::CurveData c = qsec::io::curve_from_text(slurp(dir / "reset_coherence.tsv"));
    REQUIRE(c.x.size() == 21);
    CHECK(std::abs(c.y_exact.back() - 0.95) < 1e-12);
    CHECK(fs::exists(dir / "manifest.json"));
    auto manifest = qsec::io::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest.contains("config_hash"));
    CHECK(manifest["outputs"].size() == 1);
}

TEST_CASE("qsec-rabi runs are bit-identical for the same config and seed") {
    fs::path a = fresh_dir("rabi_a");
    fs::path b = fresh_dir("rabi_b");
    std::string args = "qsec-rabi --tmax 30e-6 --points 8 --shots 64 --seed 5 --n-ec 1 --workers 2 --out ";
    CHECK(run(args + a.string()) == 0);
    CHECK(run(args + b.string()) == 0);
    for (const char* f : {"qsec_rabi_nec0.tsv", "qsec_rabi_nec1.tsv"}) {
        CHECK(slurp(a / f) == slurp(b / f));
    }
}

TEST_CASE("fit and sensitivity subcommands chain on curve files") {
    fs::path dir = fresh_dir("chain");
    // synthetic single-model curve written in the curve format
    qsec::CurveData c;
    c.meta.protocol = "synthetic";
    c.meta.seed = 1;
    for (int i = 0; i < 80; ++i) {
        double x = i * 2e-6;
        c.x.push_back(x);
        c.y_exact.push_back(0.4 * std::exp(-x / 40e-6) * std::cos(qsec::two_pi * 80e3 * x) + 0.5);
        c.y_sampled.push_back(c.y_exact.back());
        c.y_err.push_back(0.01);
    }
    fs::path curve = dir / "curve.tsv";
    qsec::io::write_file(curve.string(), qsec::io::curve_to_text(c));

    CHECK(run("fit --input " + curve.string() + " --out " + dir.string()) == 0);
    qsec::FitResult f = qsec::io::fit_from_text(slurp(dir / "fit.txt"));
    CHECK(f.converged);
    CHECK(std::abs(f.gamma() - 1.0 / 40e-6) < 1e2);
    CHECK(std::abs(f.omega() - qsec::two_pi * 80e3) < 1.0);

    CHECK(run("sensitivity --input " + (dir / "fit.txt").string() + " --tmin 1e-6 --tmax 100e-6 --points 300 --out " + dir.string()) == 0);
    std::string s = slurp(dir / "sensitivity.tsv");
    CHECK(s.find("tau_star=") != std::string::npos);

    CHECK(run("fit --input /nonexistent.tsv --out " + dir.string()) == 1);
}

TEST_CASE("posterior subcommand reports an interval") {
    fs::path dir = fresh_dir("post");
    qsec::CurveData c;
    c.meta.seed = 3;
    qsec::Rng rng(8);
    for (int i = 0; i < 60; ++i) {
        double x = i * 2.5e-6;
        double y = 0.4 * std::exp(-2e4 * x) * std::cos(qsec::two_pi * 60e3 * x) + 0.5;
        c.x.push_back(x);
        c.y_exact.push_back(y);
        c.y_sampled.push_back(y + 0.01 * rng.normal());
        c.y_err.push_back(0.01);
    }
    fs::path curve = dir / "curve.tsv";
    qsec::io::write_file(curve.string(), qsec::io::curve_to_text(c));
    CHECK(run("posterior --input " + curve.string() + " --chain-len 6000 --out " + dir.string()) == 0);
    std::string text = slurp(dir / "posterior.txt");
    CHECK(text.find("ci_low=") != std::string::npos);
    CHECK(text.find("gamma pdf") != std::string::npos);
}

TEST_CASE("environment variable supplies the default output directory") {
    fs::path dir = fresh_dir("envdir");
    std::string cmd = "QSEC_OUT_DIR=" + dir.string() + " " + cli_path() +
                      " reset-coherence --resets 3 >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(rc) == 0);
    CHECK(fs::exists(dir / "reset_coherence.tsv"));
}

TEST_CASE("unknown arguments fail with a parse error") {
    CHECK(run("definitely-not-a-subcommand") != 0);
    CHECK(run("qsec-rabi --bogus-flag 3") != 0);
}
