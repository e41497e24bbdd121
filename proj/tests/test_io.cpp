#include <catch_amalgamated.hpp>

#include "qsec/io.hpp"

using namespace qsec;
using Catch::Approx;

TEST_CASE("matrix text round trip and format") {
    Mat4 m = Mat4::Zero();
    m(0, 0) = Complex(0.5, 0);
    m(0, 2) = Complex(0, -0.25);
    m(2, 0) = Complex(0, 0.25);
    m(3, 3) = Complex(0.5, 0);
    std::string text = io::matrix_to_text(m);
    CHECK(text.substr(0, 4) == "4 4\n");
    CHECK(text.find("0.5,0") != std::string::npos);
    CHECK(text.find("0,-0.25") != std::string::npos);
    Mat4 back = io::matrix_from_text(text);
    CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(io::matrix_from_text("2 2\n1,0 0,0\n0,0 1,0\n"), std::runtime_error);
}

TEST_CASE("curve table round trip preserves doubles exactly") {
    CurveData c;
    c.meta.protocol = "qsec_rabi";
    c.meta.label = "n_ec=2";
    c.meta.n_ec = 2;
    c.meta.seed = 42;
    c.meta.config_hash = 0xabcdef12345678ULL;
    Rng rng(1);
    for (int i = 0; i < 20; ++i) {
        c.x.push_back(i * 2e-6);
        c.y_exact.push_back(rng.uniform());
        c.y_sampled.push_back(rng.uniform());
        c.y_err.push_back(0.01 * rng.uniform());
    }
    CurveData back = io::curve_from_text(io::curve_to_text(c));
    CHECK(back.x == c.x);
    CHECK(back.y_exact == c.y_exact);
    CHECK(back.y_sampled == c.y_sampled);
    CHECK(back.y_err == c.y_err);
    CHECK(back.meta.protocol == "qsec_rabi");
    CHECK(back.meta.n_ec == 2);
    CHECK(back.meta.seed == 42);
    CHECK(back.meta.config_hash == 0xabcdef12345678ULL);

    CHECK_THROWS_AS(io::curve_from_text("# empty\n"), std::runtime_error);
}

TEST_CASE("fit result round trip") {
    FitResult f;
    f.model = FitModelKind::two_component;
    f.params = {0.3, 9e3, two_pi * 100e3, 0.1, 0.2, 4e3, two_pi * 25e3, -0.4, 0.5};
    f.converged = true;
    f.gamma_identified = true;
    f.residual_norm = 1.25e-7;
    FitResult back = io::fit_from_text(io::fit_to_text(f));
    CHECK(back.model == f.model);
    CHECK(back.params == f.params);
    CHECK(back.converged == f.converged);
    CHECK(back.residual_norm == f.residual_norm);
}

TEST_CASE("posterior and sensitivity exports") {
    Posterior p;
    p.mode = 2.5e4;
    p.mean = 2.6e4;
    p.ci_low = 2.0e4;
    p.ci_high = 3.2e4;
    p.acceptance_rate = 0.31;
    p.gelman_rubin = 1.01;
    p.grid_gamma = {1e4, 2e4, 3e4};
    p.grid_pdf = {0.1, 0.5, 0.4};
    std::string text = io::posterior_to_text(p);
    CHECK(text.find("mode=25000") != std::string::npos);
    CHECK(text.find("gamma pdf") != std::string::npos);

    SensitivityCurve s;
    s.times = {0.5, 2.0};
    s.s = {10.0, 8.0};
    s.tau_star = 2.0;
    s.s_star = 8.0;
    std::string st = io::sensitivity_to_text(s);
    CHECK(st.find("tau_star=") != std::string::npos);
    CHECK(st.find("0.5\t10") != std::string::npos);
    CHECK(st.find("2\t8") != std::string::npos);
}

TEST_CASE("config json round trip and defaults") {
    ExperimentConfig cfg;
    cfg.protocol = Protocol::bitflip_cpmg;
    cfg.n_ec = 1;
    cfg.seed = 777;
    cfg.readout.photon = PhotonModel{};
    io::json j = io::config_to_json(cfg);
    ExperimentConfig back = io::config_from_json(j);
    CHECK(back.protocol == Protocol::bitflip_cpmg);
    CHECK(back.n_ec == 1);
    CHECK(back.seed == 777);
    CHECK(back.hamiltonian.hyperfine_hz == cfg.hamiltonian.hyperfine_hz);
    CHECK(back.readout.photon.has_value());
    CHECK(back.cpmg.delays_s == cfg.cpmg.delays_s);
    CHECK(io::config_hash(back) == io::config_hash(cfg));

    // partial configs pick up defaults
    ExperimentConfig partial = io::config_from_json(io::json::parse(R"({"n_ec": 0})"));
    CHECK(partial.n_ec == 0);
    CHECK(partial.hamiltonian.hyperfine_hz == Approx(50e3));
    CHECK(partial.dephasing.t_dephase_s == Approx(40e-6));
    CHECK(partial.dephasing.clock_mode == ClockMode::per_reset);
    CHECK(partial.reset.eta == Approx(std::pow(0.95, 1.0 / 20.0)));
    CHECK(partial.readout.fidelity_read == Approx(0.98));
    CHECK(partial.sensing.rabi_hz == Approx(100e3));

    CHECK_THROWS(io::config_from_json(io::json::parse(R"({"protocol": "bogus"})")));
    CHECK_THROWS(io::config_from_json(io::json::parse(R"({"dephasing": {"clock_mode": "sometimes"}})")));
}

TEST_CASE("config hash is sensitive to any field") {
    ExperimentConfig a;
    std::uint64_t h = io::config_hash(a);
    ExperimentConfig b = a;
    b.seed += 1;
    CHECK(io::config_hash(b) != h);
    ExperimentConfig c = a;
    c.sensing.rabi_hz += 1.0;
    CHECK(io::config_hash(c) != h);
    CHECK(io::config_hash(a) == h);  // stable across calls
}

TEST_CASE("manifest") {
    io::RunManifest m;
    m.config_echo = io::config_to_json(ExperimentConfig{});
    m.config_hash = 0x1234;
    m.seed = 9;
    m.version = "qsec test";
    m.outputs = {"a.tsv", "b.tsv"};
    m.wall_seconds = 1.5;
    io::json j = m.to_json();
    CHECK(j["seed"] == 9);
    CHECK(j["outputs"].size() == 2);
    CHECK(j["config_hash"] == "1234");
    CHECK(j["config"]["n_ec"] == 2);
}

TEST_CASE("histogram export") {
    Histogram h;
    h.bin_center = {90, 140};
    h.count = {10, 12};
    CHECK(io::histogram_to_text(h) == "90\t10\n140\t12\n");
}
