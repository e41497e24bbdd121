#include <catch_amalgamated.hpp>

#include "qsec/experiments.hpp"

using namespace qsec;
using Catch::Approx;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.sensing.times.stop_s = 60e-6;
    cfg.sensing.times.count = 31;
    cfg.shots = 200;
    cfg.workers = 2;
    return cfg;
}

}  // namespace

TEST_CASE("config validation") {
    ExperimentConfig cfg;
    CHECK(cfg.validate().empty());

    cfg.n_ec = 3;
    auto errs = cfg.validate();
    REQUIRE_FALSE(errs.empty());
    CHECK(errs.front().find("two correction rounds") != std::string::npos);

    ExperimentConfig bad;
    bad.dephasing.t_dephase_s = -1.0;
    CHECK_FALSE(bad.validate().empty());

    ExperimentConfig empty_grid;
    empty_grid.sensing.times.count = 0;
    CHECK_FALSE(empty_grid.validate().empty());
}

TEST_CASE("determinism: identical config and seed give bit-identical curves") {
    ExperimentConfig cfg = small_config();
    cfg.sensing.times.count = 13;
    auto a = run_qsec_rabi(cfg);
    auto b = run_qsec_rabi(cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].y_exact == b[k].y_exact);
        CHECK(a[k].y_sampled == b[k].y_sampled);
        CHECK(a[k].y_err == b[k].y_err);
    }
    // worker count must not change results
    ExperimentConfig serial = cfg;
    serial.workers = 1;
    auto c = run_qsec_rabi(serial);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].y_sampled == c[k].y_sampled);

    ExperimentConfig other_seed = cfg;
    other_seed.seed = 777;
    auto d = run_qsec_rabi(other_seed);
    CHECK(d[0].y_sampled != a[0].y_sampled);
    CHECK(d[0].y_exact == a[0].y_exact);  // exact curves are seed-independent
}

TEST_CASE("shot-averaged curves converge to the exact probabilities as 1/sqrt(shots)") {
    ExperimentConfig cfg = small_config();
    cfg.sensing.times.count = 3;
    cfg.sensing.times.stop_s = 20e-6;
    cfg.readout.fidelity_read = 1.0;  // isolate sampling error

    auto rmse = [&](std::size_t shots) {
        ExperimentConfig c = cfg;
        c.shots = shots;
        auto curves = run_qsec_rabi(c);
        double s = 0.0;
        std::size_t n = 0;
        for (const auto& cv : curves)
            for (std::size_t i = 0; i < cv.x.size(); ++i) {
                double d = cv.y_sampled[i] - cv.y_exact[i];
                s += d * d;
                ++n;
            }
        return std::sqrt(s / static_cast<double>(n));
    };
    double coarse = rmse(100);
    double fine = rmse(25600);  // 256x more shots -> 16x smaller error
    CHECK(fine < coarse * 0.3);
}

TEST_CASE("probability curves stay in [0,1] and sampled errors are positive") {
    ExperimentConfig cfg = small_config();
    cfg.sensing.times.count = 11;
    for (const auto& c : run_qsec_rabi(cfg)) {
        for (double v : c.y_exact) {
            CHECK(v >= -1e-9);
            CHECK(v <= 1.0 + 1e-9);
        }
        for (double e : c.y_err) CHECK(e > 0.0);
    }
}

TEST_CASE("reset coherence protocol") {
    ExperimentConfig cfg;
    cfg.resets = 20;
    CurveData c = run_reset_coherence(cfg);
    REQUIRE(c.x.size() == 21);
    CHECK(c.y_exact.front() == Approx(1.0).margin(1e-12));
    CHECK(c.y_exact.back() == Approx(0.95).margin(1e-12));

    ExperimentConfig ideal = cfg;
    ideal.reset.eta = 1.0;
    CurveData flat = run_reset_coherence(ideal);
    for (double v : flat.y_exact) CHECK(v == Approx(1.0).margin(1e-12));
}

TEST_CASE("no-noise simulation: hyperfine beat appears only with correction") {
    ExperimentConfig cfg;
    cfg.sensing.times.stop_s = 200e-6;
    cfg.sensing.times.count = 256;
    cfg.workers = 0;
    NoNoiseSimResult r = run_no_noise_sim(cfg);

    double p0 = relative_spectral_power(r.without_ec.x, r.without_ec.y_exact, 25e3);
    double p2 = relative_spectral_power(r.with_ec.x, r.with_ec.y_exact, 25e3);
    CHECK(p0 < 1e-6);
    CHECK(p2 > 0.05);

    // both curves start at the extremal value of the readout convention
    CHECK(r.without_ec.y_exact.front() == Approx(0.0).margin(1e-9));
    CHECK(r.with_ec.y_exact.front() == Approx(0.0).margin(1e-9));

    // the uncorrected curve's lines live at multiples of 50 kHz only
    for (double f : {50e3, 100e3}) {
        double p = relative_spectral_power(r.without_ec.x, r.without_ec.y_exact, f);
        CHECK(p > 1e-3);
    }
}

TEST_CASE("single phase error: corrected arm matches the error-free curve") {
    ExperimentConfig cfg = small_config();
    cfg.sensing.times.count = 16;
    cfg.error_angle_rad = pi;
    SinglePhaseErrorResult r = run_single_phase_error(cfg);

    // with correction, the errored curve is the error-free curve
    for (std::size_t i = 0; i < r.with_ec.x.size(); ++i)
        CHECK(std::abs(r.with_ec.y_exact[i] - r.reference_ec.y_exact[i]) < 1e-6);

    // without correction, the register stops responding to the drive: with
    // ideal gates and no noise, the errored curve equals its zero-drive
    // counterpart exactly (the drive before and after the flip cancels)
    ExperimentConfig quiet = cfg;
    quiet.dephasing.enabled = false;
    SinglePhaseErrorResult rq = run_single_phase_error(quiet);
    ExperimentConfig dead = quiet;
    dead.sensing.rabi_hz = 0.0;
    SinglePhaseErrorResult r0 = run_single_phase_error(dead);
    for (std::size_t i = 0; i < rq.without_ec.x.size(); ++i)
        CHECK(std::abs(rq.without_ec.y_exact[i] - r0.without_ec.y_exact[i]) < 1e-6);

    // zero-angle injection reproduces the references exactly
    ExperimentConfig zero = cfg;
    zero.error_angle_rad = 0.0;
    SinglePhaseErrorResult rz = run_single_phase_error(zero);
    for (std::size_t i = 0; i < rz.with_ec.x.size(); ++i) {
        CHECK(rz.with_ec.y_exact[i] == Approx(rz.reference_ec.y_exact[i]).margin(1e-12));
        CHECK(rz.without_ec.y_exact[i] == Approx(rz.reference_noec.y_exact[i]).margin(1e-12));
    }
}

TEST_CASE("monotone correction benefit and gate-penalty behavior") {
    // more correction rounds keep the signal alive longer; measured through a
    // model-free lifetime because multi-line decay-cosine fits are multimodal
    ExperimentConfig cfg;
    cfg.dephasing.t_dephase_s = 17e-6;
    cfg.sensing.times.stop_s = 150e-6;
    cfg.sensing.times.count = 151;
    cfg.n_ec = 2;
    cfg.workers = 0;
    auto curves = run_qsec_rabi(cfg);
    REQUIRE(curves.size() == 3);

    auto lifetime = [](const CurveData& c) {
        double tail = c.y_exact.back();
        double peak = 0.0;
        for (double v : c.y_exact) peak = std::max(peak, std::abs(v - tail));
        double t = 0.0;
        for (std::size_t i = 0; i < c.x.size(); ++i)
            if (std::abs(c.y_exact[i] - tail) > 0.2 * peak) t = c.x[i];
        return t;
    };
    // the intermediate correction round prolongs the coherent signal; the
    // readout-adjacent round of n_ec = 2 plays a contrast-filtering role and
    // does not shorten it back
    double t0 = lifetime(curves[0]), t1 = lifetime(curves[1]), t2 = lifetime(curves[2]);
    CHECK(t1 > 1.2 * t0);
    CHECK(t2 > 1.2 * t0);
    CHECK(t2 >= 0.9 * t1);

    // a per-CNOT contrast penalty reduces contrast without moving the frequency
    ExperimentConfig ideal = cfg;
    ideal.sensing.times.count = 64;
    ideal.dephasing.enabled = false;
    auto clean = run_qsec_rabi(ideal)[2];
    ExperimentConfig penalized = ideal;
    penalized.gate_penalty = (0.8 - 0.25) / 0.75;
    auto dimmed = run_qsec_rabi(penalized)[2];
    FitResult fc = fit_curve(clean.x, clean.y_exact, FitModelKind::two_component);
    FitResult fd = fit_curve(dimmed.x, dimmed.y_exact, FitModelKind::two_component);
    CHECK(std::abs(fd.dominant_amplitude()) < 0.8 * std::abs(fc.dominant_amplitude()));
    CHECK(fd.dominant_omega() == Approx(fc.dominant_omega()).epsilon(0.01));
}

TEST_CASE("bitflip cpmg: destruction without correction, recovery with it") {
    ExperimentConfig cfg;
    cfg.n_ec = 2;
    cfg.cpmg.max_pulses_per_block = 32;
    cfg.cpmg.error_angles_rad = {pi};
    cfg.cpmg.delays_s = {0.0};
    cfg.workers = 0;
    BitflipCpmgResult r = run_bitflip_cpmg(cfg);

    const BitflipArm* ec_err = nullptr;
    const BitflipArm* noec_err = nullptr;
    const BitflipArm* ec_free = nullptr;
    for (const auto& a : r.arms) {
        if (a.theta == pi && a.ec) ec_err = &a;
        if (a.theta == pi && !a.ec) noec_err = &a;
        if (a.theta == 0.0 && a.ec) ec_free = &a;
    }
    REQUIRE(ec_err);
    REQUIRE(noec_err);
    REQUIRE(ec_free);

    // full pi error: uncorrected signal contrast collapses below 5% of error-free
    CHECK(noec_err->contrast < 0.05 * ec_free->contrast);
    // corrected: contrast within 1% of the error-free run
    CHECK(ec_err->contrast > 0.99 * ec_free->contrast);
    // order-of-magnitude sensitivity gain
    CHECK(noec_err->sensitivity / ec_err->sensitivity > 10.0);

    // the averaged composite still shows a coherent signal
    CHECK(r.averaged_contrast > 0.2 * ec_free->contrast);
    CHECK(r.spacing_s == Approx(5e-6));
}
