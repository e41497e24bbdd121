#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "qsec/estimation.hpp"
#include "qsec/sequences.hpp"

namespace qsec {

enum class Protocol { qsec_rabi, single_phase_error, bitflip_cpmg, reset_coherence, no_noise_sim };

inline const char* protocol_name(Protocol p) {
    switch (p) {
        case Protocol::qsec_rabi: return "qsec_rabi";
        case Protocol::single_phase_error: return "single_phase_error";
        case Protocol::bitflip_cpmg: return "bitflip_cpmg";
        case Protocol::reset_coherence: return "reset_coherence";
        default: return "no_noise_sim";
    }
}

struct TimeGrid {
    double start_s = 0.0;
    double stop_s = 150e-6;
    std::size_t count = 76;

    std::vector<double> points() const {
        std::vector<double> out(count);
        for (std::size_t i = 0; i < count; ++i)
            out[i] = count > 1
                         ? start_s + (stop_s - start_s) * static_cast<double>(i) / static_cast<double>(count - 1)
                         : start_s;
        return out;
    }
};

struct SensingConfig {
    double rabi_hz = 100e3;   // drive amplitude; not stated in the source experiments
    bool selective = true;    // drive acts on the resonant transition only
    TimeGrid times;
};

struct CpmgConfig {
    AcSignal signal{25e3, 100e3, 0.0};
    int max_pulses_per_block = 40;            // grid runs over even pulse counts
    std::vector<double> error_angles_rad{0.5 * pi, 0.75 * pi, pi};
    std::vector<double> delays_s{0.0, 0.6e-6, 1.2e-6, 1.8e-6};

    double resonant_spacing() const { return 1.0 / (2.0 * signal.frequency_hz); }
};

struct ExperimentConfig {
    HamiltonianParams hamiltonian;
    DephasingLaw dephasing;
    ResetModel reset;
    ReadoutModel readout;
    Protocol protocol = Protocol::qsec_rabi;
    int n_ec = 2;
    std::size_t shots = 200;
    std::uint64_t seed = 12345;
    SensingConfig sensing;
    CpmgConfig cpmg;
    double error_angle_rad = pi;  // single_phase_error injection angle
    int resets = 20;              // reset_coherence sweep length
    double gate_penalty = 1.0;
    int workers = 0;              // 0 = hardware concurrency

    std::vector<std::string> validate() const {
        std::vector<std::string> errs;
        if (n_ec < 0 || n_ec > 2)
            errs.push_back("n_ec: must be 0, 1 or 2 (the protocol supports up to two correction rounds)");
        if (shots < 1) errs.push_back("shots: must be >= 1");
        if (dephasing.t_dephase_s <= 0.0) errs.push_back("dephasing.t_dephase_s: must be positive");
        if (reset.eta <= 0.0 || reset.eta > 1.0) errs.push_back("reset.eta: must be in (0, 1]");
        if (readout.fidelity_read < 0.0 || readout.fidelity_read > 1.0)
            errs.push_back("readout.fidelity_read: must be in [0, 1]");
        if (readout.fidelity_init < 0.0 || readout.fidelity_init > 1.0)
            errs.push_back("readout.fidelity_init: must be in [0, 1]");
        if (sensing.times.count < 1) errs.push_back("sensing.times.count: grid must be non-empty");
        if (sensing.times.stop_s < sensing.times.start_s)
            errs.push_back("sensing.times: stop must be >= start");
        if (sensing.rabi_hz < 0.0) errs.push_back("sensing.rabi_hz: must be >= 0");
        if (gate_penalty <= 0.0 || gate_penalty > 1.0)
            errs.push_back("gate_penalty: must be in (0, 1]");
        if (cpmg.signal.frequency_hz <= 0.0) errs.push_back("cpmg.signal.frequency_hz: must be positive");
        if (cpmg.max_pulses_per_block < 2) errs.push_back("cpmg.max_pulses_per_block: must be >= 2");
        if (resets < 0) errs.push_back("resets: must be >= 0");
        for (double d : cpmg.delays_s)
            if (d < 0.0) errs.push_back("cpmg.delays_s: delays must be >= 0");
        return errs;
    }
};

struct CurveMeta {
    std::string protocol;
    std::string label;
    int n_ec = 0;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
};

struct CurveData {
    std::vector<double> x;
    std::vector<double> y_exact;
    std::vector<double> y_sampled;
    std::vector<double> y_err;
    CurveMeta meta;
};

/// Deterministic parallel map: output slot i depends only on (seed, i), and
/// results are merged in grid order regardless of worker scheduling.
inline void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    unsigned hw = std::thread::hardware_concurrency();
    std::size_t nw = workers > 0 ? static_cast<std::size_t>(workers) : (hw ? hw : 1);
    nw = std::min<std::size_t>(nw, n ? n : 1);
    if (nw <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (std::size_t w = 0; w < nw; ++w)
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    for (auto& t : pool) t.join();
}

namespace detail {

/// Shot-sample a probability through the classical readout fidelity flip.
inline void sample_point(double p_exact, const ExperimentConfig& cfg, std::uint64_t stream_tag,
                         std::size_t index, double& y_sampled, double& y_err) {
    double f = cfg.readout.fidelity_read;
    double p_rep = f * p_exact + (1.0 - f) * (1.0 - p_exact);
    Rng rng = Rng::stream(cfg.seed ^ stream_tag, index);
    std::size_t k = 0;
    for (std::size_t s = 0; s < cfg.shots; ++s)
        if (rng.bernoulli(p_rep)) ++k;
    double phat = static_cast<double>(k) / static_cast<double>(cfg.shots);
    y_sampled = phat;
    y_err = std::max(std::sqrt(phat * (1.0 - phat) / static_cast<double>(cfg.shots)),
                     0.5 / static_cast<double>(cfg.shots));
}

struct RabiPointSpec {
    double tau = 0.0;
    int n_ec = 0;
    bool noise = true;
    double flip_angle = 0.0;        // 0 = no injected error
    bool flip_before_ec = false;    // true: just before the first correction; false: mid-sensing
};

/// One point of the Rabi-sensing protocol. With correction on, the sensing
/// time splits into two equal blocks; the intermediate round after block one
/// prolongs the coherent interaction and (for n_ec = 2) a second round right
/// before readout improves the contrast.
inline double rabi_point(const RabiPointSpec& spec, const ExperimentConfig& cfg) {
    SequenceCtx ctx;
    ctx.ham = cfg.hamiltonian;
    ctx.law = cfg.dephasing;
    ctx.law.enabled = cfg.dephasing.enabled && spec.noise;
    ctx.reset = cfg.reset;
    ctx.gate_penalty = cfg.gate_penalty;

    Mat4 rho = initialize_register(cfg.readout);
    rho = encode(rho, ctx);

    int nblocks = spec.n_ec > 0 ? 2 : 1;
    double bdur = spec.tau / static_cast<double>(nblocks);
    double flip_at = -1.0;
    if (spec.flip_angle != 0.0)
        flip_at = spec.flip_before_ec ? bdur : 0.5 * spec.tau;

    double t = 0.0;
    for (int b = 0; b < nblocks; ++b) {
        double t_end = t + bdur;
        if (flip_at >= t && flip_at <= t_end && spec.flip_angle != 0.0) {
            rho = sensing_block(rho, ctx, flip_at - t, cfg.sensing.rabi_hz, cfg.sensing.selective);
            rho = instant_rotation(rho, Target::electron, Axis::z, spec.flip_angle);
            rho = sensing_block(rho, ctx, t_end - flip_at, cfg.sensing.rabi_hz, cfg.sensing.selective);
            flip_at = -1.0;
        } else {
            rho = sensing_block(rho, ctx, bdur, cfg.sensing.rabi_hz, cfg.sensing.selective);
        }
        t = t_end;
        if (b + 1 <= spec.n_ec) rho = ec_round(rho, ctx);
    }
    rho = decode(rho, ctx);
    rho = readout_map(rho);
    return p_up(rho);
}

}  // namespace detail

/// Rabi sensing with 0..n_ec correction rounds; returns one curve per round
/// count. Sensing time is split into equal blocks with an EC round after each
/// block (the uncorrected sequence is one continuous block).
inline std::vector<CurveData> run_qsec_rabi(const ExperimentConfig& cfg) {
    std::vector<double> times = cfg.sensing.times.points();
    std::vector<CurveData> out;
    for (int n = 0; n <= cfg.n_ec; ++n) {
        CurveData c;
        c.x = times;
        c.y_exact.resize(times.size());
        c.y_sampled.resize(times.size());
        c.y_err.resize(times.size());
        c.meta.protocol = protocol_name(Protocol::qsec_rabi);
        c.meta.n_ec = n;
        c.meta.seed = cfg.seed;
        c.meta.label = "n_ec=" + std::to_string(n);
        parallel_for(times.size(), cfg.workers, [&](std::size_t i) {
            detail::RabiPointSpec spec;
            spec.tau = times[i];
            spec.n_ec = n;
            spec.noise = cfg.dephasing.enabled;
            double p = detail::rabi_point(spec, cfg);
            c.y_exact[i] = p;
            detail::sample_point(p, cfg, 0x5261 + static_cast<std::uint64_t>(n), i,
                                 c.y_sampled[i], c.y_err[i]);
        });
        out.push_back(std::move(c));
    }
    return out;
}

struct SinglePhaseErrorResult {
    CurveData with_ec;        // error before the intermediate correction round
    CurveData without_ec;     // same error mid-sensing, no correction
    CurveData reference_ec;   // error-free corrected curve
    CurveData reference_noec; // error-free uncorrected curve
};

inline SinglePhaseErrorResult run_single_phase_error(const ExperimentConfig& cfg) {
    std::vector<double> times = cfg.sensing.times.points();
    int n = std::max(1, cfg.n_ec);

    auto make = [&](int n_ec, double angle, bool before_ec, const std::string& label,
                    std::uint64_t tag) {
        CurveData c;
        c.x = times;
        c.y_exact.resize(times.size());
        c.y_sampled.resize(times.size());
        c.y_err.resize(times.size());
        c.meta.protocol = protocol_name(Protocol::single_phase_error);
        c.meta.n_ec = n_ec;
        c.meta.seed = cfg.seed;
        c.meta.label = label;
        parallel_for(times.size(), cfg.workers, [&](std::size_t i) {
            detail::RabiPointSpec spec;
            spec.tau = times[i];
            spec.n_ec = n_ec;
            spec.noise = cfg.dephasing.enabled;
            spec.flip_angle = angle;
            spec.flip_before_ec = before_ec;
            double p = detail::rabi_point(spec, cfg);
            c.y_exact[i] = p;
            detail::sample_point(p, cfg, tag, i, c.y_sampled[i], c.y_err[i]);
        });
        return c;
    };

    SinglePhaseErrorResult r;
    r.with_ec = make(n, cfg.error_angle_rad, true, "error+ec", 0xe001);
    r.without_ec = make(0, cfg.error_angle_rad, false, "error_no_ec", 0xe002);
    r.reference_ec = make(n, 0.0, false, "reference_ec", 0xe003);
    r.reference_noec = make(0, 0.0, false, "reference_no_ec", 0xe004);
    return r;
}

struct BitflipArm {
    double theta = 0.0;
    double delay_s = 0.0;
    bool ec = false;
    CurveData curve;      // raw P(up) vs total sensing time
    CurveData response;   // curve minus the zero-signal reference (lock-in style)
    double contrast = 0.0;
    double fitted_gamma = 0.0;
    // S = 1/(C(tau_ref) sqrt(tau_ref)) at the fixed mid-grid reference time,
    // where the envelope is actually measured; the t -> 0 extrapolation of a
    // decaying fit is too poorly conditioned to compare arms against.
    double sensitivity = std::numeric_limits<double>::infinity();
};

struct BitflipCpmgResult {
    std::vector<BitflipArm> arms;
    CurveData averaged;           // Fig-style average over the (theta, delay) grid, EC on
    double averaged_contrast = 0.0;
    double averaged_sensitivity = std::numeric_limits<double>::infinity();
    double spacing_s = 0.0;
    bool spacing_resonant = true;
};

namespace detail {

struct CpmgPointSpec {
    int n_pulses = 2;
    int n_blocks = 1;
    double theta = 0.0;
    double delay_s = 0.0;
    bool ec = false;
    double signal_amp_hz = 0.0;
};

inline double cpmg_point(const CpmgPointSpec& spec, const ExperimentConfig& cfg) {
    SequenceCtx ctx;
    ctx.ham = cfg.hamiltonian;
    ctx.law = cfg.dephasing;
    ctx.reset = cfg.reset;
    ctx.gate_penalty = cfg.gate_penalty;

    AcSignal sig = cfg.cpmg.signal;
    sig.amplitude_hz = spec.signal_amp_hz;
    double spacing = cfg.cpmg.resonant_spacing();

    Mat4 rho = initialize_register(cfg.readout);
    rho = encode(rho, ctx, CodeBasis::z_basis);
    for (int b = 0; b < spec.n_blocks; ++b) {
        // each CPMG block is re-locked to the signal: pulse timing is chosen
        // so the block starts at the signal's phase reference
        ctx.wall_time = 0.0;
        rho = cpmg_block(rho, ctx, spec.n_pulses, spacing, sig);
        if (spec.theta != 0.0) rho = bit_flip(rho, spec.theta);
        if (spec.delay_s > 0.0) {
            Segment d;
            d.kind = SegmentKind::free;
            d.duration_s = spec.delay_s;
            d.signal = sig;
            d.label = "error-correction delay";
            EvolveResult r = evolve_segment(rho, d, ctx.ham, ctx.law, ctx.clock, ctx.wall_time);
            rho = r.rho;
            ctx.clock = r.clock;
            ctx.wall_time += spec.delay_s;
        }
        if (spec.ec) rho = ec_round(rho, ctx, CodeBasis::z_basis);
    }
    // Phase-locked readout frame: counter-rotate the deterministic hyperfine
    // phase the code picks up while the electron toggles under CPMG.
    double cpmg_time = static_cast<double>(spec.n_blocks) * static_cast<double>(spec.n_pulses) * spacing;
    rho = instant_rotation(rho, Target::nuclear, Axis::z, cpmg_frame_phase(ctx.ham, cpmg_time));
    rho = decode(rho, ctx, CodeBasis::z_basis);
    rho = readout_map(rho);
    return p_up(rho);
}

inline FitResult fit_response(const std::vector<double>& x, const std::vector<double>& y,
                              double signal_amp_hz) {
    double span = x.back() - x.front();
    // quadrature projection at the known accumulated-phase rate seeds the fit
    double w_sig = 4.0 * signal_amp_hz;  // rad/s, rectified CPMG phase rate
    double cs = 0.0, sn = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) mean += y[i] / static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        cs += 2.0 * (y[i] - mean) * std::cos(w_sig * x[i]) / static_cast<double>(x.size());
        sn += 2.0 * (y[i] - mean) * std::sin(w_sig * x[i]) / static_cast<double>(x.size());
    }
    std::vector<double> init{std::hypot(cs, sn), 0.5 / span, w_sig, std::atan2(-sn, cs), mean};
    try {
        return fit_curve(x, y, FitModelKind::single, {}, init);
    } catch (const FitError& e) {
        return e.best;
    }
}

}  // namespace detail

/// CPMG sensing of a phase-locked AC signal with an injected bit-flip in the
/// last free interval of every block, optional delay, and a correction round
/// per block. Arms cover the configured error strengths and delays, corrected
/// and uncorrected; the signal contrast is measured on the response curve
/// (raw curve minus its zero-amplitude reference).
inline BitflipCpmgResult run_bitflip_cpmg(const ExperimentConfig& cfg) {
    BitflipCpmgResult out;
    out.spacing_s = cfg.cpmg.resonant_spacing();
    out.spacing_resonant = true;

    int n_blocks = std::max(1, cfg.n_ec);
    std::vector<int> pulse_grid;
    for (int np = 2; np <= cfg.cpmg.max_pulses_per_block; np += 2) pulse_grid.push_back(np);
    std::vector<double> times(pulse_grid.size());
    for (std::size_t i = 0; i < pulse_grid.size(); ++i)
        times[i] = static_cast<double>(n_blocks) * static_cast<double>(pulse_grid[i]) * out.spacing_s;

    auto run_arm = [&](double theta, double delay, bool ec, std::uint64_t tag) {
        BitflipArm arm;
        arm.theta = theta;
        arm.delay_s = delay;
        arm.ec = ec;
        arm.curve.x = times;
        arm.curve.y_exact.resize(times.size());
        arm.curve.y_sampled.resize(times.size());
        arm.curve.y_err.resize(times.size());
        arm.curve.meta.protocol = protocol_name(Protocol::bitflip_cpmg);
        arm.curve.meta.n_ec = ec ? n_blocks : 0;
        arm.curve.meta.seed = cfg.seed;
        arm.curve.meta.label = "theta=" + std::to_string(theta) + " delay=" + std::to_string(delay) +
                               (ec ? " ec" : " no_ec");
        std::vector<double> ref(times.size());
        parallel_for(times.size(), cfg.workers, [&](std::size_t i) {
            detail::CpmgPointSpec spec;
            spec.n_pulses = pulse_grid[i];
            spec.n_blocks = n_blocks;
            spec.theta = theta;
            spec.delay_s = delay;
            spec.ec = ec;
            spec.signal_amp_hz = cfg.cpmg.signal.amplitude_hz;
            double p = detail::cpmg_point(spec, cfg);
            spec.signal_amp_hz = 0.0;
            ref[i] = detail::cpmg_point(spec, cfg);
            arm.curve.y_exact[i] = p;
            detail::sample_point(p, cfg, tag, i, arm.curve.y_sampled[i], arm.curve.y_err[i]);
        });
        arm.response = arm.curve;
        arm.response.meta.label += " response";
        for (std::size_t i = 0; i < times.size(); ++i) {
            arm.response.y_exact[i] = arm.curve.y_exact[i] - ref[i];
            arm.response.y_sampled[i] = arm.curve.y_sampled[i] - ref[i];
        }
        FitResult fit = detail::fit_response(times, arm.response.y_exact, cfg.cpmg.signal.amplitude_hz);
        arm.contrast = fit.gamma_identified ? std::abs(fit.amplitude()) : 0.0;
        arm.fitted_gamma = fit.gamma();
        if (arm.contrast > 1e-9) {
            double tau_ref = 0.5 * times.back();
            SensitivityCurve s = sensitivity_curve(fit, {tau_ref});
            arm.sensitivity = s.s_star;
        }
        return arm;
    };

    std::uint64_t tag = 0xCb00;
    for (double theta : cfg.cpmg.error_angles_rad)
        for (double delay : cfg.cpmg.delays_s) {
            out.arms.push_back(run_arm(theta, delay, true, tag++));
            out.arms.push_back(run_arm(theta, delay, false, tag++));
        }
    out.arms.push_back(run_arm(0.0, 0.0, true, tag++));
    out.arms.push_back(run_arm(0.0, 0.0, false, tag++));

    // averaged-error composite: mean response over the (theta, delay) grid, EC on
    out.averaged.x = times;
    out.averaged.y_exact.assign(times.size(), 0.0);
    out.averaged.y_sampled.assign(times.size(), 0.0);
    out.averaged.y_err.assign(times.size(), 0.0);
    out.averaged.meta.protocol = protocol_name(Protocol::bitflip_cpmg);
    out.averaged.meta.label = "averaged_error_composite";
    out.averaged.meta.n_ec = n_blocks;
    out.averaged.meta.seed = cfg.seed;
    std::size_t n_avg = 0;
    for (const auto& arm : out.arms) {
        if (!arm.ec || arm.theta == 0.0) continue;
        ++n_avg;
        for (std::size_t i = 0; i < times.size(); ++i) {
            out.averaged.y_exact[i] += arm.response.y_exact[i];
            out.averaged.y_sampled[i] += arm.response.y_sampled[i];
        }
    }
    if (n_avg > 0) {
        for (std::size_t i = 0; i < times.size(); ++i) {
            out.averaged.y_exact[i] /= static_cast<double>(n_avg);
            out.averaged.y_sampled[i] /= static_cast<double>(n_avg);
        }
        FitResult fit = detail::fit_response(times, out.averaged.y_exact, cfg.cpmg.signal.amplitude_hz);
        out.averaged_contrast = fit.gamma_identified ? std::abs(fit.amplitude()) : 0.0;
        if (out.averaged_contrast > 1e-9)
            out.averaged_sensitivity = sensitivity_curve(fit, {0.5 * times.back()}).s_star;
    }
    return out;
}

/// Nuclear coherence after k optical resets of the electron. The exact value
/// is eta^k by construction; the sampled column goes through the readout map.
inline CurveData run_reset_coherence(const ExperimentConfig& cfg) {
    CurveData c;
    c.meta.protocol = protocol_name(Protocol::reset_coherence);
    c.meta.seed = cfg.seed;
    c.meta.n_ec = 0;
    c.meta.label = "eta=" + std::to_string(cfg.reset.eta);
    for (int k = 0; k <= cfg.resets; ++k) {
        Vec4 psi = tensor(electron_ket(ElectronState::e0),
                          Vec2((nuclear_ket(NuclearState::up) + nuclear_ket(NuclearState::down)) / std::sqrt(2.0)));
        Mat4 rho = pure_state(psi);
        for (int r = 0; r < k; ++r) rho = optical_reset(rho, cfg.reset);
        Mat4 mapped = readout_map(rho);
        double p = p_up(mapped);
        double coherence = 1.0 - 2.0 * p;  // readout convention: P(up) = (1 - C)/2 here
        c.x.push_back(static_cast<double>(k));
        c.y_exact.push_back(coherence);
        double ys, ye;
        detail::sample_point(p, cfg, 0x7e5e, static_cast<std::size_t>(k), ys, ye);
        c.y_sampled.push_back(1.0 - 2.0 * ys);
        c.y_err.push_back(2.0 * ye);
    }
    return c;
}

struct NoNoiseSimResult {
    CurveData without_ec;  // n_ec = 0
    CurveData with_ec;     // n_ec = 2
};

/// Exact zero-noise curves for the corrected and uncorrected sequences.
inline NoNoiseSimResult run_no_noise_sim(const ExperimentConfig& cfg) {
    ExperimentConfig quiet = cfg;
    quiet.dephasing.enabled = false;
    quiet.n_ec = 2;
    quiet.readout.fidelity_init = 1.0;
    quiet.gate_penalty = 1.0;
    quiet.reset.eta = 1.0;
    std::vector<CurveData> curves = run_qsec_rabi(quiet);
    NoNoiseSimResult r;
    r.without_ec = curves.front();
    r.with_ec = curves.back();
    r.without_ec.meta.protocol = protocol_name(Protocol::no_noise_sim);
    r.with_ec.meta.protocol = protocol_name(Protocol::no_noise_sim);
    return r;
}

/// Windowed relative spectral power near a frequency; the acceptance checks
/// for the hyperfine beat use this.
inline double relative_spectral_power(const std::vector<double>& x, const std::vector<double>& y,
                                      double f0_hz, double bw_hz = 3e3) {
    std::size_t n = x.size();
    if (n < 8) return 0.0;
    double dt = (x.back() - x.front()) / static_cast<double>(n - 1);
    double mean = 0.0;
    for (double v : y) mean += v / static_cast<double>(n);
    double total = 0.0, inband = 0.0;
    std::size_t nfreq = n / 2;
    for (std::size_t k = 1; k <= nfreq; ++k) {
        double wr = 0.0, wi = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            // Hann window keeps far-line leakage below the 1e-6 acceptance floor
            double w = 0.5 - 0.5 * std::cos(two_pi * static_cast<double>(j) / static_cast<double>(n - 1));
            double arg = two_pi * static_cast<double>(k) * static_cast<double>(j) / static_cast<double>(n);
            wr += (y[j] - mean) * w * std::cos(arg);
            wi -= (y[j] - mean) * w * std::sin(arg);
        }
        double p = wr * wr + wi * wi;
        double fk = static_cast<double>(k) / (dt * static_cast<double>(n));
        total += p;
        if (std::abs(fk - f0_hz) <= bw_hz) inband += p;
    }
    return total > 0.0 ? inband / total : 0.0;
}

}  // namespace qsec
