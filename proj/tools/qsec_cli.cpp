// Config-driven experiment runner: simulates the sensing protocols, writes
// curve tables / fits / posteriors as delimited text plus a run manifest.
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qsec/io.hpp"

namespace fs = std::filesystem;
using namespace qsec;

namespace {

constexpr const char* kVersion = "qsec 1.0.0";

struct GlobalOpts {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<int> n_ec;
    std::optional<std::size_t> shots;
};

ExperimentConfig load_config(const GlobalOpts& g, Protocol proto) {
    ExperimentConfig cfg;
    if (!g.config_path.empty()) {
        io::json j = io::json::parse(io::read_file(g.config_path));
        cfg = io::config_from_json(j);
    }
    cfg.protocol = proto;
    if (g.seed) cfg.seed = *g.seed;
    if (g.workers) cfg.workers = *g.workers;
    if (g.n_ec) cfg.n_ec = *g.n_ec;
    if (g.shots) cfg.shots = *g.shots;
    return cfg;
}

void require_valid(const ExperimentConfig& cfg) {
    auto errs = cfg.validate();
    if (!errs.empty()) {
        for (const auto& e : errs) std::cerr << "config error: " << e << "\n";
        std::exit(1);
    }
}

fs::path resolve_out_dir(const GlobalOpts& g) {
    std::string dir = g.out_dir;
    if (dir.empty()) {
        if (const char* env = std::getenv("QSEC_OUT_DIR")) dir = env;
        else dir = ".";
    }
    fs::create_directories(dir);
    return dir;
}

class ManifestWriter {
  public:
    ManifestWriter(const ExperimentConfig& cfg, fs::path dir)
        : dir_(std::move(dir)), start_(std::chrono::steady_clock::now()) {
        manifest_.config_echo = io::config_to_json(cfg);
        manifest_.config_hash = io::config_hash(cfg);
        manifest_.seed = cfg.seed;
        manifest_.version = kVersion;
    }

    std::string write(const std::string& name, const std::string& content) {
        fs::path p = dir_ / name;
        io::write_file(p.string(), content);
        manifest_.outputs.push_back(p.string());
        std::cout << "wrote " << p.string() << "\n";
        return p.string();
    }

    void finish() {
        manifest_.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        io::write_file((dir_ / "manifest.json").string(), manifest_.to_json().dump(2) + "\n");
        std::cout << "wrote " << (dir_ / "manifest.json").string() << "\n";
    }

  private:
    fs::path dir_;
    io::RunManifest manifest_;
    std::chrono::steady_clock::time_point start_;
};

void stamp(CurveData& c, const ExperimentConfig& cfg) { c.meta.config_hash = io::config_hash(cfg); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-qubit register sensing simulator (Lindblad master equation, "
                 "error-corrected sensing protocols, estimation toolkit)"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "JSON config file (defaults used when omitted)");
    app.add_option("--out", g.out_dir, "output directory (or $QSEC_OUT_DIR, default .)");
    std::uint64_t seed_val = 0;
    auto* seed_opt = app.add_option("--seed", seed_val, "override RNG seed");
    int workers_val = 0;
    auto* workers_opt = app.add_option("--workers", workers_val, "parallel workers (default: cores)");
    int nec_val = 0;
    auto* nec_opt = app.add_option("--n-ec", nec_val, "error-correction rounds (0..2)")->check(CLI::Range(0, 2));
    std::size_t shots_val = 0;
    auto* shots_opt = app.add_option("--shots", shots_val, "shots per grid point");

    // ---- protocol subcommands
    auto* rabi = app.add_subcommand("qsec-rabi", "Rabi sensing curves with 0..n EC rounds");
    double rabi_hz = 0.0, tmax = 0.0;
    std::size_t points = 0;
    auto* rabi_amp = rabi->add_option("--rabi", rabi_hz, "sensing drive Rabi frequency [Hz]");
    auto* rabi_tmax = rabi->add_option("--tmax", tmax, "largest sensing time [s]");
    auto* rabi_pts = rabi->add_option("--points", points, "grid size");

    auto* single = app.add_subcommand("single-error", "single phase-flip, corrected vs uncorrected");
    double angle = 0.0;
    auto* single_angle = single->add_option("--angle", angle, "error angle [rad], default pi");

    auto* bitflip = app.add_subcommand("bitflip-cpmg", "CPMG AC sensing with injected bit-flips");
    std::vector<double> thetas, delays;
    bitflip->add_option("--theta", thetas, "error angles [rad]");
    bitflip->add_option("--delay", delays, "error-to-correction delays [s]");
    int max_pulses = 0;
    auto* bf_pulses = bitflip->add_option("--pulses", max_pulses, "max CPMG pulses per block (even)");

    auto* resetc = app.add_subcommand("reset-coherence", "nuclear coherence vs optical resets");
    int resets = -1;
    resetc->add_option("--resets", resets, "number of resets to sweep, default 20");

    auto* nonoise = app.add_subcommand("no-noise-sim", "exact zero-noise curves, n_ec 0 and 2");

    // ---- analysis subcommands
    auto* fit = app.add_subcommand("fit", "least-squares decay-cosine fit of a curve file");
    std::string fit_input, fit_model = "single", fit_column = "exact";
    fit->add_option("--input", fit_input, "curve file")->required();
    fit->add_option("--model", fit_model, "single | double")->check(CLI::IsMember({"single", "double"}));
    fit->add_option("--column", fit_column, "exact | sampled")->check(CLI::IsMember({"exact", "sampled"}));

    auto* post = app.add_subcommand("posterior", "Bayesian posterior of the decay rate");
    std::string post_input, post_model = "single";
    double gamma_max = 2e5;
    std::size_t chain_len = 24000;
    post->add_option("--input", post_input, "curve file")->required();
    post->add_option("--model", post_model, "single | double")->check(CLI::IsMember({"single", "double"}));
    post->add_option("--gamma-max", gamma_max, "uniform prior upper bound [1/s]");
    post->add_option("--chain-len", chain_len, "Metropolis chain length");

    auto* sens = app.add_subcommand("sensitivity", "sensitivity curve S = 1/(C sqrt(tau)) from a fit file");
    std::string sens_input;
    double sens_tmin = 1e-6, sens_tmax = 300e-6;
    std::size_t sens_points = 200;
    sens->add_option("--input", sens_input, "fit file")->required();
    sens->add_option("--tmin", sens_tmin, "smallest sensing time [s]");
    sens->add_option("--tmax", sens_tmax, "largest sensing time [s]");
    sens->add_option("--points", sens_points, "grid size");

    auto* validate = app.add_subcommand("validate", "validate a config file and echo resolved values");

    // allow the shared flags to appear after the subcommand name
    for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; })) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 1 : 0;
    }

    if (*seed_opt) g.seed = seed_val;
    if (*workers_opt) g.workers = workers_val;
    if (*nec_opt) g.n_ec = nec_val;
    if (*shots_opt) g.shots = shots_val;

    try {
        fs::path out = resolve_out_dir(g);

        if (*rabi) {
            ExperimentConfig cfg = load_config(g, Protocol::qsec_rabi);
            if (*rabi_amp) cfg.sensing.rabi_hz = rabi_hz;
            if (*rabi_tmax) cfg.sensing.times.stop_s = tmax;
            if (*rabi_pts) cfg.sensing.times.count = points;
            require_valid(cfg);
            ManifestWriter mw(cfg, out);
            for (auto& c : run_qsec_rabi(cfg)) {
                stamp(c, cfg);
                mw.write("qsec_rabi_nec" + std::to_string(c.meta.n_ec) + ".tsv", io::curve_to_text(c));
            }
            mw.finish();
        } else if (*single) {
            ExperimentConfig cfg = load_config(g, Protocol::single_phase_error);
            if (*single_angle) cfg.error_angle_rad = angle;
            require_valid(cfg);
            ManifestWriter mw(cfg, out);
            SinglePhaseErrorResult r = run_single_phase_error(cfg);
            for (auto* c : {&r.with_ec, &r.without_ec, &r.reference_ec, &r.reference_noec}) stamp(*c, cfg);
            mw.write("single_error_ec.tsv", io::curve_to_text(r.with_ec));
            mw.write("single_error_no_ec.tsv", io::curve_to_text(r.without_ec));
            mw.write("single_error_reference_ec.tsv", io::curve_to_text(r.reference_ec));
            mw.write("single_error_reference_no_ec.tsv", io::curve_to_text(r.reference_noec));
            mw.finish();
        } else if (*bitflip) {
            ExperimentConfig cfg = load_config(g, Protocol::bitflip_cpmg);
            if (!thetas.empty()) cfg.cpmg.error_angles_rad = thetas;
            if (!delays.empty()) cfg.cpmg.delays_s = delays;
            if (*bf_pulses) cfg.cpmg.max_pulses_per_block = max_pulses;
            require_valid(cfg);
            ManifestWriter mw(cfg, out);
            BitflipCpmgResult r = run_bitflip_cpmg(cfg);
            std::ostringstream summary;
            summary << "# columns: theta delay ec contrast fitted_gamma sensitivity\n";
            int idx = 0;
            for (auto& arm : r.arms) {
                stamp(arm.curve, cfg);
                stamp(arm.response, cfg);
                std::string base = "bitflip_arm" + std::to_string(idx++);
                mw.write(base + ".tsv", io::curve_to_text(arm.curve));
                mw.write(base + "_response.tsv", io::curve_to_text(arm.response));
                summary << arm.theta << '\t' << arm.delay_s << '\t' << (arm.ec ? 1 : 0) << '\t'
                        << arm.contrast << '\t' << arm.fitted_gamma << '\t' << arm.sensitivity << '\n';
            }
            stamp(r.averaged, cfg);
            mw.write("bitflip_averaged.tsv", io::curve_to_text(r.averaged));
            mw.write("bitflip_summary.tsv", summary.str());
            mw.finish();
        } else if (*resetc) {
            ExperimentConfig cfg = load_config(g, Protocol::reset_coherence);
            if (resets >= 0) cfg.resets = resets;
            require_valid(cfg);
            ManifestWriter mw(cfg, out);
            CurveData c = run_reset_coherence(cfg);
            stamp(c, cfg);
            mw.write("reset_coherence.tsv", io::curve_to_text(c));
            mw.finish();
            std::cout << "final coherence after " << cfg.resets << " resets: "
                      << c.y_exact.back() << "\n";
        } else if (*nonoise) {
            ExperimentConfig cfg = load_config(g, Protocol::no_noise_sim);
            require_valid(cfg);
            ManifestWriter mw(cfg, out);
            NoNoiseSimResult r = run_no_noise_sim(cfg);
            stamp(r.without_ec, cfg);
            stamp(r.with_ec, cfg);
            mw.write("no_noise_nec0.tsv", io::curve_to_text(r.without_ec));
            mw.write("no_noise_nec2.tsv", io::curve_to_text(r.with_ec));
            mw.finish();
            double p0 = relative_spectral_power(r.without_ec.x, r.without_ec.y_exact, 25e3);
            double p2 = relative_spectral_power(r.with_ec.x, r.with_ec.y_exact, 25e3);
            std::cout << "relative spectral power at 25 kHz: n_ec=0 " << p0 << ", n_ec=2 " << p2 << "\n";
        } else if (*fit) {
            CurveData c = io::curve_from_text(io::read_file(fit_input));
            FitModelKind kind = fit_model == "single" ? FitModelKind::single : FitModelKind::two_component;
            const auto& y = fit_column == "exact" ? c.y_exact : c.y_sampled;
            std::vector<double> yerr = fit_column == "sampled" ? c.y_err : std::vector<double>{};
            FitResult f;
            try {
                f = fit_curve(c.x, y, kind, yerr);
            } catch (const FitError& e) {
                std::cerr << "warning: " << e.what() << " (reporting best-so-far)\n";
                f = e.best;
            }
            fs::path p = out / "fit.txt";
            io::write_file(p.string(), io::fit_to_text(f));
            std::cout << "wrote " << p.string() << "\n" << io::fit_to_text(f);
        } else if (*post) {
            CurveData c = io::curve_from_text(io::read_file(post_input));
            FitModelKind kind = post_model == "single" ? FitModelKind::single : FitModelKind::two_component;
            PosteriorOptions opts;
            opts.seed = g.seed.value_or(c.meta.seed ? c.meta.seed : 1);
            opts.chain_length = chain_len;
            opts.burn_in = chain_len / 4;
            Posterior p = posterior_gamma(c.x, c.y_sampled, c.y_err, kind, gamma_max, opts);
            if (p.acceptance_warning)
                std::cerr << "warning: Metropolis acceptance rate " << p.acceptance_rate
                          << " outside [0.1, 0.6]; adjust step scales or chain length\n";
            fs::path f = out / "posterior.txt";
            io::write_file(f.string(), io::posterior_to_text(p));
            std::cout << "wrote " << f.string() << "\nmode=" << p.mode << " ci=[" << p.ci_low << ", "
                      << p.ci_high << "] acceptance=" << p.acceptance_rate
                      << " gelman_rubin=" << p.gelman_rubin << "\n";
        } else if (*sens) {
            FitResult f = io::fit_from_text(io::read_file(sens_input));
            std::vector<double> times(sens_points);
            for (std::size_t i = 0; i < sens_points; ++i)
                times[i] = sens_tmin + (sens_tmax - sens_tmin) * static_cast<double>(i) /
                                           static_cast<double>(sens_points - 1);
            SensitivityCurve s = sensitivity_curve(f, times);
            fs::path p = out / "sensitivity.tsv";
            io::write_file(p.string(), io::sensitivity_to_text(s));
            std::cout << "wrote " << p.string() << "\ntau_star=" << s.tau_star << " s_star=" << s.s_star
                      << "\n";
        } else if (*validate) {
            ExperimentConfig cfg = load_config(g, Protocol::qsec_rabi);
            if (!g.config_path.empty()) {
                io::json j = io::json::parse(io::read_file(g.config_path));
                cfg = io::config_from_json(j);
            }
            auto errs = cfg.validate();
            if (!errs.empty()) {
                for (const auto& e : errs) std::cerr << "config error: " << e << "\n";
                return 1;
            }
            std::cout << "config ok\nresolved:\n" << io::config_to_json(cfg).dump(2) << "\n";
        }
    } catch (const io::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::runtime_error& e) {
        std::string msg = e.what();
        std::cerr << "error: " << msg << "\n";
        // missing files and malformed inputs are user errors
        return msg.find("cannot read") != std::string::npos ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
