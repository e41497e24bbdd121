#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qsec/algebra.hpp"
#include "qsec/rng.hpp"

namespace qsec {

/// Decay-cosine fit models:
///   single: A exp(-gamma x) cos(omega x + phi) + c
///   two_component: sum of two such terms + c
enum class FitModelKind { single, two_component };

inline std::size_t fit_param_count(FitModelKind kind) {
    return kind == FitModelKind::single ? 5 : 9;
}

struct FitResult {
    FitModelKind model = FitModelKind::single;
    std::vector<double> params;
    double residual_norm = 0.0;
    bool converged = false;
    bool gamma_identified = true;
    int iterations = 0;

    // single-model accessors; for two_component they read component 0
    double amplitude() const { return params.at(0); }
    double gamma() const { return params.at(1); }
    double omega() const { return params.at(2); }
    double phase() const { return params.at(3); }
    double offset() const { return params.back(); }

    /// Component with the largest |amplitude| (the one sensitivity analysis follows).
    std::size_t dominant_component() const {
        if (model == FitModelKind::single) return 0;
        return std::abs(params[0]) >= std::abs(params[4]) ? 0 : 1;
    }
    double dominant_amplitude() const { return params[4 * dominant_component()]; }
    double dominant_gamma() const { return params[4 * dominant_component() + 1]; }
    double dominant_omega() const { return params[4 * dominant_component() + 2]; }
};

struct FitError : std::runtime_error {
    explicit FitError(std::string msg, FitResult best_so_far)
        : std::runtime_error(std::move(msg)), best(std::move(best_so_far)) {}
    FitResult best;
};

inline double fit_model_eval(FitModelKind kind, const std::vector<double>& p, double x) {
    if (kind == FitModelKind::single)
        return p[0] * std::exp(-p[1] * x) * std::cos(p[2] * x + p[3]) + p[4];
    return p[0] * std::exp(-p[1] * x) * std::cos(p[2] * x + p[3]) +
           p[4] * std::exp(-p[5] * x) * std::cos(p[6] * x + p[7]) + p[8];
}

struct SpectralPeak {
    double frequency_hz = 0.0;
    double amplitude = 0.0;
    double phase = 0.0;
};

/// Peak-picking on the discrete spectrum of uniformly sampled data; nonlinear
/// cosine fits are multimodal, so the frequency seeds come from here.
inline std::vector<SpectralPeak> spectral_peaks(const std::vector<double>& x,
                                                const std::vector<double>& y,
                                                std::size_t max_peaks) {
    std::size_t n = x.size();
    if (n < 4) return {};
    double dt = (x.back() - x.front()) / static_cast<double>(n - 1);
    double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);

    std::size_t nfreq = n / 2;
    std::vector<double> power(nfreq + 1, 0.0), re(nfreq + 1, 0.0), im(nfreq + 1, 0.0);
    for (std::size_t k = 1; k <= nfreq; ++k) {
        double wr = 0.0, wi = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double arg = two_pi * static_cast<double>(k) * static_cast<double>(j) / static_cast<double>(n);
            double v = y[j] - mean;
            wr += v * std::cos(arg);
            wi -= v * std::sin(arg);
        }
        re[k] = wr;
        im[k] = wi;
        power[k] = wr * wr + wi * wi;
    }

    std::vector<SpectralPeak> peaks;
    std::vector<bool> used(nfreq + 1, false);
    double df = 1.0 / (dt * static_cast<double>(n));
    // the k = 1 bin is indistinguishable from baseline drift; never seed from it
    while (peaks.size() < max_peaks) {
        std::size_t best = 0;
        for (std::size_t k = 2; k <= nfreq; ++k)
            if (!used[k] && (best == 0 || power[k] > power[best])) best = k;
        if (best == 0 || power[best] <= 0.0) break;
        // suppress the peak's neighborhood so the next pick is a distinct line
        for (long k = static_cast<long>(best) - 2; k <= static_cast<long>(best) + 2; ++k)
            if (k >= 1 && k <= static_cast<long>(nfreq)) used[static_cast<std::size_t>(k)] = true;
        SpectralPeak p;
        double fk = static_cast<double>(best) * df;
        // parabolic refinement on log-power
        if (best > 1 && best < nfreq && power[best - 1] > 0 && power[best + 1] > 0) {
            double l0 = std::log(power[best - 1]), l1 = std::log(power[best]), l2 = std::log(power[best + 1]);
            double denom = l0 - 2 * l1 + l2;
            if (std::abs(denom) > 1e-30) {
                double shift = 0.5 * (l0 - l2) / denom;
                if (std::abs(shift) < 1.0) fk += shift * df;
            }
        }
        p.frequency_hz = fk;
        p.amplitude = 2.0 * std::sqrt(power[best]) / static_cast<double>(n);
        p.phase = std::atan2(im[best], re[best]);
        peaks.push_back(p);
    }
    return peaks;
}

namespace detail {

inline double chi2(FitModelKind kind, const std::vector<double>& p, const std::vector<double>& x,
                   const std::vector<double>& y, const std::vector<double>& w) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double r = (fit_model_eval(kind, p, x[i]) - y[i]) * w[i];
        s += r * r;
    }
    return s;
}

struct LmOutcome {
    double chi2 = 0.0;
    bool converged = false;
    int iterations = 0;
    double last_rel = 1.0;
};

/// Damped Gauss-Newton over the free parameters only, with a projection step
/// keeping the iterate inside the physical box.
inline LmOutcome lm_minimize(FitModelKind kind, std::vector<double>& p,
                             const std::vector<double>& x, const std::vector<double>& y,
                             const std::vector<double>& w, const std::vector<bool>& free_mask,
                             int max_iter, const std::function<void(std::vector<double>&)>& project) {
    std::size_t n = x.size();
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < free_mask.size(); ++j)
        if (free_mask[j]) idx.push_back(j);
    std::size_t nf = idx.size();
    project(p);

    LmOutcome out;
    out.chi2 = chi2(kind, p, x, y, w);
    double lambda = 1e-3;
    for (int it = 0; it < max_iter; ++it) {
        out.iterations = it + 1;
        Eigen::MatrixXd jac(n, nf);
        Eigen::VectorXd resid(n);
        for (std::size_t i = 0; i < n; ++i)
            resid(static_cast<long>(i)) = (fit_model_eval(kind, p, x[i]) - y[i]) * w[i];
        for (std::size_t jj = 0; jj < nf; ++jj) {
            std::size_t j = idx[jj];
            double h = std::max(1e-9, 1e-7 * std::abs(p[j]));
            std::vector<double> pp = p, pm = p;
            pp[j] += h;
            pm[j] -= h;
            for (std::size_t i = 0; i < n; ++i)
                jac(static_cast<long>(i), static_cast<long>(jj)) =
                    (fit_model_eval(kind, pp, x[i]) - fit_model_eval(kind, pm, x[i])) * w[i] / (2.0 * h);
        }
        Eigen::MatrixXd jtj = jac.transpose() * jac;
        Eigen::VectorXd g = jac.transpose() * resid;

        bool stepped = false;
        for (int tries = 0; tries < 25; ++tries) {
            Eigen::MatrixXd a = jtj;
            for (std::size_t j = 0; j < nf; ++j)
                a(static_cast<long>(j), static_cast<long>(j)) =
                    jtj(static_cast<long>(j), static_cast<long>(j)) * (1.0 + lambda) + 1e-300;
            Eigen::VectorXd delta = a.ldlt().solve(-g);
            std::vector<double> pnew = p;
            for (std::size_t j = 0; j < nf; ++j) pnew[idx[j]] += delta(static_cast<long>(j));
            project(pnew);
            double c2new = chi2(kind, pnew, x, y, w);
            if (std::isfinite(c2new) && c2new <= out.chi2) {
                out.last_rel = std::abs(out.chi2 - c2new) / std::max(out.chi2, 1e-300);
                p = pnew;
                out.chi2 = c2new;
                lambda = std::max(lambda * 0.3, 1e-12);
                stepped = true;
                if (out.last_rel < 1e-13 || delta.norm() < 1e-13) {
                    out.converged = true;
                    return out;
                }
                break;
            }
            lambda *= 10.0;
            if (lambda > 1e12) break;
        }
        if (!stepped) {  // no improving direction left: stationary point
            out.converged = true;
            return out;
        }
    }
    if (out.last_rel < 1e-10) out.converged = true;  // asymptotically flat descent
    return out;
}

}  // namespace detail

/// Levenberg-Marquardt least squares with numeric Jacobian. Decay rates are
/// kept nonnegative by projection. Throws FitError (carrying the best point
/// reached) when the iteration limit is hit without converging.
inline FitResult fit_curve(const std::vector<double>& x, const std::vector<double>& y,
                           FitModelKind kind,
                           const std::vector<double>& y_err = {},
                           const std::vector<double>& init = {}) {
    std::size_t n = x.size();
    std::size_t np = fit_param_count(kind);
    if (n != y.size()) throw std::invalid_argument("fit_curve: x/y size mismatch");
    if (n < 3 * np) throw std::invalid_argument("fit_curve: need at least 3x more points than parameters");

    std::vector<double> w(n, 1.0);
    if (!y_err.empty()) {
        if (y_err.size() != n) throw std::invalid_argument("fit_curve: y_err size mismatch");
        for (std::size_t i = 0; i < n; ++i) w[i] = 1.0 / std::max(y_err[i], 1e-6);
    }

    double ymin = *std::min_element(y.begin(), y.end());
    double ymax = *std::max_element(y.begin(), y.end());
    double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double span = x.back() - x.front();

    // degenerate constant data: amplitude zero, rate unidentifiable
    if (ymax - ymin < 1e-12 * std::max(1.0, std::abs(mean))) {
        FitResult r;
        r.model = kind;
        r.params.assign(np, 0.0);
        r.params.back() = mean;
        r.converged = true;
        r.gamma_identified = false;
        return r;
    }

    std::vector<double> p;
    bool seeded_from_spectrum = false;
    if (!init.empty()) {
        if (init.size() != np) throw std::invalid_argument("fit_curve: bad init size");
        p = init;
    } else {
        auto peaks = spectral_peaks(x, y, kind == FitModelKind::single ? 1 : 2);
        if (peaks.empty()) throw std::invalid_argument("fit_curve: no spectral content to seed from");
        if (kind == FitModelKind::two_component && peaks.size() < 2) peaks.push_back(peaks[0]);
        double g0 = 1.0 / std::max(span, 1e-12);
        if (kind == FitModelKind::single) {
            p = {peaks[0].amplitude, g0, two_pi * peaks[0].frequency_hz, peaks[0].phase, mean};
        } else {
            p = {peaks[0].amplitude, g0, two_pi * peaks[0].frequency_hz, peaks[0].phase,
                 peaks[1].amplitude, g0, two_pi * peaks[1].frequency_hz, peaks[1].phase, mean};
        }
        seeded_from_spectrum = true;
    }

    // Physical box: rates nonnegative, amplitudes within twice the data range,
    // frequencies below Nyquist (and near their seeded lines when we seeded).
    double dx = span / static_cast<double>(n - 1);
    double w_nyquist = pi / std::max(dx, 1e-300);
    double amp_cap = 2.0 * (ymax - ymin);
    std::vector<double> w_seed{p[2], kind == FitModelKind::two_component ? p[6] : 0.0};
    auto project = [&, seeded_from_spectrum](std::vector<double>& q) {
        for (std::size_t comp = 0; comp < (kind == FitModelKind::single ? 1u : 2u); ++comp) {
            std::size_t o = 4 * comp;
            q[o] = std::clamp(q[o], -amp_cap, amp_cap);
            q[o + 1] = std::max(q[o + 1], 0.0);
            double lo = 0.0, hi = w_nyquist;
            if (seeded_from_spectrum && w_seed[comp] > 0.0) {
                lo = w_seed[comp] / 3.0;
                hi = std::min(w_nyquist, 3.0 * w_seed[comp]);
            }
            q[o + 2] = std::clamp(q[o + 2], lo, hi);
        }
    };

    std::vector<bool> all_free(np, true);
    // Stage 1 (spectrum-seeded fits only): hold the frequencies at the spectral
    // peaks and settle amplitudes, rates and phases; the reduced problem is
    // nearly unimodal and keeps the full fit from wandering between lines.
    if (seeded_from_spectrum) {
        std::vector<bool> mask = all_free;
        mask[2] = false;
        if (kind == FitModelKind::two_component) mask[6] = false;
        detail::lm_minimize(kind, p, x, y, w, mask, 150, project);
    }
    detail::LmOutcome lm = detail::lm_minimize(kind, p, x, y, w, all_free, 500, project);

    FitResult best;
    best.model = kind;
    best.params = p;
    best.residual_norm = std::sqrt(lm.chi2);
    best.iterations = lm.iterations;
    best.converged = lm.converged;
    if (!lm.converged) throw FitError("fit_curve: no convergence after max iterations", best);
    return best;
}

struct PosteriorOptions {
    std::size_t chain_length = 24000;
    std::size_t burn_in = 6000;
    std::size_t n_chains = 2;
    std::uint64_t seed = 1;
};

struct Posterior {
    std::vector<double> gamma_samples;  // pooled post-burn-in samples
    double mode = 0.0;
    double mean = 0.0;
    double ci_low = 0.0;    // 2.5 %
    double ci_high = 0.0;   // 97.5 %
    double acceptance_rate = 0.0;
    double gelman_rubin = 0.0;
    bool acceptance_warning = false;
    std::vector<double> grid_gamma;  // normalized density on a gamma grid
    std::vector<double> grid_pdf;

    bool covers(double truth) const { return truth >= ci_low && truth <= ci_high; }
};

/// Random-walk Metropolis over all model parameters with per-parameter step
/// adaptation during burn-in, marginalized to the decay rate. Uniform prior
/// on gamma over [0, gamma_max]; Gaussian likelihood from y_err (floored at
/// 1e-6 so that exact curves behave as the near-zero-error limit).
inline Posterior posterior_gamma(const std::vector<double>& x, const std::vector<double>& y,
                                 const std::vector<double>& y_err, FitModelKind kind,
                                 double gamma_max, const PosteriorOptions& opts = {}) {
    std::size_t n = x.size();
    std::size_t np = fit_param_count(kind);
    if (n != y.size()) throw std::invalid_argument("posterior_gamma: x/y size mismatch");
    std::vector<double> sigma(n, 1e-3);
    if (!y_err.empty()) {
        if (y_err.size() != n) throw std::invalid_argument("posterior_gamma: y_err size mismatch");
        for (std::size_t i = 0; i < n; ++i) sigma[i] = std::max(y_err[i], 1e-6);
    }

    auto log_like = [&](const std::vector<double>& p) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = (fit_model_eval(kind, p, x[i]) - y[i]) / sigma[i];
            s -= 0.5 * r * r;
        }
        return s;
    };
    auto in_prior = [&](const std::vector<double>& p) {
        if (p[1] < 0.0 || p[1] > gamma_max) return false;
        if (kind == FitModelKind::two_component && (p[5] < 0.0 || p[5] > gamma_max)) return false;
        return true;
    };

    FitResult start = fit_curve(x, y, kind, y_err);
    std::vector<double> p0 = start.params;
    p0[1] = std::clamp(p0[1], 0.0, gamma_max);
    if (kind == FitModelKind::two_component) p0[5] = std::clamp(p0[5], 0.0, gamma_max);

    std::vector<std::vector<double>> chains;
    std::size_t accepted = 0, proposed = 0;
    for (std::size_t c = 0; c < opts.n_chains; ++c) {
        Rng rng = Rng::stream(opts.seed, 0xc0ffee + c);
        std::vector<double> p = p0;
        for (std::size_t j = 0; j < np; ++j) p[j] *= 1.0 + 0.01 * rng.normal();
        if (!in_prior(p)) p = p0;

        std::vector<double> step(np);
        for (std::size_t j = 0; j < np; ++j)
            step[j] = std::max(1e-8, 0.02 * std::abs(p0[j]) + 1e-10);
        step[1] = std::max(step[1], 1e-3 * gamma_max);
        if (kind == FitModelKind::two_component) step[5] = std::max(step[5], 1e-3 * gamma_max);

        double ll = log_like(p);
        std::vector<std::size_t> acc(np, 0), tot(np, 0);
        std::vector<double> samples;
        samples.reserve(opts.chain_length - opts.burn_in);

        // The tuned per-parameter walk finds the mode region during burn-in;
        // its second half accumulates the parameter covariance so post-burn-in
        // proposals can move jointly along the (A, gamma, omega, phi) ridge.
        Eigen::VectorXd run_mean = Eigen::VectorXd::Zero(static_cast<long>(np));
        Eigen::MatrixXd run_cov = Eigen::MatrixXd::Zero(static_cast<long>(np), static_cast<long>(np));
        std::size_t cov_samples = 0;
        Eigen::MatrixXd chol;
        bool joint_ready = false;
        double joint_scale = 2.38 / std::sqrt(static_cast<double>(np));

        for (std::size_t s = 0; s < opts.chain_length; ++s) {
            if (!joint_ready) {
                for (std::size_t j = 0; j < np; ++j) {
                    std::vector<double> q = p;
                    q[j] += step[j] * rng.normal();
                    ++tot[j];
                    if (s >= opts.burn_in) ++proposed;
                    if (!in_prior(q)) continue;
                    double llq = log_like(q);
                    if (llq >= ll || rng.uniform() < std::exp(llq - ll)) {
                        p = q;
                        ll = llq;
                        ++acc[j];
                        if (s >= opts.burn_in) ++accepted;
                    }
                }
                if ((s + 1) % 100 == 0) {
                    for (std::size_t j = 0; j < np; ++j) {
                        double r = static_cast<double>(acc[j]) / static_cast<double>(tot[j]);
                        if (r > 0.5) step[j] *= 1.3;
                        else if (r < 0.15) step[j] *= 0.75;
                        acc[j] = tot[j] = 0;
                    }
                }
                if (s >= opts.burn_in / 2) {
                    Eigen::VectorXd v(static_cast<long>(np));
                    for (std::size_t j = 0; j < np; ++j) v(static_cast<long>(j)) = p[j];
                    ++cov_samples;
                    Eigen::VectorXd d = v - run_mean;
                    run_mean += d / static_cast<double>(cov_samples);
                    run_cov += d * (v - run_mean).transpose();
                }
                if (s + 1 == opts.burn_in && cov_samples > 4 * np) {
                    Eigen::MatrixXd cov = run_cov / static_cast<double>(cov_samples - 1);
                    for (std::size_t j = 0; j < np; ++j)
                        cov(static_cast<long>(j), static_cast<long>(j)) += 1e-12 * step[j] * step[j] + 1e-300;
                    Eigen::LLT<Eigen::MatrixXd> llt(cov);
                    if (llt.info() == Eigen::Success) {
                        chol = llt.matrixL();
                        joint_ready = true;
                    }
                }
            } else {
                // joint proposal from the adapted covariance
                Eigen::VectorXd z(static_cast<long>(np));
                for (std::size_t j = 0; j < np; ++j) z(static_cast<long>(j)) = rng.normal();
                Eigen::VectorXd move = joint_scale * (chol * z);
                std::vector<double> q = p;
                for (std::size_t j = 0; j < np; ++j) q[j] += move(static_cast<long>(j));
                ++proposed;
                if (in_prior(q)) {
                    double llq = log_like(q);
                    if (llq >= ll || rng.uniform() < std::exp(llq - ll)) {
                        p = q;
                        ll = llq;
                        ++accepted;
                    }
                }
            }
            if (s >= opts.burn_in) samples.push_back(p[1]);
        }
        chains.push_back(std::move(samples));
    }

    Posterior post;
    for (auto& c : chains)
        post.gamma_samples.insert(post.gamma_samples.end(), c.begin(), c.end());
    post.acceptance_rate = proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
    post.acceptance_warning = post.acceptance_rate < 0.1 || post.acceptance_rate > 0.6;

    // Gelman-Rubin on gamma across chains
    if (chains.size() >= 2) {
        std::size_t m = chains.size(), len = chains[0].size();
        std::vector<double> means(m);
        double grand = 0.0, wvar = 0.0;
        for (std::size_t c = 0; c < m; ++c) {
            double mu = std::accumulate(chains[c].begin(), chains[c].end(), 0.0) / static_cast<double>(len);
            means[c] = mu;
            grand += mu / static_cast<double>(m);
        }
        double b = 0.0;
        for (std::size_t c = 0; c < m; ++c) {
            b += (means[c] - grand) * (means[c] - grand) * static_cast<double>(len) / static_cast<double>(m - 1);
            double v = 0.0;
            for (double s : chains[c]) v += (s - means[c]) * (s - means[c]);
            wvar += v / static_cast<double>(len - 1) / static_cast<double>(m);
        }
        double nd = static_cast<double>(len);
        double var_plus = (nd - 1.0) / nd * wvar + b / nd;
        post.gelman_rubin = wvar > 0.0 ? std::sqrt(var_plus / wvar) : 1.0;
    } else {
        post.gelman_rubin = 1.0;
    }

    std::vector<double> sorted = post.gamma_samples;
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double q) {
        double idx = q * static_cast<double>(sorted.size() - 1);
        auto lo = static_cast<std::size_t>(idx);
        std::size_t hi = std::min(lo + 1, sorted.size() - 1);
        double f = idx - static_cast<double>(lo);
        return sorted[lo] * (1.0 - f) + sorted[hi] * f;
    };
    post.ci_low = quantile(0.025);
    post.ci_high = quantile(0.975);
    post.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());

    // histogram density for the mode and the exported (gamma, pdf) grid
    const std::size_t nbins = 100;
    double lo = sorted.front(), hi = sorted.back();
    if (hi - lo < 1e-300) hi = lo + 1e-12;
    std::vector<double> counts(nbins, 0.0);
    for (double s : sorted) {
        auto b = static_cast<std::size_t>((s - lo) / (hi - lo) * static_cast<double>(nbins));
        counts[std::min(b, nbins - 1)] += 1.0;
    }
    double bin_w = (hi - lo) / static_cast<double>(nbins);
    std::size_t argmax = 0;
    for (std::size_t b = 0; b < nbins; ++b)
        if (counts[b] > counts[argmax]) argmax = b;
    post.mode = lo + (static_cast<double>(argmax) + 0.5) * bin_w;
    post.grid_gamma.resize(nbins);
    post.grid_pdf.resize(nbins);
    double total = static_cast<double>(sorted.size()) * bin_w;
    for (std::size_t b = 0; b < nbins; ++b) {
        post.grid_gamma[b] = lo + (static_cast<double>(b) + 0.5) * bin_w;
        post.grid_pdf[b] = counts[b] / total;
    }
    return post;
}

struct SensitivityCurve {
    std::vector<double> times;
    std::vector<double> s;   // arbitrary units
    double tau_star = 0.0;   // argmin over the given times
    double s_star = 0.0;
};

/// S(tau) = 1/(C(tau) sqrt(tau)) with C(tau) the fitted envelope of the
/// dominant component. Proportionality constant is 1 (arbitrary units).
inline SensitivityCurve sensitivity_curve(const FitResult& fit, const std::vector<double>& times) {
    double c0 = std::abs(fit.dominant_amplitude());
    double g = fit.dominant_gamma();
    if (c0 <= 0.0) throw std::invalid_argument("sensitivity_curve: nonpositive contrast");
    SensitivityCurve out;
    out.times = times;
    out.s.resize(times.size());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < times.size(); ++i) {
        double tau = times[i];
        if (tau <= 0.0) {
            out.s[i] = std::numeric_limits<double>::infinity();
            continue;
        }
        double c = c0 * std::exp(-g * tau);
        out.s[i] = 1.0 / (c * std::sqrt(tau));
        if (out.s[i] < best) {
            best = out.s[i];
            out.tau_star = tau;
            out.s_star = out.s[i];
        }
    }
    return out;
}

/// For an exponential envelope the optimum is analytic: tau* = 1/(2 gamma).
inline double tau_star_exponential(double gamma) {
    if (gamma <= 0.0) return std::numeric_limits<double>::infinity();
    return 0.5 / gamma;
}

/// First time where the corrected curve's sensitivity drops below the
/// reference; nullopt when it never crosses on the grid.
inline std::optional<double> sensitivity_crossover(const SensitivityCurve& corrected,
                                                   const SensitivityCurve& reference) {
    for (std::size_t i = 0; i < corrected.times.size() && i < reference.times.size(); ++i)
        if (corrected.s[i] < reference.s[i]) return corrected.times[i];
    return std::nullopt;
}

}  // namespace qsec
