#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "qsec/dynamics.hpp"
#include "qsec/hilbert.hpp"
#include "qsec/rng.hpp"

namespace qsec {

/// Per-reset nuclear coherence retention; default calibrated so 20 resets keep 95%.
struct ResetModel {
    double eta = std::pow(0.95, 1.0 / 20.0);
};

struct PhotonModel {
    double rate_up = 0.014;    // mean counts per repetition, nucleus up
    double rate_down = 0.009;  // mean counts per repetition, nucleus down
    long threshold = 113;      // counts above => classified up
    long repetitions = 10000;
};

struct ReadoutModel {
    double fidelity_read = 0.98;
    double fidelity_init = 0.99;
    std::optional<PhotonModel> photon;
};

/// Electron phase-flip |+> <-> |->: exact z-pi rotation of the electron.
inline Mat4 phase_flip(const Mat4& rho) {
    return instant_rotation(rho, Target::electron, Axis::z, pi);
}

/// Electron y-rotation by theta (the injected bit-flip error, R_y(theta)).
inline Mat4 bit_flip(const Mat4& rho, double theta) {
    return instant_rotation(rho, Target::electron, Axis::y, theta);
}

/// Optical repump of the electron to |0>; the nuclear state is kept with its
/// off-diagonals scaled by eta. Trace preserving exactly.
inline Mat4 optical_reset(const Mat4& rho, const ResetModel& model) {
    Mat2 nuc = partial_trace_electron(rho);
    nuc(0, 1) *= model.eta;
    nuc(1, 0) *= model.eta;
    Mat4 out = Mat4::Zero();
    out.block<2, 2>(0, 0) = nuc;
    return out;
}

enum class Outcome { up, down };

struct ReadoutResult {
    Outcome reported;   // what the detector says (flipped with prob 1 - fidelity_read)
    Outcome truth;      // the projective outcome the register actually took
    Mat4 rho_post;      // projected, renormalized state for the true outcome
};

/// Nondemolition nuclear readout: project on the sampled true outcome, then
/// report it through the classical fidelity flip.
inline ReadoutResult readout_nuclear(const Mat4& rho, const ReadoutModel& model, Rng& rng) {
    double p_up = (rho * nuclear_projector(NuclearState::up)).trace().real();
    p_up = std::clamp(p_up, 0.0, 1.0);
    bool truth_up = rng.bernoulli(p_up);
    Mat4 proj = nuclear_projector(truth_up ? NuclearState::up : NuclearState::down);
    double norm = (rho * proj).trace().real();
    Mat4 post;
    if (norm < 1e-15) {
        post = pure_state(ElectronState::e0, truth_up ? NuclearState::up : NuclearState::down);
    } else {
        post = (proj * rho * proj) / norm;
    }
    bool correct = rng.bernoulli(model.fidelity_read);
    bool reported_up = correct ? truth_up : !truth_up;
    return {reported_up ? Outcome::up : Outcome::down,
            truth_up ? Outcome::up : Outcome::down, post};
}

struct Histogram {
    std::vector<long> bin_center;      // total photon counts per shot
    std::vector<long> count;           // occurrences
    double classification_error = 0.0; // fraction of shots the threshold misclassifies
};

/// Spin-dependent fluorescence histogram: each shot samples the nuclear state,
/// then a Poisson count with mean rate * repetitions.
inline Histogram ssr_histogram(double p_up, const ReadoutModel& model, std::size_t n_shots, Rng& rng) {
    if (!model.photon) throw std::invalid_argument("ssr_histogram: photon model absent");
    const PhotonModel& ph = *model.photon;
    std::map<long, long> bins;
    std::size_t misclassified = 0;
    for (std::size_t s = 0; s < n_shots; ++s) {
        bool up = rng.bernoulli(p_up);
        double mean = (up ? ph.rate_up : ph.rate_down) * static_cast<double>(ph.repetitions);
        long counts = static_cast<long>(rng.poisson(mean));
        ++bins[counts];
        bool classified_up = counts > ph.threshold;
        if (classified_up != up) ++misclassified;
    }
    Histogram h;
    for (auto& [c, n] : bins) {
        h.bin_center.push_back(c);
        h.count.push_back(n);
    }
    h.classification_error = n_shots ? static_cast<double>(misclassified) / n_shots : 0.0;
    return h;
}

/// Initialization by measurement + post-selection: ideal |0,up> mixed with the
/// residual wrong-nucleus component at 1 - fidelity_init.
inline Mat4 initialize_register(const ReadoutModel& model) {
    double f = model.fidelity_init;
    return f * pure_state(ElectronState::e0, NuclearState::up) +
           (1.0 - f) * pure_state(ElectronState::e0, NuclearState::down);
}

}  // namespace qsec
