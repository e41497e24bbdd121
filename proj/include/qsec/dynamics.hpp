#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qsec/hilbert.hpp"
#include "qsec/rng.hpp"

namespace qsec {

/// Frequencies are plain Hz everywhere in configs; the single 2*pi conversion
/// happens when Hamiltonians/drives are assembled here.
struct HamiltonianParams {
    double hyperfine_hz = 50e3;      // A, parallel hyperfine component
    double mw_detuning_hz = -25e3;   // Delta_NV = -A/2
    double rf_detuning_hz = -25e3;   // Delta_13C = -A/2
};

enum class ClockMode { global_time, per_reset };

/// gamma(t) = t/T^2; t is the dephasing clock. Restarting the clock at each
/// optical reset models the corrected electron re-dephasing freshly against
/// the quasi-static background, which is what gives repeated correction its
/// coherence-time benefit; the global clock is kept as an option.
struct DephasingLaw {
    double t_dephase_s = 40e-6;
    ClockMode clock_mode = ClockMode::per_reset;
    bool enabled = true;

    double rate(double clock_s) const {
        if (!enabled || clock_s <= 0.0) return 0.0;
        return clock_s / (t_dephase_s * t_dephase_s);
    }
};

enum class SegmentKind { free, mw_drive, rf_drive, instant_rotation };
enum class Axis { x, y, z };
enum class Target { electron, nuclear };

/// Condition for selective operations: pulses resonant with a single transition
/// act only inside the block where the other spin has the given state.
using Condition = std::variant<NuclearState, ElectronState>;

/// Phase-locked AC field entering as amplitude*cos(2*pi*f*t + phase) * Sz.
struct AcSignal {
    double amplitude_hz = 0.0;
    double frequency_hz = 100e3;
    double phase_rad = 0.0;
};

struct Segment {
    SegmentKind kind = SegmentKind::free;
    double duration_s = 0.0;
    Axis axis = Axis::x;
    double amplitude_hz = 0.0;                 // Rabi frequency of the drive
    double angle_rad = 0.0;                    // instant_rotation only
    Target target = Target::electron;          // instant_rotation only
    std::optional<Condition> conditional_on;
    std::optional<AcSignal> signal;
    bool noise_on = true;
    std::string label;
};

inline Mat2 axis_pauli(Axis a) {
    switch (a) {
        case Axis::x: return pauli_x();
        case Axis::y: return pauli_y();
        default: return pauli_z();
    }
}

inline char axis_char(Axis a) { return a == Axis::x ? 'x' : (a == Axis::y ? 'y' : 'z'); }

/// H0 = 2*pi*(Delta_NV Sz + A Sz Iz + Delta_13C Iz); diagonal in the fixed basis.
inline Mat4 build_h0(const HamiltonianParams& p) {
    const SpinOps& o = spin_ops();
    return two_pi * (p.mw_detuning_hz * o.sz +
                     p.hyperfine_hz * (o.sz * o.iz).eval() +
                     p.rf_detuning_hz * o.iz);
}

/// Unitary for an instant rotation; conditioned rotations act only inside the
/// conditioned block and are exactly unitary.
inline Mat4 rotation_unitary(Target target, Axis axis, double angle,
                             std::optional<Condition> cond = std::nullopt) {
    Mat2 u = su2_rotation(axis_char(axis), angle);
    Mat2 id = Mat2::Identity();
    Mat4 full = target == Target::electron ? tensor(u, id) : tensor(id, u);
    if (!cond) return full;

    Mat4 proj, rest;
    if (std::holds_alternative<NuclearState>(*cond)) {
        if (target == Target::nuclear)
            throw std::invalid_argument("rotation_unitary: nuclear rotation cannot condition on nuclear state");
        proj = nuclear_projector(std::get<NuclearState>(*cond));
    } else {
        if (target == Target::electron)
            throw std::invalid_argument("rotation_unitary: electron rotation cannot condition on electron state");
        proj = electron_projector(std::get<ElectronState>(*cond));
    }
    rest = Mat4::Identity() - proj;
    return full * proj + rest;
}

inline Mat4 instant_rotation(const Mat4& rho, Target target, Axis axis, double angle,
                             std::optional<Condition> cond = std::nullopt) {
    Mat4 u = rotation_unitary(target, axis, angle, cond);
    return u * rho * u.adjoint();
}

/// Drive term (time-independent part) for a segment, in angular units.
inline Mat4 drive_operator(const Segment& seg) {
    Mat2 half_sigma = 0.5 * axis_pauli(seg.axis);
    Mat2 id = Mat2::Identity();
    Mat4 op;
    // The condition projector lives on the other tensor factor, so it commutes
    // with the drive and the projected operator stays Hermitian.
    if (seg.kind == SegmentKind::mw_drive) {
        op = tensor(half_sigma, id);
        if (seg.conditional_on)
            op = (op * nuclear_projector(std::get<NuclearState>(*seg.conditional_on))).eval();
    } else {
        op = tensor(id, half_sigma);
        if (seg.conditional_on)
            op = (op * electron_projector(std::get<ElectronState>(*seg.conditional_on))).eval();
    }
    return two_pi * seg.amplitude_hz * op;
}

struct EvolveResult {
    Mat4 rho;
    double clock;  // dephasing clock after the segment
};

namespace detail {

inline Mat4 master_equation_rhs(const Mat4& rho, const Mat4& h, double gamma) {
    const Mat4& sz = spin_ops().sz;
    Mat4 out = Complex(0, -1) * (h * rho - rho * h);
    if (gamma != 0.0) {
        Mat4 szsz = sz * sz;
        out += gamma * (sz * rho * sz - 0.5 * (szsz * rho + rho * szsz));
    }
    return out;
}

}  // namespace detail

/// Fixed-step RK4 on the master equation
///   rho' = -i[H0 + H_C(t), rho] + gamma(t) (Sz rho Sz - 1/2 {Sz^2, rho}).
/// Step size obeys h <= min(duration/50, 1/(50*w_max)) with w_max the largest
/// angular frequency present. gamma(t) is evaluated at the RK4 stage times.
inline EvolveResult evolve_segment(const Mat4& rho_in, const Segment& seg,
                                   const HamiltonianParams& params, const DephasingLaw& law,
                                   double clock, double segment_start_time = 0.0,
                                   double step_scale = 1.0) {
    if (seg.duration_s < 0.0)
        throw std::invalid_argument("evolve_segment: negative duration in segment '" + seg.label + "'");

    if (seg.kind == SegmentKind::instant_rotation) {
        return {instant_rotation(rho_in, seg.target, seg.axis, seg.angle_rad, seg.conditional_on), clock};
    }
    if (seg.duration_s == 0.0) return {rho_in, clock};

    Mat4 h_static = build_h0(params);
    if (seg.kind != SegmentKind::free) h_static += drive_operator(seg);

    // largest angular frequency present in the generator over this segment
    double wmax = two_pi * (std::abs(params.hyperfine_hz) + std::abs(params.mw_detuning_hz) +
                            std::abs(params.rf_detuning_hz));
    if (seg.kind != SegmentKind::free) wmax = std::max(wmax, two_pi * std::abs(seg.amplitude_hz));
    if (seg.signal) {
        wmax = std::max(wmax, two_pi * std::abs(seg.signal->frequency_hz));
        wmax = std::max(wmax, two_pi * std::abs(seg.signal->amplitude_hz));
    }
    bool noisy = law.enabled && seg.noise_on;
    if (noisy) wmax = std::max(wmax, law.rate(clock + seg.duration_s));

    double hstep = seg.duration_s / 50.0;
    if (wmax > 0.0) hstep = std::min(hstep, 1.0 / (50.0 * wmax));
    hstep *= std::clamp(step_scale, 1e-3, 1.0);  // scale < 1 tightens the bound (convergence checks)
    double n_real = std::ceil(seg.duration_s / hstep);
    if (n_real > 5e7)
        throw std::runtime_error("evolve_segment: step-size underflow in segment '" + seg.label +
                                 "' (" + std::to_string(n_real) + " steps)");
    auto steps = static_cast<long>(n_real);
    double h = seg.duration_s / static_cast<double>(steps);

    const Mat4& sz = spin_ops().sz;
    auto hamiltonian_at = [&](double t_local) -> Mat4 {
        if (!seg.signal || seg.signal->amplitude_hz == 0.0) return h_static;
        double t_abs = segment_start_time + t_local;
        double field = seg.signal->amplitude_hz *
                       std::cos(two_pi * seg.signal->frequency_hz * t_abs + seg.signal->phase_rad);
        return h_static + two_pi * field * sz;
    };
    auto gamma_at = [&](double t_local) -> double {
        return noisy ? law.rate(clock + t_local) : 0.0;
    };

    Mat4 rho = rho_in;
    double t = 0.0;
    const bool time_dependent = seg.signal && seg.signal->amplitude_hz != 0.0;
    Mat4 h_mid = h_static, h_end = h_static;
    for (long i = 0; i < steps; ++i) {
        Mat4 h0s = time_dependent ? hamiltonian_at(t) : h_static;
        if (time_dependent) {
            h_mid = hamiltonian_at(t + 0.5 * h);
            h_end = hamiltonian_at(t + h);
        }
        double g0 = gamma_at(t), gm = gamma_at(t + 0.5 * h), ge = gamma_at(t + h);
        Mat4 k1 = detail::master_equation_rhs(rho, h0s, g0);
        Mat4 k2 = detail::master_equation_rhs(rho + (0.5 * h) * k1, time_dependent ? h_mid : h_static, gm);
        Mat4 k3 = detail::master_equation_rhs(rho + (0.5 * h) * k2, time_dependent ? h_mid : h_static, gm);
        Mat4 k4 = detail::master_equation_rhs(rho + h * k3, time_dependent ? h_end : h_static, ge);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
    }
    return {rho, clock + seg.duration_s};
}

/// Quasi-static oracle: |< exp(i 2 pi delta t) >| over delta ~ Normal(0, sigma).
/// Calibration 2*pi*sigma = 1/(sqrt(2) T) reproduces the Lindblad envelope
/// exp(-t^2/(4 T^2)) in the large-sample limit.
inline std::vector<double> quasistatic_ensemble_fid(double sigma_hz,
                                                    const std::vector<double>& times,
                                                    std::size_t n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw std::invalid_argument("quasistatic_ensemble_fid: n_samples >= 1 required");
    std::vector<double> re(times.size(), 0.0), im(times.size(), 0.0);
    Rng rng = Rng::stream(seed, 0x71a5);
    for (std::size_t k = 0; k < n_samples; ++k) {
        double delta = sigma_hz * rng.normal();
        for (std::size_t j = 0; j < times.size(); ++j) {
            double phase = two_pi * delta * times[j];
            re[j] += std::cos(phase);
            im[j] += std::sin(phase);
        }
    }
    std::vector<double> out(times.size());
    for (std::size_t j = 0; j < times.size(); ++j)
        out[j] = std::hypot(re[j], im[j]) / static_cast<double>(n_samples);
    return out;
}

inline double quasistatic_sigma_for(const DephasingLaw& law) {
    return 1.0 / (std::sqrt(2.0) * law.t_dephase_s * two_pi);
}

}  // namespace qsec
