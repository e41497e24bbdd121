#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qsec/channels.hpp"
#include "qsec/dynamics.hpp"

namespace qsec {

/// Two encodings are used by the protocols:
///  - plus_minus: code spanned by |+,up> and |-,down>; protects against
///    electron phase flips during resonant (Rabi) sensing.
///  - z_basis: code spanned by |0,up> and |-1,down>; senses sigma_z AC fields
///    under CPMG and turns injected y-axis errors into detectable subspace leaks.
enum class CodeBasis { plus_minus, z_basis };

struct PulseSchedule {
    std::vector<Segment> segments;
    std::vector<std::pair<std::string, double>> markers;

    double total_duration() const {
        double t = 0.0;
        for (const auto& s : segments) t += s.duration_s;
        return t;
    }

    void add_marker(const std::string& name, double at_s) {
        double total = total_duration();
        if (at_s < 0.0 || at_s > total + 1e-15)
            throw std::invalid_argument("marker '" + name + "' outside schedule");
        markers.emplace_back(name, at_s);
    }

    std::string to_text() const;
};

/// Shared execution state threaded through sequence operations.
struct SequenceCtx {
    HamiltonianParams ham;
    DephasingLaw law;
    ResetModel reset;
    double gate_penalty = 1.0;  // contrast retention per CNOT; 1 = ideal
    double clock = 0.0;         // dephasing clock
    double wall_time = 0.0;     // absolute sequence time (AC signal phase reference)
};

namespace gates {

/// Ideal CNOT_z: conditional phase inversion of the electron when the nucleus
/// is down, diag(1,1,1,-1). Equals a conditional z-pi rotation up to the
/// conditional phase absorbed into pulse phases.
inline Mat4 cz() {
    Mat4 u = Mat4::Identity();
    u(3, 3) = -1.0;
    return u;
}

/// Conditional electron flip (population CNOT) on nuclear down; realizes the
/// z-basis encode/decode gate.
inline Mat4 cnot_flip() {
    Mat4 u = Mat4::Zero();
    u(0, 0) = 1.0;  // |0,up>
    u(2, 2) = 1.0;  // |-1,up>
    u(1, 3) = 1.0;  // |-1,down> -> |0,down>
    u(3, 1) = 1.0;  // |0,down> -> |-1,down>
    return u;
}

inline Mat4 encode_unitary(CodeBasis code) {
    Mat4 nuc = rotation_unitary(Target::nuclear, Axis::y, pi / 2.0);
    if (code == CodeBasis::plus_minus) {
        Mat4 el = rotation_unitary(Target::electron, Axis::x, -pi / 2.0);
        return cz() * el * nuc;
    }
    return cnot_flip() * nuc;
}

/// Re-entangling step inside a correction round: the nuclear superposition
/// already exists, so only the electron pulse and the CNOT are applied
/// (maps |0,up> -> |+,up> and |0,down> -> |-,down>).
inline Mat4 reencode_unitary(CodeBasis code) {
    if (code == CodeBasis::plus_minus)
        return cz() * rotation_unitary(Target::electron, Axis::x, -pi / 2.0);
    return cnot_flip();
}

inline Mat4 decode_unitary(CodeBasis code) {
    if (code == CodeBasis::plus_minus) {
        Mat4 el = rotation_unitary(Target::electron, Axis::x, pi / 2.0);
        return el * cz();
    }
    return cnot_flip();
}

}  // namespace gates

/// Depolarizing-style contrast penalty applied after each CNOT.
inline Mat4 apply_gate_penalty(const Mat4& rho, double lambda) {
    if (lambda >= 1.0) return rho;
    return lambda * rho + (1.0 - lambda) * 0.25 * Mat4::Identity();
}

/// Hyperfine-mediated CNOT as realized in hardware: electron pi/2, free
/// evolution of half the hyperfine period, electron pi/2.
inline PulseSchedule cnot_z(const HamiltonianParams& params) {
    if (params.hyperfine_hz == 0.0)
        throw std::invalid_argument("cnot_z: undefined for zero hyperfine coupling");
    double wait = 1.0 / (2.0 * params.hyperfine_hz);
    PulseSchedule sched;
    Segment p1;
    p1.kind = SegmentKind::instant_rotation;
    p1.target = Target::electron;
    p1.axis = Axis::x;
    p1.angle_rad = pi / 2.0;
    p1.label = "mw pi/2";
    Segment freeseg;
    freeseg.kind = SegmentKind::free;
    freeseg.duration_s = wait;
    freeseg.label = "free 1/(2A)";
    sched.segments = {p1, freeseg, p1};
    sched.segments.back().label = "mw pi/2";
    sched.add_marker("half-hyperfine wait", wait / 2.0);
    return sched;
}

/// Execute a schedule's segments in order (markers are annotations only).
inline Mat4 run_schedule(Mat4 rho, const PulseSchedule& sched, SequenceCtx& ctx) {
    for (const auto& seg : sched.segments) {
        EvolveResult r = evolve_segment(rho, seg, ctx.ham, ctx.law, ctx.clock, ctx.wall_time);
        rho = r.rho;
        ctx.clock = r.clock;
        ctx.wall_time += seg.duration_s;
    }
    return rho;
}

inline Mat4 encode(const Mat4& rho, SequenceCtx& ctx, CodeBasis code = CodeBasis::plus_minus) {
    Mat4 u = gates::encode_unitary(code);
    return apply_gate_penalty(u * rho * u.adjoint(), ctx.gate_penalty);
}

inline Mat4 decode(const Mat4& rho, SequenceCtx& ctx, CodeBasis code = CodeBasis::plus_minus) {
    Mat4 u = gates::decode_unitary(code);
    return apply_gate_penalty(u * rho * u.adjoint(), ctx.gate_penalty);
}

/// One correction round: decode -> optical reset -> re-encode. Restarts the
/// dephasing clock when the law says resets re-randomize the electron phase.
/// For an error-free code-space input the round is exactly transparent.
inline Mat4 ec_round(const Mat4& rho_in, SequenceCtx& ctx, CodeBasis code = CodeBasis::plus_minus) {
    Mat4 rho = decode(rho_in, ctx, code);
    rho = optical_reset(rho, ctx.reset);
    if (ctx.law.clock_mode == ClockMode::per_reset) ctx.clock = 0.0;
    Mat4 u = gates::reencode_unitary(code);
    return apply_gate_penalty(u * rho * u.adjoint(), ctx.gate_penalty);
}

/// Finite resonant MW drive at the given Rabi frequency under the full noise
/// model. By default the drive is selective: it acts on the transition the
/// MW is resonant with (nuclear up for the default detunings).
inline Mat4 sensing_block(const Mat4& rho, SequenceCtx& ctx, double duration_s, double rabi_hz,
                          bool selective = true) {
    if (duration_s == 0.0) return rho;
    Segment seg;
    seg.kind = SegmentKind::mw_drive;
    seg.duration_s = duration_s;
    seg.axis = Axis::x;
    seg.amplitude_hz = rabi_hz;
    if (selective) seg.conditional_on = NuclearState::up;
    seg.label = "sensing drive";
    EvolveResult r = evolve_segment(rho, seg, ctx.ham, ctx.law, ctx.clock, ctx.wall_time);
    ctx.clock = r.clock;
    ctx.wall_time += duration_s;
    return r.rho;
}

/// CPMG timing: tau/2 - pi - tau - pi - ... - tau/2 with electron x pulses.
/// The AC signal runs phase-locked through the whole block; spacing at
/// resonance is 1/(2 f_signal) so the toggling rectifies the signal.
inline Mat4 cpmg_block(const Mat4& rho_in, SequenceCtx& ctx, int n_pulses, double spacing_s,
                       const AcSignal& signal) {
    if (n_pulses < 1) throw std::invalid_argument("cpmg_block: n_pulses >= 1 required");
    Mat4 rho = rho_in;
    auto free_with_signal = [&](double dur) {
        Segment seg;
        seg.kind = SegmentKind::free;
        seg.duration_s = dur;
        seg.signal = signal;
        seg.label = "cpmg free";
        EvolveResult r = evolve_segment(rho, seg, ctx.ham, ctx.law, ctx.clock, ctx.wall_time);
        rho = r.rho;
        ctx.clock = r.clock;
        ctx.wall_time += dur;
    };
    free_with_signal(spacing_s / 2.0);
    for (int k = 0; k < n_pulses; ++k) {
        rho = instant_rotation(rho, Target::electron, Axis::x, pi);
        free_with_signal(k + 1 < n_pulses ? spacing_s : spacing_s / 2.0);
    }
    return rho;
}

/// Conditional nuclear pi/2 (on electron |0>) converting the stored nuclear
/// phase into population. Convention pinned in the docs: code phase 0 maps to
/// P(up) = 0, so P(up) = (1 - C cos(phi))/2 for code-space input.
inline Mat4 readout_map(const Mat4& rho) {
    return instant_rotation(rho, Target::nuclear, Axis::y, pi / 2.0, Condition{ElectronState::e0});
}

inline double p_up(const Mat4& rho) {
    return (rho * nuclear_projector(NuclearState::up)).trace().real();
}

/// Deterministic hyperfine frame phase accumulated by the z-basis code during
/// a CPMG block: the electron spends equal time in both manifolds, so the
/// nuclear reference rotates at A/2 ("half of the hyperfine coupling").
/// The phase-locked readout counter-rotates it.
inline double cpmg_frame_phase(const HamiltonianParams& ham, double cpmg_duration_s) {
    return two_pi * 0.5 * ham.hyperfine_hz * cpmg_duration_s;
}

struct PhaseBudget {
    double phi_code = 0.0;
    double phi_error = 0.0;
    double delta_phi = 0.0;
};

/// Phase bookkeeping between an error and its correction: in the error
/// subspace the rotation axis is flipped, so the register loses phase at
/// twice the code-space rate until the next correction.
inline PhaseBudget phase_mismatch(double rabi_hz, double t_error_s, double t_correct_s) {
    if (t_error_s > t_correct_s)
        throw std::invalid_argument("phase_mismatch: error must precede correction");
    double gap = t_correct_s - t_error_s;
    PhaseBudget b;
    b.phi_code = pi * rabi_hz * gap;
    b.phi_error = -b.phi_code;
    b.delta_phi = std::abs(b.phi_code - b.phi_error);
    return b;
}

inline std::string PulseSchedule::to_text() const {
    std::ostringstream os;
    os << "schedule segments=" << segments.size() << " total=" << total_duration() << "s\n";
    int i = 0;
    for (const auto& s : segments) {
        os << "  [" << i++ << "] ";
        switch (s.kind) {
            case SegmentKind::free: os << "free"; break;
            case SegmentKind::mw_drive: os << "mw_drive"; break;
            case SegmentKind::rf_drive: os << "rf_drive"; break;
            case SegmentKind::instant_rotation: os << "instant_rotation"; break;
        }
        os << " dur=" << s.duration_s;
        if (s.kind == SegmentKind::instant_rotation)
            os << " target=" << (s.target == Target::electron ? "electron" : "nuclear")
               << " axis=" << axis_char(s.axis) << " angle=" << s.angle_rad;
        if (s.kind == SegmentKind::mw_drive || s.kind == SegmentKind::rf_drive)
            os << " axis=" << axis_char(s.axis) << " amp=" << s.amplitude_hz;
        if (s.conditional_on) {
            os << " cond=";
            if (std::holds_alternative<NuclearState>(*s.conditional_on))
                os << (std::get<NuclearState>(*s.conditional_on) == NuclearState::up ? "nuc_up" : "nuc_down");
            else
                os << (std::get<ElectronState>(*s.conditional_on) == ElectronState::e0 ? "el_0" : "el_m1");
        }
        if (s.signal && s.signal->amplitude_hz != 0.0)
            os << " signal=" << s.signal->amplitude_hz << "@" << s.signal->frequency_hz;
        os << " noise=" << (s.noise_on ? "on" : "off");
        if (!s.label.empty()) os << " # " << s.label;
        os << "\n";
    }
    for (const auto& [name, at] : markers) os << "  marker " << name << " @ " << at << "s\n";
    return os.str();
}

}  // namespace qsec
