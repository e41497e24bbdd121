#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "qsec/algebra.hpp"

namespace qsec {

// Register = electron (sensing) qubit x nuclear (memory) qubit.
// Basis ordering is fixed everywhere: |0,up>, |0,down>, |-1,up>, |-1,down>.
enum class ElectronState { e0, em1 };
enum class NuclearState { up, down };

inline int basis_index(ElectronState e, NuclearState n) {
    return 2 * (e == ElectronState::em1 ? 1 : 0) + (n == NuclearState::down ? 1 : 0);
}

inline Vec2 electron_ket(ElectronState e) {
    return e == ElectronState::e0 ? Vec2(1, 0) : Vec2(0, 1);
}

inline Vec2 nuclear_ket(NuclearState n) {
    return n == NuclearState::up ? Vec2(1, 0) : Vec2(0, 1);
}

/// |+> = (|0> + i|-1>)/sqrt(2), |-> = (|0> - i|-1>)/sqrt(2).
inline Vec2 electron_plus() { return Vec2(Complex(1, 0), Complex(0, 1)) / std::sqrt(2.0); }
inline Vec2 electron_minus() { return Vec2(Complex(1, 0), Complex(0, -1)) / std::sqrt(2.0); }

inline Vec4 basis_ket(ElectronState e, NuclearState n) {
    return tensor(electron_ket(e), nuclear_ket(n));
}

struct SpinOps {
    Mat4 sz, sx, sy;  // electron, sigma/2 x identity
    Mat4 iz, ix, iy;  // nuclear,  identity x sigma/2
};

/// Spin-1/2 operators for both qubits (eigenvalues +-1/2) in the fixed ordering.
inline const SpinOps& spin_ops() {
    static const SpinOps ops = [] {
        SpinOps o;
        Mat2 id = Mat2::Identity();
        o.sz = tensor(Mat2(0.5 * pauli_z()), id);
        o.sx = tensor(Mat2(0.5 * pauli_x()), id);
        o.sy = tensor(Mat2(0.5 * pauli_y()), id);
        o.iz = tensor(id, Mat2(0.5 * pauli_z()));
        o.ix = tensor(id, Mat2(0.5 * pauli_x()));
        o.iy = tensor(id, Mat2(0.5 * pauli_y()));
        return o;
    }();
    return ops;
}

inline std::map<std::string, Mat4> spin_operators() {
    const SpinOps& o = spin_ops();
    return {{"Sz", o.sz}, {"Sx", o.sx}, {"Sy", o.sy},
            {"Iz", o.iz}, {"Ix", o.ix}, {"Iy", o.iy}};
}

/// Projectors used for conditioned pulses and readout bookkeeping.
inline Mat4 electron_projector(ElectronState e) {
    Vec2 k = electron_ket(e);
    return tensor(Mat2(k * k.adjoint()), Mat2::Identity());
}

inline Mat4 nuclear_projector(NuclearState n) {
    Vec2 k = nuclear_ket(n);
    return tensor(Mat2::Identity(), Mat2(k * k.adjoint()));
}

inline Mat4 pure_state(const Vec4& amplitudes) {
    double norm = amplitudes.norm();
    if (norm < 1e-300) throw std::invalid_argument("pure_state: zero amplitude vector");
    Vec4 psi = amplitudes / norm;
    return psi * psi.adjoint();
}

inline Mat4 pure_state(ElectronState e, NuclearState n) {
    return pure_state(basis_ket(e, n));
}

/// <psi| rho |psi> for a normalized target; real by construction for Hermitian rho.
inline double fidelity(const Mat4& rho, const Vec4& target) {
    Vec4 psi = target / target.norm();
    Complex v = (psi.adjoint() * rho * psi)(0, 0);
    return v.real();
}

inline Mat2 partial_trace_electron(const Mat4& rho) {
    Mat2 out = Mat2::Zero();
    for (int e = 0; e < 2; ++e)
        for (int n1 = 0; n1 < 2; ++n1)
            for (int n2 = 0; n2 < 2; ++n2)
                out(n1, n2) += rho(2 * e + n1, 2 * e + n2);
    return out;
}

inline Mat2 partial_trace_nuclear(const Mat4& rho) {
    Mat2 out = Mat2::Zero();
    for (int n = 0; n < 2; ++n)
        for (int e1 = 0; e1 < 2; ++e1)
            for (int e2 = 0; e2 < 2; ++e2)
                out(e1, e2) += rho(2 * e1 + n, 2 * e2 + n);
    return out;
}

inline double purity(const Mat4& rho) { return (rho * rho).trace().real(); }

}  // namespace qsec
