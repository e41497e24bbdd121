#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numbers>

namespace qsec {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec2 = Eigen::Vector2cd;
using Vec4 = Eigen::Vector4cd;

inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double pi = std::numbers::pi;

template <typename M>
M dagger(const M& m) {
    return m.adjoint();
}

inline Mat4 commutator(const Mat4& a, const Mat4& b) { return a * b - b * a; }
inline Mat4 anticommutator(const Mat4& a, const Mat4& b) { return a * b + b * a; }

inline double hermiticity_defect(const Mat4& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline double unitarity_defect(const Mat4& u) {
    return (u.adjoint() * u - Mat4::Identity()).cwiseAbs().maxCoeff();
}

/// Smallest eigenvalue of the Hermitian part; density matrices must keep this >= -tol.
inline double min_eigenvalue(const Mat4& rho) {
    Mat4 h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat4> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

inline bool is_valid_density_matrix(const Mat4& rho, double tol = 1e-9) {
    if (hermiticity_defect(rho) > tol) return false;
    if (std::abs(rho.trace().real() - 1.0) > tol) return false;
    if (std::abs(rho.trace().imag()) > tol) return false;
    return min_eigenvalue(rho) >= -tol;
}

inline Mat4 tensor(const Mat2& a, const Mat2& b) {
    Mat4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

inline Vec4 tensor(const Vec2& a, const Vec2& b) {
    Vec4 out;
    out << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
    return out;
}

inline Mat2 pauli_x() { return (Mat2() << 0, 1, 1, 0).finished(); }
inline Mat2 pauli_y() { return (Mat2() << 0, Complex(0, -1), Complex(0, 1), 0).finished(); }
inline Mat2 pauli_z() { return (Mat2() << 1, 0, 0, -1).finished(); }

/// exp(-i angle sigma_axis / 2) on a single qubit.
inline Mat2 su2_rotation(char axis, double angle) {
    Mat2 s;
    switch (axis) {
        case 'x': s = pauli_x(); break;
        case 'y': s = pauli_y(); break;
        default:  s = pauli_z(); break;
    }
    return std::cos(0.5 * angle) * Mat2::Identity() -
           Complex(0, 1) * std::sin(0.5 * angle) * s;
}

}  // namespace qsec
