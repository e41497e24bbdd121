#include <catch_amalgamated.hpp>

#include "qsec/hilbert.hpp"
#include "qsec/rng.hpp"

using namespace qsec;
using Catch::Approx;

namespace {

Mat4 random_density(Rng& rng) {
    // Ginibre construction: G G^dag / tr, always a valid state
    Mat4 g;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
    Mat4 rho = g * g.adjoint();
    return rho / rho.trace();
}

}  // namespace

TEST_CASE("spin operators have the fixed basis ordering and spin-1/2 algebra") {
    const auto ops = spin_operators();
    const Mat4& sz = ops.at("Sz");
    CHECK(sz(0, 0).real() == Approx(0.5));
    CHECK(sz(1, 1).real() == Approx(0.5));
    CHECK(sz(2, 2).real() == Approx(-0.5));
    CHECK(sz(3, 3).real() == Approx(-0.5));

    const Mat4& iz = ops.at("Iz");
    CHECK(iz(0, 0).real() == Approx(0.5));
    CHECK(iz(1, 1).real() == Approx(-0.5));

    // [Sx, Sy] = i Sz
    Mat4 comm = commutator(ops.at("Sx"), ops.at("Sy")) - Complex(0, 1) * sz;
    CHECK(comm.cwiseAbs().maxCoeff() < 1e-12);
    // different tensor factors commute
    CHECK(commutator(sz, iz).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(commutator(ops.at("Sx"), ops.at("Iy")).cwiseAbs().maxCoeff() < 1e-12);

    for (const auto& [name, op] : ops) {
        CAPTURE(name);
        CHECK(hermiticity_defect(op) < 1e-12);
        Eigen::SelfAdjointEigenSolver<Mat4> es(op);
        CHECK(es.eigenvalues().minCoeff() == Approx(-0.5));
        CHECK(es.eigenvalues().maxCoeff() == Approx(0.5));
    }
}

TEST_CASE("pure_state on basis labels and superpositions") {
    Mat4 rho = pure_state(ElectronState::e0, NuclearState::up);
    CHECK(rho(0, 0).real() == Approx(1.0));
    CHECK(rho.cwiseAbs().sum() == Approx(1.0));

    // (|+,up> + |-,down>)/sqrt(2): trace 1, purity 1
    Vec4 psi = (tensor(electron_plus(), nuclear_ket(NuclearState::up)) +
                tensor(electron_minus(), nuclear_ket(NuclearState::down))) /
               std::sqrt(2.0);
    Mat4 code = pure_state(psi);
    CHECK(code.trace().real() == Approx(1.0));
    CHECK(purity(code) == Approx(1.0));

    // |+> x |up>: off-diagonal (0,2) magnitude 1/2 (explicit outer product)
    Mat4 plus_up = pure_state(tensor(electron_plus(), nuclear_ket(NuclearState::up)));
    CHECK(std::abs(plus_up(0, 2)) == Approx(0.5));

    CHECK_THROWS_AS(pure_state(Vec4::Zero()), std::invalid_argument);
}

TEST_CASE("fidelity") {
    Vec4 psi = (tensor(electron_plus(), nuclear_ket(NuclearState::up)) +
                tensor(electron_minus(), nuclear_ket(NuclearState::down))) /
               std::sqrt(2.0);
    CHECK(fidelity(pure_state(psi), psi) == Approx(1.0));

    Mat4 mixed = 0.25 * Mat4::Identity();
    CHECK(fidelity(mixed, psi) == Approx(0.25));
    CHECK(fidelity(mixed, basis_ket(ElectronState::em1, NuclearState::down)) == Approx(0.25));

    Rng rng(42);
    for (int k = 0; k < 200; ++k) {
        Mat4 rho = random_density(rng);
        double f = fidelity(rho, psi);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0 + 1e-9);
    }
}

TEST_CASE("partial trace over the electron") {
    // product state: returns the nuclear factor
    Mat2 nuc;
    nuc << 0.7, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.3;
    Vec2 e = electron_plus();
    Mat4 prod = tensor(Mat2(e * e.adjoint()), nuc);
    CHECK((partial_trace_electron(prod) - nuc).cwiseAbs().maxCoeff() < 1e-12);

    // maximally entangled: nuclear side is I/2
    Vec4 bell = (basis_ket(ElectronState::e0, NuclearState::up) +
                 basis_ket(ElectronState::em1, NuclearState::down)) /
                std::sqrt(2.0);
    Mat2 half = partial_trace_electron(pure_state(bell));
    CHECK((half - 0.5 * Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-12);

    // code state: all coherence is electron-nuclear, none purely nuclear
    Vec4 code = (tensor(electron_plus(), nuclear_ket(NuclearState::up)) +
                 tensor(electron_minus(), nuclear_ket(NuclearState::down))) /
                std::sqrt(2.0);
    Mat2 rn = partial_trace_electron(pure_state(code));
    CHECK(std::abs(rn(0, 1)) < 1e-12);

    Rng rng(7);
    for (int k = 0; k < 100; ++k) {
        Mat4 rho = random_density(rng);
        Mat2 rn2 = partial_trace_electron(rho);
        CHECK(rn2.trace().real() == Approx(rho.trace().real()));
        CHECK((rn2 - rn2.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
        Eigen::SelfAdjointEigenSolver<Mat2> es(rn2);
        CHECK(es.eigenvalues().minCoeff() > -1e-12);
    }
}

TEST_CASE("tensor product matches direct 4x4 construction and is associative in effect") {
    Rng rng(3);
    for (int k = 0; k < 50; ++k) {
        Mat2 a, b;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                a(i, j) = Complex(rng.normal(), rng.normal());
                b(i, j) = Complex(rng.normal(), rng.normal());
            }
        Mat4 t = tensor(a, b);
        for (int i1 = 0; i1 < 2; ++i1)
            for (int n1 = 0; n1 < 2; ++n1)
                for (int i2 = 0; i2 < 2; ++i2)
                    for (int n2 = 0; n2 < 2; ++n2)
                        CHECK(std::abs(t(2 * i1 + n1, 2 * i2 + n2) - a(i1, i2) * b(n1, n2)) < 1e-14);
        // vector tensor agrees with matrix tensor through outer products
        Vec2 u(Complex(rng.normal(), rng.normal()), Complex(rng.normal(), rng.normal()));
        Vec2 v(Complex(rng.normal(), rng.normal()), Complex(rng.normal(), rng.normal()));
        Vec4 uv = tensor(u, v);
        Mat4 outer = uv * uv.adjoint();
        Mat4 t2 = tensor(Mat2(u * u.adjoint()), Mat2(v * v.adjoint()));
        CHECK((outer - t2).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("density-matrix validity checks") {
    CHECK(is_valid_density_matrix(0.25 * Mat4::Identity()));
    CHECK(is_valid_density_matrix(pure_state(ElectronState::e0, NuclearState::down)));
    Mat4 bad = 0.5 * Mat4::Identity();
    CHECK_FALSE(is_valid_density_matrix(bad));  // trace 2
    Mat4 neg = Mat4::Zero();
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_FALSE(is_valid_density_matrix(neg));
}
