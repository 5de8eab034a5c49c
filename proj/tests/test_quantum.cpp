#include <doctest.h>

#include <cmath>

#include "jpm/quantum.hpp"
#include "test_support.hpp"

using namespace jpm;
using jpm::testing::random_hermitian;
using jpm::testing::random_pure_amplitudes;
using jpm::testing::random_unitary;

TEST_CASE("sigma_z decomposes onto the standard basis, eigenvalues ascending") {
    const auto basis = spectral_decompose(HermitianOperator(pauli_z()));
    CHECK(basis.eigenvalues(0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(basis.eigenvalues(1) == doctest::Approx(+1.0).epsilon(1e-12));
    // phase convention: largest-modulus entry real positive
    CHECK(std::abs(basis.eigenvectors(1, 0) - Complex(1, 0)) < 1e-12);
    CHECK(std::abs(basis.eigenvectors(0, 0)) < 1e-12);
    CHECK(std::abs(basis.eigenvectors(0, 1) - Complex(1, 0)) < 1e-12);
    CHECK(std::abs(basis.eigenvectors(1, 1)) < 1e-12);
    CHECK(basis.min_gap == doctest::Approx(2.0));
}

TEST_CASE("field of strength 2 along z has eigenvalues -2, +2") {
    const auto basis = spectral_decompose(HermitianOperator(2.0 * pauli_z()));
    CHECK(basis.eigenvalues(0) == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(basis.eigenvalues(1) == doctest::Approx(+2.0).epsilon(1e-12));
}

TEST_CASE("random 4x4 draws reconstruct from their spectral data") {
    for (std::uint64_t seed : {11u, 22u, 33u}) {
        const HermitianOperator h = random_hermitian(seed, 4);
        const auto basis = spectral_decompose(h);

        // independent reconstruction: explicit rank-one sum
        Matrix rebuilt = Matrix::Zero(4, 4);
        for (int n = 0; n < 4; ++n)
            rebuilt += basis.eigenvalues(n) * (basis.eigenstate(n) * basis.eigenstate(n).adjoint());
        CHECK((rebuilt - h.matrix()).norm() <= 1e-9);

        // unitarity of the eigenvector matrix
        const Matrix gram = basis.eigenvectors.adjoint() * basis.eigenvectors;
        CHECK((gram - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("phase convention is deterministic") {
    const auto basis = spectral_decompose(random_hermitian(7, 5));
    for (int c = 0; c < 5; ++c) {
        Eigen::Index best = 0;
        double best_mod = 0.0;
        for (Eigen::Index r = 0; r < 5; ++r)
            if (std::abs(basis.eigenvectors(r, c)) > best_mod) {
                best_mod = std::abs(basis.eigenvectors(r, c));
                best = r;
            }
        CHECK(basis.eigenvectors(best, c).imag() == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(basis.eigenvectors(best, c).real() > 0.0);
    }
}

TEST_CASE("degenerate spectra are refused") {
    CHECK_THROWS_AS(spectral_decompose(HermitianOperator(Matrix::Identity(2, 2))), DegenerateSpectrum);

    Matrix nearly = Matrix::Zero(3, 3);
    nearly(0, 0) = 1.0;
    nearly(1, 1) = 1.0 + 1e-12; // gap far below 1e-8 x range
    nearly(2, 2) = 2.0;
    CHECK_THROWS_AS(spectral_decompose(HermitianOperator(nearly)), DegenerateSpectrum);
}

TEST_CASE("spectral_decompose requires d >= 2") {
    CHECK_THROWS_AS(spectral_decompose(HermitianOperator(Matrix::Identity(1, 1))), DimensionMismatch);
}

TEST_CASE("non-Hermitian input is rejected") {
    Matrix m(2, 2);
    m << 0, 1, 0, 0;
    CHECK_THROWS_AS(HermitianOperator{m}, InvalidState);
}

TEST_CASE("pauli shifts in a z-field eigenbasis are the axis itself") {
    const auto basis = spectral_decompose(HermitianOperator(pauli_z()));
    const auto table = stationary_expectations(pauli_observables(), basis);

    // index 0 is the -1 eigenstate: shifts -e; index 1: +e, e = (0,0,1)
    const RealVector minus = table.shift_vector(0);
    const RealVector plus = table.shift_vector(1);
    CHECK(minus(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(minus(1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(minus(2) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(plus(2) == doctest::Approx(+1.0).epsilon(1e-12));
}

TEST_CASE("identity observable shifts are all 1") {
    const auto basis = spectral_decompose(random_hermitian(5, 3));
    const auto table = stationary_expectations({HermitianOperator(Matrix::Identity(3, 3))}, basis);
    for (int n = 0; n < 3; ++n) CHECK(table.shifts[0](n) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("commuting diagonal pair: shifts are the observable diagonal") {
    Matrix h = Matrix::Zero(3, 3);
    h.diagonal() << 0, 1, 2;
    Matrix a = Matrix::Zero(3, 3);
    a.diagonal() << 5, 6, 7;
    const auto basis = spectral_decompose(HermitianOperator(h));
    const auto table = stationary_expectations({HermitianOperator(a)}, basis);
    for (int n = 0; n < 3; ++n) {
        CHECK(table.shifts[0](n) == doctest::Approx(5.0 + n).epsilon(1e-12));
        for (int m = 0; m < 3; ++m)
            if (m != n) CHECK(std::abs(table.matrices[0](n, m)) < 1e-12);
    }
}

TEST_CASE("expectation tables are Hermitian with real diagonals") {
    const auto basis = spectral_decompose(random_hermitian(101, 4));
    std::vector<HermitianOperator> observables{random_hermitian(102, 4), random_hermitian(103, 4)};
    const auto table = stationary_expectations(observables, basis);
    for (const Matrix& m : table.matrices) {
        CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-10);
        for (int n = 0; n < 4; ++n) CHECK(std::abs(m(n, n).imag()) <= 1e-12);
    }
}

TEST_CASE("shifts are covariant under a global unitary") {
    const HermitianOperator h = random_hermitian(201, 4);
    std::vector<HermitianOperator> observables{random_hermitian(202, 4), random_hermitian(203, 4)};
    const Matrix w = random_unitary(204, 4);

    const auto table = stationary_expectations(observables, spectral_decompose(h));

    std::vector<HermitianOperator> rotated;
    for (const auto& a : observables) rotated.emplace_back(w * a.matrix() * w.adjoint());
    const HermitianOperator h_rot(w * h.matrix() * w.adjoint());
    const auto table_rot = stationary_expectations(rotated, spectral_decompose(h_rot));

    for (int n = 0; n < 4; ++n)
        CHECK((table.shift_vector(n) - table_rot.shift_vector(n)).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("dimension mismatches are reported") {
    const auto basis = spectral_decompose(HermitianOperator(pauli_z()));
    CHECK_THROWS_AS(stationary_expectations({HermitianOperator(Matrix::Identity(3, 3))}, basis),
                    DimensionMismatch);
}

TEST_CASE("pure states validate normalization") {
    Vector good(2);
    good << Complex(std::sqrt(0.5), 0), Complex(0, std::sqrt(0.5));
    CHECK_NOTHROW(SystemState::pure(good));

    Vector bad(2);
    bad << 1.0, 0.5;
    CHECK_THROWS_AS(SystemState::pure(bad), InvalidState);
}

TEST_CASE("density matrices validate Hermiticity, trace, positivity") {
    Matrix ok(2, 2);
    ok << 0.75, 0, 0, 0.25;
    CHECK_NOTHROW(SystemState::mixed(ok));

    Matrix skew(2, 2);
    skew << 0.5, 0.3, -0.3, 0.5;
    CHECK_THROWS_AS(SystemState::mixed(skew), InvalidState);

    Matrix traceless(2, 2);
    traceless << 0.75, 0, 0, 0.35;
    CHECK_THROWS_AS(SystemState::mixed(traceless), InvalidState);

    Matrix negative(2, 2);
    negative << 1.5, 0, 0, -0.5;
    CHECK_THROWS_AS(SystemState::mixed(negative), InvalidState);
}

TEST_CASE("population agrees between a pure state and its density matrix") {
    const Vector psi = random_pure_amplitudes(301, 3);
    const SystemState pure = SystemState::pure(psi);
    const SystemState mixed = SystemState::mixed(pure.density());

    const auto basis = spectral_decompose(random_hermitian(302, 3));
    for (int n = 0; n < 3; ++n)
        CHECK(pure.population(basis.eigenstate(n)) ==
              doctest::Approx(mixed.population(basis.eigenstate(n))).epsilon(1e-12));
}

TEST_CASE("conversion to a density matrix is explicit") {
    const SystemState pure = SystemState::pure(random_pure_amplitudes(42, 2));
    CHECK_THROWS_AS(pure.matrix(), InvalidState);
    const Matrix rho = pure.density();
    CHECK(std::abs(rho.trace().real() - 1.0) <= 1e-12);
    CHECK((rho * rho - rho).cwiseAbs().maxCoeff() <= 1e-10); // projector
}

TEST_CASE("dimensions above the supported maximum are refused") {
    CHECK_THROWS_AS(HermitianOperator(Matrix::Identity(65, 65)), DimensionMismatch);
}

TEST_CASE("from_parts validates orthonormality and ordering") {
    const auto basis = spectral_decompose(random_hermitian(401, 3));

    RealVector reshuffled(3);
    reshuffled << -4.0, 0.5, 12.0; // arbitrary distinct values, same eigenvectors
    CHECK_NOTHROW(SpectralDecomposition::from_parts(reshuffled, basis.eigenvectors));

    RealVector descending(3);
    descending << 2.0, 1.0, 0.0;
    CHECK_THROWS_AS(SpectralDecomposition::from_parts(descending, basis.eigenvectors), InvalidState);

    Matrix not_orthonormal = basis.eigenvectors;
    not_orthonormal.col(0) *= 1.5;
    RealVector ascending(3);
    ascending << 0.0, 1.0, 2.0;
    CHECK_THROWS_AS(SpectralDecomposition::from_parts(ascending, not_orthonormal), InvalidState);
}
