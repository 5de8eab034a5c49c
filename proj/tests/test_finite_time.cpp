#include <doctest.h>

#include <cmath>
#include <complex>

#include "jpm/finite_time.hpp"
#include "test_support.hpp"

using namespace jpm;
using jpm::testing::random_hermitian;

namespace {

const Complex kI{0.0, 1.0};

FiniteTimeConfig qubit_xz_config(double duration, long steps = 0) {
    return make_finite_time_config(duration, {HermitianOperator(pauli_x())},
                                   spectral_decompose(HermitianOperator(pauli_z())), steps);
}

// commuting pair: diagonal H and diagonal observable
FiniteTimeConfig commuting_config(double duration, long steps = 0) {
    Matrix h = Matrix::Zero(3, 3);
    h.diagonal() << 0, 1, 2;
    Matrix a = Matrix::Zero(3, 3);
    a.diagonal() << 5, 6, 7;
    return make_finite_time_config(duration, {HermitianOperator(a)},
                                   spectral_decompose(HermitianOperator(h)), steps);
}

std::vector<Eigen::VectorXd> shifts_of(const FiniteTimeConfig& cfg) {
    const auto table = stationary_expectations(cfg.observables, cfg.hamiltonian);
    std::vector<Eigen::VectorXd> shifts;
    for (int n = 0; n < cfg.hamiltonian.dimension(); ++n) shifts.push_back(table.shift_vector(n));
    return shifts;
}

} // namespace

TEST_CASE("zero coupling gives the identity") {
    const auto cfg = qubit_xz_config(7.0, 32);
    const Matrix u = conditional_unitary(Eigen::VectorXd::Zero(1), cfg);
    CHECK((u - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);

    const auto u_inf = ideal_conditional_unitary(Eigen::VectorXd::Zero(1), shifts_of(cfg), cfg.hamiltonian);
    CHECK((u_inf - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("commuting observables collapse the time ordering exactly") {
    Eigen::VectorXd p(1);
    p << 1.3;
    for (double t : {0.5, 20.0, 300.0}) {
        for (long steps : {1L, 7L, 64L}) {
            const auto cfg = commuting_config(t, steps);
            const Matrix u = conditional_unitary(p, cfg);
            Matrix expected = Matrix::Zero(3, 3);
            for (int n = 0; n < 3; ++n) expected(n, n) = std::exp(-kI * Complex(p(0) * (5.0 + n), 0));
            CHECK((u - expected).cwiseAbs().maxCoeff() <= 1e-10);
        }
    }
}

TEST_CASE("step refinement: 10x finer slicing moves the result below 1e-8") {
    Eigen::VectorXd p(1);
    p << 0.5;
    const Matrix coarse = conditional_unitary(p, qubit_xz_config(20.0, 30000));
    const Matrix fine = conditional_unitary(p, qubit_xz_config(20.0, 300000));
    CHECK((coarse - fine).norm() <= 1e-8);
}

TEST_CASE("default step rule respects the 10-slices-per-period floor") {
    const auto basis = spectral_decompose(HermitianOperator(pauli_z())); // gap 2
    for (double t : {1.0, 20.0, 555.0}) {
        const long floor_rule = static_cast<long>(std::ceil(10.0 * t * 2.0 / 6.283185307179586));
        CHECK(default_step_count(t, basis) >= floor_rule);
    }
}

TEST_CASE("doubling the default step count changes the result by under 1e-6") {
    Eigen::VectorXd p(1);
    for (double t : {20.0, 100.0}) {
        for (double momentum : {0.3, 1.0}) {
            p << momentum;
            const auto cfg = qubit_xz_config(t);
            const auto doubled = qubit_xz_config(t, 2 * cfg.steps);
            CHECK((conditional_unitary(p, cfg) - conditional_unitary(p, doubled)).norm() <= 1e-6);
        }
    }
}

TEST_CASE("conditional unitaries are unitary") {
    SplitMix64 g(808);
    for (std::uint64_t seed : {810u, 811u}) {
        const auto cfg = make_finite_time_config(
            5.0, {random_hermitian(seed, 3), random_hermitian(seed + 5, 3)}, // two detectors
            spectral_decompose(random_hermitian(seed + 10, 3)), 200);
        Eigen::VectorXd p(2);
        p << 2.0 * g.uniform01() - 1.0, 2.0 * g.uniform01() - 1.0;
        const Matrix u = conditional_unitary(p, cfg);
        CHECK((u.adjoint() * u - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("ideal conditional unitary of the qubit Pauli coupling") {
    const auto basis = spectral_decompose(HermitianOperator(pauli_z()));
    const auto table = stationary_expectations(pauli_observables(), basis);
    std::vector<Eigen::VectorXd> shifts{table.shift_vector(0), table.shift_vector(1)};

    Eigen::VectorXd p(3);
    p << 0.3, -0.7, 1.1;
    const Matrix u = ideal_conditional_unitary(p, shifts, basis);

    // exp(-i p.e)|+><+| + exp(+i p.e)|-><-| with e = z: phases exp(-+ i p_z)
    Matrix expected = Matrix::Zero(2, 2);
    expected(0, 0) = std::exp(-kI * Complex(1.1, 0));
    expected(1, 1) = std::exp(+kI * Complex(1.1, 0));
    CHECK((u - expected).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("ideal conditional unitary with diagonal shifts is a phase ladder") {
    const auto cfg = commuting_config(1.0, 1);
    Eigen::VectorXd p(1);
    p << 3.14159265358979323846;
    const Matrix u = ideal_conditional_unitary(p, shifts_of(cfg), cfg.hamiltonian);
    for (int n = 0; n < 3; ++n) {
        const Complex expected = std::exp(-kI * Complex(p(0) * (5.0 + n), 0));
        CHECK(std::abs(u(n, n) - expected) <= 1e-12);
    }
}

TEST_CASE("channel distance vanishes in the commuting case") {
    const auto bank = make_detector_bank({0.5});
    const auto grid = build_momentum_grid(bank, 16, 5.0);
    for (double t : {1.0, 10.0, 100.0}) {
        const auto cfg = commuting_config(t, 50);
        CHECK(channel_distance(cfg, grid, shifts_of(cfg)) <= 1e-12);
    }
}

TEST_CASE("channel distance is stable under grid refinement") {
    const auto bank = make_detector_bank({0.5});
    const auto cfg = qubit_xz_config(100.0, 2000);
    const auto shifts = shifts_of(cfg);
    const double coarse = channel_distance(cfg, build_momentum_grid(bank, 128, 5.0), shifts);
    const double fine = channel_distance(cfg, build_momentum_grid(bank, 256, 5.0), shifts);
    CHECK(std::abs(coarse - fine) / coarse < 1e-6);
}

TEST_CASE("fixed-momentum convergence: decade maxima decrease") {
    Eigen::VectorXd p(1);
    p << 0.7;
    const auto basis = spectral_decompose(HermitianOperator(pauli_z()));
    const std::vector<HermitianOperator> observables{HermitianOperator(pauli_x())};
    const auto table = stationary_expectations(observables, basis);
    std::vector<Eigen::VectorXd> shifts{table.shift_vector(0), table.shift_vector(1)};

    double previous_decade_max = std::numeric_limits<double>::infinity();
    for (int decade = 0; decade < 2; ++decade) {
        double decade_max = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double t = 10.0 * std::pow(10.0, decade + i / 4.0);
            const auto cfg = make_finite_time_config(t, observables, basis);
            const double dist =
                (conditional_unitary(p, cfg) - ideal_conditional_unitary(p, shifts, basis)).norm();
            decade_max = std::max(decade_max, dist);
        }
        CHECK(decade_max < previous_decade_max);
        previous_decade_max = decade_max;
    }
}

TEST_CASE("time-averaged off-diagonals: closed form, bound, limits") {
    const double gap = 2.0; // sigma_z spectrum

    SUBCASE("full oscillation periods average to zero") {
        const auto cfg = qubit_xz_config(3.0 * 3.14159265358979323846, 1); // T * gap = 6 pi
        const auto averaged = time_averaged_offdiagonals(cfg);
        CHECK(std::abs(averaged[0](0, 1)) <= 1e-12);
        CHECK(std::abs(averaged[0](1, 0)) <= 1e-12);
    }

    SUBCASE("T = 100 obeys the 2/(T gap) bound") {
        const auto averaged = time_averaged_offdiagonals(qubit_xz_config(100.0, 1));
        // |<n|sigma_x|m>| = 1 in the z eigenbasis
        CHECK(std::abs(averaged[0](0, 1)) <= 2.0 / (100.0 * gap));
        CHECK(std::abs(averaged[0](0, 1)) ==
              doctest::Approx(std::abs((std::exp(kI * Complex(gap * 100.0, 0)) - 1.0) /
                                       (kI * Complex(gap * 100.0, 0)))));
    }

    SUBCASE("the T -> 0 limit recovers the bare matrix element") {
        const auto cfg = qubit_xz_config(1e-9, 1);
        const auto averaged = time_averaged_offdiagonals(cfg);
        const Matrix a_eig =
            cfg.hamiltonian.eigenvectors.adjoint() * pauli_x() * cfg.hamiltonian.eigenvectors;
        CHECK(std::abs(averaged[0](0, 1) - a_eig(0, 1)) <= 1e-6);
    }

    SUBCASE("diagonal entries are zeroed") {
        const auto averaged = time_averaged_offdiagonals(qubit_xz_config(13.0, 1));
        CHECK(std::abs(averaged[0](0, 0)) == 0.0);
        CHECK(std::abs(averaged[0](1, 1)) == 0.0);
    }
}

TEST_CASE("suppression bound holds for random draws") {
    for (std::uint64_t seed : {900u, 901u}) {
        const auto basis = spectral_decompose(random_hermitian(seed, 4));
        const HermitianOperator a = random_hermitian(seed + 50, 4);
        const Matrix a_eig = basis.eigenvectors.adjoint() * a.matrix() * basis.eigenvectors;
        for (double t : {0.1, 3.0, 77.0}) {
            const auto cfg = make_finite_time_config(t, {a}, basis, 1);
            const auto averaged = time_averaged_offdiagonals(cfg);
            for (int n = 0; n < 4; ++n)
                for (int m = 0; m < 4; ++m) {
                    if (n == m) continue;
                    const double gap = std::abs(basis.eigenvalues(n) - basis.eigenvalues(m));
                    CHECK(std::abs(averaged[0](n, m)) <= 2.0 * std::abs(a_eig(n, m)) / (t * gap) + 1e-12);
                }
        }
    }
}

TEST_CASE("a degenerate pair aborts the off-diagonal average") {
    SpectralDecomposition degenerate;
    degenerate.eigenvalues = RealVector(3);
    degenerate.eigenvalues << 0.0, 1e-12, 1.0;
    degenerate.eigenvectors = Matrix::Identity(3, 3);
    degenerate.min_gap = 1e-12;

    FiniteTimeConfig cfg;
    cfg.duration = 10.0;
    cfg.steps = 1;
    cfg.observables = {random_hermitian(950, 3)};
    cfg.hamiltonian = degenerate;
    CHECK_THROWS_AS(time_averaged_offdiagonals(cfg), DegenerateSpectrum);
}

TEST_CASE("envelope slope fit recovers exact power laws") {
    std::vector<std::pair<double, double>> points;
    for (int i = 0; i <= 16; ++i) {
        const double t = 10.0 * std::pow(10.0, i / 8.0);
        points.emplace_back(t, 5.0 / (t * t));
    }
    CHECK(fit_envelope_slope(points) == doctest::Approx(-2.0).epsilon(1e-9));
}

TEST_CASE("convergence sweeps report decreasing distances and CSV rows") {
    const auto basis = spectral_decompose(HermitianOperator(pauli_z()));
    const std::vector<HermitianOperator> observables{HermitianOperator(pauli_x())};
    const auto table = stationary_expectations(observables, basis);
    std::vector<Eigen::VectorXd> shifts{table.shift_vector(0), table.shift_vector(1)};
    const auto grid = build_momentum_grid(make_detector_bank({0.5}), 16, 5.0);

    const auto curve = sweep_channel_distance(observables, basis, shifts, grid, 10.0, 1000.0, 2);
    REQUIRE(curve.points.size() == 5);
    for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
        CHECK(curve.points[i].first < curve.points[i + 1].first);
        CHECK(curve.points[i].second >= 0.0);
    }
    // decade maxima decrease: [10, 100) vs [100, 1000]
    const double first = std::max(curve.points[0].second, curve.points[1].second);
    const double second =
        std::max({curve.points[2].second, curve.points[3].second, curve.points[4].second});
    CHECK(second < first);

    const std::string csv = convergence_csv(curve);
    CHECK(csv.rfind("T,D\n", 0) == 0);
    CHECK(csv.find("# envelope_fit_slope = ") != std::string::npos);
}
