#include "jpm/qubit.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace jpm {

namespace {

Matrix bloch_matrix(const Eigen::Vector3d& r) {
    Matrix m(2, 2);
    m(0, 0) = Complex(1.0 + r.z(), 0.0);
    m(0, 1) = Complex(r.x(), -r.y());
    m(1, 0) = Complex(r.x(), r.y());
    m(1, 1) = Complex(1.0 - r.z(), 0.0);
    return 0.5 * m;
}

} // namespace

SystemState make_qubit_state(const BlochState& b) {
    const double len = b.s.norm();
    if (len > 1.0 + 1e-12)
        throw BlochVectorTooLong("make_qubit_state: |s| = " + std::to_string(len) + " exceeds 1");
    return SystemState::mixed(bloch_matrix(b.s));
}

HermitianOperator make_field_hamiltonian(const FieldConfig& f) {
    if (!(f.omega > 0.0)) throw InvalidState("make_field_hamiltonian: omega must be > 0");
    if (std::abs(f.axis.norm() - 1.0) > 1e-12)
        throw NonUnitAxis("make_field_hamiltonian: |axis| = " + std::to_string(f.axis.norm()) +
                          ", expected a unit vector");
    return HermitianOperator(f.omega * (f.axis.x() * pauli_x() + f.axis.y() * pauli_y() + f.axis.z() * pauli_z()));
}

IdealChannel make_pauli_channel(const FieldConfig& f, const Eigen::Vector3d& deltas) {
    SpectralDecomposition basis = spectral_decompose(make_field_hamiltonian(f));
    const ExpectationTable table = stationary_expectations(pauli_observables(), basis);
    DetectorBank bank = make_detector_bank({deltas.x(), deltas.y(), deltas.z()});
    return make_ideal_channel(std::move(basis), table, std::move(bank));
}

std::optional<int> branch_sign(const std::optional<int>& classified_index) {
    if (!classified_index) return std::nullopt;
    return *classified_index == 1 ? +1 : -1;
}

QubitRunResult run_qubit_protocol(const BlochState& b, const FieldConfig& f, const Eigen::Vector3d& deltas,
                                  std::uint64_t seed, double kappa) {
    for (int i = 0; i < 3; ++i)
        if (!(deltas(i) > 0.0) || deltas(i) > kMaxQubitDelta)
            throw NonPositiveDispersion("run_qubit_protocol: deltas must lie in (0, 0.2]");

    const IdealChannel channel = make_pauli_channel(f, deltas);
    const SystemState state = make_qubit_state(b);

    QubitRunResult result;
    result.sample = sample_readout(channel, state, seed, kappa);

    const double len = result.sample.x.norm();
    if (len <= 0.0) throw DegenerateSampleCloud("run_qubit_protocol: readout vector has zero norm");
    result.one_shot.e_hat = Eigen::Vector3d(result.sample.x) / len;
    result.one_shot.n_samples = 1;
    const double dot = std::abs(result.one_shot.e_hat.dot(f.axis));
    result.one_shot.angular_error = std::acos(std::min(1.0, dot));
    return result;
}

AxisEstimate estimate_axis(const std::vector<Eigen::Vector3d>& samples,
                           const std::optional<Eigen::Vector3d>& ground_truth) {
    if (samples.size() < 2) throw InvalidState("estimate_axis: at least 2 samples required");

    Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
    for (const Eigen::Vector3d& x : samples) scatter += x * x.transpose();
    scatter /= static_cast<double>(samples.size());

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(scatter);
    const Eigen::Vector3d values = solver.eigenvalues(); // ascending
    const double top = values(2), second = values(1);
    if (top - second <= 1e-9 * std::max(1.0, top))
        throw DegenerateSampleCloud("estimate_axis: top two scatter eigenvalues coincide; the cloud carries no axis");

    Eigen::Vector3d axis = solver.eigenvectors().col(2);
    axis.normalize();
    // sign convention: first entry of magnitude > 1e-12 made positive
    for (int i = 0; i < 3; ++i) {
        if (std::abs(axis(i)) > 1e-12) {
            if (axis(i) < 0.0) axis = -axis;
            break;
        }
    }

    AxisEstimate estimate;
    estimate.e_hat = axis;
    estimate.n_samples = static_cast<int>(samples.size());
    if (ground_truth) {
        const Eigen::Vector3d truth = ground_truth->normalized();
        estimate.angular_error = std::acos(std::min(1.0, std::abs(axis.dot(truth))));
    }
    return estimate;
}

SystemState post_measurement_state(const std::optional<int>& branch, const FieldConfig& f) {
    if (!branch) throw AmbiguousBranch("post_measurement_state: readout did not classify a branch");
    if (*branch != 1 && *branch != -1)
        throw InvalidState("post_measurement_state: branch must be +1 or -1");
    if (std::abs(f.axis.norm() - 1.0) > 1e-12)
        throw NonUnitAxis("post_measurement_state: field axis must be a unit vector");
    return SystemState::mixed(bloch_matrix(static_cast<double>(*branch) * f.axis));
}

} // namespace jpm
