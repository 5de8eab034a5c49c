// qubit.hpp — stationary-basis determination on a single qubit
//
// An unknown qubit state rho = (I + s.sigma)/2 evolves under an unknown field
// Hamiltonian H = Omega e.sigma.  One joint readout of the three Pauli
// couplings lands near +e or -e (probability (1 +- e.s)/2) and so determines
// the field axis, and with it both stationary states, up to a global sign.
// Omega never enters the outcome.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "jpm/channel.hpp"

namespace jpm {

struct BlochState {
    Eigen::Vector3d s = Eigen::Vector3d::Zero(); // |s| <= 1
};

struct FieldConfig {
    double omega = 1.0;      // field strength, > 0
    Eigen::Vector3d axis;    // unit vector e
};

SystemState make_qubit_state(const BlochState& b);

// H = Omega e.sigma; the axis must come in normalized, no silent rescaling.
HermitianOperator make_field_hamiltonian(const FieldConfig& f);

// Channel coupling (sigma_x, sigma_y, sigma_z) to three detectors.  Ascending
// eigenvalue order puts the -Omega branch at index 0 and +Omega at index 1.
IdealChannel make_pauli_channel(const FieldConfig& f, const Eigen::Vector3d& deltas);

// Keeps the +-e shift gap resolvable at kappa = 5.
inline constexpr double kMaxQubitDelta = 0.2;

// +1 / -1 for classified branch index 1 / 0.
std::optional<int> branch_sign(const std::optional<int>& classified_index);

struct AxisEstimate {
    Eigen::Vector3d e_hat = Eigen::Vector3d::UnitZ(); // unit, sign-free
    std::optional<double> angular_error;              // radians vs supplied ground truth
    int n_samples = 0;
};

struct QubitRunResult {
    ReadoutSample sample;
    AxisEstimate one_shot; // readout direction x/|x|
};

QubitRunResult run_qubit_protocol(const BlochState& b, const FieldConfig& f, const Eigen::Vector3d& deltas,
                                  std::uint64_t seed, double kappa = kDefaultKappa);

// Principal eigenvector of the sample scatter matrix sum x x^T: sign-free by
// construction.  Fails on clouds whose top two scatter eigenvalues coincide.
AxisEstimate estimate_axis(const std::vector<Eigen::Vector3d>& samples,
                           const std::optional<Eigen::Vector3d>& ground_truth = std::nullopt);

// Projective collapse (I +- e.sigma)/2 onto the classified branch.
SystemState post_measurement_state(const std::optional<int>& branch, const FieldConfig& f);

} // namespace jpm
