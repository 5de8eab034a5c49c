// finite_time.hpp — finite-duration propagator and its convergence to the ideal channel
//
// Detector momenta commute with the system-detector coupling, so the joint
// propagator is block-diagonal over momentum: for each momentum vector p the
// system evolves under the time-ordered product
//
//   U_T(p) = Tc exp(-i sum_alpha p_alpha  integral_0^T A_alpha(t) dt / T),
//   A_alpha(t) = exp(+iHt) A_alpha exp(-iHt).
//
// Simulating U_T(p) on a weighted momentum grid replaces a system x detectors
// tensor evolution.  The product is sliced at interval midpoints (second-order
// accurate) with later-time factors on the left.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "jpm/detectors.hpp"
#include "jpm/quantum.hpp"

namespace jpm {

struct FiniteTimeConfig {
    double duration = 0.0;
    long steps = 0;
    std::vector<HermitianOperator> observables;
    SpectralDecomposition hamiltonian;
};

// Slices per fastest Bohr oscillation.  500 keeps step-doubling changes below
// 1e-6 for detector-scale momenta; the contract floor is 10.
inline constexpr double kStepsPerPeriod = 500.0;

long default_step_count(double duration, const SpectralDecomposition& hamiltonian);

// steps = 0 selects the default rule.
FiniteTimeConfig make_finite_time_config(double duration, std::vector<HermitianOperator> observables,
                                         SpectralDecomposition hamiltonian, long steps = 0);

// Time-ordered midpoint product; unitary within 1e-9, lab basis.
Matrix conditional_unitary(const Eigen::VectorXd& p, const FiniteTimeConfig& cfg);

// U_inf(p) = sum_n exp(-i p . shift_n) |n><n|, lab basis.
Matrix ideal_conditional_unitary(const Eigen::VectorXd& p, const std::vector<Eigen::VectorXd>& shifts,
                                 const SpectralDecomposition& basis);

// D(T) = sum over grid nodes of w * |U_T(p) - U_inf(p)|_F^2, product weights
// across detectors, accumulated in node-index order.
double channel_distance(const FiniteTimeConfig& cfg, const MomentumGrid& grid,
                        const std::vector<Eigen::VectorXd>& shifts);

// Closed-form time averages of the interaction-picture off-diagonals:
//   Abar_alpha[n,m] = <n|A_alpha|m> (e^{i(w_n - w_m)T} - 1) / (i (w_n - w_m) T),
// diagonal zeroed.  |Abar[n,m]| <= 2 |<n|A|m>| / (T |w_n - w_m|).
std::vector<Matrix> time_averaged_offdiagonals(const FiniteTimeConfig& cfg);

// ------------------------------- convergence --------------------------------

struct ConvergenceCurve {
    std::vector<std::pair<double, double>> points; // (T, D), T strictly increasing
    double envelope_slope = 0.0;                   // log-log fit through half-decade maxima
};

// Least-squares slope of log10(D) vs log10(T) through the maximum-D point of
// each half-decade bin; D(T) oscillates, its envelope decays cleanly.
double fit_envelope_slope(const std::vector<std::pair<double, double>>& points);

ConvergenceCurve sweep_channel_distance(const std::vector<HermitianOperator>& observables,
                                        const SpectralDecomposition& hamiltonian,
                                        const std::vector<Eigen::VectorXd>& shifts, const MomentumGrid& grid,
                                        double t_min, double t_max, int points_per_decade);

// CSV: "T,D" rows, envelope slope in a trailing comment row.
std::string convergence_csv(const ConvergenceCurve& curve);

} // namespace jpm
