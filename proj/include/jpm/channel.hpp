// channel.hpp — the ideal (infinite-duration) joint protective measurement
//
// The ideal channel shifts each pointer alpha by the stationary expectation
// value <A_alpha>_n, branching over eigenstates n with weight <n|rho|n>.  Its
// pointer statistics are therefore an exact Gaussian mixture: one component
// per eigenstate, centered on that eigenstate's shift vector.  Hamiltonian
// eigenvalues never enter, only the eigenstates do.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "jpm/detectors.hpp"
#include "jpm/quantum.hpp"

namespace jpm {

// Quantifies "much smaller than": detector alpha resolves the pair (n, m)
// when gap >= kappa * delta_x_alpha.  Reported with every run.
inline constexpr double kDefaultKappa = 5.0;

// ------------------------------ resolvability -------------------------------

struct DetectorGap {
    int alpha = 0;
    double gap = 0.0;
    bool resolved = false; // gap >= kappa * delta_x_alpha (boundary inclusive)
};

struct PairResolvability {
    int n = 0;
    int m = 0;
    std::vector<DetectorGap> per_detector;
    bool pair_resolved = false; // some detector resolves it
};

struct ResolvabilityReport {
    double kappa = kDefaultKappa;
    std::vector<PairResolvability> pairs; // all n < m
    bool all_pairs_resolved = false;
};

ResolvabilityReport check_resolvability(const ExpectationTable& table, const DetectorBank& bank,
                                        double kappa = kDefaultKappa);

// ------------------------------ ideal channel -------------------------------

struct IdealChannel {
    SpectralDecomposition basis;
    std::vector<Eigen::VectorXd> shifts; // per eigenstate n: <A_alpha>_n over alpha
    DetectorBank bank;

    int dimension() const { return basis.dimension(); }
    int detector_count() const { return bank.size(); }
};

IdealChannel make_ideal_channel(SpectralDecomposition basis, const ExpectationTable& table, DetectorBank bank);

struct ChannelOutput {
    PointerDistribution distribution;
    Eigen::VectorXd branch_weights; // all d of them, summing to 1
};

// Mixture components below this weight are dropped from the distribution
// (rounding crumbs when the input is an eigenstate).
inline constexpr double kNegligibleBranchWeight = 1e-14;

ChannelOutput apply_ideal_channel(const IdealChannel& channel, const SystemState& state);

// -------------------------------- readouts ----------------------------------

struct ReadoutSample {
    Eigen::VectorXd x;
    int collapsed_index = 0;      // ground-truth branch; exported only in test mode
    std::optional<int> classified; // nullopt = ambiguous
};

// The unique n whose shift vector lies within kappa * delta_x_alpha of x in
// every coordinate where the detector resolves some pair; nullopt when zero
// or several candidates remain.
std::optional<int> classify_outcome(const Eigen::VectorXd& x, const IdealChannel& channel,
                                    double kappa = kDefaultKappa);

// Draws the branch by weight, then x_alpha ~ Gauss(shift, delta_x^2).
// Deterministic given the seed.
ReadoutSample sample_readout(const IdealChannel& channel, const SystemState& state, std::uint64_t seed,
                             double kappa = kDefaultKappa);

struct ReadoutBatch {
    std::vector<ReadoutSample> samples;
    std::vector<std::uint64_t> seeds; // substream seed per sample
};

// Sample i uses substream_seed(master_seed, i); any partition of the index
// range reproduces the same batch.
ReadoutBatch sample_readouts(const IdealChannel& channel, const SystemState& state, std::uint64_t master_seed,
                             int count, double kappa = kDefaultKappa);

} // namespace jpm
