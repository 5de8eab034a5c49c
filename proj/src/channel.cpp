#include "jpm/channel.hpp"

#include <cmath>
#include <string>

#include "jpm/rng.hpp"

namespace jpm {

// ------------------------------ resolvability -------------------------------

ResolvabilityReport check_resolvability(const ExpectationTable& table, const DetectorBank& bank, double kappa) {
    if (kappa <= 0.0) throw InvalidState("check_resolvability: kappa must be > 0");
    if (table.observable_count() != bank.size())
        throw DimensionMismatch("check_resolvability: " + std::to_string(table.observable_count()) +
                                " observables vs " + std::to_string(bank.size()) + " detectors");

    const int d = table.dimension();
    ResolvabilityReport report;
    report.kappa = kappa;
    report.all_pairs_resolved = true;

    for (int n = 0; n < d; ++n) {
        for (int m = n + 1; m < d; ++m) {
            PairResolvability pair;
            pair.n = n;
            pair.m = m;
            for (int alpha = 0; alpha < bank.size(); ++alpha) {
                DetectorGap dg;
                dg.alpha = alpha;
                dg.gap = std::abs(table.shifts[alpha](n) - table.shifts[alpha](m));
                dg.resolved = dg.gap >= kappa * bank[alpha].delta_x;
                pair.pair_resolved = pair.pair_resolved || dg.resolved;
                pair.per_detector.push_back(dg);
            }
            report.all_pairs_resolved = report.all_pairs_resolved && pair.pair_resolved;
            report.pairs.push_back(std::move(pair));
        }
    }
    return report;
}

// ------------------------------ ideal channel -------------------------------

IdealChannel make_ideal_channel(SpectralDecomposition basis, const ExpectationTable& table, DetectorBank bank) {
    if (table.dimension() != basis.dimension())
        throw DimensionMismatch("make_ideal_channel: expectation table dimension != basis dimension");
    if (table.observable_count() != bank.size())
        throw DimensionMismatch("make_ideal_channel: " + std::to_string(table.observable_count()) +
                                " observables vs " + std::to_string(bank.size()) + " detectors");

    IdealChannel channel{std::move(basis), {}, std::move(bank)};
    channel.shifts.reserve(channel.basis.dimension());
    for (int n = 0; n < channel.basis.dimension(); ++n) channel.shifts.push_back(table.shift_vector(n));
    return channel;
}

namespace {

Eigen::VectorXd branch_weights_of(const IdealChannel& channel, const SystemState& state) {
    if (state.dimension() != channel.dimension())
        throw DimensionMismatch("apply_ideal_channel: state dimension " + std::to_string(state.dimension()) +
                                " != channel dimension " + std::to_string(channel.dimension()));
    Eigen::VectorXd weights(channel.dimension());
    for (int n = 0; n < channel.dimension(); ++n)
        weights(n) = state.population(channel.basis.eigenstate(n));
    return weights;
}

} // namespace

ChannelOutput apply_ideal_channel(const IdealChannel& channel, const SystemState& state) {
    const Eigen::VectorXd weights = branch_weights_of(channel, state);
    const Eigen::VectorXd deltas = channel.bank.deltas();

    std::vector<GaussianComponent> components;
    components.reserve(channel.dimension());
    for (int n = 0; n < channel.dimension(); ++n) {
        if (weights(n) < kNegligibleBranchWeight) continue;
        components.push_back(GaussianComponent{weights(n), channel.shifts[n], deltas});
    }
    return ChannelOutput{PointerDistribution(std::move(components)), weights};
}

std::optional<int> classify_outcome(const Eigen::VectorXd& x, const IdealChannel& channel, double kappa) {
    if (x.size() != channel.detector_count())
        throw DimensionMismatch("classify_outcome: readout has wrong coordinate count");

    const int d = channel.dimension();
    // Coordinates that resolve at least one pair at this kappa; the others
    // carry no branch information and are ignored.
    std::vector<int> active;
    for (int alpha = 0; alpha < channel.detector_count(); ++alpha) {
        const double window = kappa * channel.bank[alpha].delta_x;
        bool resolves = false;
        for (int n = 0; n < d && !resolves; ++n)
            for (int m = n + 1; m < d && !resolves; ++m)
                resolves = std::abs(channel.shifts[n](alpha) - channel.shifts[m](alpha)) >= window;
        if (resolves) active.push_back(alpha);
    }
    if (active.empty()) return std::nullopt;

    std::optional<int> candidate;
    for (int n = 0; n < d; ++n) {
        bool inside = true;
        for (int alpha : active)
            inside = inside && std::abs(x(alpha) - channel.shifts[n](alpha)) <= kappa * channel.bank[alpha].delta_x;
        if (inside) {
            if (candidate) return std::nullopt; // more than one candidate
            candidate = n;
        }
    }
    return candidate;
}

ReadoutSample sample_readout(const IdealChannel& channel, const SystemState& state, std::uint64_t seed,
                             double kappa) {
    const Eigen::VectorXd weights = branch_weights_of(channel, state);
    SplitMix64 rng(seed);

    // inverse-CDF branch draw in index order
    const double u = rng.uniform01() * weights.sum();
    int branch = channel.dimension() - 1;
    double cumulative = 0.0;
    for (int n = 0; n < channel.dimension(); ++n) {
        cumulative += weights(n);
        if (u <= cumulative) {
            branch = n;
            break;
        }
    }

    ReadoutSample sample;
    sample.collapsed_index = branch;
    sample.x.resize(channel.detector_count());
    for (int alpha = 0; alpha < channel.detector_count(); ++alpha)
        sample.x(alpha) = rng.normal(channel.shifts[branch](alpha), channel.bank[alpha].delta_x);
    sample.classified = classify_outcome(sample.x, channel, kappa);
    return sample;
}

ReadoutBatch sample_readouts(const IdealChannel& channel, const SystemState& state, std::uint64_t master_seed,
                             int count, double kappa) {
    if (count < 0) throw InvalidState("sample_readouts: negative count");
    ReadoutBatch batch;
    batch.samples.reserve(count);
    batch.seeds.reserve(count);
    for (int i = 0; i < count; ++i) {
        const std::uint64_t seed = substream_seed(master_seed, static_cast<std::uint64_t>(i));
        batch.seeds.push_back(seed);
        batch.samples.push_back(sample_readout(channel, state, seed, kappa));
    }
    return batch;
}

} // namespace jpm
