#include "jpm/detectors.hpp"

#include <cmath>
#include <set>
#include <string>

namespace jpm {

namespace {
constexpr double kTwoPi = 6.283185307179586476925287;
}

double gaussian_pdf(double x, double mean, double stddev) {
    const double z = (x - mean) / stddev;
    return std::exp(-0.5 * z * z) / (stddev * std::sqrt(kTwoPi));
}

// ------------------------------ detector bank -------------------------------

DetectorBank::DetectorBank(std::vector<Detector> detectors) : detectors_(std::move(detectors)) {
    if (detectors_.empty()) throw InvalidState("DetectorBank: at least one detector required");
    std::set<std::string> labels;
    for (const Detector& det : detectors_) {
        if (!(det.delta_x > 0.0))
            throw NonPositiveDispersion("DetectorBank: detector '" + det.label + "' has delta_x = " +
                                        std::to_string(det.delta_x));
        if (!labels.insert(det.label).second)
            throw InvalidState("DetectorBank: duplicate detector label '" + det.label + "'");
    }
}

Eigen::VectorXd DetectorBank::deltas() const {
    Eigen::VectorXd out(size());
    for (int i = 0; i < size(); ++i) out(i) = detectors_[i].delta_x;
    return out;
}

DetectorBank make_detector_bank(const std::vector<double>& deltas) {
    std::vector<Detector> detectors;
    detectors.reserve(deltas.size());
    for (std::size_t i = 0; i < deltas.size(); ++i)
        detectors.push_back(Detector{deltas[i], "x" + std::to_string(i + 1)});
    return DetectorBank(std::move(detectors));
}

// ------------------------------ momentum grid -------------------------------

long MomentumGrid::total_nodes() const {
    long total = 1;
    for (const auto& n : nodes) total *= n.size();
    return total;
}

MomentumGrid build_momentum_grid(const DetectorBank& bank, int points_per_detector, double coverage_sigmas) {
    if (points_per_detector < 8)
        throw InvalidState("build_momentum_grid: points_per_detector must be >= 8");
    if (coverage_sigmas < 3.0)
        throw InvalidState("build_momentum_grid: coverage_sigmas must be >= 3");

    MomentumGrid grid;
    grid.nodes.reserve(bank.size());
    grid.weights.reserve(bank.size());

    for (int alpha = 0; alpha < bank.size(); ++alpha) {
        const double sigma_p = bank[alpha].delta_p();
        const double half_span = coverage_sigmas * sigma_p;
        const double h = 2.0 * half_span / (points_per_detector - 1);

        Eigen::VectorXd nodes(points_per_detector);
        Eigen::VectorXd weights(points_per_detector);
        for (int k = 0; k < points_per_detector; ++k) {
            nodes(k) = -half_span + h * k;
            const double endpoint = (k == 0 || k == points_per_detector - 1) ? 0.5 : 1.0;
            weights(k) = endpoint * h * gaussian_pdf(nodes(k), 0.0, sigma_p);
        }
        // Normalize to a unit sum so the grid is a probability measure even at
        // the minimum 3-sigma coverage, where the raw truncation loses ~3e-3.
        weights /= weights.sum();

        grid.nodes.push_back(std::move(nodes));
        grid.weights.push_back(std::move(weights));
    }
    return grid;
}

// --------------------------- pointer distributions ---------------------------

PointerDistribution::PointerDistribution(std::vector<GaussianComponent> components)
    : components_(std::move(components)) {
    if (components_.empty()) throw InvalidState("PointerDistribution: no components");
    const Eigen::Index n = components_.front().center.size();
    double weight_sum = 0.0;
    for (const GaussianComponent& c : components_) {
        if (c.center.size() != n || c.deltas.size() != n)
            throw DimensionMismatch("PointerDistribution: component coordinate counts differ");
        if (c.weight < 0.0) throw InvalidState("PointerDistribution: negative component weight");
        if ((c.deltas.array() <= 0.0).any())
            throw NonPositiveDispersion("PointerDistribution: component has non-positive dispersion");
        weight_sum += c.weight;
    }
    if (std::abs(weight_sum - 1.0) > 1e-9)
        throw InvalidState("PointerDistribution: weights sum to " + std::to_string(weight_sum) +
                           ", expected 1 within 1e-9");
}

int PointerDistribution::coordinate_count() const {
    return static_cast<int>(components_.front().center.size());
}

double density_at(const PointerDistribution& dist, const Eigen::VectorXd& x) {
    if (x.size() != dist.coordinate_count())
        throw DimensionMismatch("density_at: point has " + std::to_string(x.size()) + " coordinates, expected " +
                                std::to_string(dist.coordinate_count()));
    double density = 0.0;
    for (const GaussianComponent& c : dist.components()) {
        double factor = c.weight;
        for (Eigen::Index alpha = 0; alpha < x.size(); ++alpha)
            factor *= gaussian_pdf(x(alpha), c.center(alpha), c.deltas(alpha));
        density += factor;
    }
    return density;
}

PointerDistribution marginal_onto(const PointerDistribution& dist, int alpha) {
    if (alpha < 0 || alpha >= dist.coordinate_count())
        throw DimensionMismatch("marginal_onto: coordinate index out of range");
    std::vector<GaussianComponent> components;
    components.reserve(dist.components().size());
    for (const GaussianComponent& c : dist.components()) {
        GaussianComponent m;
        m.weight = c.weight;
        m.center = Eigen::VectorXd::Constant(1, c.center(alpha));
        m.deltas = Eigen::VectorXd::Constant(1, c.deltas(alpha));
        components.push_back(std::move(m));
    }
    return PointerDistribution(std::move(components));
}

} // namespace jpm
