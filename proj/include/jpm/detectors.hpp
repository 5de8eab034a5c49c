// detectors.hpp — Gaussian pointer bank, momentum quadrature, pointer mixtures
//
// Pointers are minimum-uncertainty Gaussians centered at 0 with position
// dispersion delta_x, hence momentum dispersion 1/(2 delta_x) (hbar = 1).
// Detector self-Hamiltonians vanish by model assumption.

#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "jpm/errors.hpp"

namespace jpm {

struct Detector {
    double delta_x = 0.0;
    std::string label;

    double delta_p() const { return 1.0 / (2.0 * delta_x); }
};

class DetectorBank {
  public:
    explicit DetectorBank(std::vector<Detector> detectors);

    int size() const { return static_cast<int>(detectors_.size()); }
    const Detector& operator[](int alpha) const { return detectors_.at(alpha); }
    const std::vector<Detector>& detectors() const { return detectors_; }

    Eigen::VectorXd deltas() const;

  private:
    std::vector<Detector> detectors_;
};

// Labels default to x1..xN.
DetectorBank make_detector_bank(const std::vector<double>& deltas);

// Per-detector quadrature over |phi~(p)|^2 dp: uniform nodes symmetric about
// zero, trapezoid weights normalized to unit sum.
struct MomentumGrid {
    std::vector<Eigen::VectorXd> nodes;
    std::vector<Eigen::VectorXd> weights;

    int detector_count() const { return static_cast<int>(nodes.size()); }
    long total_nodes() const;
};

MomentumGrid build_momentum_grid(const DetectorBank& bank, int points_per_detector = 64,
                                 double coverage_sigmas = 5.0);

// ------------------------- pointer distributions ----------------------------

struct GaussianComponent {
    double weight = 0.0;
    Eigen::VectorXd center;
    Eigen::VectorXd deltas;
};

// P(x) = sum_i q_i prod_alpha Gauss(x_alpha; c_i_alpha, delta_alpha^2).
// Weights are nonnegative and sum to 1 within 1e-9.
class PointerDistribution {
  public:
    explicit PointerDistribution(std::vector<GaussianComponent> components);

    int coordinate_count() const;
    const std::vector<GaussianComponent>& components() const { return components_; }

  private:
    std::vector<GaussianComponent> components_;
};

double density_at(const PointerDistribution& dist, const Eigen::VectorXd& x);

// 1-D marginal on coordinate alpha.
PointerDistribution marginal_onto(const PointerDistribution& dist, int alpha);

double gaussian_pdf(double x, double mean, double stddev);

} // namespace jpm
