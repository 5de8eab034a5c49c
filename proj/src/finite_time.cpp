#include "jpm/finite_time.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "jpm/format.hpp"

namespace jpm {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;
constexpr Complex kI{0.0, 1.0};

void check_config(const FiniteTimeConfig& cfg) {
    if (!(cfg.duration > 0.0)) throw InvalidState("FiniteTimeConfig: duration must be > 0");
    if (cfg.steps < 1) throw InvalidState("FiniteTimeConfig: steps must be >= 1");
    for (const HermitianOperator& a : cfg.observables)
        if (a.dimension() != cfg.hamiltonian.dimension())
            throw DimensionMismatch("FiniteTimeConfig: observable dimension != Hamiltonian dimension");
}

// Observables rotated to the Hamiltonian eigenbasis, everything the midpoint
// product needs, kept out of the per-node loop.
struct EigenbasisKernel {
    const RealVector& omega;
    std::vector<Matrix> a_eig;
    double duration;
    long steps;

    EigenbasisKernel(const FiniteTimeConfig& cfg) : omega(cfg.hamiltonian.eigenvalues) {
        a_eig.reserve(cfg.observables.size());
        for (const HermitianOperator& a : cfg.observables)
            a_eig.push_back(cfg.hamiltonian.eigenvectors.adjoint() * a.matrix() * cfg.hamiltonian.eigenvectors);
        duration = cfg.duration;
        steps = cfg.steps;
    }

    // U_T(p) in the eigenbasis.
    Matrix unitary(const Eigen::VectorXd& p) const {
        const Eigen::Index d = omega.size();
        const double dt = duration / static_cast<double>(steps);

        Matrix u = Matrix::Identity(d, d);
        Matrix g(d, d);
        for (long k = 0; k < steps; ++k) {
            const double t = (static_cast<double>(k) + 0.5) * dt;
            g.setZero();
            for (std::size_t alpha = 0; alpha < a_eig.size(); ++alpha) {
                if (p(static_cast<Eigen::Index>(alpha)) == 0.0) continue;
                const double scale = p(static_cast<Eigen::Index>(alpha)) / duration;
                for (Eigen::Index n = 0; n < d; ++n)
                    for (Eigen::Index m = 0; m < d; ++m)
                        g(n, m) += scale * a_eig[alpha](n, m) * std::polar(1.0, (omega(n) - omega(m)) * t);
            }
            // exp(-i dt G) via the spectral theorem; G is Hermitian
            Eigen::SelfAdjointEigenSolver<Matrix> solver(g);
            const Matrix& w = solver.eigenvectors();
            Matrix factor = w *
                            (solver.eigenvalues().array() * (-dt))
                                .unaryExpr([](double x) { return std::polar(1.0, x); })
                                .matrix()
                                .asDiagonal() *
                            w.adjoint();
            u = factor * u; // later times act on the left
        }
        return u;
    }
};

Matrix ideal_unitary_eigenbasis(const Eigen::VectorXd& p, const std::vector<Eigen::VectorXd>& shifts,
                                Eigen::Index d) {
    Matrix u = Matrix::Zero(d, d);
    for (Eigen::Index n = 0; n < d; ++n) u(n, n) = std::exp(-kI * Complex(p.dot(shifts[n]), 0.0));
    return u;
}

} // namespace

long default_step_count(double duration, const SpectralDecomposition& hamiltonian) {
    const double max_gap = hamiltonian.eigenvalues.maxCoeff() - hamiltonian.eigenvalues.minCoeff();
    const double slices = kStepsPerPeriod * duration * max_gap / kTwoPi;
    return std::max(1L, static_cast<long>(std::ceil(slices)));
}

FiniteTimeConfig make_finite_time_config(double duration, std::vector<HermitianOperator> observables,
                                         SpectralDecomposition hamiltonian, long steps) {
    FiniteTimeConfig cfg;
    cfg.duration = duration;
    cfg.steps = steps > 0 ? steps : default_step_count(duration, hamiltonian);
    cfg.observables = std::move(observables);
    cfg.hamiltonian = std::move(hamiltonian);
    check_config(cfg);
    return cfg;
}

Matrix conditional_unitary(const Eigen::VectorXd& p, const FiniteTimeConfig& cfg) {
    check_config(cfg);
    if (p.size() != static_cast<Eigen::Index>(cfg.observables.size()))
        throw DimensionMismatch("conditional_unitary: momentum vector length != observable count");
    if (!p.allFinite()) throw InvalidState("conditional_unitary: momentum vector must be finite");

    const EigenbasisKernel kernel(cfg);
    const Matrix& v = cfg.hamiltonian.eigenvectors;
    return v * kernel.unitary(p) * v.adjoint();
}

Matrix ideal_conditional_unitary(const Eigen::VectorXd& p, const std::vector<Eigen::VectorXd>& shifts,
                                 const SpectralDecomposition& basis) {
    const Eigen::Index d = basis.dimension();
    if (static_cast<Eigen::Index>(shifts.size()) != d)
        throw DimensionMismatch("ideal_conditional_unitary: one shift vector per eigenstate required");
    for (const Eigen::VectorXd& s : shifts)
        if (s.size() != p.size())
            throw DimensionMismatch("ideal_conditional_unitary: shift vector length != momentum length");
    if (!p.allFinite()) throw InvalidState("ideal_conditional_unitary: momentum vector must be finite");

    const Matrix& v = basis.eigenvectors;
    return v * ideal_unitary_eigenbasis(p, shifts, d) * v.adjoint();
}

double channel_distance(const FiniteTimeConfig& cfg, const MomentumGrid& grid,
                        const std::vector<Eigen::VectorXd>& shifts) {
    check_config(cfg);
    const int n_det = grid.detector_count();
    if (n_det != static_cast<int>(cfg.observables.size()))
        throw DimensionMismatch("channel_distance: grid detector count != observable count");
    if (static_cast<int>(shifts.size()) != cfg.hamiltonian.dimension())
        throw DimensionMismatch("channel_distance: one shift vector per eigenstate required");

    const EigenbasisKernel kernel(cfg);
    const Eigen::Index d = cfg.hamiltonian.dimension();

    // Frobenius norm is unitarily invariant: both unitaries are compared in
    // the eigenbasis, sparing two rotations per node.
    double distance = 0.0;
    const long total = grid.total_nodes();
    Eigen::VectorXd p(n_det);
    for (long index = 0; index < total; ++index) {
        long rest = index;
        double weight = 1.0;
        for (int alpha = n_det - 1; alpha >= 0; --alpha) {
            const long size = grid.nodes[alpha].size();
            const long k = rest % size;
            rest /= size;
            p(alpha) = grid.nodes[alpha](k);
            weight *= grid.weights[alpha](k);
        }
        const Matrix u_t = kernel.unitary(p);
        const Matrix u_inf = ideal_unitary_eigenbasis(p, shifts, d);
        distance += weight * (u_t - u_inf).squaredNorm();
    }
    return distance;
}

std::vector<Matrix> time_averaged_offdiagonals(const FiniteTimeConfig& cfg) {
    check_config(cfg);
    const Eigen::Index d = cfg.hamiltonian.dimension();
    const RealVector& omega = cfg.hamiltonian.eigenvalues;
    const double tol = degeneracy_tolerance(omega);

    std::vector<Matrix> averaged;
    averaged.reserve(cfg.observables.size());
    for (const HermitianOperator& a : cfg.observables) {
        const Matrix a_eig = cfg.hamiltonian.eigenvectors.adjoint() * a.matrix() * cfg.hamiltonian.eigenvectors;
        Matrix out = Matrix::Zero(d, d);
        for (Eigen::Index n = 0; n < d; ++n) {
            for (Eigen::Index m = 0; m < d; ++m) {
                if (n == m) continue;
                const double gap = omega(n) - omega(m);
                if (std::abs(gap) <= tol)
                    throw DegenerateSpectrum("time_averaged_offdiagonals: |w_n - w_m| below tolerance");
                const Complex phase_integral =
                    (std::polar(1.0, gap * cfg.duration) - 1.0) / (kI * gap * cfg.duration);
                out(n, m) = a_eig(n, m) * phase_integral;
            }
        }
        averaged.push_back(std::move(out));
    }
    return averaged;
}

// ------------------------------- convergence --------------------------------

double fit_envelope_slope(const std::vector<std::pair<double, double>>& points) {
    // max-D point per half-decade bin
    std::vector<std::pair<double, double>> maxima; // (log10 T, log10 D)
    if (points.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double lo = std::log10(points.front().first);
    const double hi = std::log10(points.back().first);
    const int bins = std::max(2, static_cast<int>(std::ceil((hi - lo) / 0.5)));
    for (int b = 0; b < bins; ++b) {
        double best_d = 0.0, best_x = 0.0;
        for (const auto& [t, dist] : points) {
            const double x = std::log10(t);
            int bin = static_cast<int>((x - lo) / 0.5);
            bin = std::min(bin, bins - 1);
            if (bin == b && dist > best_d) {
                best_d = dist;
                best_x = x;
            }
        }
        if (best_d > 0.0) maxima.emplace_back(best_x, std::log10(best_d));
    }
    if (maxima.size() < 2) return std::numeric_limits<double>::quiet_NaN();

    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : maxima) {
        mx += x;
        my += y;
    }
    mx /= maxima.size();
    my /= maxima.size();
    double num = 0.0, den = 0.0;
    for (const auto& [x, y] : maxima) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    return num / den;
}

ConvergenceCurve sweep_channel_distance(const std::vector<HermitianOperator>& observables,
                                        const SpectralDecomposition& hamiltonian,
                                        const std::vector<Eigen::VectorXd>& shifts, const MomentumGrid& grid,
                                        double t_min, double t_max, int points_per_decade) {
    if (!(t_min > 0.0) || !(t_max > t_min))
        throw InvalidState("sweep_channel_distance: need 0 < t_min < t_max");
    if (points_per_decade < 1) throw InvalidState("sweep_channel_distance: points_per_decade must be >= 1");

    const int count =
        static_cast<int>(std::floor(std::log10(t_max / t_min) * points_per_decade + 1e-9)) + 1;

    ConvergenceCurve curve;
    curve.points.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double t = t_min * std::pow(10.0, static_cast<double>(i) / points_per_decade);
        FiniteTimeConfig cfg = make_finite_time_config(t, observables, hamiltonian);
        curve.points.emplace_back(t, channel_distance(cfg, grid, shifts));
    }
    curve.envelope_slope = fit_envelope_slope(curve.points);
    return curve;
}

std::string convergence_csv(const ConvergenceCurve& curve) {
    std::ostringstream out;
    out << "T,D\n";
    for (const auto& [t, dist] : curve.points) out << format_double(t) << ',' << format_double(dist) << '\n';
    out << "# envelope_fit_slope = " << format_double(curve.envelope_slope) << '\n';
    return out.str();
}

} // namespace jpm
