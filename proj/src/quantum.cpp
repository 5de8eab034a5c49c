#include "jpm/quantum.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace jpm {

namespace {

void check_dimension_supported(Eigen::Index d, const char* where) {
    if (d < 1) throw DimensionMismatch(std::string(where) + ": dimension must be >= 1");
    if (d > kMaxDimension)
        throw DimensionMismatch(std::string(where) + ": dimension " + std::to_string(d) +
                                " exceeds supported maximum " + std::to_string(kMaxDimension));
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

// ------------------------------- operators ---------------------------------

HermitianOperator::HermitianOperator(Matrix m) : matrix_(std::move(m)) {
    if (matrix_.rows() != matrix_.cols())
        throw DimensionMismatch("HermitianOperator: matrix must be square");
    check_dimension_supported(matrix_.rows(), "HermitianOperator");
    if (max_abs(matrix_ - matrix_.adjoint()) > kStateTol)
        throw InvalidState("HermitianOperator: matrix is not Hermitian within 1e-10");
}

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_y() {
    Matrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

std::vector<HermitianOperator> pauli_observables() {
    return {HermitianOperator(pauli_x()), HermitianOperator(pauli_y()), HermitianOperator(pauli_z())};
}

// --------------------------------- states ----------------------------------

SystemState SystemState::pure(Vector amplitudes) {
    check_dimension_supported(amplitudes.size(), "SystemState::pure");
    const double norm2 = amplitudes.squaredNorm();
    if (std::abs(norm2 - 1.0) > kStateTol)
        throw InvalidState("SystemState::pure: amplitudes are not normalized within 1e-10");
    return SystemState(Kind::Pure, std::move(amplitudes), Matrix());
}

SystemState SystemState::mixed(Matrix rho) {
    if (rho.rows() != rho.cols()) throw DimensionMismatch("SystemState::mixed: matrix must be square");
    check_dimension_supported(rho.rows(), "SystemState::mixed");
    if (max_abs(rho - rho.adjoint()) > kStateTol)
        throw InvalidState("SystemState::mixed: density matrix is not Hermitian within 1e-10");
    if (std::abs(rho.trace().real() - 1.0) > kStateTol || std::abs(rho.trace().imag()) > kStateTol)
        throw InvalidState("SystemState::mixed: trace differs from 1 by more than 1e-10");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kStateTol)
        throw InvalidState("SystemState::mixed: density matrix has an eigenvalue below -1e-10");
    return SystemState(Kind::Mixed, Vector(), std::move(rho));
}

int SystemState::dimension() const {
    return is_pure() ? static_cast<int>(amplitudes_.size()) : static_cast<int>(rho_.rows());
}

const Vector& SystemState::amplitudes() const {
    if (!is_pure()) throw InvalidState("SystemState::amplitudes: state is mixed");
    return amplitudes_;
}

const Matrix& SystemState::matrix() const {
    if (is_pure()) throw InvalidState("SystemState::matrix: state is pure; call density() to convert");
    return rho_;
}

Matrix SystemState::density() const {
    return is_pure() ? Matrix(amplitudes_ * amplitudes_.adjoint()) : rho_;
}

double SystemState::population(const Vector& basis_state) const {
    if (basis_state.size() != dimension())
        throw DimensionMismatch("SystemState::population: basis state has wrong dimension");
    if (is_pure()) return std::norm(basis_state.dot(amplitudes_));
    return (basis_state.adjoint() * rho_ * basis_state)(0, 0).real();
}

// --------------------------- spectral decomposition -------------------------

double degeneracy_tolerance(const RealVector& eigenvalues) {
    const double range = eigenvalues.maxCoeff() - eigenvalues.minCoeff();
    return 1e-8 * range;
}

namespace {

// Rotate each column so that its largest-modulus entry is real positive; the
// first such entry wins on ties.
void fix_column_phases(Matrix& v) {
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
        Eigen::Index best = 0;
        double best_mod = 0.0;
        for (Eigen::Index r = 0; r < v.rows(); ++r) {
            const double mod = std::abs(v(r, c));
            if (mod > best_mod) {
                best_mod = mod;
                best = r;
            }
        }
        const Complex pivot = v(best, c);
        if (best_mod > 0.0) v.col(c) *= std::conj(pivot) / best_mod;
    }
}

double minimum_adjacent_gap(const RealVector& ascending) {
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i + 1 < ascending.size(); ++i)
        gap = std::min(gap, ascending(i + 1) - ascending(i));
    return gap;
}

} // namespace

SpectralDecomposition SpectralDecomposition::from_parts(RealVector eigenvalues, Matrix eigenvectors) {
    const Eigen::Index d = eigenvalues.size();
    if (eigenvectors.rows() != d || eigenvectors.cols() != d)
        throw DimensionMismatch("SpectralDecomposition: eigenvector matrix does not match eigenvalue count");
    check_dimension_supported(d, "SpectralDecomposition");
    for (Eigen::Index i = 0; i + 1 < d; ++i)
        if (eigenvalues(i) > eigenvalues(i + 1))
            throw InvalidState("SpectralDecomposition: eigenvalues must be ascending");
    if (max_abs(eigenvectors.adjoint() * eigenvectors - Matrix::Identity(d, d)) > kOrthoTol)
        throw InvalidState("SpectralDecomposition: eigenvector columns are not orthonormal within 1e-9");

    SpectralDecomposition out;
    out.min_gap = minimum_adjacent_gap(eigenvalues);
    if (d >= 2 && out.min_gap <= degeneracy_tolerance(eigenvalues))
        throw DegenerateSpectrum("SpectralDecomposition: minimum eigenvalue gap " + std::to_string(out.min_gap) +
                                 " is within the degeneracy tolerance");
    out.eigenvalues = std::move(eigenvalues);
    out.eigenvectors = std::move(eigenvectors);
    return out;
}

SpectralDecomposition spectral_decompose(const HermitianOperator& h) {
    const int d = h.dimension();
    if (d < 2) throw DimensionMismatch("spectral_decompose: dimension must be >= 2");

    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
    if (solver.info() != Eigen::Success)
        throw InvalidState("spectral_decompose: eigensolver failed to converge");

    RealVector w = solver.eigenvalues();
    Matrix v = solver.eigenvectors();
    fix_column_phases(v);

    const double gap = minimum_adjacent_gap(w);
    if (gap <= degeneracy_tolerance(w))
        throw DegenerateSpectrum("spectral_decompose: minimum eigenvalue gap " + std::to_string(gap) +
                                 " is within the degeneracy tolerance; the protective protocol requires a "
                                 "non-degenerate spectrum");

    SpectralDecomposition out;
    out.eigenvalues = std::move(w);
    out.eigenvectors = std::move(v);
    out.min_gap = gap;
    return out;
}

// ---------------------------- expectation tables ----------------------------

RealVector ExpectationTable::shift_vector(int n) const {
    RealVector out(observable_count());
    for (int alpha = 0; alpha < observable_count(); ++alpha) out(alpha) = shifts[alpha](n);
    return out;
}

ExpectationTable stationary_expectations(const std::vector<HermitianOperator>& observables,
                                         const SpectralDecomposition& basis) {
    const int d = basis.dimension();
    ExpectationTable table;
    table.matrices.reserve(observables.size());
    table.shifts.reserve(observables.size());

    for (const HermitianOperator& a : observables) {
        if (a.dimension() != d)
            throw DimensionMismatch("stationary_expectations: observable dimension " +
                                    std::to_string(a.dimension()) + " != basis dimension " + std::to_string(d));
        Matrix m = basis.eigenvectors.adjoint() * a.matrix() * basis.eigenvectors;
        if (max_abs(m - m.adjoint()) > kStateTol)
            throw InvalidState("stationary_expectations: expectation matrix lost Hermiticity");

        RealVector diag(d);
        for (int n = 0; n < d; ++n) {
            if (std::abs(m(n, n).imag()) > 1e-12)
                throw InvalidState("stationary_expectations: diagonal entry is not real within 1e-12");
            diag(n) = m(n, n).real();
        }
        table.matrices.push_back(std::move(m));
        table.shifts.push_back(std::move(diag));
    }
    return table;
}

} // namespace jpm
