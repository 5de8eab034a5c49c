// quantum.hpp — states, Hermitian operators, spectral decomposition, stationary expectations
//
// Dense complex linear algebra for small Hilbert spaces (d <= 64).  All types
// are immutable values after construction and all operations are pure.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "jpm/errors.hpp"

namespace jpm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Dimensions above this are unsupported by contract.
inline constexpr int kMaxDimension = 64;

// Construction tolerances: normalization/Hermiticity/trace at 1e-10,
// orthonormality and reconstruction at 1e-9.
inline constexpr double kStateTol = 1e-10;
inline constexpr double kOrthoTol = 1e-9;

// ------------------------------- operators ---------------------------------

class HermitianOperator {
  public:
    explicit HermitianOperator(Matrix m);

    int dimension() const { return static_cast<int>(matrix_.rows()); }
    const Matrix& matrix() const { return matrix_; }

  private:
    Matrix matrix_;
};

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

// The three Pauli observables, in (x, y, z) order.
std::vector<HermitianOperator> pauli_observables();

// --------------------------------- states ----------------------------------

// A pure vector or a density matrix.  Pure states stay vectors; conversion to
// a density matrix is explicit via density().
class SystemState {
  public:
    enum class Kind { Pure, Mixed };

    static SystemState pure(Vector amplitudes);
    static SystemState mixed(Matrix rho);

    Kind kind() const { return kind_; }
    bool is_pure() const { return kind_ == Kind::Pure; }
    int dimension() const;

    const Vector& amplitudes() const; // Pure only
    const Matrix& matrix() const;     // Mixed only

    Matrix density() const;

    // <v|rho|v> for mixed, |<v|psi>|^2 for pure
    double population(const Vector& basis_state) const;

  private:
    SystemState(Kind kind, Vector amplitudes, Matrix rho)
        : kind_(kind), amplitudes_(std::move(amplitudes)), rho_(std::move(rho)) {}

    Kind kind_;
    Vector amplitudes_;
    Matrix rho_;
};

// --------------------------- spectral decomposition -------------------------

// Eigenvalues ascending, eigenvector columns orthonormal.  Each column's
// largest-modulus entry is made real positive, which fixes the U(1) phase
// freedom deterministically.
struct SpectralDecomposition {
    RealVector eigenvalues;
    Matrix eigenvectors;
    double min_gap = 0.0;

    int dimension() const { return static_cast<int>(eigenvalues.size()); }
    Vector eigenstate(int n) const { return eigenvectors.col(n); }

    // Validating constructor from precomputed parts (used where eigenvalues
    // are deliberately replaced; the channel must not depend on them).
    static SpectralDecomposition from_parts(RealVector eigenvalues, Matrix eigenvectors);
};

// Spectra closer than 1e-8 x (spectral range) are treated as degenerate and
// refused: the ideal channel presupposes distinct eigenvalues.
double degeneracy_tolerance(const RealVector& eigenvalues);

SpectralDecomposition spectral_decompose(const HermitianOperator& h);

// ---------------------------- expectation tables ----------------------------

// matrices[alpha](n, m) = <n|A_alpha|m>; shifts[alpha] is its real diagonal,
// the protective pointer shifts.
struct ExpectationTable {
    std::vector<Matrix> matrices;
    std::vector<RealVector> shifts;

    int observable_count() const { return static_cast<int>(matrices.size()); }
    int dimension() const { return matrices.empty() ? 0 : static_cast<int>(matrices.front().rows()); }

    // Shift vector of eigenstate n across all observables.
    RealVector shift_vector(int n) const;
};

ExpectationTable stationary_expectations(const std::vector<HermitianOperator>& observables,
                                         const SpectralDecomposition& basis);

} // namespace jpm
