#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qergo/errors.hpp"
#include "qergo/rng.hpp"
#include "qergo/tolerances.hpp"

namespace qergo {

using cx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Fixes the global phase so the largest-magnitude entry is real and
// non-negative (ties broken by lowest index). Throws on the zero vector.
Vector canonical_phase(Vector v);

// Ordered orthonormal basis with one outcome label per column.
class BasisSet {
public:
    BasisSet(std::vector<std::string> labels, Matrix columns);

    int dim() const { return static_cast<int>(columns_.cols()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int k) const { return labels_[k]; }
    const Matrix& columns() const { return columns_; }
    Vector column(int k) const { return columns_.col(k); }

    // Index of a label; throws LabelError if absent.
    int index_of(const std::string& label) const;

private:
    std::vector<std::string> labels_;
    Matrix columns_;
};

// Unit-norm state vector in canonical phase. Construction normalizes and
// canonicalizes, so the invariants hold by construction.
class PureState {
public:
    explicit PureState(Vector amplitudes);

    int dim() const { return static_cast<int>(amplitudes_.size()); }
    const Vector& amplitudes() const { return amplitudes_; }

    static PureState basis_vector(int dim, int index);

private:
    Vector amplitudes_;
};

// <bra|ket>
inline cx overlap(const PureState& bra, const PureState& ket) {
    return bra.amplitudes().dot(ket.amplitudes());
}

class DensityOperator {
public:
    explicit DensityOperator(Matrix matrix);
    explicit DensityOperator(const PureState& psi);

    int dim() const { return static_cast<int>(matrix_.rows()); }
    const Matrix& matrix() const { return matrix_; }
    double purity() const { return (matrix_ * matrix_).trace().real(); }

private:
    Matrix matrix_;
};

// Hermitian operator with labeled, strictly nondegenerate spectrum.
// Labels are those of the eigenbasis.
class Observable {
public:
    Observable(BasisSet eigenbasis, Eigen::VectorXd eigenvalues);

    int dim() const { return eigenbasis_.dim(); }
    const std::vector<std::string>& labels() const { return eigenbasis_.labels(); }
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    double eigenvalue(int k) const { return eigenvalues_[k]; }
    const BasisSet& eigenbasis() const { return eigenbasis_; }
    int index_of(const std::string& label) const { return eigenbasis_.index_of(label); }

    // Sum_a A_a |a><a|
    Matrix matrix() const;

    double min_gap() const;
    double max_abs_eigenvalue() const { return eigenvalues_.cwiseAbs().maxCoeff(); }

private:
    BasisSet eigenbasis_;
    Eigen::VectorXd eigenvalues_;
};

class UnitaryMap {
public:
    explicit UnitaryMap(Matrix matrix);

    int dim() const { return static_cast<int>(matrix_.rows()); }
    const Matrix& matrix() const { return matrix_; }
    UnitaryMap adjoint() const { return UnitaryMap(matrix_.adjoint()); }

    static UnitaryMap identity(int dim);

private:
    Matrix matrix_;
};

enum class BasisKind { standard, fourier, haar_random };

// standard: computational basis, labels "0".."d-1".
// fourier:  column k entry j = exp(+2*pi*i*j*k/d)/sqrt(d), labels "f0"..
// haar_random: deterministic for a fixed seed, labels "h0"..
BasisSet build_basis(BasisKind kind, int dim, std::uint64_t seed = 0);

// Eigendecomposition with eigenvalues sorted descending and eigenvectors in
// canonical phase. Rejects non-Hermitian input (ShapeError) and spectra with
// any gap below tol::degen (DegeneracyError).
Observable eigendecompose(const Matrix& hermitian);

// exp(-i*phi*A) assembled in the eigenbasis.
UnitaryMap phase_unitary(const Observable& observable, double phi);

// Born probabilities <m|rho|m> for each basis column.
Eigen::VectorXd born_distribution(const DensityOperator& rho, const BasisSet& basis);

// 0.5 * trace norm of (a - b).
double trace_distance(const DensityOperator& a, const DensityOperator& b);

// <psi|rho|psi>
double fidelity(const DensityOperator& rho, const PureState& psi);

// Seeded random objects (Haar for bases/states, Ginibre-induced for states).
PureState random_state(int dim, RandomStream& rng);
Matrix random_hermitian(int dim, RandomStream& rng);
DensityOperator random_density(int dim, RandomStream& rng);
BasisSet haar_basis(int dim, RandomStream& rng, const std::string& label_prefix = "h");
UnitaryMap haar_unitary(int dim, RandomStream& rng);

}  // namespace qergo
