#include "qergo/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

namespace qergo {

namespace {

constexpr double kPi = std::numbers::pi;

void require_square(const Matrix& m, const char* what) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw ShapeError(std::string(what) + ": matrix must be square and non-empty");
    }
}

cx gaussian_cx(RandomStream& rng) {
    double re = rng.next_gaussian();
    double im = rng.next_gaussian();
    return cx(re, im);
}

Matrix ginibre(int dim, RandomStream& rng) {
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = gaussian_cx(rng);
    return g;
}

}  // namespace

Vector canonical_phase(Vector v) {
    int imax = 0;
    double best = -1.0;
    for (int i = 0; i < v.size(); ++i) {
        double mag = std::abs(v[i]);
        if (mag > best) {
            best = mag;
            imax = i;
        }
    }
    if (best <= 0.0) throw DegenerateInputError("canonical_phase: zero vector");
    v *= std::conj(v[imax]) / best;
    // Kill the residual imaginary part left by the rotation.
    v[imax] = cx(std::abs(v[imax]), 0.0);
    return v;
}

BasisSet::BasisSet(std::vector<std::string> labels, Matrix columns)
    : labels_(std::move(labels)), columns_(std::move(columns)) {
    require_square(columns_, "BasisSet");
    const int d = static_cast<int>(columns_.cols());
    if (static_cast<int>(labels_.size()) != d) {
        throw ShapeError("BasisSet: label count must equal dimension");
    }
    std::unordered_set<std::string> seen;
    for (const auto& l : labels_) {
        if (!seen.insert(l).second) throw LabelError("BasisSet: duplicate label '" + l + "'");
    }
    Matrix gram = columns_.adjoint() * columns_;
    double dev = (gram - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (dev > tol::lin) {
        throw ShapeError("BasisSet: columns not orthonormal (Gram deviation " +
                         std::to_string(dev) + ")");
    }
}

int BasisSet::index_of(const std::string& label) const {
    for (int i = 0; i < dim(); ++i) {
        if (labels_[i] == label) return i;
    }
    throw LabelError("unknown label '" + label + "'");
}

PureState::PureState(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) throw InvalidDimensionError("PureState: empty vector");
    double n = amplitudes_.norm();
    if (n <= 0.0) throw DegenerateInputError("PureState: zero-norm vector");
    amplitudes_ /= n;
    amplitudes_ = canonical_phase(std::move(amplitudes_));
}

PureState PureState::basis_vector(int dim, int index) {
    if (dim < 1) throw InvalidDimensionError("basis_vector: dim must be >= 1");
    if (index < 0 || index >= dim) throw LabelError("basis_vector: index out of range");
    Vector v = Vector::Zero(dim);
    v[index] = 1.0;
    return PureState(std::move(v));
}

DensityOperator::DensityOperator(Matrix matrix) : matrix_(std::move(matrix)) {
    require_square(matrix_, "DensityOperator");
    double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol::lin) throw ShapeError("DensityOperator: not Hermitian");
    matrix_ = 0.5 * (matrix_ + matrix_.adjoint().eval());
    double tr = matrix_.trace().real();
    if (std::abs(tr - 1.0) > tol::lin) {
        throw ShapeError("DensityOperator: trace " + std::to_string(tr) + " != 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol::lin) {
        throw ShapeError("DensityOperator: negative eigenvalue " +
                         std::to_string(es.eigenvalues().minCoeff()));
    }
}

DensityOperator::DensityOperator(const PureState& psi)
    : matrix_(psi.amplitudes() * psi.amplitudes().adjoint()) {}

Observable::Observable(BasisSet eigenbasis, Eigen::VectorXd eigenvalues)
    : eigenbasis_(std::move(eigenbasis)), eigenvalues_(std::move(eigenvalues)) {
    if (eigenvalues_.size() != eigenbasis_.dim()) {
        throw ShapeError("Observable: eigenvalue count must equal dimension");
    }
    if (dim() > 1 && min_gap() < tol::degen) {
        throw DegeneracyError("Observable: eigenvalue gap below " +
                              std::to_string(tol::degen));
    }
}

Matrix Observable::matrix() const {
    const int d = dim();
    Matrix m = Matrix::Zero(d, d);
    for (int a = 0; a < d; ++a) {
        m += eigenvalues_[a] * (eigenbasis_.column(a) * eigenbasis_.column(a).adjoint());
    }
    return m;
}

double Observable::min_gap() const {
    double g = std::numeric_limits<double>::infinity();
    for (int i = 0; i < eigenvalues_.size(); ++i)
        for (int j = i + 1; j < eigenvalues_.size(); ++j)
            g = std::min(g, std::abs(eigenvalues_[i] - eigenvalues_[j]));
    return g;
}

UnitaryMap::UnitaryMap(Matrix matrix) : matrix_(std::move(matrix)) {
    require_square(matrix_, "UnitaryMap");
    const int d = static_cast<int>(matrix_.rows());
    double dev = (matrix_.adjoint() * matrix_ - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (dev > tol::lin) throw ShapeError("UnitaryMap: U^dag U != I");
}

UnitaryMap UnitaryMap::identity(int dim) {
    if (dim < 1) throw InvalidDimensionError("UnitaryMap::identity: dim must be >= 1");
    return UnitaryMap(Matrix::Identity(dim, dim));
}

BasisSet build_basis(BasisKind kind, int dim, std::uint64_t seed) {
    if (dim < 1) throw InvalidDimensionError("build_basis: dim must be >= 1");
    switch (kind) {
        case BasisKind::standard: {
            std::vector<std::string> labels;
            for (int k = 0; k < dim; ++k) labels.push_back(std::to_string(k));
            return BasisSet(std::move(labels), Matrix::Identity(dim, dim));
        }
        case BasisKind::fourier: {
            std::vector<std::string> labels;
            Matrix cols(dim, dim);
            double s = 1.0 / std::sqrt(static_cast<double>(dim));
            for (int k = 0; k < dim; ++k) {
                labels.push_back("f" + std::to_string(k));
                for (int j = 0; j < dim; ++j) {
                    double arg = 2.0 * kPi * j * k / dim;
                    cols(j, k) = s * cx(std::cos(arg), std::sin(arg));
                }
            }
            return BasisSet(std::move(labels), std::move(cols));
        }
        case BasisKind::haar_random: {
            RandomStream rng(seed, "build_basis.haar");
            return haar_basis(dim, rng);
        }
    }
    throw InvalidDimensionError("build_basis: unknown kind");
}

Observable eigendecompose(const Matrix& hermitian) {
    require_square(hermitian, "eigendecompose");
    double herm = (hermitian - hermitian.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol::lin) throw ShapeError("eigendecompose: input not Hermitian");
    const int d = static_cast<int>(hermitian.rows());

    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (hermitian + hermitian.adjoint()));
    if (es.info() != Eigen::Success) throw ShapeError("eigendecompose: solver failed");

    // Eigen sorts ascending; flip to descending.
    Eigen::VectorXd vals(d);
    Matrix cols(d, d);
    for (int k = 0; k < d; ++k) {
        vals[k] = es.eigenvalues()[d - 1 - k];
        cols.col(k) = canonical_phase(es.eigenvectors().col(d - 1 - k));
    }
    for (int k = 0; k + 1 < d; ++k) {
        if (vals[k] - vals[k + 1] < tol::degen) {
            throw DegeneracyError("eigendecompose: eigenvalue gap below tolerance");
        }
    }
    std::vector<std::string> labels;
    for (int k = 0; k < d; ++k) labels.push_back("a" + std::to_string(k));
    return Observable(BasisSet(std::move(labels), std::move(cols)), std::move(vals));
}

UnitaryMap phase_unitary(const Observable& observable, double phi) {
    const int d = observable.dim();
    Matrix u = Matrix::Zero(d, d);
    for (int a = 0; a < d; ++a) {
        cx p = std::exp(cx(0.0, -phi * observable.eigenvalue(a)));
        u += p * (observable.eigenbasis().column(a) *
                  observable.eigenbasis().column(a).adjoint());
    }
    return UnitaryMap(std::move(u));
}

Eigen::VectorXd born_distribution(const DensityOperator& rho, const BasisSet& basis) {
    if (rho.dim() != basis.dim()) throw ShapeError("born_distribution: dimension mismatch");
    Eigen::VectorXd p(basis.dim());
    for (int m = 0; m < basis.dim(); ++m) {
        Vector col = basis.column(m);
        p[m] = (col.adjoint() * rho.matrix() * col)(0, 0).real();
    }
    return p;
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
    if (a.dim() != b.dim()) throw ShapeError("trace_distance: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix() - b.matrix(), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double fidelity(const DensityOperator& rho, const PureState& psi) {
    if (rho.dim() != psi.dim()) throw ShapeError("fidelity: dimension mismatch");
    return (psi.amplitudes().adjoint() * rho.matrix() * psi.amplitudes())(0, 0).real();
}

PureState random_state(int dim, RandomStream& rng) {
    if (dim < 1) throw InvalidDimensionError("random_state: dim must be >= 1");
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = gaussian_cx(rng);
    return PureState(std::move(v));
}

Matrix random_hermitian(int dim, RandomStream& rng) {
    if (dim < 1) throw InvalidDimensionError("random_hermitian: dim must be >= 1");
    Matrix g = ginibre(dim, rng);
    return 0.5 * (g + g.adjoint().eval());
}

DensityOperator random_density(int dim, RandomStream& rng) {
    if (dim < 1) throw InvalidDimensionError("random_density: dim must be >= 1");
    Matrix g = ginibre(dim, rng);
    Matrix m = g * g.adjoint();
    m /= m.trace().real();
    return DensityOperator(std::move(m));
}

BasisSet haar_basis(int dim, RandomStream& rng, const std::string& label_prefix) {
    if (dim < 1) throw InvalidDimensionError("haar_basis: dim must be >= 1");
    Matrix g = ginibre(dim, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix column phases so the R diagonal is positive; this makes the
    // factorization unique and the ensemble Haar.
    for (int k = 0; k < dim; ++k) {
        cx rkk = r(k, k);
        q.col(k) *= rkk / std::abs(rkk);
    }
    std::vector<std::string> labels;
    for (int k = 0; k < dim; ++k) labels.push_back(label_prefix + std::to_string(k));
    return BasisSet(std::move(labels), std::move(q));
}

UnitaryMap haar_unitary(int dim, RandomStream& rng) {
    return UnitaryMap(haar_basis(dim, rng).columns());
}

}  // namespace qergo
