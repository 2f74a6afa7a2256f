#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "qergo/quasiprob.hpp"

using namespace qergo;
using oracles::ket;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

BasisSet plus_minus_basis() {
    Matrix cols(2, 2);
    cols.col(0) = oracles::ket_plus();
    cols.col(1) = oracles::ket_minus();
    return BasisSet({"+", "-"}, cols);
}

BasisSet circular_basis() {
    Matrix cols(2, 2);
    cols.col(0) = oracles::ket_plus_i();
    cols.col(1) = oracles::ket_minus_i();
    return BasisSet({"+i", "-i"}, cols);
}

}  // namespace

TEST_CASE("kd_joint of |0><0| in the standard bases is a point mass") {
    DensityOperator rho{PureState::basis_vector(2, 0)};
    BasisSet std2 = build_basis(BasisKind::standard, 2);
    ComplexJointDistribution joint = kd_joint(rho, std2, std2);
    CHECK(std::abs(joint.entry(0, 0) - cx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(joint.entry(0, 1)) < 1e-14);
    CHECK(std::abs(joint.entry(1, 0)) < 1e-14);
    CHECK(std::abs(joint.entry(1, 1)) < 1e-14);
}

TEST_CASE("kd_joint of |0><0| against the fourier basis") {
    DensityOperator rho{PureState::basis_vector(2, 0)};
    ComplexJointDistribution joint =
        kd_joint(rho, build_basis(BasisKind::standard, 2), build_basis(BasisKind::fourier, 2));
    CHECK(std::abs(joint.entry(0, 0) - cx(0.5, 0.0)) < 1e-14);
    CHECK(std::abs(joint.entry(0, 1) - cx(0.5, 0.0)) < 1e-14);
    CHECK(std::abs(joint.entry(1, 0)) < 1e-14);
    CHECK(std::abs(joint.entry(1, 1)) < 1e-14);
}

TEST_CASE("kd_joint in mutually unbiased bases is complex") {
    DensityOperator rho{PureState::basis_vector(2, 0)};
    ComplexJointDistribution joint = kd_joint(rho, plus_minus_basis(), circular_basis());
    CHECK(std::abs(joint.entry(0, 0) - cx(0.25, -0.25)) < 1e-14);
    CHECK(std::abs(joint.entry(0, 1) - cx(0.25, 0.25)) < 1e-14);
    CHECK(std::abs(joint.entry(1, 0) - cx(0.25, 0.25)) < 1e-14);
    CHECK(std::abs(joint.entry(1, 1) - cx(0.25, -0.25)) < 1e-14);
}

TEST_CASE("kd_joint marginals reproduce Born distributions") {
    RandomStream rng(21);
    for (int d : {2, 3, 5, 8}) {
        DensityOperator rho = random_density(d, rng);
        BasisSet a = haar_basis(d, rng, "a");
        BasisSet b = haar_basis(d, rng, "b");
        ComplexJointDistribution joint = kd_joint(rho, a, b);
        Eigen::VectorXd born_a = oracles::born(rho.matrix(), a.columns());
        Eigen::VectorXd born_b = oracles::born(rho.matrix(), b.columns());
        for (int i = 0; i < d; ++i) {
            CHECK(std::abs(joint.table().row(i).sum() - cx(born_a[i], 0.0)) < 1e-10);
            CHECK(std::abs(joint.table().col(i).sum() - cx(born_b[i], 0.0)) < 1e-10);
        }
        CHECK(std::abs(joint.table().sum() - cx(1.0, 0.0)) < 1e-10);
    }
}

TEST_CASE("kd_joint is linear in the state") {
    RandomStream rng(22);
    int d = 4;
    DensityOperator r1 = random_density(d, rng);
    DensityOperator r2 = random_density(d, rng);
    BasisSet a = haar_basis(d, rng, "a");
    BasisSet b = haar_basis(d, rng, "b");
    double lambda = 0.3;
    DensityOperator mix(lambda * r1.matrix() + (1.0 - lambda) * r2.matrix());
    Matrix expected =
        lambda * kd_joint(r1, a, b).table() + (1.0 - lambda) * kd_joint(r2, a, b).table();
    CHECK(max_abs(kd_joint(mix, a, b).table() - expected) < 1e-12);
}

TEST_CASE("kd_joint rejects mismatched dimensions") {
    DensityOperator rho{PureState::basis_vector(2, 0)};
    CHECK_THROWS_AS(
        kd_joint(rho, build_basis(BasisKind::standard, 3), build_basis(BasisKind::standard, 3)),
        ShapeError);
}

TEST_CASE("weak_conditional with the read-out basis containing a") {
    ComplexConditional cond =
        weak_conditional(PureState::basis_vector(2, 0), PureState(oracles::ket_plus()),
                         build_basis(BasisKind::standard, 2));
    CHECK(std::abs(cond.value(0) - cx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(cond.value(1)) < 1e-14);
}

TEST_CASE("weak_conditional between mutually unbiased states") {
    ComplexConditional cond =
        weak_conditional(PureState(oracles::ket_plus()), PureState(oracles::ket_plus_i()),
                         build_basis(BasisKind::standard, 2));
    CHECK(std::abs(cond.value(0) - cx(0.5, 0.5)) < 1e-14);
    CHECK(std::abs(cond.value(1) - cx(0.5, -0.5)) < 1e-14);
    CHECK(std::abs(cond.values().sum() - cx(1.0, 0.0)) < 1e-14);
}

TEST_CASE("weak_conditional rejects orthogonal conditioning") {
    CHECK_THROWS_AS(weak_conditional(PureState(oracles::ket_plus()),
                                     PureState(oracles::ket_minus()),
                                     build_basis(BasisKind::standard, 2)),
                    OrthogonalConditioningError);
}

TEST_CASE("weak values sum to one whenever defined") {
    RandomStream rng(23);
    for (int d : {2, 4, 7}) {
        PureState a = random_state(d, rng);
        PureState b = random_state(d, rng);
        if (std::abs(overlap(b, a)) <= 1e-3) continue;
        ComplexConditional cond = weak_conditional(a, b, haar_basis(d, rng, "m"));
        CHECK(std::abs(cond.values().sum() - cx(1.0, 0.0)) < 1e-10);
    }
}

TEST_CASE("transform_kernel with the identity") {
    BasisSet fourier2 = build_basis(BasisKind::fourier, 2);
    PureState zero = PureState::basis_vector(2, 0);
    UnitaryMap id = UnitaryMap::identity(2);
    CHECK(std::abs(transform_kernel(id, zero, "f0", "f0", fourier2) - cx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(transform_kernel(id, zero, "f0", "f1", fourier2)) < 1e-14);
}

TEST_CASE("transform_kernel phase rotation example") {
    // U = exp(-i (pi/2) diag(1,-1)); <+|U^dag|+> <+|U|0> / <+|0> = cos(pi/2) e^{-i pi/2} = 0.
    Matrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    Observable obs = eigendecompose(m);
    UnitaryMap u = phase_unitary(obs, std::numbers::pi / 2.0);
    cx k = transform_kernel(u, PureState::basis_vector(2, 0), "f0", "f0",
                            build_basis(BasisKind::fourier, 2));
    CHECK(std::abs(k) < 1e-14);
}

TEST_CASE("transform_kernel equals the spectral sum for phase unitaries") {
    RandomStream rng(24);
    int d = 4;
    BasisSet basis_a = haar_basis(d, rng, "a");
    Eigen::VectorXd vals(d);
    for (int k = 0; k < d; ++k) vals[k] = d - 1 - k;
    Observable obs(basis_a, vals);
    BasisSet basis_b = haar_basis(d, rng, "b");
    double phi = 1.234;
    UnitaryMap u = phase_unitary(obs, phi);

    for (int a = 0; a < d; ++a) {
        PureState sa(basis_a.column(a));
        for (int b = 0; b < d; ++b) {
            for (int bp = 0; bp < d; ++bp) {
                cx raw = transform_kernel(u, sa, basis_b.label(b), basis_b.label(bp), basis_b);
                cx denom = basis_b.column(bp).dot(sa.amplitudes());
                cx spectral(0.0, 0.0);
                for (int ap = 0; ap < d; ++ap) {
                    spectral += basis_b.column(bp).dot(basis_a.column(ap)) *
                                basis_a.column(ap).dot(basis_b.column(b)) *
                                std::exp(cx(0.0, -phi * (obs.eigenvalue(a) - obs.eigenvalue(ap))));
                }
                spectral *= basis_b.column(b).dot(sa.amplitudes()) / denom;
                CHECK(std::abs(raw - spectral) < 1e-12);
            }
        }
    }
}

TEST_CASE("transform_kernel rejects orthogonal reference") {
    BasisSet std2 = build_basis(BasisKind::standard, 2);
    CHECK_THROWS_AS(transform_kernel(UnitaryMap::identity(2), PureState::basis_vector(2, 0),
                                     "0", "1", std2),
                    OrthogonalConditioningError);
}

TEST_CASE("propagate_joint with the identity is a no-op") {
    RandomStream rng(25);
    DensityOperator rho = random_density(3, rng);
    ComplexJointDistribution joint =
        kd_joint(rho, haar_basis(3, rng, "a"), haar_basis(3, rng, "b"));
    ComplexJointDistribution moved = propagate_joint(joint, UnitaryMap::identity(3));
    CHECK(max_abs(moved.table() - joint.table()) < 1e-13);
}

TEST_CASE("propagate_joint rotating the standard basis onto fourier") {
    DensityOperator rho{PureState::basis_vector(2, 0)};
    BasisSet std2 = build_basis(BasisKind::standard, 2);
    BasisSet fourier2 = build_basis(BasisKind::fourier, 2);
    // U^dag maps the standard columns onto the fourier columns.
    UnitaryMap u(fourier2.columns().adjoint());
    ComplexJointDistribution moved = propagate_joint(kd_joint(rho, std2, std2), u);
    ComplexJointDistribution direct = kd_joint(rho, std2, fourier2);
    CHECK(max_abs(moved.table() - direct.table()) < 1e-13);
}

TEST_CASE("propagate_joint equals kd_joint in the rotated basis") {
    RandomStream rng(11);
    int d = 4;
    DensityOperator rho = random_density(d, rng);
    BasisSet a = haar_basis(d, rng, "a");
    BasisSet b = haar_basis(d, rng, "b");
    UnitaryMap u = haar_unitary(d, rng);
    ComplexJointDistribution moved = propagate_joint(kd_joint(rho, a, b), u);
    BasisSet rotated(b.labels(), u.matrix().adjoint() * b.columns());
    CHECK(max_abs(moved.table() - kd_joint(rho, a, rotated).table()) < 1e-10);
}

TEST_CASE("propagate_joint equals the kernel-weighted sum where defined") {
    RandomStream rng(26);
    int d = 3;
    DensityOperator rho = random_density(d, rng);
    BasisSet basis_a = haar_basis(d, rng, "a");
    BasisSet basis_b = haar_basis(d, rng, "b");
    UnitaryMap u = haar_unitary(d, rng);
    ComplexJointDistribution joint = kd_joint(rho, basis_a, basis_b);
    ComplexJointDistribution moved = propagate_joint(joint, u);
    for (int a = 0; a < d; ++a) {
        PureState sa(basis_a.column(a));
        for (int b = 0; b < d; ++b) {
            cx sum(0.0, 0.0);
            for (int bp = 0; bp < d; ++bp) {
                sum += transform_kernel(u, sa, basis_b.label(b), basis_b.label(bp), basis_b) *
                       joint.entry(a, bp);
            }
            CHECK(std::abs(sum - moved.entry(a, b)) < 1e-10);
        }
    }
}

TEST_CASE("predict_outcome point mass") {
    DensityOperator rho{PureState::basis_vector(2, 0)};
    BasisSet std2 = build_basis(BasisKind::standard, 2);
    Eigen::VectorXd p = predict_outcome(kd_joint(rho, std2, std2), std2);
    CHECK(p[0] == doctest::Approx(1.0));
    CHECK(p[1] == doctest::Approx(0.0));
}

TEST_CASE("predict_outcome through mutually unbiased bases") {
    DensityOperator rho{PureState::basis_vector(2, 0)};
    Eigen::VectorXd p = predict_outcome(kd_joint(rho, plus_minus_basis(), circular_basis()),
                                        build_basis(BasisKind::fourier, 2));
    CHECK(std::abs(p[0] - 0.5) < 1e-12);
    CHECK(std::abs(p[1] - 0.5) < 1e-12);
}

TEST_CASE("predict_outcome equals the Born rule") {
    RandomStream rng(3);
    int d = 5;
    DensityOperator rho = random_density(d, rng);
    BasisSet a = haar_basis(d, rng, "a");
    BasisSet b = haar_basis(d, rng, "b");
    BasisSet m = haar_basis(d, rng, "m");
    Eigen::VectorXd p = predict_outcome(kd_joint(rho, a, b), m);
    Eigen::VectorXd expected = oracles::born(rho.matrix(), m.columns());
    CHECK((p - expected).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(p.sum() - 1.0) < 1e-10);
}

TEST_CASE("joint distribution rejects an inconsistent table") {
    DensityOperator rho{PureState::basis_vector(2, 0)};
    BasisSet std2 = build_basis(BasisKind::standard, 2);
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 0) = cx(2.0, 0.0);
    CHECK_THROWS_AS(ComplexJointDistribution(rho, std2, std2, bad), ShapeError);
}

TEST_CASE("joint distribution serialization") {
    DensityOperator rho{PureState::basis_vector(2, 0)};
    BasisSet std2 = build_basis(BasisKind::standard, 2);
    ComplexJointDistribution joint = kd_joint(rho, std2, build_basis(BasisKind::fourier, 2));

    std::ostringstream csv;
    write_csv(joint, csv);
    CHECK(csv.str().substr(0, 23) == "a_label,b_label,re,im\n0");
    CHECK(csv.str().find("0,f0,0.4999999999999998") != std::string::npos);

    std::ostringstream js1, js2;
    write_json(joint, js1);
    write_json(joint, js2);
    CHECK(js1.str() == js2.str());
    CHECK(js1.str().find("\"basisA\"") != std::string::npos);
    CHECK(js1.str().find("\"table\"") != std::string::npos);
}
