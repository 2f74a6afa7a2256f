#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "qergo/ergodic.hpp"
#include "qergo/quasiprob.hpp"

using namespace qergo;
using oracles::kTwoPi;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Observable diag_observable(std::initializer_list<double> values) {
    Eigen::VectorXd v(static_cast<int>(values.size()));
    int i = 0;
    for (double x : values) v[i++] = x;
    return Observable(build_basis(BasisKind::standard, v.size()), v);
}

}  // namespace

TEST_CASE("characteristic function of the uniform distribution") {
    PhaseDistribution u = PhaseDistribution::uniform();
    CHECK(u.characteristic(0.0) == cx(1.0, 0.0));
    CHECK(std::abs(u.characteristic(1.0)) < 1e-12);
    CHECK(std::abs(u.characteristic(3.0)) < 1e-12);

    // Non-integer gap against direct quadrature of the phase average. The
    // integrand is not 2*pi-periodic, so Simpson instead of the trapezoid.
    double gap = 0.37;
    cx expected = oracles::simpson([&](double phi) { return std::exp(cx(0.0, -phi * gap)); },
                                   0.0, oracles::kTwoPi, 4096) /
                  oracles::kTwoPi;
    CHECK(std::abs(u.characteristic(gap) - expected) < 1e-10);
}

TEST_CASE("characteristic function of the gaussian distribution") {
    PhaseDistribution g = PhaseDistribution::gaussian(2.0);
    CHECK(std::abs(g.characteristic(1.0) - cx(std::exp(-2.0), 0.0)) < 1e-14);
    cx quad = oracles::gaussian_expectation(
        [](double phi) { return std::exp(cx(0.0, -phi * 1.0)); }, 2.0);
    CHECK(std::abs(g.characteristic(1.0) - quad) < 1e-10);
}

TEST_CASE("characteristic function of a point distribution") {
    PhaseDistribution p = PhaseDistribution::point(0.7);
    CHECK(std::abs(p.characteristic(2.0) - std::exp(cx(0.0, -1.4))) < 1e-14);
}

TEST_CASE("characteristic functions are bounded by one") {
    for (const PhaseDistribution& dist :
         {PhaseDistribution::uniform(), PhaseDistribution::uniform_width(3.0),
          PhaseDistribution::gaussian(1.3), PhaseDistribution::point(2.2)}) {
        CHECK(dist.characteristic(0.0) == cx(1.0, 0.0));
        for (double gap : {-3.5, -1.0, 0.2, 0.5, 1.0, 2.7, 10.0}) {
            CHECK(std::abs(dist.characteristic(gap)) <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("phase_average_channel with a point distribution at zero") {
    RandomStream rng(31);
    DensityOperator rho = random_density(3, rng);
    Observable obs = diag_observable({1.0, 0.0, -1.0});
    PhaseAverageResult out = phase_average_channel(rho, obs, PhaseDistribution::point(0.0));
    CHECK(max_abs(out.rho.matrix() - rho.matrix()) < 1e-13);
    bool found_zero_gap = false;
    for (const auto& [gap, factor] : out.report.factors) {
        if (gap == 0.0) {
            found_zero_gap = true;
            CHECK(factor == cx(1.0, 0.0));
        }
    }
    CHECK(found_zero_gap);
}

TEST_CASE("gaussian phase average damps the qubit coherence") {
    DensityOperator rho{PureState(oracles::ket_plus())};
    Observable obs = diag_observable({1.0, -1.0});
    PhaseAverageResult out =
        phase_average_channel(rho, obs, PhaseDistribution::gaussian(2.0));
    // Gap 2, sigma 2: off-diagonal (1/2) exp(-8); diagonal untouched.
    CHECK(std::abs(out.rho.matrix()(0, 1) - cx(0.5 * std::exp(-8.0), 0.0)) < 1e-14);
    CHECK(out.rho.matrix()(0, 0).real() == doctest::Approx(0.5));
    CHECK(out.rho.matrix()(1, 1).real() == doctest::Approx(0.5));
}

TEST_CASE("uniform averaging fully mixes the integer-gap qubit") {
    DensityOperator rho{PureState(oracles::ket_plus())};
    Observable obs = diag_observable({1.0, 0.0});
    DensityOperator exact = phase_average_channel(rho, obs, PhaseDistribution::uniform()).rho;
    CHECK(max_abs(exact.matrix() - 0.5 * Matrix::Identity(2, 2)) < 1e-12);

    DensityOperator mc = phase_average_channel(rho, obs, PhaseDistribution::uniform(),
                                               MonteCarloAverage{100000, 42})
                             .rho;
    CHECK(trace_distance(exact, mc) < 0.02);
}

TEST_CASE("monte carlo mode is seed-deterministic and rejects n = 0") {
    DensityOperator rho{PureState(oracles::ket_plus())};
    Observable obs = diag_observable({1.0, 0.0});
    CHECK_THROWS_AS(phase_average_channel(rho, obs, PhaseDistribution::uniform(),
                                          MonteCarloAverage{0, 1}),
                    EmptyEnsembleError);
    Matrix a = phase_average_channel(rho, obs, PhaseDistribution::uniform(),
                                     MonteCarloAverage{5000, 9})
                   .rho.matrix();
    Matrix b = phase_average_channel(rho, obs, PhaseDistribution::uniform(),
                                     MonteCarloAverage{5000, 9})
                   .rho.matrix();
    Matrix c = phase_average_channel(rho, obs, PhaseDistribution::uniform(),
                                     MonteCarloAverage{5000, 10})
                   .rho.matrix();
    CHECK(max_abs(a - b) == 0.0);
    CHECK(max_abs(a - c) > 0.0);
}

TEST_CASE("monte carlo converges at the statistical rate") {
    DensityOperator rho{PureState(oracles::ket_plus())};
    Observable obs = diag_observable({1.0, 0.0});
    DensityOperator exact = phase_average_channel(rho, obs, PhaseDistribution::uniform()).rho;
    for (std::int64_t n : {1000, 10000, 100000}) {
        DensityOperator mc = phase_average_channel(rho, obs, PhaseDistribution::uniform(),
                                                   MonteCarloAverage{n, 42})
                                 .rho;
        CHECK(trace_distance(exact, mc) <= 5.0 / std::sqrt(static_cast<double>(n)));
    }
}

TEST_CASE("dephase basics") {
    Observable obs = diag_observable({1.0, -1.0});
    DensityOperator diag(Matrix(0.5 * Matrix::Identity(2, 2)));
    CHECK(max_abs(dephase(diag, obs).matrix() - diag.matrix()) < 1e-14);

    DensityOperator plus{PureState(oracles::ket_plus())};
    CHECK(max_abs(dephase(plus, obs).matrix() - 0.5 * Matrix::Identity(2, 2)) < 1e-14);
}

TEST_CASE("dephase equals the exact uniform average for integer gaps") {
    RandomStream rng(5);
    int d = 4;
    DensityOperator rho = random_density(d, rng);
    BasisSet basis = haar_basis(d, rng);
    Eigen::VectorXd vals(d);
    vals << 3.0, 2.0, 1.0, 0.0;
    Observable obs(basis, vals);
    DensityOperator averaged = phase_average_channel(rho, obs, PhaseDistribution::uniform()).rho;
    CHECK(max_abs(averaged.matrix() - dephase(rho, obs).matrix()) < 1e-12);

    DensityOperator once = dephase(rho, obs);
    CHECK(max_abs(dephase(once, obs).matrix() - once.matrix()) < 1e-13);
}

TEST_CASE("ergodic_kernel values") {
    PureState zero = PureState::basis_vector(2, 0);
    PureState plus{oracles::ket_plus()};
    CHECK(ergodic_kernel(plus, plus) == doctest::Approx(1.0));
    CHECK(ergodic_kernel(zero, plus) == doctest::Approx(0.5));
}

TEST_CASE("ergodic_kernel equals the phase-averaged kernel for every reference") {
    RandomStream rng(9);
    int d = 6;
    BasisSet basis_a = haar_basis(d, rng, "a");
    Eigen::VectorXd vals(d);
    for (int k = 0; k < d; ++k) vals[k] = d - 1 - k;
    Observable obs(basis_a, vals);
    BasisSet basis_b = haar_basis(d, rng, "b");

    int a = 2;
    PureState sa(basis_a.column(a));
    for (int b = 0; b < d; ++b) {
        double expected = ergodic_kernel(sa, PureState(basis_b.column(b)));
        for (int bp = 0; bp < d; ++bp) {
            cx averaged = oracles::phase_average(
                [&](double phi) {
                    return transform_kernel(phase_unitary(obs, phi), sa, basis_b.label(b),
                                            basis_b.label(bp), basis_b);
                },
                64);
            CHECK(std::abs(averaged - cx(expected, 0.0)) < 1e-9);
        }
    }
}

TEST_CASE("prepare_state projective preparation") {
    Observable obs = diag_observable({1.0, -1.0});

    PreparedState from_zero =
        prepare_state(DensityOperator(PureState::basis_vector(2, 0)), obs, "0");
    CHECK(from_zero.probability == doctest::Approx(1.0));
    CHECK(max_abs(from_zero.rho_out.matrix() -
                  DensityOperator(PureState::basis_vector(2, 0)).matrix()) < 1e-14);

    PreparedState from_plus = prepare_state(DensityOperator(PureState(oracles::ket_plus())), obs, "0");
    CHECK(from_plus.probability == doctest::Approx(0.5));
    CHECK(max_abs(from_plus.rho_out.matrix() -
                  DensityOperator(PureState::basis_vector(2, 0)).matrix()) < 1e-14);
}

TEST_CASE("prepare_state then measuring in a rotated basis is Born-distributed") {
    // Select the f0 (= |+>) outcome of the fourier observable from |0><0|.
    Observable obs{build_basis(BasisKind::fourier, 2), (Eigen::VectorXd(2) << 0.5, -0.5).finished()};
    PreparedState prep = prepare_state(DensityOperator(PureState::basis_vector(2, 0)), obs, "f0");
    CHECK(prep.probability == doctest::Approx(0.5));

    Matrix y_cols(2, 2);
    y_cols.col(0) = oracles::ket_plus_i();
    y_cols.col(1) = oracles::ket_minus_i();
    Eigen::VectorXd p = born_distribution(prep.rho_out, BasisSet({"+i", "-i"}, y_cols));
    CHECK(p[0] == doctest::Approx(0.5));
    CHECK(p[1] == doctest::Approx(0.5));
}

TEST_CASE("prepare_state rejects zero-probability branches") {
    Observable obs = diag_observable({1.0, -1.0});
    CHECK_THROWS_AS(prepare_state(DensityOperator(PureState::basis_vector(2, 0)), obs, "1"),
                    ZeroProbabilityError);
    CHECK_THROWS_AS(prepare_state(DensityOperator(PureState::basis_vector(2, 0)), obs, "x"),
                    LabelError);
}

TEST_CASE("ergodic averaging reproduces the preparation identity") {
    RandomStream rng(33);
    int d = 3;
    DensityOperator rho = random_density(d, rng);
    BasisSet basis_a = haar_basis(d, rng, "a");
    Eigen::VectorXd vals(d);
    vals << 2.0, 1.0, 0.0;
    Observable obs(basis_a, vals);
    BasisSet basis_b = haar_basis(d, rng, "b");
    ComplexJointDistribution joint = kd_joint(rho, basis_a, basis_b);

    Matrix averaged = oracles::phase_average(
        [&](double phi) {
            return Matrix(propagate_joint(joint, phase_unitary(obs, phi)).table());
        },
        64);
    for (int a = 0; a < d; ++a) {
        double pa =
            (basis_a.column(a).adjoint() * rho.matrix() * basis_a.column(a))(0, 0).real();
        for (int b = 0; b < d; ++b) {
            double pba = std::norm(basis_b.column(b).dot(basis_a.column(a)));
            CHECK(std::abs(averaged(a, b) - cx(pba * pa, 0.0)) < 1e-10);
        }
    }
}

TEST_CASE("dephasing_distribution picks the right family") {
    Observable integer_gaps = diag_observable({2.0, 1.0, 0.0});
    PhaseDistribution d1 = dephasing_distribution(integer_gaps);
    CHECK(d1.kind() == PhaseDistribution::Kind::uniform);
    CHECK(d1.parameter() == doctest::Approx(kTwoPi));
    for (double gap : {1.0, 2.0}) CHECK(std::abs(d1.characteristic(gap)) < 1e-12);

    Observable half_gaps = diag_observable({0.5, 0.0});
    PhaseDistribution d2 = dephasing_distribution(half_gaps);
    CHECK(d2.kind() == PhaseDistribution::Kind::uniform);
    CHECK(d2.parameter() == doctest::Approx(2.0 * kTwoPi));
    CHECK(std::abs(d2.characteristic(0.5)) < 1e-12);

    Observable incommensurate = diag_observable({std::numbers::sqrt2, 1.0, 0.0});
    PhaseDistribution d3 = dephasing_distribution(incommensurate);
    CHECK(d3.kind() == PhaseDistribution::Kind::gaussian);
    // Residual damping is reported, not hidden.
    RandomStream rng(34);
    DensityOperator rho = random_density(3, rng);
    PhaseAverageResult out = phase_average_channel(rho, incommensurate, d3);
    bool has_nonzero_gap = false;
    for (const auto& [gap, factor] : out.report.factors) {
        if (gap != 0.0) {
            has_nonzero_gap = true;
            CHECK(std::abs(factor) < 1e-7);
        }
    }
    CHECK(has_nonzero_gap);
}

TEST_CASE("dephasing report serializes to a JSON list") {
    DensityOperator rho{PureState(oracles::ket_plus())};
    Observable obs = diag_observable({1.0, -1.0});
    PhaseAverageResult out = phase_average_channel(rho, obs, PhaseDistribution::gaussian(1.0));
    std::ostringstream os;
    write_json(out.report, os);
    CHECK(os.str().front() == '[');
    CHECK(os.str().find("\"gap\":0") != std::string::npos);
    CHECK(os.str().find("\"factor\":[1,0]") != std::string::npos);
}
