#include <algorithm>
#include <cmath>
#include <numbers>

#include "qergo/causality.hpp"
#include "qergo/ergodic.hpp"
#include "qergo/hilbert.hpp"
#include "qergo/meter.hpp"
#include "qergo/quasiprob.hpp"
#include "qergo/scenario.hpp"

namespace qergo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct MaxDev {
    double value = 0.0;
    void add(double d) { value = std::max(value, std::abs(d)); }
};

// Uniform trapezoid average over one phase period; exact for trigonometric
// polynomials below the point count.
constexpr int kQuadraturePoints = 128;

// Observable with a Haar-random eigenbasis and integer-spaced spectrum, so
// the uniform phase average dephases it exactly.
Observable integer_observable(int dim, RandomStream& rng) {
    BasisSet basis = haar_basis(dim, rng);
    Eigen::VectorXd vals(dim);
    for (int k = 0; k < dim; ++k) vals[k] = dim - 1 - k;
    return Observable(std::move(basis), std::move(vals));
}

PureState state_with_min_overlap(int dim, RandomStream& rng, const PureState& other,
                                 double min_overlap) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        PureState s = random_state(dim, rng);
        if (std::abs(overlap(s, other)) > min_overlap) return s;
    }
    throw ShapeError("state_with_min_overlap: resampling failed");
}

}  // namespace

std::vector<CheckResult> identity_suite_checks(const SuiteParams& params) {
    std::vector<CheckResult> checks;
    const double ts = params.tol_scale;
    RandomStream root(params.seed, "identity-suite");
    auto case_rng = [&](int dim, int s, int salt) {
        return root.substream(static_cast<std::uint64_t>(dim) * 1024 +
                              static_cast<std::uint64_t>(s) * 16 + salt);
    };

    std::vector<int> dims;
    for (int d = 2; d <= params.dim_max; ++d) dims.push_back(d);

    // --- hilbert ---
    {
        MaxDev dev;
        for (int d : dims) {
            for (BasisKind kind : {BasisKind::standard, BasisKind::fourier}) {
                BasisSet b = build_basis(kind, d);
                dev.add((b.columns().adjoint() * b.columns() - Matrix::Identity(d, d))
                            .cwiseAbs()
                            .maxCoeff());
            }
            for (int s = 0; s < params.seeds; ++s) {
                BasisSet b = build_basis(BasisKind::haar_random, d, params.seed + s);
                dev.add((b.columns().adjoint() * b.columns() - Matrix::Identity(d, d))
                            .cwiseAbs()
                            .maxCoeff());
            }
        }
        checks.push_back(make_max_deviation_check("hilbert.basis_gram", dev.value, 1e-12 * ts));
    }
    {
        MaxDev dev;
        for (int d : dims) {
            for (int s = 0; s < params.seeds; ++s) {
                RandomStream rng = case_rng(d, s, 0);
                Matrix h = random_hermitian(d, rng);
                Observable obs = eigendecompose(h);
                dev.add((obs.matrix() - h).cwiseAbs().maxCoeff());
            }
        }
        checks.push_back(
            make_max_deviation_check("hilbert.eigen_roundtrip", dev.value, tol::lin * ts));
    }
    {
        MaxDev dev;
        for (int d : dims) {
            for (int s = 0; s < params.seeds; ++s) {
                RandomStream rng = case_rng(d, s, 1);
                Observable obs = eigendecompose(random_hermitian(d, rng));
                double phi1 = kTwoPi * rng.next_double();
                double phi2 = kTwoPi * rng.next_double();
                Matrix lhs = phase_unitary(obs, phi1).matrix() * phase_unitary(obs, phi2).matrix();
                dev.add((lhs - phase_unitary(obs, phi1 + phi2).matrix()).cwiseAbs().maxCoeff());
            }
        }
        checks.push_back(
            make_max_deviation_check("hilbert.phase_unitary_group", dev.value, tol::lin * ts));
    }

    // --- quasiprob ---
    {
        MaxDev dev;
        for (int d : dims) {
            for (int s = 0; s < params.seeds; ++s) {
                RandomStream rng = case_rng(d, s, 2);
                DensityOperator rho = random_density(d, rng);
                BasisSet basis_a = haar_basis(d, rng, "a");
                BasisSet basis_b = haar_basis(d, rng, "b");
                ComplexJointDistribution joint = kd_joint(rho, basis_a, basis_b);
                Eigen::VectorXd born_a = born_distribution(rho, basis_a);
                Eigen::VectorXd born_b = born_distribution(rho, basis_b);
                for (int a = 0; a < d; ++a) {
                    cx row = joint.table().row(a).sum();
                    dev.add(std::abs(row - cx(born_a[a], 0.0)));
                }
                for (int b = 0; b < d; ++b) {
                    cx col = joint.table().col(b).sum();
                    dev.add(std::abs(col - cx(born_b[b], 0.0)));
                }
            }
        }
        checks.push_back(
            make_max_deviation_check("quasiprob.marginals_born", dev.value, 1e-10 * ts));
    }
    {
        MaxDev dev;
        for (int d : dims) {
            for (int s = 0; s < params.seeds; ++s) {
                RandomStream rng = case_rng(d, s, 3);
                DensityOperator rho1 = random_density(d, rng);
                DensityOperator rho2 = random_density(d, rng);
                double lambda = rng.next_double();
                BasisSet basis_a = haar_basis(d, rng, "a");
                BasisSet basis_b = haar_basis(d, rng, "b");
                DensityOperator mix(lambda * rho1.matrix() + (1.0 - lambda) * rho2.matrix());
                Matrix expected = lambda * kd_joint(rho1, basis_a, basis_b).table() +
                                  (1.0 - lambda) * kd_joint(rho2, basis_a, basis_b).table();
                dev.add((kd_joint(mix, basis_a, basis_b).table() - expected)
                            .cwiseAbs()
                            .maxCoeff());
            }
        }
        checks.push_back(make_max_deviation_check("quasiprob.linearity", dev.value, tol::lin * ts));
    }
    {
        MaxDev dev;
        for (int d : dims) {
            for (int s = 0; s < params.seeds; ++s) {
                RandomStream rng = case_rng(d, s, 4);
                PureState a = random_state(d, rng);
                PureState b = state_with_min_overlap(d, rng, a, 1e-3);
                ComplexConditional cond = weak_conditional(a, b, haar_basis(d, rng, "m"));
                dev.add(std::abs(cond.values().sum() - cx(1.0, 0.0)));
            }
        }
        checks.push_back(make_max_deviation_check("quasiprob.weak_sum", dev.value, tol::lin * ts));
    }
    {
        MaxDev dev;
        for (int d : dims) {
            for (int s = 0; s < params.seeds; ++s) {
                RandomStream rng = case_rng(d, s, 5);
                DensityOperator rho = random_density(d, rng);
                BasisSet basis_a = haar_basis(d, rng, "a");
                BasisSet basis_b = haar_basis(d, rng, "b");
                BasisSet basis_m = haar_basis(d, rng, "m");
                Eigen::VectorXd predicted =
                    predict_outcome(kd_joint(rho, basis_a, basis_b), basis_m);
                Eigen::VectorXd expected = born_distribution(rho, basis_m);
                dev.add((predicted - expected).cwiseAbs().maxCoeff());
            }
        }
        checks.push_back(make_max_deviation_check("quasiprob.predict_born", dev.value, 1e-10 * ts));
    }
    {
        MaxDev dev;
        for (int d : dims) {
            for (int s = 0; s < params.seeds; ++s) {
                RandomStream rng = case_rng(d, s, 6);
                DensityOperator rho = random_density(d, rng);
                BasisSet basis_a = haar_basis(d, rng, "a");
                BasisSet basis_b = haar_basis(d, rng, "b");
                UnitaryMap u = haar_unitary(d, rng);
                ComplexJointDistribution propagated =
                    propagate_joint(kd_joint(rho, basis_a, basis_b), u);
                BasisSet rotated(basis_b.labels(), u.matrix().adjoint() * basis_b.columns());
                ComplexJointDistribution direct = kd_joint(rho, basis_a, rotated);
                dev.add((propagated.table() - direct.table()).cwiseAbs().maxCoeff());
            }
        }
        checks.push_back(
            make_max_deviation_check("quasiprob.propagate_dual_path", dev.value, 1e-10 * ts));
    }
    {
        // rho(a,U(b)) = sum_b' P(U(b)|a,b') rho(a,b') where the kernel is
        // evaluated in its raw singular form.
        MaxDev dev;
        for (int d : dims) {
            for (int s = 0; s < params.seeds; ++s) {
                RandomStream rng = case_rng(d, s, 7);
                BasisSet basis_a = haar_basis(d, rng, "a");
                BasisSet basis_b = haar_basis(d, rng, "b");
                DensityOperator rho = random_density(d, rng);
                UnitaryMap u = haar_unitary(d, rng);
                ComplexJointDistribution joint = kd_joint(rho, basis_a, basis_b);
                ComplexJointDistribution propagated = propagate_joint(joint, u);
                for (int a = 0; a < d; ++a) {
                    PureState sa(basis_a.column(a));
                    for (int b = 0; b < d; ++b) {
                        cx sum(0.0, 0.0);
                        for (int bp = 0; bp < d; ++bp) {
                            sum += transform_kernel(u, sa, basis_b.label(b),
                                                    basis_b.label(bp), basis_b) *
                                   joint.entry(a, bp);
                        }
                        dev.add(std::abs(sum - propagated.entry(a, b)));
                    }
                }
            }
        }
        checks.push_back(
            make_max_deviation_check("quasiprob.kernel_propagation", dev.value, 1e-10 * ts));
    }
    {
        // Raw kernel versus its spectral-sum form for U = exp(-i phi A).
        MaxDev dev;
        for (int d : dims) {
            for (int s = 0; s < params.seeds; ++s) {
                RandomStream rng = case_rng(d, s, 8);
                Observable obs = integer_observable(d, rng);
                BasisSet basis_b = haar_basis(d, rng, "b");
                double phi = kTwoPi * rng.next_double();
                UnitaryMap u = phase_unitary(obs, phi);
                const BasisSet& basis_a = obs.eigenbasis();
                for (int a = 0; a < d; ++a) {
                    PureState sa(basis_a.column(a));
                    for (int b = 0; b < d; ++b) {
                        for (int bp = 0; bp < d; ++bp) {
                            cx denom = basis_b.column(bp).dot(sa.amplitudes());
                            cx ba = basis_b.column(b).dot(sa.amplitudes());
                            cx spectral(0.0, 0.0);
                            for (int ap = 0; ap < d; ++ap) {
                                cx bp_ap = basis_b.column(bp).dot(basis_a.column(ap));
                                cx ap_b = basis_a.column(ap).dot(basis_b.column(b));
                                double gap = obs.eigenvalue(a) - obs.eigenvalue(ap);
                                spectral += bp_ap * ap_b * std::exp(cx(0.0, -phi * gap));
                            }
                            spectral *= ba / denom;
                            cx raw = transform_kernel(u, sa, basis_b.label(b),
                                                      basis_b.label(bp), basis_b);
                            dev.add(std::abs(raw - spectral));
                        }
                    }
                }
            }
        }
        checks.push_back(
            make_max_deviation_check("quasiprob.kernel_spectral", dev.value, 1e-10 * ts));
    }

    // --- ergodic ---
    {
        MaxDev dev;
        for (int d : dims) {
            for (int s = 0; s < params.seeds; ++s) {
                RandomStream rng = case_rng(d, s, 9);
                DensityOperator rho = random_density(d, rng);
                Observable obs = integer_observable(d, rng);
                for (const PhaseDistribution& dist :
                     {PhaseDistribution::uniform(), PhaseDistribution::gaussian(1.5),
                      PhaseDistribution::point(0.7)}) {
                    DensityOperator out = phase_average_channel(rho, obs, dist).rho;
                    dev.add((out.matrix() - out.matrix().adjoint().eval()).cwiseAbs().maxCoeff());
                    dev.add(std::abs(out.matrix().trace().real() - 1.0));
                    Eigen::SelfAdjointEigenSolver<Matrix> es(out.matrix(),
                                                             Eigen::EigenvaluesOnly);
                    dev.add(std::max(0.0, -es.eigenvalues().minCoeff()));
                    // Diagonal (in the eigenbasis) elements are invariant.
                    const Matrix& v = obs.eigenbasis().columns();
                    Vector before = (v.adjoint() * rho.matrix() * v).diagonal();
                    Vector after = (v.adjoint() * out.matrix() * v).diagonal();
                    dev.add((before - after).cwiseAbs().maxCoeff());
                }
            }
        }
        checks.push_back(make_max_deviation_check("ergodic.channel_valid", dev.value, 1e-10 * ts));
    }
    {
        MaxDev dev;
        for (int d : dims) {
            for (int s = 0; s < params.seeds; ++s) {
                RandomStream rng = case_rng(d, s, 10);
                DensityOperator rho = random_density(d, rng);
                Observable obs = integer_observable(d, rng);
                DensityOperator uniform_avg =
                    phase_average_channel(rho, obs, PhaseDistribution::uniform()).rho;
                dev.add((uniform_avg.matrix() - dephase(rho, obs).matrix()).cwiseAbs().maxCoeff());
            }
        }
        checks.push_back(
            make_max_deviation_check("ergodic.uniform_dephase", dev.value, 1e-12 * ts));
    }
    {
        // Trace distance of the Monte Carlo path from the exact path, scaled
        // by sqrt(n); bounded by 5 at n in {1e3, 1e4, 1e5}.
        MaxDev scaled;
        Vector plus(2);
        plus << 1.0, 1.0;
        DensityOperator rho{PureState(plus / std::sqrt(2.0))};
        Eigen::VectorXd vals(2);
        vals << 1.0, 0.0;
        Observable obs{build_basis(BasisKind::standard, 2), vals};
        for (std::int64_t n : {1000, 10000, 100000}) {
            DensityOperator exact =
                phase_average_channel(rho, obs, PhaseDistribution::uniform()).rho;
            DensityOperator mc = phase_average_channel(rho, obs, PhaseDistribution::uniform(),
                                                       MonteCarloAverage{n, params.seed}).rho;
            scaled.add(trace_distance(exact, mc) * std::sqrt(static_cast<double>(n)));
        }
        CheckResult c;
        c.name = "ergodic.mc_convergence";
        c.values = {scaled.value};
        c.references = {0.0};
        c.deviation = scaled.value;
        c.tolerance = 5.0;
        c.pass = scaled.value <= c.tolerance;
        checks.push_back(std::move(c));
    }
    {
        // Phase-averaged transformation kernel equals |<b|a>|^2 for every
        // reference outcome b'; quadrature and characteristic-function paths.
        MaxDev dev;
        for (int d : dims) {
            for (int s = 0; s < params.seeds; ++s) {
                RandomStream rng = case_rng(d, s, 12);
                Observable obs = integer_observable(d, rng);
                BasisSet basis_b = haar_basis(d, rng, "b");
                const BasisSet& basis_a = obs.eigenbasis();
                int a = static_cast<int>(rng.next_u64() % d);
                PureState sa(basis_a.column(a));
                for (int b = 0; b < d; ++b) {
                    double expected = ergodic_kernel(sa, PureState(basis_b.column(b)));
                    for (int bp = 0; bp < d; ++bp) {
                        cx quad(0.0, 0.0);
                        for (int k = 0; k < kQuadraturePoints; ++k) {
                            double phi = kTwoPi * k / kQuadraturePoints;
                            quad += transform_kernel(phase_unitary(obs, phi), sa,
                                                     basis_b.label(b), basis_b.label(bp),
                                                     basis_b);
                        }
                        quad /= static_cast<double>(kQuadraturePoints);
                        dev.add(std::abs(quad - cx(expected, 0.0)));

                        cx denom = basis_b.column(bp).dot(sa.amplitudes());
                        cx ba = basis_b.column(b).dot(sa.amplitudes());
                        cx closed(0.0, 0.0);
                        for (int ap = 0; ap < d; ++ap) {
                            cx bp_ap = basis_b.column(bp).dot(basis_a.column(ap));
                            cx ap_b = basis_a.column(ap).dot(basis_b.column(b));
                            closed += bp_ap * ap_b *
                                      PhaseDistribution::uniform().characteristic(
                                          obs.eigenvalue(a) - obs.eigenvalue(ap));
                        }
                        closed *= ba / denom;
                        dev.add(std::abs(closed - cx(expected, 0.0)));
                    }
                }
            }
        }
        checks.push_back(
            make_max_deviation_check("ergodic.kernel_ergodic_average", dev.value, 1e-9 * ts));
    }
    {
        MaxDev dev;
        for (int d : dims) {
            for (int s = 0; s < params.seeds; ++s) {
                RandomStream rng = case_rng(d, s, 13);
                DensityOperator rho1 = random_density(d, rng);
                DensityOperator rho2 = random_density(d, rng);
                Observable obs = integer_observable(d, rng);
                DensityOperator once = dephase(rho1, obs);
                dev.add((dephase(once, obs).matrix() - once.matrix()).cwiseAbs().maxCoeff());
                double lambda = rng.next_double();
                DensityOperator mix(lambda * rho1.matrix() + (1.0 - lambda) * rho2.matrix());
                Matrix mixed_then = dephase(mix, obs).matrix();
                Matrix then_mixed =
                    lambda * dephase(rho1, obs).matrix() + (1.0 - lambda) * dephase(rho2, obs).matrix();
                dev.add((mixed_then - then_mixed).cwiseAbs().maxCoeff());
            }
        }
        checks.push_back(
            make_max_deviation_check("ergodic.dephase_idempotent", dev.value, tol::lin * ts));
    }
    {
        // Preparation identity: the phase-averaged joint table collapses
        // to P(b|a) <a|rho|a>, matching prepare_state weights.
        MaxDev dev;
        for (int d : dims) {
            for (int s = 0; s < params.seeds; ++s) {
                RandomStream rng = case_rng(d, s, 14);
                DensityOperator rho = random_density(d, rng);
                Observable obs = integer_observable(d, rng);
                const BasisSet& basis_a = obs.eigenbasis();
                BasisSet basis_b = haar_basis(d, rng, "b");
                ComplexJointDistribution joint = kd_joint(rho, basis_a, basis_b);

                Matrix averaged = Matrix::Zero(d, d);
                for (int k = 0; k < kQuadraturePoints; ++k) {
                    double phi = kTwoPi * k / kQuadraturePoints;
                    averaged += propagate_joint(joint, phase_unitary(obs, phi)).table();
                }
                averaged /= static_cast<double>(kQuadraturePoints);

                Matrix dephased_table = kd_joint(dephase(rho, obs), basis_a, basis_b).table();
                dev.add((averaged - dephased_table).cwiseAbs().maxCoeff());
                for (int a = 0; a < d; ++a) {
                    double pa = (basis_a.column(a).adjoint() * rho.matrix() *
                                 basis_a.column(a))(0, 0).real();
                    for (int b = 0; b < d; ++b) {
                        double pba = std::norm(basis_b.column(b).dot(basis_a.column(a)));
                        dev.add(std::abs(averaged(a, b) - cx(pba * pa, 0.0)));
                    }
                    if (pa >= tol::lin) {
                        PreparedState prep = prepare_state(rho, obs, basis_a.label(a));
                        dev.add(std::abs(prep.probability - pa));
                        Matrix proj = basis_a.column(a) * basis_a.column(a).adjoint();
                        dev.add((prep.rho_out.matrix() - proj).cwiseAbs().maxCoeff());
                    }
                }
            }
        }
        checks.push_back(make_max_deviation_check("ergodic.prepare_eq7", dev.value, 1e-10 * ts));
    }

    // --- meter ---
    {
        MaxDev equivalence, statistics, norm_dev;
        struct Config {
            int dim;
            double kappa;
            double sigma_x;
        };
        for (const Config& mc : {Config{2, 5.0, 0.5}, Config{2, 1.0, 0.5}, Config{3, 2.0, 0.5}}) {
            Eigen::VectorXd vals(mc.dim);
            for (int k = 0; k < mc.dim; ++k) vals[k] = 0.5 * (mc.dim - 1) - k;
            Observable obs{build_basis(BasisKind::standard, mc.dim), vals};
            MeterModel meter = MeterModel::auto_gaussian(obs, mc.sigma_x, mc.kappa);
            for (int s = 0; s < params.seeds; ++s) {
                RandomStream rng = case_rng(mc.dim, s, 15);
                PureState input = random_state(mc.dim, rng);
                JointState joint = interact(input, meter, obs);
                DensityOperator reduced = reduce_system(joint);

                double sigma_p = 1.0 / (2.0 * mc.sigma_x);
                DensityOperator channel =
                    phase_average_channel(DensityOperator(input), obs,
                                          PhaseDistribution::gaussian(mc.kappa * sigma_p))
                        .rho;
                equivalence.add((reduced.matrix() - channel.matrix()).cwiseAbs().maxCoeff());

                Eigen::VectorXd before(mc.dim), after = born_distribution(reduced, obs.eigenbasis());
                for (int a = 0; a < mc.dim; ++a) {
                    before[a] = std::norm(obs.eigenbasis().column(a).dot(input.amplitudes()));
                }
                statistics.add((before - after).cwiseAbs().maxCoeff());
                norm_dev.add(std::abs(joint.amplitudes().squaredNorm() - 1.0));

                auto bins = readout(joint, default_bin_edges(obs, meter));
                double total = 0.0;
                for (const auto& r : bins) {
                    total += r.probability;
                    norm_dev.add(std::max(0.0, -r.probability));
                }
                norm_dev.add(std::abs(total - 1.0));
            }
        }
        checks.push_back(
            make_max_deviation_check("meter.channel_equivalence", equivalence.value, 1e-8 * ts));
        checks.push_back(
            make_max_deviation_check("meter.a_statistics_conserved", statistics.value, 1e-12 * ts));
        checks.push_back(
            make_max_deviation_check("meter.readout_normalization", norm_dev.value, 1e-12 * ts));
    }
    {
        // Strong-coupling fidelity bound 1 - exp(-(kappa*gap)^2 / (8 sigma_x^2)).
        MaxDev excess;
        Observable spin{BasisSet({"up", "down"}, Matrix::Identity(2, 2)),
                        (Eigen::VectorXd(2) << 0.5, -0.5).finished()};
        for (double kappa : {5.0, 8.0}) {
            double sigma_x = 0.5;
            MeterModel meter = MeterModel::auto_gaussian(spin, sigma_x, kappa);
            for (int s = 0; s < params.seeds; ++s) {
                RandomStream rng = case_rng(2, s, 16);
                PureState input = random_state(2, rng);
                double p_up = std::norm(input.amplitudes()[0]);
                if (p_up < 1e-3 || p_up > 1.0 - 1e-3) continue;
                PreparationOutcome prep = prepare_by_measurement(input, spin, meter, "up");
                double bound = std::exp(-(kappa * kappa) / (8.0 * sigma_x * sigma_x));
                excess.add(std::max(0.0, (1.0 - prep.fidelity) - bound));
            }
        }
        checks.push_back(
            make_max_deviation_check("meter.strong_fidelity_bound", excess.value, 1e-9 * ts));
    }

    // --- causality ---
    {
        MaxDev dev;
        for (int d : dims) {
            for (int s = 0; s < params.seeds; ++s) {
                RandomStream rng = case_rng(d, s, 17);
                BasisSet basis_m = haar_basis(d, rng, "m");
                BasisSet basis_b = haar_basis(d, rng, "b");
                int mp = static_cast<int>(rng.next_u64() % d);
                ComplexJointDistribution prep = prep_joint(basis_m.label(mp), basis_m, basis_b);
                ComplexJointDistribution direct =
                    kd_joint(DensityOperator(PureState(basis_m.column(mp))), basis_m, basis_b);
                dev.add((prep.table() - direct.table()).cwiseAbs().maxCoeff());
            }
        }
        checks.push_back(
            make_max_deviation_check("causality.prep_joint_dual", dev.value, 1e-12 * ts));
    }
    {
        MaxDev dev;
        for (int d : dims) {
            for (int s = 0; s < params.seeds; ++s) {
                RandomStream rng = case_rng(d, s, 18);
                BasisSet basis_m = haar_basis(d, rng, "m");
                BasisSet basis_a = haar_basis(d, rng, "a");
                BasisSet basis_b = haar_basis(d, rng, "b");
                int mp = static_cast<int>(rng.next_u64() % d);
                ComplexJointDistribution re =
                    rerepresent(prep_joint(basis_m.label(mp), basis_m, basis_b), basis_a);
                ComplexJointDistribution direct =
                    kd_joint(DensityOperator(PureState(basis_m.column(mp))), basis_a, basis_b);
                dev.add((re.table() - direct.table()).cwiseAbs().maxCoeff());
            }
        }
        checks.push_back(
            make_max_deviation_check("causality.rerepresent_dual", dev.value, 1e-10 * ts));
    }
    {
        MaxDev delta_dev, b_invariance;
        for (int d : dims) {
            for (int s = 0; s < params.seeds; ++s) {
                RandomStream rng = case_rng(d, s, 19);
                BasisSet basis_m = haar_basis(d, rng, "m");
                BasisSet basis_a = haar_basis(d, rng, "a");
                int mp = static_cast<int>(rng.next_u64() % d);
                std::vector<Eigen::VectorXd> outputs;
                for (int rep = 0; rep < 5; ++rep) {
                    BasisSet basis_b = haar_basis(d, rng, "b");
                    Eigen::VectorXd p =
                        prep_measure_chain(basis_m.label(mp), basis_m, basis_a, basis_b);
                    for (int m = 0; m < d; ++m) {
                        delta_dev.add(std::abs(p[m] - (m == mp ? 1.0 : 0.0)));
                    }
                    if (!outputs.empty()) {
                        b_invariance.add((p - outputs.front()).cwiseAbs().maxCoeff());
                    }
                    outputs.push_back(std::move(p));
                }
            }
        }
        checks.push_back(make_max_deviation_check("causality.chain_delta", delta_dev.value, 1e-9 * ts));
        checks.push_back(
            make_max_deviation_check("causality.chain_b_invariance", b_invariance.value, 1e-9 * ts));
    }
    {
        MaxDev dev;
        for (int d : dims) {
            for (int s = 0; s < params.seeds; ++s) {
                RandomStream rng = case_rng(d, s, 20);
                BasisSet basis_m = haar_basis(d, rng, "m");
                BasisSet basis_a = haar_basis(d, rng, "a");
                PureState b = random_state(d, rng);
                DeterminismMatrix dm = determinism_matrix(basis_m, basis_a, b);
                dev.add((dm.entries - Matrix::Identity(d, d)).cwiseAbs().maxCoeff());
            }
        }
        checks.push_back(
            make_max_deviation_check("causality.determinism_identity", dev.value, 1e-9 * ts));
    }
    {
        MaxDev dev;
        for (int d : dims) {
            for (int s = 0; s < params.seeds; ++s) {
                RandomStream rng = case_rng(d, s, 21);
                BasisSet basis_m = haar_basis(d, rng, "m");
                PureState a = random_state(d, rng);
                PureState b = state_with_min_overlap(d, rng, a, 1e-3);
                Eigen::VectorXd actions(d);
                for (int m = 0; m < d; ++m) actions[m] = kTwoPi * rng.next_double();
                ActionSchedule schedule(basis_m, actions);
                TransformedProbability tp = transformed_probability(a, b, basis_m, schedule);
                dev.add(std::abs(tp.vector_path - tp.action_path.value()));

                Matrix u = Matrix::Zero(d, d);
                for (int m = 0; m < d; ++m) {
                    u += std::exp(cx(0.0, -actions[m])) *
                         (basis_m.column(m) * basis_m.column(m).adjoint());
                }
                double direct = std::norm(b.amplitudes().dot(u * a.amplitudes()));
                dev.add(std::abs(tp.vector_path - direct));
            }
        }
        checks.push_back(
            make_max_deviation_check("causality.action_duality", dev.value, 1e-10 * ts));
    }
    {
        MaxDev dev;
        for (int d : dims) {
            for (int s = 0; s < params.seeds; ++s) {
                RandomStream rng = case_rng(d, s, 22);
                BasisSet basis_m = haar_basis(d, rng, "m");
                PureState a =
                    state_with_min_overlap(d, rng, reference_state(basis_m), 1e-3);
                ComplexConditional cond = action_phase_representation(a, basis_m);
                // Same values as the generic weak conditional against r.
                ComplexConditional weak = weak_conditional(a, reference_state(basis_m), basis_m);
                dev.add((cond.values() - weak.values()).cwiseAbs().maxCoeff());
                PureState back = reconstruct_state(cond, basis_m);
                dev.add(1.0 - std::norm(overlap(back, a)));
            }
        }
        checks.push_back(
            make_max_deviation_check("causality.reconstruction_roundtrip", dev.value, 1e-10 * ts));
    }
    {
        // Outcome prediction does not depend on which bases carry the
        // joint table.
        MaxDev dev;
        for (int d : dims) {
            for (int s = 0; s < params.seeds; ++s) {
                RandomStream rng = case_rng(d, s, 23);
                DensityOperator rho = random_density(d, rng);
                BasisSet basis_m = haar_basis(d, rng, "m");
                std::vector<Eigen::VectorXd> outputs;
                for (int rep = 0; rep < 3; ++rep) {
                    BasisSet basis_a = haar_basis(d, rng, "a");
                    BasisSet basis_b = haar_basis(d, rng, "b");
                    outputs.push_back(
                        predict_outcome(kd_joint(rho, basis_a, basis_b), basis_m));
                }
                for (std::size_t i = 1; i < outputs.size(); ++i) {
                    dev.add((outputs[i] - outputs.front()).cwiseAbs().maxCoeff());
                }
            }
        }
        checks.push_back(
            make_max_deviation_check("causality.predict_basis_invariance", dev.value, 1e-10 * ts));
    }

    // --- cli-level reproducibility ---
    {
        ScenarioConfig bs;
        bs.scenario = ScenarioKind::beam_splitter;
        bs.seed = params.seed;
        std::string first = emit_report(run_scenario(bs), ReportFormat::json);
        std::string second = emit_report(run_scenario(bs), ReportFormat::json);
        CheckResult c;
        c.name = "cli.report_reproducibility";
        c.values = {first == second ? 0.0 : 1.0};
        c.references = {0.0};
        c.deviation = c.values[0];
        c.tolerance = 0.0;
        c.pass = c.deviation <= c.tolerance;
        checks.push_back(std::move(c));
    }
    {
        Vector plus(2);
        plus << 1.0, 1.0;
        DensityOperator rho{PureState(plus / std::sqrt(2.0))};
        Observable obs{build_basis(BasisKind::standard, 2),
                       (Eigen::VectorXd(2) << 1.0, 0.0).finished()};
        auto run = [&](std::uint64_t seed) {
            return phase_average_channel(rho, obs, PhaseDistribution::uniform(),
                                         MonteCarloAverage{20000, seed})
                .rho.matrix();
        };
        double same = (run(params.seed) - run(params.seed)).cwiseAbs().maxCoeff();
        double different = (run(params.seed) - run(params.seed + 1)).cwiseAbs().maxCoeff();
        CheckResult c;
        c.name = "cli.seed_determinism";
        c.values = {same, different};
        c.references = {0.0, 1.0};
        c.deviation = std::max(same, different > 0.0 ? 0.0 : 1.0);
        c.tolerance = 0.0;
        c.pass = c.deviation <= c.tolerance;
        checks.push_back(std::move(c));
    }

    std::sort(checks.begin(), checks.end(),
              [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
    return checks;
}

}  // namespace qergo
