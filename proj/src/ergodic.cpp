#include "qergo/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qergo/detail/format.hpp"

namespace qergo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Pairwise reduction keeps the accumulation order fixed and the roundoff
// below tol::lin regardless of how blocks were produced.
Matrix pairwise_sum(std::vector<Matrix> terms) {
    if (terms.empty()) throw EmptyEnsembleError("pairwise_sum: no terms");
    while (terms.size() > 1) {
        std::vector<Matrix> next;
        next.reserve((terms.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < terms.size(); i += 2) {
            next.push_back(terms[i] + terms[i + 1]);
        }
        if (terms.size() % 2 == 1) next.push_back(terms.back());
        terms = std::move(next);
    }
    return terms.front();
}

// Empirical E[exp(-i*phi*(A_a - A_a'))] as a d x d factor matrix, sampled in
// fixed-size blocks so any parallel schedule reproduces the same bits.
Matrix empirical_factors(const Observable& obs, const PhaseDistribution& dist,
                         std::int64_t n, std::uint64_t seed) {
    const int d = obs.dim();
    constexpr std::int64_t kBlock = 4096;
    RandomStream base(seed, "phase_average.montecarlo");
    std::vector<Matrix> blocks;
    std::int64_t done = 0;
    std::uint64_t block_index = 0;
    while (done < n) {
        std::int64_t count = std::min(kBlock, n - done);
        RandomStream rng = base.substream(block_index++);
        Matrix sum = Matrix::Zero(d, d);
        Vector z(d);
        for (std::int64_t s = 0; s < count; ++s) {
            double phi = dist.sample(rng);
            for (int a = 0; a < d; ++a) {
                z[a] = std::exp(cx(0.0, -phi * obs.eigenvalue(a)));
            }
            sum += z * z.adjoint();
        }
        blocks.push_back(std::move(sum));
        done += count;
    }
    Matrix k = pairwise_sum(std::move(blocks)) / static_cast<double>(n);
    // The zero gap is invariant by identity.
    k.diagonal().setOnes();
    return k;
}

std::vector<std::pair<double, cx>> collect_factors(const Observable& obs,
                                                   const Matrix& factor_matrix) {
    std::vector<std::pair<double, cx>> out;
    out.emplace_back(0.0, cx(1.0, 0.0));
    const int d = obs.dim();
    for (int a = 0; a < d; ++a) {
        for (int ap = 0; ap < d; ++ap) {
            if (a == ap) continue;
            double gap = obs.eigenvalue(a) - obs.eigenvalue(ap);
            bool seen = false;
            for (const auto& [g, f] : out) {
                if (std::abs(g - gap) <= 1e-12) {
                    seen = true;
                    break;
                }
            }
            if (!seen) out.emplace_back(gap, factor_matrix(a, ap));
        }
    }
    std::sort(out.begin(), out.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
}

}  // namespace

PhaseDistribution PhaseDistribution::uniform_width(double width) {
    if (!(width > 0.0)) throw InvalidDimensionError("uniform_width: width must be > 0");
    return {Kind::uniform, width};
}

PhaseDistribution PhaseDistribution::gaussian(double sigma_phi) {
    if (!(sigma_phi >= 0.0)) throw InvalidDimensionError("gaussian: sigma must be >= 0");
    return {Kind::gaussian, sigma_phi};
}

PhaseDistribution PhaseDistribution::point(double phi) { return {Kind::point, phi}; }

cx PhaseDistribution::characteristic(double gap) const {
    switch (kind_) {
        case Kind::uniform: {
            if (gap == 0.0) return {1.0, 0.0};
            cx iwg(0.0, param_ * gap);
            return (std::exp(-iwg) - 1.0) / (-iwg);
        }
        case Kind::gaussian:
            return {std::exp(-0.5 * param_ * param_ * gap * gap), 0.0};
        case Kind::point:
            return std::exp(cx(0.0, -param_ * gap));
    }
    return {1.0, 0.0};
}

double PhaseDistribution::sample(RandomStream& rng) const {
    switch (kind_) {
        case Kind::uniform: return param_ * rng.next_double();
        case Kind::gaussian: return param_ * rng.next_gaussian();
        case Kind::point: return param_;
    }
    return 0.0;
}

cx characteristic_function(const PhaseDistribution& dist, double gap) {
    return dist.characteristic(gap);
}

void write_json(const DephasingReport& report, std::ostream& os) {
    os << '[';
    for (std::size_t i = 0; i < report.factors.size(); ++i) {
        if (i) os << ',';
        os << "{\"gap\":" << detail::fmt_double(report.factors[i].first) << ",\"factor\":";
        detail::write_complex_json(os, report.factors[i].second);
        os << '}';
    }
    os << ']';
}

PhaseAverageResult phase_average_channel(const DensityOperator& rho,
                                         const Observable& observable,
                                         const PhaseDistribution& dist,
                                         const AverageMode& mode) {
    const int d = rho.dim();
    if (observable.dim() != d) throw ShapeError("phase_average_channel: dimension mismatch");

    Matrix factors(d, d);
    if (std::holds_alternative<ExactAverage>(mode)) {
        for (int a = 0; a < d; ++a) {
            for (int ap = 0; ap < d; ++ap) {
                factors(a, ap) = a == ap ? cx(1.0, 0.0)
                                         : dist.characteristic(observable.eigenvalue(a) -
                                                               observable.eigenvalue(ap));
            }
        }
    } else {
        const auto& mc = std::get<MonteCarloAverage>(mode);
        if (mc.samples <= 0) throw EmptyEnsembleError("phase_average_channel: n must be > 0");
        factors = empirical_factors(observable, dist, mc.samples, mc.seed);
    }

    const Matrix& v = observable.eigenbasis().columns();
    Matrix rho_eig = v.adjoint() * rho.matrix() * v;
    Matrix averaged = v * rho_eig.cwiseProduct(factors) * v.adjoint();
    // Re-symmetrize roundoff before validation.
    averaged = 0.5 * (averaged + averaged.adjoint().eval());

    DephasingReport report{observable.labels(), collect_factors(observable, factors)};
    return {DensityOperator(std::move(averaged)), std::move(report)};
}

DensityOperator dephase(const DensityOperator& rho, const Observable& observable) {
    const int d = rho.dim();
    if (observable.dim() != d) throw ShapeError("dephase: dimension mismatch");
    const Matrix& v = observable.eigenbasis().columns();
    Vector diag = (v.adjoint() * rho.matrix() * v).diagonal();
    Matrix out = v * diag.asDiagonal() * v.adjoint();
    out = 0.5 * (out + out.adjoint().eval());
    return DensityOperator(std::move(out));
}

double ergodic_kernel(const PureState& a, const PureState& b) {
    if (a.dim() != b.dim()) throw ShapeError("ergodic_kernel: dimension mismatch");
    return std::norm(overlap(b, a));
}

PreparedState prepare_state(const DensityOperator& rho_in, const Observable& observable,
                            const std::string& outcome_label) {
    if (rho_in.dim() != observable.dim()) throw ShapeError("prepare_state: dimension mismatch");
    int a = observable.index_of(outcome_label);
    Vector col = observable.eigenbasis().column(a);
    double p = (col.adjoint() * rho_in.matrix() * col)(0, 0).real();
    if (p < tol::lin) {
        throw ZeroProbabilityError("prepare_state: outcome '" + outcome_label +
                                   "' has zero probability");
    }
    return {p, DensityOperator(PureState(col))};
}

PhaseDistribution dephasing_distribution(const Observable& observable) {
    const int d = observable.dim();
    std::vector<double> gaps;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            gaps.push_back(std::abs(observable.eigenvalue(i) - observable.eigenvalue(j)));
    if (gaps.empty()) return PhaseDistribution::point(0.0);

    double min_gap = *std::min_element(gaps.begin(), gaps.end());
    // Approximate gcd of the gaps: Euclid with a cutoff well above roundoff.
    double g = gaps[0];
    const double cutoff = 1e-9 * min_gap;
    for (double gap : gaps) {
        double x = gap;
        while (x > cutoff && g > cutoff) {
            double r = std::fmod(std::max(g, x), std::min(g, x));
            g = std::min(g, x);
            x = r;
        }
        if (g <= cutoff) break;
    }
    bool commensurate = g > cutoff;
    if (commensurate) {
        for (double gap : gaps) {
            double ratio = gap / g;
            if (std::abs(ratio - std::round(ratio)) > 1e-9) {
                commensurate = false;
                break;
            }
        }
    }
    if (commensurate) return PhaseDistribution::uniform_width(kTwoPi / g);
    // Residual damping <= exp(-18) at the smallest gap; reported, not hidden.
    return PhaseDistribution::gaussian(6.0 / min_gap);
}

}  // namespace qergo
