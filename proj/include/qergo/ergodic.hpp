#pragma once

#include <cstdint>
#include <numbers>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qergo/hilbert.hpp"

namespace qergo {

// Distribution of the randomized phase parameter phi. uniform covers
// [0, width) with width 2*pi unless rescaled for a commensurate spectrum;
// gaussian is zero-mean with spread sigma_phi; point is deterministic.
class PhaseDistribution {
public:
    enum class Kind { uniform, gaussian, point };

    static PhaseDistribution uniform() { return {Kind::uniform, 2.0 * std::numbers::pi}; }
    static PhaseDistribution uniform_width(double width);
    static PhaseDistribution gaussian(double sigma_phi);
    static PhaseDistribution point(double phi);

    Kind kind() const { return kind_; }
    double parameter() const { return param_; }

    // E[exp(-i*phi*gap)]; equals 1 at gap = 0 for every kind.
    cx characteristic(double gap) const;

    double sample(RandomStream& rng) const;

private:
    PhaseDistribution(Kind kind, double param) : kind_(kind), param_(param) {}

    Kind kind_;
    double param_;
};

cx characteristic_function(const PhaseDistribution& dist, double gap);

// Damping factor per distinct signed eigenvalue gap, sorted by gap; the
// zero-gap factor is exactly 1.
struct DephasingReport {
    std::vector<std::string> labels;
    std::vector<std::pair<double, cx>> factors;
};

void write_json(const DephasingReport& report, std::ostream& os);

struct ExactAverage {};
struct MonteCarloAverage {
    std::int64_t samples;
    std::uint64_t seed;
};
using AverageMode = std::variant<ExactAverage, MonteCarloAverage>;

struct PhaseAverageResult {
    DensityOperator rho;
    DephasingReport report;
};

// Average of U rho U^dag with U = exp(-i*phi*A) over the phase distribution.
// In the eigenbasis of the observable this multiplies element (a,a') by
// E[exp(-i*phi*(A_a - A_a'))]: the exact mode uses the closed-form
// characteristic function, the Monte Carlo mode the empirical average over
// n sampled phases drawn from per-block substreams of the seed.
PhaseAverageResult phase_average_channel(const DensityOperator& rho,
                                         const Observable& observable,
                                         const PhaseDistribution& dist,
                                         const AverageMode& mode = ExactAverage{});

// Zeroes the off-diagonal elements of rho in the observable eigenbasis.
DensityOperator dephase(const DensityOperator& rho, const Observable& observable);

// |<b|a>|^2: the ergodic average of the transformation kernel.
double ergodic_kernel(const PureState& a, const PureState& b);

struct PreparedState {
    double probability;
    DensityOperator rho_out;
};

// Projective preparation: probability <a|rho|a> and output |a><a|.
// Throws ZeroProbabilityError when the branch weight is below tol::lin.
PreparedState prepare_state(const DensityOperator& rho_in, const Observable& observable,
                            const std::string& outcome_label);

// Distribution whose exact phase average fully dephases the observable when
// the spectrum is commensurate: uniform over one common period 2*pi/g with g
// the gap gcd. Incommensurate spectra get a wide gaussian instead; the
// residual damping shows up in the DephasingReport.
PhaseDistribution dephasing_distribution(const Observable& observable);

}  // namespace qergo
