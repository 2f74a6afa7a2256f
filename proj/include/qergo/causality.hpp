#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qergo/quasiprob.hpp"

namespace qergo {

// Transformation action per basis label, in units of hbar: the applied
// phase for label m is exp(-i * value(m)).
class ActionSchedule {
public:
    ActionSchedule(const BasisSet& basisM, Eigen::VectorXd actions_over_hbar);

    int dim() const { return static_cast<int>(values_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const Eigen::VectorXd& values() const { return values_; }

private:
    std::vector<std::string> labels_;
    Eigen::VectorXd values_;
};

struct DeterminismMatrix {
    std::vector<std::string> labels;  // rows m, columns m'
    Matrix entries;                   // sum_a P(m|a,b) P(a|m',b)
};

// Preparation joint table rho(m,b|m') = P(b|m) delta_{m,m'}.
ComplexJointDistribution prep_joint(const std::string& mprime_label, const BasisSet& basisM,
                                    const BasisSet& basisB);

// Row-basis change via the deterministic relation between a and (m,b):
// rho(a,b|.) = sum_m P(a|m,b) rho(m,b|.). Terms with zero weight are
// skipped; a needed denominator <b|m> at or below tol::overlap raises
// OrthogonalConditioningError.
ComplexJointDistribution rerepresent(const ComplexJointDistribution& joint,
                                     const BasisSet& basisA);

// P_exp(m|m') = sum_{a,b} P(m|a,b) P(a|m',b) P(b|m'): the preparation-to-
// measurement chain through an intermediate basis. Collapses to the
// Kronecker delta independently of basisB.
Eigen::VectorXd prep_measure_chain(const std::string& mprime_label, const BasisSet& basisM,
                                   const BasisSet& basisA, const BasisSet& basisB);

// Entries sum_a P(m|a,b) P(a|m',b); the identity matrix whenever defined.
DeterminismMatrix determinism_matrix(const BasisSet& basisM, const BasisSet& basisA,
                                     const PureState& b);

struct TransformedProbability {
    // |sum_m <b|m><m|a> exp(-i S(m))|^2
    double vector_path;
    // P(b|a) |sum_m P(m|a,b) exp(-i S(m))|^2; absent when <b|a> vanishes.
    std::optional<double> action_path;
};

TransformedProbability transformed_probability(const PureState& a, const PureState& b,
                                               const BasisSet& basisM,
                                               const ActionSchedule& schedule);

// (1/sqrt(d)) sum_m |m>, in canonical phase.
PureState reference_state(const BasisSet& basisM);

// P(m|a,r) = <m|a> / sum_m' <m'|a>: the state vector as action-phase
// probabilities against the uniform reference. Throws
// OrthogonalReferenceError when the denominator vanishes.
ComplexConditional action_phase_representation(const PureState& a, const BasisSet& basisM);

// Normalized canonical-phase state proportional to sum_m P(m|a,r)|m>.
PureState reconstruct_state(const ComplexConditional& cond, const BasisSet& basisM);

// {"labels": [...], "entries": [[[re,im], ...], ...]}
void write_json(const DeterminismMatrix& matrix, std::ostream& os);

// Labeled probability list, e.g. a prep_measure_chain output:
// {"labels": [...], "probabilities": [...]}
void write_probabilities_json(const BasisSet& basisM, const Eigen::VectorXd& probabilities,
                              std::ostream& os);

}  // namespace qergo
