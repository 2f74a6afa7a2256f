#pragma once

#include <ostream>
#include <string>

#include "qergo/hilbert.hpp"

namespace qergo {

// Complex joint distribution rho(a,b) = <b|a><a|rho|b>. Rows follow basisA,
// columns basisB. The source density operator travels with the table so
// that representation changes and outcome predictions can be evaluated in
// denominator-cancelled form.
class ComplexJointDistribution {
public:
    ComplexJointDistribution(DensityOperator rho, BasisSet basisA, BasisSet basisB,
                             Matrix table);

    int dim() const { return basisA_.dim(); }
    const DensityOperator& rho() const { return rho_; }
    const BasisSet& basisA() const { return basisA_; }
    const BasisSet& basisB() const { return basisB_; }
    const Matrix& table() const { return table_; }
    cx entry(int a, int b) const { return table_(a, b); }

private:
    DensityOperator rho_;
    BasisSet basisA_;
    BasisSet basisB_;
    Matrix table_;
};

// Complex conditional probabilities P(m|a,b) over a read-out basis, for a
// preparation a and post-selection b. Values sum to 1 whenever defined.
class ComplexConditional {
public:
    ComplexConditional(PureState a, PureState b, BasisSet basisM, Vector values);

    int dim() const { return basisM_.dim(); }
    const PureState& prepared() const { return a_; }
    const PureState& postselected() const { return b_; }
    const BasisSet& basisM() const { return basisM_; }
    const Vector& values() const { return values_; }
    cx value(int m) const { return values_[m]; }

private:
    PureState a_;
    PureState b_;
    BasisSet basisM_;
    Vector values_;
};

// rho(a,b) = <b|a><a|rho|b> for every pair of outcomes.
ComplexJointDistribution kd_joint(const DensityOperator& rho, const BasisSet& basisA,
                                  const BasisSet& basisB);

// P(m|a,b) = <b|m><m|a>/<b|a>. Throws OrthogonalConditioningError when
// |<b|a>| <= tol::overlap.
ComplexConditional weak_conditional(const PureState& a, const PureState& b,
                                    const BasisSet& basisM);

// <b'|U^dag|b><b|U|a> / <b'|a>, the conditional probability of reaching
// outcome b under U given initial a and reference outcome b'. Singular at
// <b'|a> = 0 by construction; exposed raw for inspection.
cx transform_kernel(const UnitaryMap& u, const PureState& a, const std::string& b_label,
                    const std::string& bprime_label, const BasisSet& basisB);

// Re-representation of the joint table after the unitary, evaluated in the
// cancelled form <b|U|a> <a|rho U^dag|b>, which equals the table of the same
// state in the U^dag-transformed column basis.
ComplexJointDistribution propagate_joint(const ComplexJointDistribution& joint,
                                         const UnitaryMap& u);

// P_exp(m) = sum_{a,b} P(m|a,b) rho(a,b), evaluated in the cancelled form
// sum_{a,b} <b|m><m|a><a|rho|b>. Real and Born-distributed by identity.
Eigen::VectorXd predict_outcome(const ComplexJointDistribution& joint,
                                const BasisSet& basisM);

// CSV columns: a_label,b_label,re,im.
void write_csv(const ComplexJointDistribution& joint, std::ostream& os);
// JSON object mirroring {basisA, basisB, table}; complex entries as [re,im].
void write_json(const ComplexJointDistribution& joint, std::ostream& os);

}  // namespace qergo
