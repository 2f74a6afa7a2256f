#include "qergo/quasiprob.hpp"

#include <cmath>

#include "qergo/detail/format.hpp"

namespace qergo {

namespace {

void require_same_dim(int a, int b, const char* what) {
    if (a != b) throw ShapeError(std::string(what) + ": dimension mismatch");
}

void write_basis_json(const BasisSet& basis, std::ostream& os) {
    os << "{\"dim\":" << basis.dim() << ",\"labels\":[";
    for (int k = 0; k < basis.dim(); ++k) {
        if (k) os << ',';
        os << '"' << detail::json_escape(basis.label(k)) << '"';
    }
    os << "],\"columns\":[";
    for (int k = 0; k < basis.dim(); ++k) {
        if (k) os << ',';
        os << '[';
        for (int j = 0; j < basis.dim(); ++j) {
            if (j) os << ',';
            detail::write_complex_json(os, basis.columns()(j, k));
        }
        os << ']';
    }
    os << "]}";
}

}  // namespace

ComplexJointDistribution::ComplexJointDistribution(DensityOperator rho, BasisSet basisA,
                                                   BasisSet basisB, Matrix table)
    : rho_(std::move(rho)),
      basisA_(std::move(basisA)),
      basisB_(std::move(basisB)),
      table_(std::move(table)) {
    const int d = basisA_.dim();
    require_same_dim(d, basisB_.dim(), "ComplexJointDistribution");
    require_same_dim(d, rho_.dim(), "ComplexJointDistribution");
    if (table_.rows() != d || table_.cols() != d) {
        throw ShapeError("ComplexJointDistribution: table must be d x d");
    }
    cx total = table_.sum();
    if (std::abs(total - cx(1.0, 0.0)) > tol::lin) {
        throw ShapeError("ComplexJointDistribution: entries must sum to 1");
    }
    // Marginals are the Born distributions of the two bases.
    for (int a = 0; a < d; ++a) {
        cx row = table_.row(a).sum();
        double born = (basisA_.column(a).adjoint() * rho_.matrix() * basisA_.column(a))(0, 0).real();
        if (std::abs(row.imag()) > tol::imag || std::abs(row.real() - born) > tol::lin ||
            row.real() < -tol::lin) {
            throw ShapeError("ComplexJointDistribution: row marginal mismatch");
        }
    }
    for (int b = 0; b < d; ++b) {
        cx col = table_.col(b).sum();
        double born = (basisB_.column(b).adjoint() * rho_.matrix() * basisB_.column(b))(0, 0).real();
        if (std::abs(col.imag()) > tol::imag || std::abs(col.real() - born) > tol::lin ||
            col.real() < -tol::lin) {
            throw ShapeError("ComplexJointDistribution: column marginal mismatch");
        }
    }
}

ComplexConditional::ComplexConditional(PureState a, PureState b, BasisSet basisM,
                                       Vector values)
    : a_(std::move(a)), b_(std::move(b)), basisM_(std::move(basisM)), values_(std::move(values)) {
    require_same_dim(a_.dim(), basisM_.dim(), "ComplexConditional");
    require_same_dim(b_.dim(), basisM_.dim(), "ComplexConditional");
    if (values_.size() != basisM_.dim()) {
        throw ShapeError("ComplexConditional: one value per basis label");
    }
    if (std::abs(values_.sum() - cx(1.0, 0.0)) > tol::lin) {
        throw ShapeError("ComplexConditional: values must sum to 1");
    }
}

ComplexJointDistribution kd_joint(const DensityOperator& rho, const BasisSet& basisA,
                                  const BasisSet& basisB) {
    const int d = rho.dim();
    require_same_dim(d, basisA.dim(), "kd_joint");
    require_same_dim(d, basisB.dim(), "kd_joint");
    // table(a,b) = <b|a> <a|rho|b>: conj(A^dag B) Hadamard (A^dag rho B).
    Matrix gram = basisA.columns().adjoint() * basisB.columns();
    Matrix mixed = basisA.columns().adjoint() * rho.matrix() * basisB.columns();
    Matrix table = gram.conjugate().cwiseProduct(mixed);
    return ComplexJointDistribution(rho, basisA, basisB, std::move(table));
}

ComplexConditional weak_conditional(const PureState& a, const PureState& b,
                                    const BasisSet& basisM) {
    const int d = basisM.dim();
    require_same_dim(a.dim(), d, "weak_conditional");
    require_same_dim(b.dim(), d, "weak_conditional");
    cx denom = overlap(b, a);
    if (std::abs(denom) <= tol::overlap) {
        throw OrthogonalConditioningError("weak_conditional: <b|a> vanishes");
    }
    Vector values(d);
    for (int m = 0; m < d; ++m) {
        Vector cm = basisM.column(m);
        values[m] = b.amplitudes().dot(cm) * cm.dot(a.amplitudes()) / denom;
    }
    return ComplexConditional(a, b, basisM, std::move(values));
}

cx transform_kernel(const UnitaryMap& u, const PureState& a, const std::string& b_label,
                    const std::string& bprime_label, const BasisSet& basisB) {
    const int d = basisB.dim();
    require_same_dim(a.dim(), d, "transform_kernel");
    require_same_dim(u.dim(), d, "transform_kernel");
    Vector b = basisB.column(basisB.index_of(b_label));
    Vector bp = basisB.column(basisB.index_of(bprime_label));
    cx denom = bp.dot(a.amplitudes());
    if (std::abs(denom) <= tol::overlap) {
        throw OrthogonalConditioningError("transform_kernel: <b'|a> vanishes");
    }
    cx left = bp.dot(u.matrix().adjoint() * b);
    cx right = b.dot(u.matrix() * a.amplitudes());
    return left * right / denom;
}

ComplexJointDistribution propagate_joint(const ComplexJointDistribution& joint,
                                         const UnitaryMap& u) {
    const int d = joint.dim();
    require_same_dim(u.dim(), d, "propagate_joint");
    // table(a,b) = <b|U|a> <a|rho U^dag|b>; the transformed outcomes
    // |U(b)> = U^dag|b> keep their labels.
    Matrix rotated_cols = u.matrix().adjoint() * joint.basisB().columns();
    Matrix gram = joint.basisA().columns().adjoint() * rotated_cols;
    Matrix mixed = joint.basisA().columns().adjoint() * joint.rho().matrix() * rotated_cols;
    Matrix table = gram.conjugate().cwiseProduct(mixed);
    BasisSet rotated(joint.basisB().labels(), std::move(rotated_cols));
    return ComplexJointDistribution(joint.rho(), joint.basisA(), std::move(rotated),
                                    std::move(table));
}

Eigen::VectorXd predict_outcome(const ComplexJointDistribution& joint,
                                const BasisSet& basisM) {
    const int d = joint.dim();
    require_same_dim(basisM.dim(), d, "predict_outcome");
    // W(a,b) = <a|rho|b>
    Matrix w = joint.basisA().columns().adjoint() * joint.rho().matrix() *
               joint.basisB().columns();
    Eigen::VectorXd p(d);
    for (int m = 0; m < d; ++m) {
        Vector cm = basisM.column(m);
        Vector va = joint.basisA().columns().adjoint() * cm;  // va_a = <a|m>
        Vector vb = joint.basisB().columns().adjoint() * cm;  // vb_b = <b|m>
        // sum_{a,b} <b|m> <m|a> <a|rho|b> = va^dag (W vb)
        cx s = va.dot(w * vb);
        if (std::abs(s.imag()) > tol::imag) {
            throw ShapeError("predict_outcome: non-real probability");
        }
        p[m] = s.real();
    }
    return p;
}

void write_csv(const ComplexJointDistribution& joint, std::ostream& os) {
    os << "a_label,b_label,re,im\n";
    for (int a = 0; a < joint.dim(); ++a) {
        for (int b = 0; b < joint.dim(); ++b) {
            os << joint.basisA().label(a) << ',' << joint.basisB().label(b) << ','
               << detail::fmt_double(joint.entry(a, b).real()) << ','
               << detail::fmt_double(joint.entry(a, b).imag()) << '\n';
        }
    }
}

void write_json(const ComplexJointDistribution& joint, std::ostream& os) {
    os << "{\"basisA\":";
    write_basis_json(joint.basisA(), os);
    os << ",\"basisB\":";
    write_basis_json(joint.basisB(), os);
    os << ",\"table\":[";
    for (int a = 0; a < joint.dim(); ++a) {
        if (a) os << ',';
        os << '[';
        for (int b = 0; b < joint.dim(); ++b) {
            if (b) os << ',';
            detail::write_complex_json(os, joint.entry(a, b));
        }
        os << ']';
    }
    os << "]}";
}

}  // namespace qergo
