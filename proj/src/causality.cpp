#include "qergo/causality.hpp"

#include <cmath>

#include "qergo/detail/format.hpp"

namespace qergo {

namespace {

void require_same_dim(int a, int b, const char* what) {
    if (a != b) throw ShapeError(std::string(what) + ": dimension mismatch");
}

}  // namespace

ActionSchedule::ActionSchedule(const BasisSet& basisM, Eigen::VectorXd actions_over_hbar)
    : labels_(basisM.labels()), values_(std::move(actions_over_hbar)) {
    if (values_.size() != basisM.dim()) {
        throw ShapeError("ActionSchedule: one action per basis label");
    }
    for (int m = 0; m < values_.size(); ++m) {
        if (!std::isfinite(values_[m])) {
            throw ShapeError("ActionSchedule: non-finite action for label '" + labels_[m] + "'");
        }
    }
}

ComplexJointDistribution prep_joint(const std::string& mprime_label, const BasisSet& basisM,
                                    const BasisSet& basisB) {
    const int d = basisM.dim();
    require_same_dim(d, basisB.dim(), "prep_joint");
    int mp = basisM.index_of(mprime_label);
    Matrix table = Matrix::Zero(d, d);
    Vector col = basisM.column(mp);
    for (int b = 0; b < d; ++b) {
        table(mp, b) = std::norm(basisB.column(b).dot(col));
    }
    return ComplexJointDistribution(DensityOperator(PureState(col)), basisM, basisB,
                                    std::move(table));
}

ComplexJointDistribution rerepresent(const ComplexJointDistribution& joint,
                                     const BasisSet& basisA) {
    const int d = joint.dim();
    require_same_dim(d, basisA.dim(), "rerepresent");
    const BasisSet& basisM = joint.basisA();
    const BasisSet& basisB = joint.basisB();

    Matrix table = Matrix::Zero(d, d);
    for (int b = 0; b < d; ++b) {
        Vector cb = basisB.column(b);
        for (int m = 0; m < d; ++m) {
            cx weight = joint.entry(m, b);
            if (std::abs(weight) <= tol::lin) continue;  // 0 * undefined := 0
            Vector cm = basisM.column(m);
            cx denom = cb.dot(cm);
            if (std::abs(denom) <= tol::overlap) {
                throw OrthogonalConditioningError(
                    "rerepresent: <b|m> vanishes for a contributing term");
            }
            for (int a = 0; a < d; ++a) {
                Vector ca = basisA.column(a);
                cx weak = cb.dot(ca) * ca.dot(cm) / denom;  // P(a|m,b)
                table(a, b) += weak * weight;
            }
        }
    }
    return ComplexJointDistribution(joint.rho(), basisA, basisB, std::move(table));
}

Eigen::VectorXd prep_measure_chain(const std::string& mprime_label, const BasisSet& basisM,
                                   const BasisSet& basisA, const BasisSet& basisB) {
    const int d = basisM.dim();
    require_same_dim(d, basisA.dim(), "prep_measure_chain");
    require_same_dim(d, basisB.dim(), "prep_measure_chain");
    int mp = basisM.index_of(mprime_label);
    Vector cmp = basisM.column(mp);

    Eigen::VectorXd p(d);
    for (int m = 0; m < d; ++m) {
        Vector cm = basisM.column(m);
        cx total(0.0, 0.0);
        for (int b = 0; b < d; ++b) {
            Vector cb = basisB.column(b);
            double weight = std::norm(cb.dot(cmp));  // P(b|m')
            if (weight <= tol::lin) continue;
            cx denom_mp = cb.dot(cmp);
            if (std::abs(denom_mp) <= tol::overlap) {
                throw OrthogonalConditioningError("prep_measure_chain: <b|m'> vanishes");
            }
            for (int a = 0; a < d; ++a) {
                Vector ca = basisA.column(a);
                cx denom_a = cb.dot(ca);
                if (std::abs(denom_a) <= tol::overlap) {
                    throw OrthogonalConditioningError("prep_measure_chain: <b|a> vanishes");
                }
                cx p_m_ab = cb.dot(cm) * cm.dot(ca) / denom_a;       // P(m|a,b)
                cx p_a_mpb = cb.dot(ca) * ca.dot(cmp) / denom_mp;    // P(a|m',b)
                total += p_m_ab * p_a_mpb * weight;
            }
        }
        if (std::abs(total.imag()) > tol::imag) {
            throw ShapeError("prep_measure_chain: non-real probability");
        }
        p[m] = total.real();
    }
    return p;
}

DeterminismMatrix determinism_matrix(const BasisSet& basisM, const BasisSet& basisA,
                                     const PureState& b) {
    const int d = basisM.dim();
    require_same_dim(d, basisA.dim(), "determinism_matrix");
    require_same_dim(d, b.dim(), "determinism_matrix");
    const Vector& cb = b.amplitudes();
    for (int m = 0; m < d; ++m) {
        if (std::abs(cb.dot(basisM.column(m))) <= tol::overlap) {
            throw OrthogonalConditioningError("determinism_matrix: <b|m> vanishes");
        }
    }
    for (int a = 0; a < d; ++a) {
        if (std::abs(cb.dot(basisA.column(a))) <= tol::overlap) {
            throw OrthogonalConditioningError("determinism_matrix: <b|a> vanishes");
        }
    }

    Matrix entries(d, d);
    for (int m = 0; m < d; ++m) {
        Vector cm = basisM.column(m);
        for (int mp = 0; mp < d; ++mp) {
            Vector cmp = basisM.column(mp);
            cx denom_mp = cb.dot(cmp);
            cx total(0.0, 0.0);
            for (int a = 0; a < d; ++a) {
                Vector ca = basisA.column(a);
                cx denom_a = cb.dot(ca);
                cx p_m_ab = cb.dot(cm) * cm.dot(ca) / denom_a;
                cx p_a_mpb = cb.dot(ca) * ca.dot(cmp) / denom_mp;
                total += p_m_ab * p_a_mpb;
            }
            entries(m, mp) = total;
        }
    }
    return {basisM.labels(), std::move(entries)};
}

TransformedProbability transformed_probability(const PureState& a, const PureState& b,
                                               const BasisSet& basisM,
                                               const ActionSchedule& schedule) {
    const int d = basisM.dim();
    require_same_dim(d, a.dim(), "transformed_probability");
    require_same_dim(d, b.dim(), "transformed_probability");
    require_same_dim(d, schedule.dim(), "transformed_probability");

    cx vec_sum(0.0, 0.0);
    for (int m = 0; m < d; ++m) {
        Vector cm = basisM.column(m);
        cx phase = std::exp(cx(0.0, -schedule.values()[m]));
        vec_sum += b.amplitudes().dot(cm) * cm.dot(a.amplitudes()) * phase;
    }
    TransformedProbability out{std::norm(vec_sum), std::nullopt};

    cx ov = overlap(b, a);
    if (std::abs(ov) > tol::overlap) {
        cx cond_sum(0.0, 0.0);
        for (int m = 0; m < d; ++m) {
            Vector cm = basisM.column(m);
            cx weak = b.amplitudes().dot(cm) * cm.dot(a.amplitudes()) / ov;
            cond_sum += weak * std::exp(cx(0.0, -schedule.values()[m]));
        }
        out.action_path = std::norm(ov) * std::norm(cond_sum);
    }
    return out;
}

PureState reference_state(const BasisSet& basisM) {
    Vector r = basisM.columns().rowwise().sum() / std::sqrt(static_cast<double>(basisM.dim()));
    return PureState(std::move(r));
}

ComplexConditional action_phase_representation(const PureState& a, const BasisSet& basisM) {
    const int d = basisM.dim();
    require_same_dim(d, a.dim(), "action_phase_representation");
    Vector amps(d);
    for (int m = 0; m < d; ++m) amps[m] = basisM.column(m).dot(a.amplitudes());  // <m|a>
    cx denom = amps.sum();
    if (std::abs(denom) <= tol::overlap) {
        throw OrthogonalReferenceError(
            "action_phase_representation: state orthogonal to the reference");
    }
    return ComplexConditional(a, reference_state(basisM), basisM, amps / denom);
}

PureState reconstruct_state(const ComplexConditional& cond, const BasisSet& basisM) {
    require_same_dim(cond.dim(), basisM.dim(), "reconstruct_state");
    Vector v = basisM.columns() * cond.values();
    if (v.norm() <= tol::lin) {
        throw DegenerateInputError("reconstruct_state: zero-norm value list");
    }
    return PureState(std::move(v));
}

namespace {

void write_label_list(const std::vector<std::string>& labels, std::ostream& os) {
    os << '[';
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i) os << ',';
        os << '"' << detail::json_escape(labels[i]) << '"';
    }
    os << ']';
}

}  // namespace

void write_json(const DeterminismMatrix& matrix, std::ostream& os) {
    os << "{\"labels\":";
    write_label_list(matrix.labels, os);
    os << ",\"entries\":[";
    for (int m = 0; m < matrix.entries.rows(); ++m) {
        if (m) os << ',';
        os << '[';
        for (int mp = 0; mp < matrix.entries.cols(); ++mp) {
            if (mp) os << ',';
            detail::write_complex_json(os, matrix.entries(m, mp));
        }
        os << ']';
    }
    os << "]}";
}

void write_probabilities_json(const BasisSet& basisM, const Eigen::VectorXd& probabilities,
                              std::ostream& os) {
    if (probabilities.size() != basisM.dim()) {
        throw ShapeError("write_probabilities_json: one probability per label");
    }
    os << "{\"labels\":";
    write_label_list(basisM.labels(), os);
    os << ",\"probabilities\":[";
    for (int m = 0; m < probabilities.size(); ++m) {
        if (m) os << ',';
        os << detail::fmt_double(probabilities[m]);
    }
    os << "]}";
}

}  // namespace qergo
