#include "qergo/meter.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qergo/detail/format.hpp"

namespace qergo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Signed FFT frequency for slot m of an n-point grid with spacing dx.
double momentum_of(int m, int n, double dx) {
    int signed_m = m <= n / 2 ? m : m - n;
    return kTwoPi * signed_m / (n * dx);
}

// psi(x) -> psi(x - shift) through the spectral representation.
Vector translate(const Vector& psi, double dx, double shift) {
    const int n = static_cast<int>(psi.size());
    Eigen::FFT<double> fft;
    Vector spec(n), out(n);
    fft.fwd(spec, psi);
    for (int m = 0; m < n; ++m) {
        spec[m] *= std::exp(cx(0.0, -momentum_of(m, n, dx) * shift));
    }
    fft.inv(out, spec);
    return out;
}

int next_pow2(int v) {
    int p = 1;
    while (p < v) p *= 2;
    return p;
}

}  // namespace

MeterModel::MeterModel(double half_width, double sigma_x, double kappa, Vector wavefunction)
    : half_width_(half_width), sigma_x_(sigma_x), kappa_(kappa),
      wavefunction_(std::move(wavefunction)) {
    if (wavefunction_.size() < 2) throw InvalidDimensionError("MeterModel: n must be >= 2");
    if (!(half_width_ > 0.0)) throw InvalidDimensionError("MeterModel: L must be > 0");
    if (!(sigma_x_ > 0.0)) throw InvalidDimensionError("MeterModel: sigma_x must be > 0");
    if (!(kappa_ >= 0.0)) throw InvalidDimensionError("MeterModel: kappa must be >= 0");
    double norm = wavefunction_.norm();
    if (norm <= 0.0) throw DegenerateInputError("MeterModel: zero-norm wavefunction");
    wavefunction_ /= norm;
}

MeterModel MeterModel::gaussian(int n, double half_width, double sigma_x, double kappa) {
    if (n < 2) throw InvalidDimensionError("MeterModel: n must be >= 2");
    if (!(half_width > 0.0)) throw InvalidDimensionError("MeterModel: L must be > 0");
    if (!(sigma_x > 0.0)) throw InvalidDimensionError("MeterModel: sigma_x must be > 0");
    Vector psi(n);
    double dx = 2.0 * half_width / n;
    for (int j = 0; j < n; ++j) {
        double x = -half_width + j * dx;
        psi[j] = std::exp(-x * x / (4.0 * sigma_x * sigma_x));
    }
    return MeterModel(half_width, sigma_x, kappa, std::move(psi));
}

MeterModel MeterModel::auto_gaussian(const Observable& observable, double sigma_x,
                                     double kappa, int n, double half_width) {
    if (!(sigma_x > 0.0)) throw InvalidDimensionError("MeterModel: sigma_x must be > 0");
    double l = half_width > 0.0
                   ? half_width
                   : 4.0 * (sigma_x + kappa * observable.max_abs_eigenvalue());
    if (n <= 0) {
        n = next_pow2(std::max(512, static_cast<int>(std::ceil(8.0 * l / sigma_x))));
    }
    return gaussian(n, l, sigma_x, kappa);
}

MeterModel MeterModel::with_wavefunction(int n, double half_width, double sigma_x,
                                         double kappa, Vector wavefunction) {
    if (wavefunction.size() != n) throw ShapeError("MeterModel: wavefunction size != n");
    return MeterModel(half_width, sigma_x, kappa, std::move(wavefunction));
}

Eigen::VectorXd MeterModel::grid() const {
    Eigen::VectorXd x(n());
    double step = dx();
    for (int j = 0; j < n(); ++j) x[j] = -half_width_ + j * step;
    return x;
}

JointState::JointState(Matrix amplitudes, Eigen::VectorXd grid)
    : amplitudes_(std::move(amplitudes)), grid_(std::move(grid)) {
    if (amplitudes_.rows() < 1 || amplitudes_.cols() != grid_.size()) {
        throw ShapeError("JointState: amplitude table must be d x n over the grid");
    }
    double norm2 = amplitudes_.squaredNorm();
    if (std::abs(norm2 - 1.0) > tol::lin) {
        throw ShapeError("JointState: total squared norm must be 1");
    }
}

Eigen::VectorXd JointState::meter_marginal() const {
    return amplitudes_.cwiseAbs2().colwise().sum();
}

JointState interact(const PureState& system, const MeterModel& meter,
                    const Observable& observable) {
    const int d = observable.dim();
    if (system.dim() != d) throw ShapeError("interact: dimension mismatch");
    double needed = 4.0 * (meter.sigma_x() + meter.kappa() * observable.max_abs_eigenvalue());
    if (meter.half_width() + 1e-12 < needed) {
        throw AliasingError("interact: grid half-width " +
                            std::to_string(meter.half_width()) + " below required " +
                            std::to_string(needed));
    }

    const Matrix& v = observable.eigenbasis().columns();
    Vector coeff = v.adjoint() * system.amplitudes();
    const int n = meter.n();
    Matrix branches(d, n);
    for (int a = 0; a < d; ++a) {
        Vector shifted =
            translate(meter.wavefunction(), meter.dx(), meter.kappa() * observable.eigenvalue(a));
        branches.row(a) = coeff[a] * shifted.transpose();
    }
    Matrix amp = v * branches;
    amp /= amp.norm();
    return JointState(std::move(amp), meter.grid());
}

DensityOperator reduce_system(const JointState& joint) {
    Matrix rho = joint.amplitudes() * joint.amplitudes().adjoint();
    rho = 0.5 * (rho + rho.adjoint().eval());
    return DensityOperator(std::move(rho));
}

std::vector<ReadoutResult> readout(const JointState& joint,
                                   const std::vector<double>& bin_edges) {
    const auto& x = joint.grid();
    const int n = static_cast<int>(x.size());
    if (bin_edges.size() < 2) throw BinningError("readout: need at least two edges");
    for (std::size_t i = 0; i + 1 < bin_edges.size(); ++i) {
        if (!(bin_edges[i] < bin_edges[i + 1])) {
            throw BinningError("readout: edges must be strictly increasing");
        }
    }
    if (bin_edges.front() > x[0] + 1e-12 || bin_edges.back() < x[n - 1] - 1e-12) {
        throw BinningError("readout: edges must span the grid");
    }

    const int bins = static_cast<int>(bin_edges.size()) - 1;
    std::vector<ReadoutResult> out;
    out.reserve(bins);
    for (int b = 0; b < bins; ++b) {
        std::vector<int> idx;
        for (int j = 0; j < n; ++j) {
            bool in = x[j] >= bin_edges[b] &&
                      (x[j] < bin_edges[b + 1] || (b == bins - 1 && x[j] <= bin_edges[b + 1]));
            if (in) idx.push_back(j);
        }
        Matrix cols(joint.dim(), static_cast<int>(idx.size()));
        for (std::size_t k = 0; k < idx.size(); ++k) cols.col(k) = joint.amplitudes().col(idx[k]);
        double p = cols.squaredNorm();
        std::optional<DensityOperator> conditional;
        if (p >= tol::lin) {
            Matrix rho = cols * cols.adjoint() / p;
            rho = 0.5 * (rho + rho.adjoint().eval());
            conditional = DensityOperator(std::move(rho));
        }
        out.push_back({b, p, std::move(conditional)});
    }
    return out;
}

std::vector<double> default_bin_edges(const Observable& observable, const MeterModel& meter) {
    std::vector<double> centers(observable.dim());
    for (int a = 0; a < observable.dim(); ++a) {
        centers[a] = meter.kappa() * observable.eigenvalue(a);
    }
    std::sort(centers.begin(), centers.end());
    std::vector<double> edges;
    edges.push_back(-meter.half_width());
    for (std::size_t i = 0; i + 1 < centers.size(); ++i) {
        edges.push_back(0.5 * (centers[i] + centers[i + 1]));
    }
    edges.push_back(meter.half_width());
    return edges;
}

void write_json(const std::vector<ReadoutResult>& results, std::ostream& os) {
    os << '[';
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (i) os << ',';
        os << "{\"bin\":" << results[i].bin
           << ",\"probability\":" << detail::fmt_double(results[i].probability)
           << ",\"conditional\":";
        if (results[i].conditional) {
            const Matrix& m = results[i].conditional->matrix();
            os << '[';
            for (int r = 0; r < m.rows(); ++r) {
                if (r) os << ',';
                os << '[';
                for (int c = 0; c < m.cols(); ++c) {
                    if (c) os << ',';
                    detail::write_complex_json(os, m(r, c));
                }
                os << ']';
            }
            os << ']';
        } else {
            os << "null";
        }
        os << '}';
    }
    os << ']';
}

PreparationOutcome prepare_by_measurement(const PureState& input, const Observable& observable,
                                          const MeterModel& meter,
                                          const std::string& outcome_label) {
    JointState joint = interact(input, meter, observable);
    std::vector<double> edges = default_bin_edges(observable, meter);

    // Bin index = rank of the outcome's branch center.
    int a_sel = observable.index_of(outcome_label);
    double center = meter.kappa() * observable.eigenvalue(a_sel);
    int bin = 0;
    for (int a = 0; a < observable.dim(); ++a) {
        if (meter.kappa() * observable.eigenvalue(a) < center) ++bin;
    }

    ReadoutResult res = std::move(readout(joint, edges)[bin]);
    if (!res.conditional) {
        throw ZeroProbabilityError("prepare_by_measurement: bin for '" + outcome_label +
                                   "' carries no weight");
    }
    const DensityOperator& rho_c = *res.conditional;

    Eigen::SelfAdjointEigenSolver<Matrix> es(rho_c.matrix());
    PureState state(es.eigenvectors().col(observable.dim() - 1));

    Vector target = observable.eigenbasis().column(a_sel);
    double fid = (target.adjoint() * rho_c.matrix() * target)(0, 0).real();
    bool weak = meter.kappa() * observable.min_gap() < 10.0 * meter.sigma_x();
    return {res.probability, std::move(state), rho_c.purity(), fid, weak};
}

}  // namespace qergo
