#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qergo/hilbert.hpp"

namespace qergo {

// Single-degree-of-freedom read-out meter on a uniform grid
// x_j = -L + j * (2L/n). The shift generator acts spectrally (discrete
// Fourier transform), so translations are exact for band-limited packets
// and aliasing is controlled by the grid-coverage invariant
// L >= 4 * (sigma_x + kappa * max|A_a|), checked at interaction time.
class MeterModel {
public:
    // Minimal-uncertainty Gaussian wavepacket, zero mean, position spread
    // sigma_x (so sigma_p = 1/(2*sigma_x)), unit discrete norm.
    static MeterModel gaussian(int n, double half_width, double sigma_x, double kappa);

    // Grid sized for the observable: half_width = 4*(sigma_x + kappa*max|A_a|)
    // unless given, n = smallest power of two >= max(512, 8*half_width/sigma_x)
    // unless given.
    static MeterModel auto_gaussian(const Observable& observable, double sigma_x,
                                    double kappa, int n = 0, double half_width = 0.0);

    static MeterModel with_wavefunction(int n, double half_width, double sigma_x,
                                        double kappa, Vector wavefunction);

    int n() const { return static_cast<int>(wavefunction_.size()); }
    double half_width() const { return half_width_; }
    double sigma_x() const { return sigma_x_; }
    double kappa() const { return kappa_; }
    const Vector& wavefunction() const { return wavefunction_; }
    Eigen::VectorXd grid() const;
    double dx() const { return 2.0 * half_width_ / n(); }

private:
    MeterModel(double half_width, double sigma_x, double kappa, Vector wavefunction);

    double half_width_;
    double sigma_x_;
    double kappa_;
    Vector wavefunction_;
};

// Entangled system (x) meter amplitudes, d x n, unit total norm, stored in
// the computational basis of the system.
class JointState {
public:
    JointState(Matrix amplitudes, Eigen::VectorXd grid);

    int dim() const { return static_cast<int>(amplitudes_.rows()); }
    int meter_points() const { return static_cast<int>(amplitudes_.cols()); }
    const Matrix& amplitudes() const { return amplitudes_; }
    const Eigen::VectorXd& grid() const { return grid_; }

    // P(x_j) summed over the system index.
    Eigen::VectorXd meter_marginal() const;

private:
    Matrix amplitudes_;
    Eigen::VectorXd grid_;
};

// exp(-i*kappa*A (x) p): branch a of the system translates the meter packet
// by kappa * A_a. Throws AliasingError when the grid cannot hold the
// shifted packets.
JointState interact(const PureState& system, const MeterModel& meter,
                    const Observable& observable);

// Partial trace over the meter.
DensityOperator reduce_system(const JointState& joint);

struct ReadoutResult {
    int bin;
    double probability;
    // Absent when the bin carries weight below tol::lin.
    std::optional<DensityOperator> conditional;
};

// Projective read-out over position bins [e_i, e_{i+1}); the final bin is
// closed. Edges must be strictly increasing and span the grid.
std::vector<ReadoutResult> readout(const JointState& joint,
                                   const std::vector<double>& bin_edges);

// Midpoints between adjacent shifted branch centers, outermost edges at +-L.
std::vector<double> default_bin_edges(const Observable& observable, const MeterModel& meter);

void write_json(const std::vector<ReadoutResult>& results, std::ostream& os);

struct PreparationOutcome {
    double probability;
    PureState state;      // dominant eigenvector of the conditional state
    double purity;        // tr(rho_cond^2)
    double fidelity;      // overlap with the selected eigenstate
    bool weak_regime;     // kappa * min_gap < 10 * sigma_x
};

// Runs the measurement interaction, reads out the default bin of the chosen
// outcome and returns the conditioned branch. Throws ZeroProbabilityError
// when the selected bin carries no weight.
PreparationOutcome prepare_by_measurement(const PureState& input, const Observable& observable,
                                          const MeterModel& meter,
                                          const std::string& outcome_label);

}  // namespace qergo
