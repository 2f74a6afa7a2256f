#pragma once

// Test-side oracles. Everything here is deliberately independent of the
// library's computation paths: Born probabilities from raw quadratic forms,
// matrix exponentials by Taylor series, phase averages by quadrature.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>

namespace oracles {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline Eigen::VectorXd born(const Mat& rho, const Mat& basis_columns) {
    Eigen::VectorXd p(basis_columns.cols());
    for (int m = 0; m < basis_columns.cols(); ++m) {
        p[m] = (basis_columns.col(m).adjoint() * rho * basis_columns.col(m))(0, 0).real();
    }
    return p;
}

// Scaling-and-squaring Taylor exponential.
inline Mat expm_taylor(Mat m) {
    int squarings = 0;
    while (m.cwiseAbs().maxCoeff() > 0.25) {
        m /= 2.0;
        ++squarings;
    }
    Mat result = Mat::Identity(m.rows(), m.cols());
    Mat term = result;
    for (int k = 1; k <= 32; ++k) {
        term = term * m / static_cast<double>(k);
        result += term;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

// Average of f over [0, period) with the periodic trapezoid rule; exact for
// trigonometric polynomials of degree below n. Mutating acc (instead of
// returning an arithmetic expression) keeps Eigen results materialized.
template <typename F>
auto phase_average(F&& f, int n = 256, double period = kTwoPi) {
    auto acc = f(0.0);
    for (int k = 1; k < n; ++k) acc += f(period * k / n);
    acc /= static_cast<double>(n);
    return acc;
}

// Simpson quadrature of f over [a, b] with n (even) panels.
template <typename F>
auto simpson(F&& f, double a, double b, int n) {
    double h = (b - a) / n;
    auto acc = f(a);
    acc += f(b);
    for (int k = 1; k < n; ++k) acc += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
    acc *= h / 3.0;
    return acc;
}

// Gaussian N(0, sigma) expectation of f by quadrature over +-12 sigma.
template <typename F>
auto gaussian_expectation(F&& f, double sigma, int n = 4096) {
    auto weighted = [&](double x) {
        double w = std::exp(-x * x / (2.0 * sigma * sigma)) /
                   (sigma * std::sqrt(kTwoPi));
        return f(x) * w;
    };
    return simpson(weighted, -12.0 * sigma, 12.0 * sigma, n);
}

// Common qubit fixtures.
inline Vec ket(std::initializer_list<cxd> amps) {
    Vec v(static_cast<int>(amps.size()));
    int i = 0;
    for (cxd a : amps) v[i++] = a;
    return v;
}

inline Vec ket_plus() { return ket({1.0, 1.0}) / std::sqrt(2.0); }
inline Vec ket_minus() { return ket({1.0, -1.0}) / std::sqrt(2.0); }
inline Vec ket_plus_i() { return ket({cxd(1.0, 0.0), cxd(0.0, 1.0)}) / std::sqrt(2.0); }
inline Vec ket_minus_i() { return ket({cxd(1.0, 0.0), cxd(0.0, -1.0)}) / std::sqrt(2.0); }

}  // namespace oracles
