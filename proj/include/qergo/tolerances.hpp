#pragma once

// Numerical tolerances used across the library. All absolute.
namespace qergo::tol {

// Linear-algebra identities (orthonormality, trace, Hermiticity, ...).
inline constexpr double lin = 1e-10;

// Minimum eigenvalue gap below which an observable is treated as degenerate.
inline constexpr double degen = 1e-8;

// Minimum |<b|a>| for conditional (weak-value) quantities to be defined.
inline constexpr double overlap = 1e-8;

// Bound on spurious imaginary parts of quantities that are real by identity.
inline constexpr double imag = 1e-10;

}  // namespace qergo::tol
