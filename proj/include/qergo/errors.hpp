#pragma once

#include <stdexcept>
#include <string>

namespace qergo {

struct InvalidDimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Mismatched or malformed matrix/vector shapes, including non-Hermitian
// input where a Hermitian matrix is required.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Eigenvalue gap below tol::degen.
struct DegeneracyError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct LabelError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Conditioning overlap |<b|a>| at or below tol::overlap: the weak value
// is undefined.
struct OrthogonalConditioningError : std::domain_error {
    using std::domain_error::domain_error;
};

// State orthogonal to the uniform reference state.
struct OrthogonalReferenceError : std::domain_error {
    using std::domain_error::domain_error;
};

struct EmptyEnsembleError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Selected outcome or read-out bin carries no probability weight.
struct ZeroProbabilityError : std::domain_error {
    using std::domain_error::domain_error;
};

// Meter grid too small for the shifted wavepackets.
struct AliasingError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct BinningError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Zero-norm or otherwise unusable reconstruction input.
struct DegenerateInputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Invalid scenario configuration; message carries the field path.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qergo
