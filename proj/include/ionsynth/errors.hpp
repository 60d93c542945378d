#pragma once

#include <stdexcept>
#include <string>

namespace ionsynth {

// A pulse cannot realize its cancellation: the coupling matrix element is
// (numerically) zero while there is still amplitude to remove.
struct pulse_infeasible : std::runtime_error {
    explicit pulse_infeasible(const std::string& what) : std::runtime_error(what) {}
};

// De-evolution finished but left more residual population outside the
// vacuum component than the contract allows.
struct synthesis_error : std::runtime_error {
    explicit synthesis_error(const std::string& what) : std::runtime_error(what) {}
};

// A Rabi-frequency regime was requested on a channel for which no matrix
// element is defined (nonlinear single-mode sideband).
struct unsupported_regime : std::runtime_error {
    explicit unsupported_regime(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent input file; the message names the offending entry.
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ionsynth
