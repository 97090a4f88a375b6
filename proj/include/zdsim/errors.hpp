#pragma once

#include <stdexcept>
#include <string>

namespace zdsim {

/// Invalid dimensions, constants or file contents. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A certificate or solve that cannot succeed (e.g. Lyapunov with a
/// non-Hurwitz matrix).
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configuration that is well-formed but outside what the library handles
/// (e.g. invariant zeros of a non-square system).
class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The requested frequency is not an invariant zero of the system.
class NotAZeroError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Gain design exhausted its search budget.
class DesignError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace zdsim
