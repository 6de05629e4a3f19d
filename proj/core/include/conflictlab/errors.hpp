#pragma once

#include <stdexcept>
#include <string>

namespace conflictlab {

/// Numerical failure in fitting, conditioning or divergence evaluation.
/// CLI maps these to exit code 2.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// A simulator produced a degenerate draw (e.g. a constant time series).
/// Callers may redraw parameters or abort.
class simulation_failure : public std::runtime_error {
public:
    explicit simulation_failure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace conflictlab
