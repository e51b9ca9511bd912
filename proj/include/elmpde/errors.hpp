#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace elmpde {

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Rejection sampler acceptance ratio fell below the floor.
struct DegenerateDomain : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A right-hand side or coefficient evaluated to NaN/Inf at a collocation point.
struct NonFiniteData : std::runtime_error {
    NonFiniteData(const std::string& msg, std::vector<double> at)
        : std::runtime_error(msg), point(std::move(at)) {}
    std::vector<double> point;
};

struct UnsupportedOrder : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct UnsupportedDomain : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotFound : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Gauss-Newton produced a non-finite residual.
struct Diverged : std::runtime_error {
    Diverged(const std::string& msg, int at_iteration)
        : std::runtime_error(msg), iteration(at_iteration) {}
    int iteration;
};

}  // namespace elmpde
