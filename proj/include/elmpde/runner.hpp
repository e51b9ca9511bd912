#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

#include "elmpde/config.hpp"
#include "elmpde/features.hpp"
#include "elmpde/geometry.hpp"
#include "elmpde/problems.hpp"

namespace elmpde {

struct RunResult {
    RunConfig config;
    int n_interior = 0;
    int n_boundary = 0;
    int neurons = 0;
    std::shared_ptr<const RandomFeatureLayer> layer;
    Eigen::VectorXd beta;
    int constraint_rank = 0;  // numerical rank of C (lse methods)
    double interior_residual_norm = 0.0;
    double constraint_residual_norm = 0.0;
    int iterations = 0;  // Gauss-Newton steps; 0 for direct solves
    bool converged = true;
    std::vector<double> residual_trace;
    double rmse = 0.0;
    double wall_ms = 0.0;
    std::function<double(const Eigen::VectorXd&)> predict;
};

/// End-to-end solve of one configuration: allocate and sample points,
/// draw the layer, assemble, solve with the configured method and score
/// against the manufactured solution. Deterministic per config.
RunResult run_single(const RunConfig& config);

}  // namespace elmpde
