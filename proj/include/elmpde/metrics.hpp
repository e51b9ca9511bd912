#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "elmpde/config.hpp"
#include "elmpde/problems.hpp"

namespace elmpde {

/// RMSE = sqrt(mean interior squared error + mean boundary squared error)
/// on held-out points drawn with the training sampler but a distinct seed.
double rmse(const std::function<double(const Eigen::VectorXd&)>& prediction,
            const BenchmarkProblem& problem, int n_interior_test, int n_boundary_test,
            std::uint64_t seed);

struct ConvergenceStudy {
    RunConfig base;  // problem, method, rule, ratio, tolerances
    std::vector<int> n_grid;
    std::vector<std::uint64_t> seeds;
};

struct ConvergenceCell {
    int n_total = 0;
    int neurons = 0;
    int n_interior = 0;
    int n_boundary = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    double rmse = 0.0;
    double constraint_residual = 0.0;
    double interior_residual = 0.0;
    double wall_ms = 0.0;
    std::string reason;  // failure message when !ok
};

struct ConvergenceTable {
    std::vector<ConvergenceCell> cells;       // ordered by (N, seed)
    std::map<int, double> median_rmse;        // per N, over successful seeds
};

/// Runs every (N, seed) cell; individual failures are recorded with a
/// reason and the study continues. `jobs` > 1 runs cells concurrently;
/// the returned table is ordered by (N, seed) either way. `skip` cells
/// are carried over verbatim (resume support).
ConvergenceTable run_convergence(const ConvergenceStudy& study, int jobs = 1,
                                 const std::vector<ConvergenceCell>& done = {});

struct SpectrumEntry {
    std::string label;  // original | pielm | lse-elm | xtfc
    Eigen::VectorXd sigma;
    double effective_condition = 0.0;  // sigma_1 / sigma_r at the rank threshold
};

struct SpectrumReport {
    std::vector<SpectrumEntry> entries;
};

/// Singular spectra of the four operator-matrix families assembled on a
/// shared layer and point set. The xtfc entry is omitted off box domains.
SpectrumReport spectrum_report(const BenchmarkProblem& problem, const RunConfig& config);

double median(std::vector<double> values);

}  // namespace elmpde
