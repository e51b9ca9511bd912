#pragma once

#include <optional>
#include <string>
#include <vector>

#include "elmpde/assembly.hpp"
#include "elmpde/field.hpp"
#include "elmpde/geometry.hpp"

namespace elmpde {

/// A benchmark with a manufactured exact solution: the source and the
/// Dirichlet data are derived from the exact field so every run has a
/// ground truth.
struct BenchmarkProblem {
    std::string id;
    Domain domain;
    LinearOperatorSpec op;  // interior operator for linear problems
    std::optional<NonlinearForm> nonlinear;
    BoundaryOperatorSpec boundary_op;  // Dirichlet throughout
    ScalarField exact;
    std::function<double(const Eigen::VectorXd&)> source;
    std::function<double(const Eigen::VectorXd&)> boundary_data;
    /// Extrapolation cases: conditions are enforced on this curve instead
    /// of the domain boundary.
    std::optional<Domain> constraint_curve;

    bool is_nonlinear() const { return nonlinear.has_value(); }
    /// Domain whose boundary carries the constraint collocation points.
    const Domain& constraint_domain() const {
        return constraint_curve ? *constraint_curve : domain;
    }
};

const std::vector<BenchmarkProblem>& catalog();
/// Throws NotFound for an unknown id.
const BenchmarkProblem& lookup(const std::string& id);

/// Named shapes used by the catalog.
Domain l_shape_domain();
Domain star_domain();

}  // namespace elmpde
