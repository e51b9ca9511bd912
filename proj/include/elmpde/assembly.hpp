#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "elmpde/features.hpp"
#include "elmpde/field.hpp"

namespace elmpde {

using CoeffFn = std::function<double(const Eigen::VectorXd&)>;

struct OperatorTerm {
    MultiIndex alpha{0, 0, 0};
    CoeffFn coeff;  // empty means the constant below
    double constant = 1.0;
};

/// A linear differential operator D[u] = sum_terms coeff(x) d^alpha u(x),
/// orders up to 2.
struct LinearOperatorSpec {
    std::vector<OperatorTerm> terms;

    static LinearOperatorSpec identity();
    static LinearOperatorSpec laplacian(int dim);
    LinearOperatorSpec& add(MultiIndex alpha, double constant);
    LinearOperatorSpec& add(MultiIndex alpha, CoeffFn coeff);

    /// Apply to a field with closed-form derivatives.
    double apply(const ScalarField& u, const Eigen::VectorXd& p) const;
    /// Apply via 4th-order central finite differences of u's values.
    double apply_fd(const std::function<double(const Eigen::VectorXd&)>& u,
                    const Eigen::VectorXd& p, double step = 1e-4) const;

    void validate() const;
};

/// Boundary operators share the shape of interior operators; Dirichlet is
/// the single identity term.
using BoundaryOperatorSpec = LinearOperatorSpec;

/// Feature matrices for one point set, computed once per multi-index and
/// reused across operator terms.
class FeatureCache {
public:
    FeatureCache(const RandomFeatureLayer& layer, Eigen::MatrixXd points)
        : layer_(layer), points_(std::move(points)) {}

    const Eigen::MatrixXd& matrix(const MultiIndex& alpha) const;
    const Eigen::MatrixXd& points() const { return points_; }
    const RandomFeatureLayer& layer() const { return layer_; }
    int evaluations() const { return evaluations_; }

private:
    const RandomFeatureLayer& layer_;
    Eigen::MatrixXd points_;
    mutable std::map<MultiIndex, Eigen::MatrixXd> cache_;
    mutable int evaluations_ = 0;
};

Eigen::MatrixXd assemble_operator_matrix(const FeatureCache& cache,
                                         const LinearOperatorSpec& op);
Eigen::MatrixXd assemble_operator_matrix(const RandomFeatureLayer& layer,
                                         const LinearOperatorSpec& op,
                                         const Eigen::MatrixXd& points);

/// Pointwise right-hand side; throws NonFiniteData when fn evaluates to
/// NaN or Inf at a collocation point.
Eigen::VectorXd assemble_rhs(const std::function<double(const Eigen::VectorXd&)>& fn,
                             const Eigen::MatrixXd& points);

struct CollocationSystem {
    Eigen::MatrixXd A;  // N_I x L
    Eigen::VectorXd f;
    Eigen::MatrixXd C;  // N_B x L
    Eigen::VectorXd g;
};

/// Problem-specific nonlinear operator: residual (without the source) and
/// exact Jacobian, both written against cached feature matrices.
struct NonlinearForm {
    std::function<Eigen::VectorXd(const FeatureCache&, const Eigen::VectorXd&)> residual;
    std::function<Eigen::MatrixXd(const FeatureCache&, const Eigen::VectorXd&)> jacobian;
};

struct NonlinearResidualSpec {
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> residual;  // R(beta)
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;  // dR/dbeta
    int n_points = 0;
};

NonlinearResidualSpec build_nonlinear_residual(const FeatureCache& cache,
                                               const NonlinearForm& form,
                                               const Eigen::VectorXd& f);

/// A linear operator as a degenerate nonlinear form: R(beta) = D beta.
NonlinearForm linear_form(LinearOperatorSpec op);

/// Dense binary export {int64 rows, int64 cols, row-major doubles}.
void write_dense_matrix(std::ostream& os, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_dense_matrix(std::istream& is);

}  // namespace elmpde
