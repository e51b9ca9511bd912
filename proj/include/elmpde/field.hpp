#pragma once

#include <Eigen/Dense>
#include <functional>

#include "elmpde/features.hpp"

namespace elmpde {

/// A scalar function with optional closed-form first and second
/// derivatives. gradient/hessian may be empty when only values are known.
struct ScalarField {
    std::function<double(const Eigen::VectorXd&)> value;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian;

    bool has_derivatives() const { return gradient && hessian; }

    /// d^alpha of the field at a point, |alpha| <= 2.
    double derivative(const Eigen::VectorXd& p, const MultiIndex& alpha) const;
};

/// Central finite difference of a scalar function, |alpha| <= 2.
double finite_difference(const std::function<double(const Eigen::VectorXd&)>& fn,
                         const Eigen::VectorXd& p, const MultiIndex& alpha,
                         double step = 1e-5);

}  // namespace elmpde
