#pragma once

#include <Eigen/Dense>
#include <functional>

#include "elmpde/assembly.hpp"
#include "elmpde/features.hpp"
#include "elmpde/field.hpp"
#include "elmpde/geometry.hpp"

namespace elmpde {

struct Rect {
    double x0, xf, y0, yf;
    static Rect from_domain(const Domain& domain);
};

/// One side of the rectangle: values of the interpolated function along
/// the edge plus its first and second tangential derivatives.
/// Parametrized by the actual free coordinate (y on vertical edges, x on
/// horizontal ones).
struct EdgeTrace {
    std::function<double(double coord, int order)> eval;
};

/// Bilinear Coons-patch transfinite interpolant on a rectangle.
struct CoonsPatch {
    Rect rect;
    EdgeTrace left, right, bottom, top;
    double c00, cf0, c0f, cff;  // corner values

    static CoonsPatch from_field(const Rect& rect, const ScalarField& g);
    static CoonsPatch from_feature(const Rect& rect, const RandomFeatureLayer& layer, int j);
};

/// M[g] and its partial derivatives up to order 2 at a point of the
/// closed rectangle.
double coons_eval(const CoonsPatch& patch, const Eigen::VectorXd& point,
                  const MultiIndex& alpha = {0, 0, 0});

/// D applied to the boundary-vanishing features sigma_j - M[sigma_j].
Eigen::MatrixXd xtfc_modified_feature_matrix(const RandomFeatureLayer& layer,
                                             const Rect& rect,
                                             const Eigen::MatrixXd& interior_points,
                                             const LinearOperatorSpec& op);

struct XtfcSolution {
    Eigen::VectorXd beta;
    double interior_residual_norm = 0.0;
    /// Full prediction u = sum_j beta_j (sigma_j - M[sigma_j]) + M[g].
    std::function<double(const Eigen::VectorXd&)> predict;
};

/// Hard-imposition solve on a rectangle: the boundary data are absorbed
/// into u_B = M[g] and the interior problem is an unconstrained least
/// squares in the modified features.
XtfcSolution xtfc_solve(const Domain& domain, const LinearOperatorSpec& op,
                        const std::function<double(const Eigen::VectorXd&)>& source,
                        const ScalarField& boundary_data, const RandomFeatureLayer& layer,
                        const Eigen::MatrixXd& interior_points, double rank_tol);

}  // namespace elmpde
