#pragma once

#include <Eigen/Dense>
#include <vector>

namespace elmpde {

/// Thin SVD, A = U diag(sigma) V^T with sigma descending.
struct SvdResult {
    Eigen::MatrixXd U;
    Eigen::VectorXd sigma;
    Eigen::MatrixXd V;
};

SvdResult thin_svd(const Eigen::MatrixXd& A);

/// Descending singular values only.
Eigen::VectorXd singular_values(const Eigen::MatrixXd& A);

/// Count of sigma_i > rank_tol * sigma_1; zero for an all-zero spectrum.
int numerical_rank(const Eigen::VectorXd& sigma, double rank_tol);

/// Minimum-norm least-squares solution via truncated-SVD pseudoinverse.
Eigen::VectorXd pinv_solve(const Eigen::MatrixXd& H, const Eigen::VectorXd& y,
                           double rank_tol);

/// SVD-based split of the constraint matrix C: V_r spans ker(C)^perp,
/// V_perp spans the numerical kernel.
struct SvdSplit {
    Eigen::MatrixXd U_r;      // N_B x r
    Eigen::VectorXd sigma_r;  // r, descending
    Eigen::MatrixXd V_r;      // L x r
    Eigen::MatrixXd V_perp;   // L x (L - r)
    int rank = 0;
};

SvdSplit split_constraints(const Eigen::MatrixXd& C, double rank_tol);

struct LseSolution {
    Eigen::VectorXd beta;
    Eigen::VectorXd y;  // constrained coordinates, beta = V_r y + V_perp z
    Eigen::VectorXd z;  // free coordinates
    SvdSplit split;
    double interior_residual_norm = 0.0;
    double constraint_residual_norm = 0.0;
    bool no_interior_freedom = false;  // constraints consumed all freedom
    // Gauss-Newton only
    int iterations = 0;
    bool converged = true;
    std::vector<double> residual_trace;  // ||R|| / sqrt(N_I) per iterate
};

/// Equality-constrained least squares min ||A beta - f|| s.t. C beta = g,
/// by the null-space method: y = Sigma_r^{-1} U_r^T g, then the free part
/// from the projected problem min_z ||(A V_perp) z - (f - A V_r y)||.
LseSolution lse_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& f,
                      const Eigen::MatrixXd& C, const Eigen::VectorXd& g,
                      double rank_tol);

/// Penalty weighting: minimum-norm solution of the stacked system
/// [A; sqrt(lambda) C] beta = [f; sqrt(lambda) g].
Eigen::VectorXd penalty_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& f,
                              const Eigen::MatrixXd& C, const Eigen::VectorXd& g,
                              double lambda, double rank_tol);

struct GaussNewtonOptions {
    int max_iters = 50;
    double step_cap = 10.0;   // cap on ||delta z||
    double res_tol = 1e-10;   // stop when ||R|| / sqrt(N_I) drops below
    double rank_tol = 1e-12;
};

struct NonlinearResidualSpec;

/// Constraint-projected Gauss-Newton: updates live in ker(C), so every
/// iterate keeps the constraint residual of the start point beta_0 = V_r y.
LseSolution gauss_newton_constrained(const NonlinearResidualSpec& spec,
                                     const Eigen::MatrixXd& C, const Eigen::VectorXd& g,
                                     const GaussNewtonOptions& opts);

}  // namespace elmpde
