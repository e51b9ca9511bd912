#include "elmpde/solvers.hpp"

#include <lapacke.h>

#include <cmath>
#include <stdexcept>

#include "elmpde/assembly.hpp"
#include "elmpde/errors.hpp"

namespace elmpde {

namespace {

// dgesdd destroys its input; work on a copy. jobz 'S' gives the thin
// factors, 'A' the full ones (needed for the kernel basis).
void lapack_svd(Eigen::MatrixXd A, char jobz, Eigen::MatrixXd& U, Eigen::VectorXd& sigma,
                Eigen::MatrixXd& Vt) {
    const auto m = static_cast<lapack_int>(A.rows());
    const auto n = static_cast<lapack_int>(A.cols());
    const lapack_int k = std::min(m, n);
    sigma.resize(k);
    if (jobz == 'S') {
        U.resize(m, k);
        Vt.resize(k, n);
    } else {
        U.resize(m, m);
        Vt.resize(n, n);
    }
    lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, jobz, m, n, A.data(), m,
                                     sigma.data(), U.data(), static_cast<lapack_int>(U.rows()),
                                     Vt.data(), static_cast<lapack_int>(Vt.rows()));
    if (info > 0) {
        // divide-and-conquer failed to converge; retry with the plain QR driver
        Eigen::VectorXd superb(k > 1 ? k - 1 : 1);
        info = LAPACKE_dgesvd(LAPACK_COL_MAJOR, jobz == 'S' ? 'S' : 'A',
                              jobz == 'S' ? 'S' : 'A', m, n, A.data(), m, sigma.data(),
                              U.data(), static_cast<lapack_int>(U.rows()), Vt.data(),
                              static_cast<lapack_int>(Vt.rows()), superb.data());
    }
    if (info != 0) throw std::runtime_error("SVD failed, info=" + std::to_string(info));
}

}  // namespace

SvdResult thin_svd(const Eigen::MatrixXd& A) {
    SvdResult r;
    Eigen::MatrixXd Vt;
    lapack_svd(A, 'S', r.U, r.sigma, Vt);
    r.V = Vt.transpose();
    return r;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& A) {
    Eigen::MatrixXd copy = A;
    const auto m = static_cast<lapack_int>(A.rows());
    const auto n = static_cast<lapack_int>(A.cols());
    Eigen::VectorXd sigma(std::min(m, n));
    const lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', m, n, copy.data(), m,
                                           sigma.data(), nullptr, m, nullptr, n);
    if (info != 0) {
        return thin_svd(A).sigma;
    }
    return sigma;
}

int numerical_rank(const Eigen::VectorXd& sigma, double rank_tol) {
    if (sigma.size() == 0 || sigma[0] <= 0.0) return 0;
    const double cutoff = rank_tol * sigma[0];
    int r = 0;
    while (r < sigma.size() && sigma[r] > cutoff) ++r;
    return r;
}

Eigen::VectorXd pinv_solve(const Eigen::MatrixXd& H, const Eigen::VectorXd& y,
                           double rank_tol) {
    if (!(rank_tol > 0.0)) throw std::invalid_argument("rank_tol must be positive");
    if (H.rows() != y.size()) throw DimensionMismatch("pinv_solve: size mismatch");
    if (H.size() == 0) return Eigen::VectorXd::Zero(H.cols());
    const SvdResult svd = thin_svd(H);
    const int r = numerical_rank(svd.sigma, rank_tol);
    if (r == 0) return Eigen::VectorXd::Zero(H.cols());
    const Eigen::VectorXd coeffs =
        (svd.U.leftCols(r).transpose() * y).array() / svd.sigma.head(r).array();
    return svd.V.leftCols(r) * coeffs;
}

SvdSplit split_constraints(const Eigen::MatrixXd& C, double rank_tol) {
    if (!(rank_tol > 0.0)) throw std::invalid_argument("rank_tol must be positive");
    Eigen::MatrixXd U, Vt;
    Eigen::VectorXd sigma;
    lapack_svd(C, 'A', U, sigma, Vt);
    SvdSplit split;
    split.rank = numerical_rank(sigma, rank_tol);
    split.U_r = U.leftCols(split.rank);
    split.sigma_r = sigma.head(split.rank);
    split.V_r = Vt.topRows(split.rank).transpose();
    split.V_perp = Vt.bottomRows(Vt.rows() - split.rank).transpose();
    return split;
}

LseSolution lse_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& f,
                      const Eigen::MatrixXd& C, const Eigen::VectorXd& g,
                      double rank_tol) {
    if (A.cols() != C.cols()) throw DimensionMismatch("lse_solve: column count mismatch");
    if (A.rows() != f.size() || C.rows() != g.size()) {
        throw DimensionMismatch("lse_solve: right-hand side length mismatch");
    }
    LseSolution sol;
    sol.split = split_constraints(C, rank_tol);
    const auto& split = sol.split;
    sol.y = (split.U_r.transpose() * g).array() / split.sigma_r.array();

    const Eigen::VectorXd beta_constrained = split.V_r * sol.y;
    if (split.V_perp.cols() == 0) {
        sol.no_interior_freedom = true;
        sol.z.resize(0);
        sol.beta = beta_constrained;
    } else {
        const Eigen::MatrixXd A_proj = A * split.V_perp;
        const Eigen::VectorXd f_proj = f - A * beta_constrained;
        sol.z = pinv_solve(A_proj, f_proj, rank_tol);
        sol.beta = beta_constrained + split.V_perp * sol.z;
    }
    sol.interior_residual_norm = (A * sol.beta - f).norm();
    sol.constraint_residual_norm = (C * sol.beta - g).norm();
    return sol;
}

Eigen::VectorXd penalty_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& f,
                              const Eigen::MatrixXd& C, const Eigen::VectorXd& g,
                              double lambda, double rank_tol) {
    if (!(lambda > 0.0)) throw std::invalid_argument("penalty weight must be positive");
    if (A.cols() != C.cols()) throw DimensionMismatch("penalty_solve: column count mismatch");
    const double w = std::sqrt(lambda);
    Eigen::MatrixXd stacked(A.rows() + C.rows(), A.cols());
    stacked.topRows(A.rows()) = A;
    stacked.bottomRows(C.rows()) = w * C;
    Eigen::VectorXd rhs(f.size() + g.size());
    rhs.head(f.size()) = f;
    rhs.tail(g.size()) = w * g;
    return pinv_solve(stacked, rhs, rank_tol);
}

LseSolution gauss_newton_constrained(const NonlinearResidualSpec& spec,
                                     const Eigen::MatrixXd& C, const Eigen::VectorXd& g,
                                     const GaussNewtonOptions& opts) {
    LseSolution sol;
    sol.split = split_constraints(C, opts.rank_tol);
    const auto& split = sol.split;
    sol.y = (split.U_r.transpose() * g).array() / split.sigma_r.array();
    sol.no_interior_freedom = split.V_perp.cols() == 0;

    // start on the constraint manifold with z = 0
    Eigen::VectorXd beta = split.V_r * sol.y;
    sol.z = Eigen::VectorXd::Zero(split.V_perp.cols());
    const double scale = std::sqrt(static_cast<double>(spec.n_points));

    sol.converged = false;
    for (int iter = 0; iter <= opts.max_iters; ++iter) {
        const Eigen::VectorXd R = spec.residual(beta);
        if (!R.allFinite()) {
            throw Diverged("Gauss-Newton residual is not finite", iter);
        }
        const double rnorm = R.norm() / scale;
        sol.residual_trace.push_back(rnorm);
        if (rnorm <= opts.res_tol) {
            sol.converged = true;
            break;
        }
        if (iter == opts.max_iters || sol.no_interior_freedom) break;

        const Eigen::MatrixXd J_proj = spec.jacobian(beta) * split.V_perp;
        Eigen::VectorXd dz = -pinv_solve(J_proj, R, opts.rank_tol);
        const double dz_norm = dz.norm();
        if (dz_norm <= 1e-14) {
            sol.converged = true;
            break;
        }
        if (dz_norm > opts.step_cap) dz *= opts.step_cap / dz_norm;
        sol.z += dz;
        beta += split.V_perp * dz;
        ++sol.iterations;
    }
    sol.beta = beta;
    sol.interior_residual_norm = sol.residual_trace.back() * scale;
    sol.constraint_residual_norm = (C * beta - g).norm();
    return sol;
}

}  // namespace elmpde
