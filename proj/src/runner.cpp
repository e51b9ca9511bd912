#include "elmpde/runner.hpp"

#include <chrono>
#include <stdexcept>

#include "elmpde/assembly.hpp"
#include "elmpde/errors.hpp"
#include "elmpde/metrics.hpp"
#include "elmpde/solvers.hpp"
#include "elmpde/xtfc.hpp"

namespace elmpde {

namespace {

Method method_or_throw(const RunConfig& cfg, const BenchmarkProblem& pb) {
    if (cfg.method == Method::xtfc) {
        if (pb.domain.kind() != DomainKind::box || pb.domain.dim() != 2) {
            throw UnsupportedDomain("xtfc requires box domain");
        }
        if (pb.constraint_curve) {
            throw UnsupportedDomain("xtfc cannot enforce data off the domain boundary");
        }
        if (pb.is_nonlinear()) {
            throw UnsupportedDomain("xtfc is implemented for linear operators only");
        }
    }
    if (pb.is_nonlinear() && cfg.method == Method::pielm) {
        throw UnsupportedDomain("nonlinear problems require the lse method");
    }
    return cfg.method;
}

}  // namespace

RunResult run_single(const RunConfig& cfg) {
    const BenchmarkProblem& pb = lookup(cfg.problem_id);
    method_or_throw(cfg, pb);
    if (cfg.n_total < 2) throw std::invalid_argument("n_total must be at least 2");

    const auto t_start = std::chrono::steady_clock::now();

    RunResult res;
    res.config = cfg;

    // Point budget split. XTFC satisfies the boundary by construction, so
    // the whole budget goes to the interior.
    if (cfg.method == Method::xtfc) {
        res.n_interior = cfg.n_total;
        res.n_boundary = 0;
    } else {
        const PointAllocation alloc = allocate_counts(cfg.n_total, cfg.point_rule,
                                                      pb.constraint_domain(),
                                                      cfg.fixed_boundary);
        res.n_interior = alloc.n_interior;
        res.n_boundary = alloc.n_boundary;
    }

    std::mt19937_64 rng(sub_seed(cfg.seed, "points"));
    const Eigen::MatrixXd interior = sample_interior(pb.domain, res.n_interior, rng);
    const Eigen::MatrixXd boundary =
        res.n_boundary > 0 ? sample_boundary(pb.constraint_domain(), res.n_boundary, rng)
                           : Eigen::MatrixXd(0, pb.domain.dim());

    res.neurons = neurons_for(cfg.n_total, cfg.ratio);
    auto layer = std::make_shared<const RandomFeatureLayer>(RandomFeatureLayer::create(
        res.neurons, pb.domain.dim(), cfg.half_range, sub_seed(cfg.seed, "layer")));
    res.layer = layer;

    const Eigen::VectorXd f = assemble_rhs(pb.source, interior);

    if (cfg.method == Method::xtfc) {
        XtfcSolution sol = xtfc_solve(pb.domain, pb.op, pb.source, pb.exact, *layer,
                                      interior, cfg.rank_tol);
        res.beta = sol.beta;
        res.interior_residual_norm = sol.interior_residual_norm;
        res.predict = sol.predict;
    } else {
        const Eigen::MatrixXd C = assemble_operator_matrix(*layer, pb.boundary_op, boundary);
        const Eigen::VectorXd g = assemble_rhs(pb.boundary_data, boundary);
        res.constraint_rank = numerical_rank(singular_values(C), cfg.rank_tol);

        Eigen::VectorXd beta;
        if (pb.is_nonlinear()) {
            FeatureCache cache(*layer, interior);
            const NonlinearResidualSpec spec =
                build_nonlinear_residual(cache, *pb.nonlinear, f);
            GaussNewtonOptions opts = cfg.gn;
            opts.rank_tol = cfg.rank_tol;
            const LseSolution sol = gauss_newton_constrained(spec, C, g, opts);
            beta = sol.beta;
            res.interior_residual_norm = sol.interior_residual_norm;
            res.constraint_residual_norm = sol.constraint_residual_norm;
            res.iterations = sol.iterations;
            res.converged = sol.converged;
            res.residual_trace = sol.residual_trace;
        } else {
            const Eigen::MatrixXd A = assemble_operator_matrix(*layer, pb.op, interior);
            if (cfg.method == Method::lse) {
                const LseSolution sol = lse_solve(A, f, C, g, cfg.rank_tol);
                beta = sol.beta;
                res.interior_residual_norm = sol.interior_residual_norm;
                res.constraint_residual_norm = sol.constraint_residual_norm;
            } else {
                beta = penalty_solve(A, f, C, g, cfg.lambda, cfg.rank_tol);
                res.interior_residual_norm = (A * beta - f).norm();
                res.constraint_residual_norm = (C * beta - g).norm();
            }
        }
        res.beta = beta;
        res.predict = [layer, beta](const Eigen::VectorXd& p) {
            Eigen::MatrixXd pt(1, p.size());
            pt.row(0) = p.transpose();
            return layer->predict(beta, pt)[0];
        };
    }

    // Held-out score: same split rule as training, fresh seed.
    int nI_test = cfg.n_test, nB_test = 0;
    if (cfg.n_test > 0) {
        const PointAllocation split = allocate_counts(cfg.n_test, cfg.point_rule,
                                                      pb.constraint_domain(),
                                                      cfg.fixed_boundary);
        nI_test = split.n_interior;
        nB_test = split.n_boundary;
        res.rmse = rmse(res.predict, pb, nI_test, nB_test, sub_seed(cfg.seed, "test"));
    }

    res.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t_start)
                      .count();
    return res;
}

}  // namespace elmpde
