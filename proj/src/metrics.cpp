#include "elmpde/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "elmpde/assembly.hpp"
#include "elmpde/runner.hpp"
#include "elmpde/solvers.hpp"
#include "elmpde/xtfc.hpp"

namespace elmpde {

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of an empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double rmse(const std::function<double(const Eigen::VectorXd&)>& prediction,
            const BenchmarkProblem& problem, int n_interior_test, int n_boundary_test,
            std::uint64_t seed) {
    if (n_interior_test <= 0 || n_boundary_test <= 0) {
        throw std::invalid_argument("rmse needs test points in both sets");
    }
    std::mt19937_64 rng(seed);
    const Eigen::MatrixXd interior = sample_interior(problem.domain, n_interior_test, rng);
    const Eigen::MatrixXd boundary =
        sample_boundary(problem.constraint_domain(), n_boundary_test, rng);

    auto mse = [&](const Eigen::MatrixXd& pts) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < pts.rows(); ++i) {
            const Eigen::VectorXd p = pts.row(i);
            const double e = prediction(p) - problem.exact.value(p);
            s += e * e;
        }
        return s / static_cast<double>(pts.rows());
    };
    return std::sqrt(mse(interior) + mse(boundary));
}

ConvergenceTable run_convergence(const ConvergenceStudy& study, int jobs,
                                 const std::vector<ConvergenceCell>& done) {
    if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");

    struct Job {
        int n_total;
        std::uint64_t seed;
    };
    std::vector<Job> pending;
    std::vector<ConvergenceCell> cells;
    for (const int n : study.n_grid) {
        for (const std::uint64_t s : study.seeds) {
            const auto prev = std::find_if(done.begin(), done.end(), [&](const auto& c) {
                return c.n_total == n && c.seed == s && c.ok;
            });
            if (prev != done.end()) {
                cells.push_back(*prev);
            } else {
                pending.push_back({n, s});
            }
        }
    }

    std::mutex mu;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= pending.size()) return;
            ConvergenceCell cell;
            cell.n_total = pending[i].n_total;
            cell.seed = pending[i].seed;
            try {
                RunConfig cfg = study.base;
                cfg.n_total = cell.n_total;
                cfg.seed = cell.seed;
                const RunResult r = run_single(cfg);
                cell.ok = true;
                cell.neurons = r.neurons;
                cell.n_interior = r.n_interior;
                cell.n_boundary = r.n_boundary;
                cell.rmse = r.rmse;
                cell.constraint_residual = r.constraint_residual_norm;
                cell.interior_residual = r.interior_residual_norm;
                cell.wall_ms = r.wall_ms;
            } catch (const std::exception& e) {
                cell.reason = e.what();
            }
            const std::lock_guard<std::mutex> lock(mu);
            cells.push_back(std::move(cell));
        }
    };
    if (jobs == 1 || pending.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const int n_workers = std::min<std::size_t>(jobs, pending.size());
        for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) {
        return a.n_total != b.n_total ? a.n_total < b.n_total : a.seed < b.seed;
    });

    ConvergenceTable table;
    table.cells = std::move(cells);
    for (const int n : study.n_grid) {
        std::vector<double> vals;
        for (const auto& c : table.cells) {
            if (c.n_total == n && c.ok) vals.push_back(c.rmse);
        }
        if (!vals.empty()) table.median_rmse[n] = median(std::move(vals));
    }
    return table;
}

SpectrumReport spectrum_report(const BenchmarkProblem& problem, const RunConfig& cfg) {
    if (problem.is_nonlinear()) {
        throw std::invalid_argument("spectrum comparison is defined for linear operators");
    }
    const PointAllocation alloc = allocate_counts(cfg.n_total, cfg.point_rule,
                                                  problem.constraint_domain(),
                                                  cfg.fixed_boundary);
    std::mt19937_64 rng(sub_seed(cfg.seed, "points"));
    const Eigen::MatrixXd interior = sample_interior(problem.domain, alloc.n_interior, rng);
    const Eigen::MatrixXd boundary =
        sample_boundary(problem.constraint_domain(), alloc.n_boundary, rng);

    const int L = neurons_for(cfg.n_total, cfg.ratio);
    const RandomFeatureLayer layer = RandomFeatureLayer::create(
        L, problem.domain.dim(), cfg.half_range, sub_seed(cfg.seed, "layer"));

    const Eigen::MatrixXd A = assemble_operator_matrix(layer, problem.op, interior);
    const Eigen::MatrixXd C = assemble_operator_matrix(layer, problem.boundary_op, boundary);

    SpectrumReport report;
    auto push = [&](std::string label, const Eigen::MatrixXd& m) {
        SpectrumEntry e;
        e.label = std::move(label);
        e.sigma = singular_values(m);
        const int r = numerical_rank(e.sigma, cfg.rank_tol);
        e.effective_condition = r > 0 ? e.sigma[0] / e.sigma[r - 1] : 0.0;
        report.entries.push_back(std::move(e));
    };

    push("original", A);

    Eigen::MatrixXd stacked(A.rows() + C.rows(), A.cols());
    stacked.topRows(A.rows()) = A;
    stacked.bottomRows(C.rows()) = std::sqrt(cfg.lambda) * C;
    push("pielm", stacked);

    const SvdSplit split = split_constraints(C, cfg.rank_tol);
    push("lse-elm", Eigen::MatrixXd(A * split.V_perp));

    if (problem.domain.kind() == DomainKind::box && problem.domain.dim() == 2 &&
        !problem.constraint_curve) {
        const Rect rect = Rect::from_domain(problem.domain);
        push("xtfc", xtfc_modified_feature_matrix(layer, rect, interior, problem.op));
    }
    return report;
}

}  // namespace elmpde
