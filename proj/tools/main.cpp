// elmpde command line front end: catalog, solve, converge, spectrum,
// export-field. All randomness flows from --seed via fixed sub-seeds, so
// every run is replayable from its config.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "elmpde/errors.hpp"
#include "elmpde/io.hpp"
#include "elmpde/metrics.hpp"
#include "elmpde/runner.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolve = 3;
constexpr int kExitIo = 4;
constexpr int kExitPartial = 5;

std::string resolve_out(const std::string& path) {
    if (path.empty() || std::filesystem::path(path).is_absolute()) return path;
    if (const char* dir = std::getenv("ELMPDE_OUTPUT_DIR")) {
        return (std::filesystem::path(dir) / path).string();
    }
    return path;
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        elmpde::write_text_file(resolve_out(out_path), content);
    }
}

// options shared by every run-producing subcommand
void add_run_options(CLI::App* cmd, elmpde::RunConfig& cfg, std::string& method,
                     std::string& rule, std::string& ratio) {
    cmd->add_option("-p,--problem", cfg.problem_id, "benchmark id (see catalog)")
        ->required();
    cmd->add_option("-m,--method", method, "lse | pielm | xtfc")->capture_default_str();
    cmd->add_option("--lambda", cfg.lambda, "penalty weight (pielm)")
        ->capture_default_str();
    cmd->add_option("-N,--n-total", cfg.n_total, "total collocation points")
        ->capture_default_str();
    cmd->add_option("--point-rule", rule, "fixed | linear | sqrt")->capture_default_str();
    cmd->add_option("--fixed-boundary", cfg.fixed_boundary,
                    "boundary count for the fixed rule");
    cmd->add_option("--ratio", ratio, "under (L=N/2) | square (L=N) | over (L=2N)")
        ->capture_default_str();
    cmd->add_option("-M,--weight-range", cfg.half_range,
                    "half range of the uniform weight/bias draw")
        ->capture_default_str();
    cmd->add_option("-s,--seed", cfg.seed, "master seed")->capture_default_str();
    cmd->add_option("--rank-tol", cfg.rank_tol, "relative singular value cutoff")
        ->capture_default_str();
    cmd->add_option("--max-iters", cfg.gn.max_iters, "Gauss-Newton iteration cap")
        ->capture_default_str();
    cmd->add_option("--step-cap", cfg.gn.step_cap, "Gauss-Newton step norm cap")
        ->capture_default_str();
    cmd->add_option("--res-tol", cfg.gn.res_tol, "Gauss-Newton residual tolerance")
        ->capture_default_str();
    cmd->add_option("--n-test", cfg.n_test, "held-out test point budget")
        ->capture_default_str();
}

void finalize_config(elmpde::RunConfig& cfg, const std::string& method,
                     const std::string& rule, const std::string& ratio) {
    cfg.method = elmpde::parse_method(method);
    cfg.point_rule = elmpde::parse_point_rule(rule);
    cfg.ratio = elmpde::parse_ratio(ratio);
}

int cmd_catalog(const std::string& filter) {
    for (const auto& pb : elmpde::catalog()) {
        if (filter == "nonlinear" && !pb.is_nonlinear()) continue;
        if (filter == "linear" && pb.is_nonlinear()) continue;
        std::string kind;
        switch (pb.domain.kind()) {
            case elmpde::DomainKind::box: kind = "box"; break;
            case elmpde::DomainKind::polygon: kind = "polygon"; break;
            case elmpde::DomainKind::space_time_box: kind = "space-time"; break;
        }
        std::cout << pb.id << "\t" << kind << "\tdim=" << pb.domain.dim() << "\t"
                  << (pb.is_nonlinear() ? "nonlinear" : "linear")
                  << (pb.constraint_curve ? "\textrapolation" : "") << "\n";
    }
    return 0;
}

int cmd_solve(const elmpde::RunConfig& cfg, const std::string& report_path,
              const std::string& field_path, const std::string& model_path, int grid) {
    const elmpde::RunResult res = elmpde::run_single(cfg);
    emit(report_path, elmpde::solver_report(res));
    if (!field_path.empty()) {
        emit(field_path, elmpde::field_csv(elmpde::lookup(cfg.problem_id), res.predict, grid));
    }
    if (!model_path.empty()) {
        std::ofstream os(resolve_out(model_path), std::ios::binary);
        if (!os) throw std::runtime_error("cannot open for writing: " + model_path);
        elmpde::save_model(os, res);
    }
    return 0;
}

int cmd_converge(const elmpde::ConvergenceStudy& study, int jobs,
                 const std::string& out_path, bool resume) {
    std::vector<elmpde::ConvergenceCell> done;
    const std::string resolved = resolve_out(out_path);
    if (resume) {
        if (out_path.empty()) throw CLI::ValidationError("--resume requires --out");
        std::ifstream is(resolved);
        if (is) done = elmpde::parse_convergence_csv(is);
    }
    const elmpde::ConvergenceTable table = elmpde::run_convergence(study, jobs, done);
    emit(out_path, elmpde::convergence_csv(table));
    for (const auto& [n, med] : table.median_rmse) {
        std::cerr << "median rmse N=" << n << ": " << med << "\n";
    }
    const bool partial = std::any_of(table.cells.begin(), table.cells.end(),
                                     [](const auto& c) { return !c.ok; });
    return partial ? kExitPartial : 0;
}

int cmd_export_field(const std::string& model_path, const std::string& out_path, int grid) {
    std::ifstream is(model_path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open model: " + model_path);
    const elmpde::LoadedModel model = elmpde::load_model(is);
    const elmpde::BenchmarkProblem& pb = elmpde::lookup(model.problem_id);
    auto layer = model.layer;
    const Eigen::VectorXd beta = model.beta;
    auto predict = [layer, beta](const Eigen::VectorXd& p) {
        Eigen::MatrixXd pt(1, p.size());
        pt.row(0) = p.transpose();
        return layer->predict(beta, pt)[0];
    };
    emit(out_path, elmpde::field_csv(pb, predict, grid));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random-feature collocation solver for PDE benchmarks"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key-value config file; flags override it");

    elmpde::RunConfig cfg;
    std::string method = "lse", rule = "sqrt", ratio = "over";

    std::string filter;
    auto* catalog_cmd = app.add_subcommand("catalog", "list the benchmark problems");
    catalog_cmd->add_option("--filter", filter, "linear | nonlinear")
        ->check(CLI::IsMember({"linear", "nonlinear"}));

    std::string report_path, field_path, model_path;
    int grid = 101;
    auto* solve_cmd = app.add_subcommand("solve", "solve one configuration");
    add_run_options(solve_cmd, cfg, method, rule, ratio);
    solve_cmd->add_option("--report", report_path, "write the report here (default stdout)");
    solve_cmd->add_option("--field", field_path, "also dump a prediction grid CSV");
    solve_cmd->add_option("--model", model_path, "also save the trained model");
    solve_cmd->add_option("--grid", grid, "grid points per axis for --field")
        ->capture_default_str();

    std::vector<int> n_grid;
    std::vector<std::uint64_t> seeds;
    int n_seeds = 5, jobs = 1;
    std::string out_path;
    bool resume = false;
    auto* conv_cmd = app.add_subcommand("converge", "sweep N over seeds");
    add_run_options(conv_cmd, cfg, method, rule, ratio);
    conv_cmd->add_option("--n-grid", n_grid, "list of point totals")->required();
    conv_cmd->add_option("--seeds", seeds, "explicit seed list");
    conv_cmd->add_option("--n-seeds", n_seeds, "seed count when --seeds is absent")
        ->capture_default_str();
    conv_cmd->add_option("-j,--jobs", jobs, "concurrent cells")
        ->envname("ELMPDE_JOBS")
        ->capture_default_str();
    conv_cmd->add_option("-o,--out", out_path, "CSV path (default stdout)");
    conv_cmd->add_flag("--resume", resume, "reuse finished cells from --out");

    auto* spec_cmd = app.add_subcommand("spectrum", "singular spectra of the four matrices");
    add_run_options(spec_cmd, cfg, method, rule, ratio);
    spec_cmd->add_option("-o,--out", out_path, "CSV path (default stdout)");

    std::string model_in;
    auto* field_cmd = app.add_subcommand("export-field", "grid CSV from a saved model");
    field_cmd->add_option("--model", model_in, "model file from solve --model")->required();
    field_cmd->add_option("-o,--out", out_path, "CSV path (default stdout)");
    field_cmd->add_option("--grid", grid, "grid points per axis")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (catalog_cmd->parsed()) return cmd_catalog(filter);
        if (field_cmd->parsed()) return cmd_export_field(model_in, out_path, grid);

        finalize_config(cfg, method, rule, ratio);
        if (solve_cmd->parsed()) {
            return cmd_solve(cfg, report_path, field_path, model_path, grid);
        }
        if (spec_cmd->parsed()) {
            const auto report = elmpde::spectrum_report(elmpde::lookup(cfg.problem_id), cfg);
            emit(out_path, elmpde::spectrum_csv(report));
            return 0;
        }
        if (conv_cmd->parsed()) {
            elmpde::ConvergenceStudy study;
            study.base = cfg;
            study.n_grid = n_grid;
            if (seeds.empty()) {
                for (int i = 0; i < n_seeds; ++i) seeds.push_back(cfg.seed + i);
            }
            study.seeds = seeds;
            return cmd_converge(study, jobs, out_path, resume);
        }
    } catch (const elmpde::UnsupportedDomain& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const elmpde::NotFound& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::runtime_error& e) {
        const std::string what = e.what();
        if (what.rfind("cannot open", 0) == 0 || what.rfind("write failed", 0) == 0) {
            std::cerr << "io error: " << what << "\n";
            return kExitIo;
        }
        std::cerr << "solve error: " << what << "\n";
        return kExitSolve;
    }
    return 0;
}
