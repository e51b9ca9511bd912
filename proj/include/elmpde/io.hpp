#pragma once

#include <iosfwd>
#include <string>

#include "elmpde/metrics.hpp"
#include "elmpde/runner.hpp"

namespace elmpde {

/// Convergence table CSV, header
/// N,L,N_I,N_B,seed,rmse,constraint_residual,interior_residual,wall_ms.
/// Failed cells carry the reason in the rmse column as "error: ...".
std::string convergence_csv(const ConvergenceTable& table);

/// Parse the rows previously written by convergence_csv (resume support);
/// failed rows come back with ok = false.
std::vector<ConvergenceCell> parse_convergence_csv(std::istream& is);

/// Spectrum CSV, header label,index,sigma.
std::string spectrum_csv(const SpectrumReport& report);

/// Regular-grid field dump, header x0,x1[,x2],u_pred,u_exact,abs_err;
/// grid points outside the domain are skipped.
std::string field_csv(const BenchmarkProblem& problem,
                      const std::function<double(const Eigen::VectorXd&)>& predict,
                      int points_per_axis);

/// Human-readable solve summary; byte-identical for identical configs.
std::string solver_report(const RunResult& result);

/// Canonical key=value serialization of a config, used both for the
/// config digest and for replay files.
std::string serialize_run_config(const RunConfig& config);
std::uint64_t config_digest(const RunConfig& config);

/// Model file: layer weights + beta + problem id + config digest.
void save_model(std::ostream& os, const RunResult& result);
struct LoadedModel {
    std::shared_ptr<const RandomFeatureLayer> layer;
    Eigen::VectorXd beta;
    std::string problem_id;
    std::uint64_t digest = 0;
};
LoadedModel load_model(std::istream& is);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace elmpde
