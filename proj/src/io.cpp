#include "elmpde/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "elmpde/errors.hpp"
#include "elmpde/geometry.hpp"

namespace elmpde {

namespace {

// shortest round-trippable decimal form, '.' decimal point regardless of locale
std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    for (int prec = 1; prec < 17; ++prec) {
        char probe[32];
        std::snprintf(probe, sizeof probe, "%.*g", prec, v);
        if (std::strtod(probe, nullptr) == v) return probe;
    }
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

template <typename T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw std::runtime_error("truncated model file");
    return v;
}

}  // namespace

std::string convergence_csv(const ConvergenceTable& table) {
    std::string out = "N,L,N_I,N_B,seed,rmse,constraint_residual,interior_residual,wall_ms\n";
    for (const auto& c : table.cells) {
        out += std::to_string(c.n_total) + ',' + std::to_string(c.neurons) + ',' +
               std::to_string(c.n_interior) + ',' + std::to_string(c.n_boundary) + ',' +
               std::to_string(c.seed) + ',';
        if (c.ok) {
            out += fmt(c.rmse) + ',' + fmt(c.constraint_residual) + ',' +
                   fmt(c.interior_residual) + ',' + fmt(c.wall_ms);
        } else {
            std::string reason = c.reason;
            for (char& ch : reason) {
                if (ch == ',' || ch == '\n') ch = ';';
            }
            out += "error: " + reason + ",,,";
        }
        out += '\n';
    }
    return out;
}

std::vector<ConvergenceCell> parse_convergence_csv(std::istream& is) {
    std::vector<ConvergenceCell> cells;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (first) {  // header
            first = false;
            continue;
        }
        if (line.empty()) continue;
        const auto cols = split_csv_line(line);
        if (cols.size() < 6) continue;
        ConvergenceCell c;
        c.n_total = std::stoi(cols[0]);
        c.neurons = std::stoi(cols[1]);
        c.n_interior = std::stoi(cols[2]);
        c.n_boundary = std::stoi(cols[3]);
        c.seed = std::stoull(cols[4]);
        if (cols[5].rfind("error:", 0) == 0) {
            c.ok = false;
            c.reason = cols[5].substr(6);
        } else if (cols.size() >= 9) {
            c.ok = true;
            c.rmse = std::stod(cols[5]);
            c.constraint_residual = std::stod(cols[6]);
            c.interior_residual = std::stod(cols[7]);
            c.wall_ms = std::stod(cols[8]);
        }
        cells.push_back(std::move(c));
    }
    return cells;
}

std::string spectrum_csv(const SpectrumReport& report) {
    std::string out = "label,index,sigma\n";
    for (const auto& e : report.entries) {
        for (Eigen::Index i = 0; i < e.sigma.size(); ++i) {
            out += e.label + ',' + std::to_string(i) + ',' + fmt(e.sigma[i]) + '\n';
        }
    }
    return out;
}

std::string field_csv(const BenchmarkProblem& problem,
                      const std::function<double(const Eigen::VectorXd&)>& predict,
                      int points_per_axis) {
    if (points_per_axis < 2) throw std::invalid_argument("need at least 2 points per axis");
    const auto bbox = problem.domain.bounding_box();
    const int d = static_cast<int>(bbox.size());

    std::string out;
    for (int k = 0; k < d; ++k) out += "x" + std::to_string(k) + ',';
    out += "u_pred,u_exact,abs_err\n";

    std::vector<int> idx(d, 0);
    Eigen::VectorXd p(d);
    for (;;) {
        for (int k = 0; k < d; ++k) {
            p[k] = bbox[k][0] +
                   (bbox[k][1] - bbox[k][0]) * idx[k] / double(points_per_axis - 1);
        }
        if (contains(problem.domain, p)) {
            const double up = predict(p);
            const double ue = problem.exact.value(p);
            for (int k = 0; k < d; ++k) out += fmt(p[k]) + ',';
            out += fmt(up) + ',' + fmt(ue) + ',' + fmt(std::abs(up - ue)) + '\n';
        }
        int k = d - 1;
        while (k >= 0 && ++idx[k] == points_per_axis) idx[k--] = 0;
        if (k < 0) break;
    }
    return out;
}

std::string serialize_run_config(const RunConfig& c) {
    std::string out;
    out += "problem = " + c.problem_id + '\n';
    out += "method = " + to_string(c.method) + '\n';
    out += "lambda = " + fmt(c.lambda) + '\n';
    out += "n-total = " + std::to_string(c.n_total) + '\n';
    out += "point-rule = " + to_string(c.point_rule) + '\n';
    out += "fixed-boundary = " + std::to_string(c.fixed_boundary) + '\n';
    out += "ratio = " + to_string(c.ratio) + '\n';
    out += "weight-range = " + fmt(c.half_range) + '\n';
    out += "seed = " + std::to_string(c.seed) + '\n';
    out += "rank-tol = " + fmt(c.rank_tol) + '\n';
    out += "max-iters = " + std::to_string(c.gn.max_iters) + '\n';
    out += "step-cap = " + fmt(c.gn.step_cap) + '\n';
    out += "res-tol = " + fmt(c.gn.res_tol) + '\n';
    out += "n-test = " + std::to_string(c.n_test) + '\n';
    return out;
}

std::uint64_t config_digest(const RunConfig& c) {
    const std::string s = serialize_run_config(c);
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string solver_report(const RunResult& r) {
    // timing deliberately omitted: identical configs give identical bytes
    std::string out;
    out += "problem: " + r.config.problem_id + '\n';
    out += "method: " + to_string(r.config.method) + '\n';
    out += "N_total: " + std::to_string(r.config.n_total) + '\n';
    out += "N_I: " + std::to_string(r.n_interior) + '\n';
    out += "N_B: " + std::to_string(r.n_boundary) + '\n';
    out += "L: " + std::to_string(r.neurons) + '\n';
    out += "seed: " + std::to_string(r.config.seed) + '\n';
    out += "constraint_rank: " + std::to_string(r.constraint_rank) + '\n';
    out += "interior_residual: " + fmt(r.interior_residual_norm) + '\n';
    out += "constraint_residual: " + fmt(r.constraint_residual_norm) + '\n';
    out += "iterations: " + std::to_string(r.iterations) + '\n';
    out += std::string("converged: ") + (r.converged ? "true" : "false") + '\n';
    out += "rmse: " + fmt(r.rmse) + '\n';
    out += "config_digest: " + std::to_string(config_digest(r.config)) + '\n';
    return out;
}

void save_model(std::ostream& os, const RunResult& r) {
    os.write("ELMM", 4);
    put<std::uint32_t>(os, 1);
    r.layer->save(os);
    put<std::int64_t>(os, r.beta.size());
    os.write(reinterpret_cast<const char*>(r.beta.data()),
             static_cast<std::streamsize>(r.beta.size() * sizeof(double)));
    put<std::uint64_t>(os, r.config.problem_id.size());
    os.write(r.config.problem_id.data(),
             static_cast<std::streamsize>(r.config.problem_id.size()));
    put<std::uint64_t>(os, config_digest(r.config));
}

LoadedModel load_model(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "ELMM", 4) != 0) {
        throw std::runtime_error("not a model file");
    }
    const auto version = get<std::uint32_t>(is);
    if (version != 1) throw std::runtime_error("unsupported model version");
    LoadedModel m;
    m.layer = std::make_shared<const RandomFeatureLayer>(RandomFeatureLayer::load(is));
    const auto n = get<std::int64_t>(is);
    m.beta.resize(n);
    is.read(reinterpret_cast<char*>(m.beta.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
    const auto len = get<std::uint64_t>(is);
    m.problem_id.resize(len);
    is.read(m.problem_id.data(), static_cast<std::streamsize>(len));
    m.digest = get<std::uint64_t>(is);
    if (!is) throw std::runtime_error("truncated model file");
    return m;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << content;
    if (!os) throw std::runtime_error("write failed: " + path);
}

Method parse_method(std::string_view s) {
    if (s == "lse") return Method::lse;
    if (s == "pielm") return Method::pielm;
    if (s == "xtfc") return Method::xtfc;
    throw std::invalid_argument("unknown method: " + std::string(s));
}

Ratio parse_ratio(std::string_view s) {
    if (s == "under") return Ratio::under;
    if (s == "square") return Ratio::square;
    if (s == "over") return Ratio::over;
    throw std::invalid_argument("unknown ratio: " + std::string(s));
}

PointRule parse_point_rule(std::string_view s) {
    if (s == "fixed") return PointRule::fixed;
    if (s == "linear") return PointRule::linear;
    if (s == "sqrt") return PointRule::sqrt_rule;
    throw std::invalid_argument("unknown point rule: " + std::string(s));
}

}  // namespace elmpde
