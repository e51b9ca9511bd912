#include "elmpde/assembly.hpp"

#include <cmath>
#include <memory>
#include <istream>
#include <ostream>

#include "elmpde/errors.hpp"

namespace elmpde {

double ScalarField::derivative(const Eigen::VectorXd& p, const MultiIndex& alpha) const {
    const int ord = order(alpha);
    if (ord == 0) return value(p);
    int k = -1, l = -1;
    for (int a = 0; a < 3; ++a) {
        for (int rep = 0; rep < alpha[a]; ++rep) (k < 0 ? k : l) = a;
    }
    if (ord == 1) return gradient(p)[k];
    if (ord == 2) return hessian(p)(k, l);
    throw UnsupportedOrder("field derivative order above 2");
}

double finite_difference(const std::function<double(const Eigen::VectorXd&)>& fn,
                         const Eigen::VectorXd& p, const MultiIndex& alpha, double step) {
    const int ord = order(alpha);
    if (ord == 0) return fn(p);
    int k = -1, l = -1;
    for (int a = 0; a < 3; ++a) {
        for (int rep = 0; rep < alpha[a]; ++rep) (k < 0 ? k : l) = a;
    }
    Eigen::VectorXd q = p;
    if (ord == 1) {
        q[k] = p[k] + step;
        const double fp = fn(q);
        q[k] = p[k] - step;
        return (fp - fn(q)) / (2.0 * step);
    }
    if (k == l) {
        q[k] = p[k] + step;
        const double fp = fn(q);
        q[k] = p[k] - step;
        return (fp - 2.0 * fn(p) + fn(q)) / (step * step);
    }
    double sum = 0.0;
    for (int sk : {1, -1}) {
        for (int sl : {1, -1}) {
            q = p;
            q[k] += sk * step;
            q[l] += sl * step;
            sum += sk * sl * fn(q);
        }
    }
    return sum / (4.0 * step * step);
}

namespace {

// 4th-order central first derivative along one axis.
double fd4_first(const std::function<double(const Eigen::VectorXd&)>& fn,
                 const Eigen::VectorXd& p, int axis, double h) {
    Eigen::VectorXd q = p;
    auto at = [&](double off) {
        q[axis] = p[axis] + off;
        return fn(q);
    };
    return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
}

double fd4(const std::function<double(const Eigen::VectorXd&)>& fn, const Eigen::VectorXd& p,
           const MultiIndex& alpha, double h) {
    const int ord = order(alpha);
    if (ord == 0) return fn(p);
    int k = -1, l = -1;
    for (int a = 0; a < 3; ++a) {
        for (int rep = 0; rep < alpha[a]; ++rep) (k < 0 ? k : l) = a;
    }
    if (ord == 1) return fd4_first(fn, p, k, h);
    if (k == l) {
        Eigen::VectorXd q = p;
        auto at = [&](double off) {
            q[k] = p[k] + off;
            return fn(q);
        };
        return (-at(2 * h) + 16 * at(h) - 30 * at(0) + 16 * at(-h) - at(-2 * h)) /
               (12 * h * h);
    }
    auto inner = [&](const Eigen::VectorXd& q) { return fd4_first(fn, q, l, h); };
    return fd4_first(inner, p, k, h);
}

double term_coeff(const OperatorTerm& term, const Eigen::VectorXd& p) {
    return term.coeff ? term.coeff(p) : term.constant;
}

}  // namespace

LinearOperatorSpec LinearOperatorSpec::identity() {
    LinearOperatorSpec op;
    op.add({0, 0, 0}, 1.0);
    return op;
}

LinearOperatorSpec LinearOperatorSpec::laplacian(int dim) {
    LinearOperatorSpec op;
    for (int a = 0; a < dim; ++a) {
        MultiIndex alpha{0, 0, 0};
        alpha[a] = 2;
        op.add(alpha, 1.0);
    }
    return op;
}

LinearOperatorSpec& LinearOperatorSpec::add(MultiIndex alpha, double constant) {
    terms.push_back({alpha, nullptr, constant});
    return *this;
}

LinearOperatorSpec& LinearOperatorSpec::add(MultiIndex alpha, CoeffFn coeff) {
    terms.push_back({alpha, std::move(coeff), 1.0});
    return *this;
}

double LinearOperatorSpec::apply(const ScalarField& u, const Eigen::VectorXd& p) const {
    double sum = 0.0;
    for (const auto& term : terms) sum += term_coeff(term, p) * u.derivative(p, term.alpha);
    return sum;
}

double LinearOperatorSpec::apply_fd(const std::function<double(const Eigen::VectorXd&)>& u,
                                    const Eigen::VectorXd& p, double step) const {
    double sum = 0.0;
    for (const auto& term : terms) sum += term_coeff(term, p) * fd4(u, p, term.alpha, step);
    return sum;
}

void LinearOperatorSpec::validate() const {
    if (terms.empty()) throw std::invalid_argument("operator needs at least one term");
    for (const auto& term : terms) {
        if (order(term.alpha) > 2) throw UnsupportedOrder("operator order above 2");
    }
}

const Eigen::MatrixXd& FeatureCache::matrix(const MultiIndex& alpha) const {
    auto it = cache_.find(alpha);
    if (it == cache_.end()) {
        ++evaluations_;
        it = cache_.emplace(alpha, layer_.eval_derivative(points_, alpha)).first;
    }
    return it->second;
}

Eigen::MatrixXd assemble_operator_matrix(const FeatureCache& cache,
                                         const LinearOperatorSpec& op) {
    op.validate();
    const Eigen::MatrixXd& pts = cache.points();
    if (pts.rows() == 0) throw std::invalid_argument("assemble: empty point set");
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(pts.rows(), cache.layer().neurons());
    for (const auto& term : op.terms) {
        const Eigen::MatrixXd& H = cache.matrix(term.alpha);
        if (term.coeff) {
            Eigen::VectorXd c(pts.rows());
            for (Eigen::Index i = 0; i < pts.rows(); ++i) c[i] = term.coeff(pts.row(i));
            A.noalias() += c.asDiagonal() * H;
        } else {
            A.noalias() += term.constant * H;
        }
    }
    return A;
}

Eigen::MatrixXd assemble_operator_matrix(const RandomFeatureLayer& layer,
                                         const LinearOperatorSpec& op,
                                         const Eigen::MatrixXd& points) {
    FeatureCache cache(layer, points);
    return assemble_operator_matrix(cache, op);
}

Eigen::VectorXd assemble_rhs(const std::function<double(const Eigen::VectorXd&)>& fn,
                             const Eigen::MatrixXd& points) {
    Eigen::VectorXd out(points.rows());
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        out[i] = fn(points.row(i));
        if (!std::isfinite(out[i])) {
            const Eigen::VectorXd p = points.row(i);
            throw NonFiniteData("right-hand side is not finite at a collocation point",
                                std::vector<double>(p.data(), p.data() + p.size()));
        }
    }
    return out;
}

NonlinearResidualSpec build_nonlinear_residual(const FeatureCache& cache,
                                               const NonlinearForm& form,
                                               const Eigen::VectorXd& f) {
    if (f.size() != cache.points().rows()) {
        throw DimensionMismatch("source vector length does not match collocation points");
    }
    NonlinearResidualSpec spec;
    spec.n_points = static_cast<int>(cache.points().rows());
    spec.residual = [&cache, form, f](const Eigen::VectorXd& beta) -> Eigen::VectorXd {
        return form.residual(cache, beta) - f;
    };
    spec.jacobian = [&cache, form](const Eigen::VectorXd& beta) -> Eigen::MatrixXd {
        return form.jacobian(cache, beta);
    };
    return spec;
}

NonlinearForm linear_form(LinearOperatorSpec op) {
    op.validate();
    auto shared = std::make_shared<LinearOperatorSpec>(std::move(op));
    NonlinearForm form;
    form.residual = [shared](const FeatureCache& cache, const Eigen::VectorXd& beta) {
        return Eigen::VectorXd(assemble_operator_matrix(cache, *shared) * beta);
    };
    form.jacobian = [shared](const FeatureCache& cache, const Eigen::VectorXd&) {
        return assemble_operator_matrix(cache, *shared);
    };
    return form;
}

void write_dense_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
    const std::int64_t rows = m.rows(), cols = m.cols();
    os.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
    os.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
    for (std::int64_t i = 0; i < rows; ++i) {
        for (std::int64_t j = 0; j < cols; ++j) {
            const double v = m(i, j);
            os.write(reinterpret_cast<const char*>(&v), sizeof(v));
        }
    }
}

Eigen::MatrixXd read_dense_matrix(std::istream& is) {
    std::int64_t rows = 0, cols = 0;
    is.read(reinterpret_cast<char*>(&rows), sizeof(rows));
    is.read(reinterpret_cast<char*>(&cols), sizeof(cols));
    if (!is || rows < 0 || cols < 0) throw std::runtime_error("bad dense matrix header");
    Eigen::MatrixXd m(rows, cols);
    for (std::int64_t i = 0; i < rows; ++i) {
        for (std::int64_t j = 0; j < cols; ++j) {
            double v;
            is.read(reinterpret_cast<char*>(&v), sizeof(v));
            if (!is) throw std::runtime_error("dense matrix truncated");
            m(i, j) = v;
        }
    }
    return m;
}

}  // namespace elmpde
