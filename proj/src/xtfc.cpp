#include "elmpde/xtfc.hpp"

#include <cmath>

#include "elmpde/errors.hpp"
#include "elmpde/solvers.hpp"

namespace elmpde {

namespace {

constexpr double kCornerTol = 1e-12;

void check_corners(const CoonsPatch& p) {
    const double scale = 1.0 + std::abs(p.c00) + std::abs(p.cf0) + std::abs(p.c0f) +
                         std::abs(p.cff);
    auto agree = [&](double a, double b) { return std::abs(a - b) <= kCornerTol * scale; };
    if (!agree(p.left.eval(p.rect.y0, 0), p.c00) || !agree(p.bottom.eval(p.rect.x0, 0), p.c00) ||
        !agree(p.right.eval(p.rect.y0, 0), p.cf0) || !agree(p.bottom.eval(p.rect.xf, 0), p.cf0) ||
        !agree(p.left.eval(p.rect.yf, 0), p.c0f) || !agree(p.top.eval(p.rect.x0, 0), p.c0f) ||
        !agree(p.right.eval(p.rect.yf, 0), p.cff) || !agree(p.top.eval(p.rect.xf, 0), p.cff)) {
        throw std::invalid_argument("Coons patch edge traces disagree at a corner");
    }
}

}  // namespace

Rect Rect::from_domain(const Domain& domain) {
    if (domain.kind() != DomainKind::box || domain.dim() != 2) {
        throw UnsupportedDomain("transfinite interpolation requires a 2D box domain");
    }
    const auto& b = domain.bounds();
    return Rect{b[0][0], b[0][1], b[1][0], b[1][1]};
}

CoonsPatch CoonsPatch::from_field(const Rect& rect, const ScalarField& g) {
    if (!g.has_derivatives()) {
        throw std::invalid_argument("Coons patch needs edge traces with derivatives");
    }
    auto trace = [g](double fx, double fy, bool vertical) {
        // vertical edges vary in y, horizontal ones in x
        return EdgeTrace{[g, fx, fy, vertical](double c, int ord) {
            Eigen::Vector2d p = vertical ? Eigen::Vector2d(fx, c) : Eigen::Vector2d(c, fy);
            const int axis = vertical ? 1 : 0;
            if (ord == 0) return g.value(p);
            if (ord == 1) return g.gradient(p)[axis];
            return g.hessian(p)(axis, axis);
        }};
    };
    CoonsPatch patch;
    patch.rect = rect;
    patch.left = trace(rect.x0, 0.0, true);
    patch.right = trace(rect.xf, 0.0, true);
    patch.bottom = trace(0.0, rect.y0, false);
    patch.top = trace(0.0, rect.yf, false);
    patch.c00 = g.value(Eigen::Vector2d(rect.x0, rect.y0));
    patch.cf0 = g.value(Eigen::Vector2d(rect.xf, rect.y0));
    patch.c0f = g.value(Eigen::Vector2d(rect.x0, rect.yf));
    patch.cff = g.value(Eigen::Vector2d(rect.xf, rect.yf));
    check_corners(patch);
    return patch;
}

CoonsPatch CoonsPatch::from_feature(const Rect& rect, const RandomFeatureLayer& layer,
                                    int j) {
    const double wx = layer.weights()(j, 0);
    const double wy = layer.weights()(j, 1);
    const double b = layer.biases()[j];
    // along an edge s(c) is affine, so tanh closed forms apply directly
    auto trace = [wx, wy, b](double fixed, bool vertical) {
        const double rate = vertical ? wy : wx;
        const double offset = vertical ? wx * fixed + b : wy * fixed + b;
        return EdgeTrace{[rate, offset](double c, int ord) {
            const double t = std::tanh(rate * c + offset);
            if (ord == 0) return t;
            if (ord == 1) return rate * (1.0 - t * t);
            return -2.0 * rate * rate * t * (1.0 - t * t);
        }};
    };
    CoonsPatch patch;
    patch.rect = rect;
    patch.left = trace(rect.x0, true);
    patch.right = trace(rect.xf, true);
    patch.bottom = trace(rect.y0, false);
    patch.top = trace(rect.yf, false);
    patch.c00 = std::tanh(wx * rect.x0 + wy * rect.y0 + b);
    patch.cf0 = std::tanh(wx * rect.xf + wy * rect.y0 + b);
    patch.c0f = std::tanh(wx * rect.x0 + wy * rect.yf + b);
    patch.cff = std::tanh(wx * rect.xf + wy * rect.yf + b);
    return patch;
}

double coons_eval(const CoonsPatch& patch, const Eigen::VectorXd& point,
                  const MultiIndex& alpha) {
    if (point.size() != 2) throw DimensionMismatch("Coons patch point must be 2D");
    if (order(alpha) > 2 || alpha[2] != 0) {
        throw UnsupportedOrder("Coons patch derivative order unsupported");
    }
    const Rect& r = patch.rect;
    const double x = point[0], y = point[1];
    const double w = r.xf - r.x0, h = r.yf - r.y0;
    const double slack = 1e-12 * std::max(w, h);
    if (x < r.x0 - slack || x > r.xf + slack || y < r.y0 - slack || y > r.yf + slack) {
        throw std::domain_error("point outside the Coons patch rectangle");
    }
    const double xi = (x - r.x0) / w, eta = (y - r.y0) / h;

    const int ox = alpha[0], oy = alpha[1];
    if (ox == 0 && oy == 0) {
        const double blend = patch.left.eval(y, 0) * (1.0 - xi) + patch.right.eval(y, 0) * xi +
                             patch.bottom.eval(x, 0) * (1.0 - eta) + patch.top.eval(x, 0) * eta;
        const double corner = patch.c00 * (1.0 - xi) * (1.0 - eta) + patch.cf0 * xi * (1.0 - eta) +
                              patch.c0f * (1.0 - xi) * eta + patch.cff * xi * eta;
        return blend - corner;
    }
    if (ox == 1 && oy == 0) {
        return (patch.right.eval(y, 0) - patch.left.eval(y, 0)) / w +
               patch.bottom.eval(x, 1) * (1.0 - eta) + patch.top.eval(x, 1) * eta -
               ((1.0 - eta) * (patch.cf0 - patch.c00) + eta * (patch.cff - patch.c0f)) / w;
    }
    if (ox == 0 && oy == 1) {
        return patch.left.eval(y, 1) * (1.0 - xi) + patch.right.eval(y, 1) * xi +
               (patch.top.eval(x, 0) - patch.bottom.eval(x, 0)) / h -
               ((1.0 - xi) * (patch.c0f - patch.c00) + xi * (patch.cff - patch.cf0)) / h;
    }
    if (ox == 2) {
        return patch.bottom.eval(x, 2) * (1.0 - eta) + patch.top.eval(x, 2) * eta;
    }
    if (oy == 2) {
        return patch.left.eval(y, 2) * (1.0 - xi) + patch.right.eval(y, 2) * xi;
    }
    // mixed xy
    return (patch.right.eval(y, 1) - patch.left.eval(y, 1)) / w +
           (patch.top.eval(x, 1) - patch.bottom.eval(x, 1)) / h -
           (patch.c00 - patch.cf0 - patch.c0f + patch.cff) / (w * h);
}

Eigen::MatrixXd xtfc_modified_feature_matrix(const RandomFeatureLayer& layer,
                                             const Rect& rect,
                                             const Eigen::MatrixXd& interior_points,
                                             const LinearOperatorSpec& op) {
    op.validate();
    FeatureCache cache(layer, interior_points);
    Eigen::MatrixXd A = assemble_operator_matrix(cache, op);

    // coefficient values reused across features
    const Eigen::Index n = interior_points.rows();
    std::vector<Eigen::VectorXd> coeffs;
    coeffs.reserve(op.terms.size());
    for (const auto& term : op.terms) {
        Eigen::VectorXd c(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            c[i] = term.coeff ? term.coeff(interior_points.row(i)) : term.constant;
        }
        coeffs.push_back(std::move(c));
    }

    for (int j = 0; j < layer.neurons(); ++j) {
        const CoonsPatch patch = CoonsPatch::from_feature(rect, layer, j);
        for (Eigen::Index i = 0; i < n; ++i) {
            double m = 0.0;
            for (std::size_t t = 0; t < op.terms.size(); ++t) {
                m += coeffs[t][i] * coons_eval(patch, interior_points.row(i), op.terms[t].alpha);
            }
            A(i, j) -= m;
        }
    }
    return A;
}

XtfcSolution xtfc_solve(const Domain& domain, const LinearOperatorSpec& op,
                        const std::function<double(const Eigen::VectorXd&)>& source,
                        const ScalarField& boundary_data, const RandomFeatureLayer& layer,
                        const Eigen::MatrixXd& interior_points, double rank_tol) {
    const Rect rect = Rect::from_domain(domain);
    const CoonsPatch g_patch = CoonsPatch::from_field(rect, boundary_data);

    const Eigen::MatrixXd A = xtfc_modified_feature_matrix(layer, rect, interior_points, op);
    Eigen::VectorXd f = assemble_rhs(source, interior_points);
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        double m = 0.0;
        for (const auto& term : op.terms) {
            const double c = term.coeff ? term.coeff(interior_points.row(i)) : term.constant;
            m += c * coons_eval(g_patch, interior_points.row(i), term.alpha);
        }
        f[i] -= m;
    }

    XtfcSolution sol;
    sol.beta = pinv_solve(A, f, rank_tol);
    sol.interior_residual_norm = (A * sol.beta - f).norm();

    // sum_j beta_j M[sigma_j] collapses to Coons blending of the layer
    // prediction itself, so the full surrogate needs no per-feature patches.
    const Eigen::VectorXd beta = sol.beta;
    sol.predict = [layer, beta, rect, g_patch](const Eigen::VectorXd& p) {
        const double x = p[0], y = p[1];
        const double xi = (x - rect.x0) / (rect.xf - rect.x0);
        const double eta = (y - rect.y0) / (rect.yf - rect.y0);
        auto u = [&](double px, double py) {
            Eigen::MatrixXd pt(1, 2);
            pt << px, py;
            return layer.predict(beta, pt)[0];
        };
        const double blended =
            u(rect.x0, y) * (1.0 - xi) + u(rect.xf, y) * xi + u(x, rect.y0) * (1.0 - eta) +
            u(x, rect.yf) * eta -
            (u(rect.x0, rect.y0) * (1.0 - xi) * (1.0 - eta) +
             u(rect.xf, rect.y0) * xi * (1.0 - eta) + u(rect.x0, rect.yf) * (1.0 - xi) * eta +
             u(rect.xf, rect.yf) * xi * eta);
        return u(x, y) - blended + coons_eval(g_patch, p);
    };
    return sol;
}

}  // namespace elmpde
