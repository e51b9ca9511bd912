#include "elmpde/problems.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "elmpde/errors.hpp"

namespace elmpde {

namespace {

constexpr double kPi = std::numbers::pi;

using Fn = std::function<double(const Eigen::VectorXd&)>;

Fn zero_source() {
    return [](const Eigen::VectorXd&) { return 0.0; };
}

/// Manufactured source f = D[u*] from the closed-form derivatives.
Fn manufactured(const LinearOperatorSpec& op, const ScalarField& u) {
    return [op, u](const Eigen::VectorXd& p) { return op.apply(u, p); };
}

// u = exp(-a ((x-xc)^2 + (y-yc)^2)) + lx x + ly y
ScalarField gaussian_field(double a, double xc, double yc, double lx, double ly) {
    ScalarField f;
    f.value = [=](const Eigen::VectorXd& p) {
        const double dx = p[0] - xc, dy = p[1] - yc;
        return std::exp(-a * (dx * dx + dy * dy)) + lx * p[0] + ly * p[1];
    };
    f.gradient = [=](const Eigen::VectorXd& p) {
        const double dx = p[0] - xc, dy = p[1] - yc;
        const double e = std::exp(-a * (dx * dx + dy * dy));
        return Eigen::VectorXd{{-2.0 * a * dx * e + lx, -2.0 * a * dy * e + ly}};
    };
    f.hessian = [=](const Eigen::VectorXd& p) {
        const double dx = p[0] - xc, dy = p[1] - yc;
        const double e = std::exp(-a * (dx * dx + dy * dy));
        Eigen::MatrixXd h(2, 2);
        h(0, 0) = (-2.0 * a + 4.0 * a * a * dx * dx) * e;
        h(1, 1) = (-2.0 * a + 4.0 * a * a * dy * dy) * e;
        h(0, 1) = h(1, 0) = 4.0 * a * a * dx * dy * e;
        return h;
    };
    return f;
}

// u = e^{-x} (x + y^3)
ScalarField poisson1_field() {
    ScalarField f;
    f.value = [](const Eigen::VectorXd& p) {
        return std::exp(-p[0]) * (p[0] + p[1] * p[1] * p[1]);
    };
    f.gradient = [](const Eigen::VectorXd& p) {
        const double e = std::exp(-p[0]);
        const double y3 = p[1] * p[1] * p[1];
        return Eigen::VectorXd{{e * (1.0 - p[0] - y3), 3.0 * p[1] * p[1] * e}};
    };
    f.hessian = [](const Eigen::VectorXd& p) {
        const double e = std::exp(-p[0]);
        const double y3 = p[1] * p[1] * p[1];
        Eigen::MatrixXd h(2, 2);
        h(0, 0) = e * (p[0] + y3 - 2.0);
        h(0, 1) = h(1, 0) = -3.0 * p[1] * p[1] * e;
        h(1, 1) = 6.0 * p[1] * e;
        return h;
    };
    return f;
}

// u = y^2 sin(pi x)
ScalarField poisson2_field() {
    ScalarField f;
    f.value = [](const Eigen::VectorXd& p) {
        return p[1] * p[1] * std::sin(kPi * p[0]);
    };
    f.gradient = [](const Eigen::VectorXd& p) {
        return Eigen::VectorXd{{kPi * p[1] * p[1] * std::cos(kPi * p[0]),
                                2.0 * p[1] * std::sin(kPi * p[0])}};
    };
    f.hessian = [](const Eigen::VectorXd& p) {
        Eigen::MatrixXd h(2, 2);
        h(0, 0) = -kPi * kPi * p[1] * p[1] * std::sin(kPi * p[0]);
        h(0, 1) = h(1, 0) = 2.0 * kPi * p[1] * std::cos(kPi * p[0]);
        h(1, 1) = 2.0 * std::sin(kPi * p[0]);
        return h;
    };
    return f;
}

// u = (1 - e^{-(1-x)/delta})(1 - e^{-(1-y)/delta}) cos(pi (x + y))
ScalarField boundary_layer_field(double delta) {
    struct Factor {
        double v, d1, d2;
    };
    auto factor = [delta](double s) {
        const double e = std::exp(-(1.0 - s) / delta);
        return Factor{1.0 - e, -e / delta, -e / (delta * delta)};
    };
    ScalarField f;
    f.value = [=](const Eigen::VectorXd& p) {
        return factor(p[0]).v * factor(p[1]).v * std::cos(kPi * (p[0] + p[1]));
    };
    f.gradient = [=](const Eigen::VectorXd& p) {
        const Factor a = factor(p[0]), b = factor(p[1]);
        const double c = std::cos(kPi * (p[0] + p[1]));
        const double cs = -kPi * std::sin(kPi * (p[0] + p[1]));
        return Eigen::VectorXd{{a.d1 * b.v * c + a.v * b.v * cs,
                                a.v * b.d1 * c + a.v * b.v * cs}};
    };
    f.hessian = [=](const Eigen::VectorXd& p) {
        const Factor a = factor(p[0]), b = factor(p[1]);
        const double c = std::cos(kPi * (p[0] + p[1]));
        const double cs = -kPi * std::sin(kPi * (p[0] + p[1]));
        const double c2 = -kPi * kPi * c;
        Eigen::MatrixXd h(2, 2);
        h(0, 0) = a.d2 * b.v * c + 2.0 * a.d1 * b.v * cs + a.v * b.v * c2;
        h(1, 1) = a.v * b.d2 * c + 2.0 * a.v * b.d1 * cs + a.v * b.v * c2;
        h(0, 1) = h(1, 0) =
            a.d1 * b.d1 * c + a.d1 * b.v * cs + a.v * b.d1 * cs + a.v * b.v * c2;
        return h;
    };
    return f;
}

// u = exp(-(x^2 + k y^2)) / (4 pi sqrt(tau)), k = tau * r
ScalarField anisotropic_field(double tau, double r) {
    const double k = tau * r;
    const double c = 1.0 / (4.0 * kPi * std::sqrt(tau));
    ScalarField f;
    f.value = [=](const Eigen::VectorXd& p) {
        return c * std::exp(-(p[0] * p[0] + k * p[1] * p[1]));
    };
    f.gradient = [=](const Eigen::VectorXd& p) {
        const double u = c * std::exp(-(p[0] * p[0] + k * p[1] * p[1]));
        return Eigen::VectorXd{{-2.0 * p[0] * u, -2.0 * k * p[1] * u}};
    };
    f.hessian = [=](const Eigen::VectorXd& p) {
        const double u = c * std::exp(-(p[0] * p[0] + k * p[1] * p[1]));
        Eigen::MatrixXd h(2, 2);
        h(0, 0) = (4.0 * p[0] * p[0] - 2.0) * u;
        h(1, 1) = (4.0 * k * k * p[1] * p[1] - 2.0 * k) * u;
        h(0, 1) = h(1, 0) = 4.0 * k * p[0] * p[1] * u;
        return h;
    };
    return f;
}

// u = r^{2/3} sin(2 theta / 3), theta measured from the +y axis turning
// counter-clockwise into the L-shaped region, so u vanishes on both edges
// of the reentrant corner. Harmonic away from the origin.
ScalarField corner_field() {
    constexpr double a = 2.0 / 3.0;
    auto polar = [](const Eigen::VectorXd& p, double& r, double& theta) {
        r = std::hypot(p[0], p[1]);
        theta = std::atan2(p[1], p[0]) - kPi / 2.0;
        if (theta < 0.0) theta += 2.0 * kPi;
    };
    ScalarField f;
    f.value = [=](const Eigen::VectorXd& p) {
        double r, theta;
        polar(p, r, theta);
        return std::pow(r, a) * std::sin(a * theta);
    };
    // derivatives of Im((-iz)^a): with zeta = -iz, f'(z) = -i a zeta^{a-1},
    // f''(z) = -a(a-1) zeta^{a-2}; u_x = Im f', u_y = Re f',
    // u_xx = Im f'', u_xy = Re f'', u_yy = -Im f''
    auto zeta_pow = [=](const Eigen::VectorXd& p, double exponent) {
        double r, theta;
        polar(p, r, theta);
        return std::polar(std::pow(r, exponent), exponent * theta);
    };
    f.gradient = [=](const Eigen::VectorXd& p) {
        const std::complex<double> d1 = std::complex<double>(0.0, -1.0) * a * zeta_pow(p, a - 1.0);
        return Eigen::VectorXd{{d1.imag(), d1.real()}};
    };
    f.hessian = [=](const Eigen::VectorXd& p) {
        const std::complex<double> d2 = -a * (a - 1.0) * zeta_pow(p, a - 2.0);
        Eigen::MatrixXd h(2, 2);
        h(0, 0) = d2.imag();
        h(0, 1) = h(1, 0) = d2.real();
        h(1, 1) = -d2.imag();
        return h;
    };
    return f;
}

// u = (1/2) + (1/2) tanh(5t/8 - x/4), coordinates (x, t)
ScalarField burgers_fisher_field() {
    const Eigen::Vector2d rate(-0.25, 0.625);
    ScalarField f;
    f.value = [=](const Eigen::VectorXd& p) {
        return 0.5 + 0.5 * std::tanh(rate.dot(p));
    };
    f.gradient = [=](const Eigen::VectorXd& p) {
        const double t = std::tanh(rate.dot(p));
        return Eigen::VectorXd(0.5 * (1.0 - t * t) * rate);
    };
    f.hessian = [=](const Eigen::VectorXd& p) {
        const double t = std::tanh(rate.dot(p));
        return Eigen::MatrixXd(-t * (1.0 - t * t) * rate * rate.transpose());
    };
    return f;
}

// u = (1/(1-t)) ((x^2 + y^2 + 1)/4 + xy + x + y), coordinates (x, y, t)
ScalarField nonlinear_diffusion_field() {
    auto q = [](double x, double y) {
        return (x * x + y * y + 1.0) / 4.0 + x * y + x + y;
    };
    ScalarField f;
    f.value = [=](const Eigen::VectorXd& p) { return q(p[0], p[1]) / (1.0 - p[2]); };
    f.gradient = [=](const Eigen::VectorXd& p) {
        const double s = 1.0 / (1.0 - p[2]);
        return Eigen::VectorXd{{s * (p[0] / 2.0 + p[1] + 1.0), s * (p[1] / 2.0 + p[0] + 1.0),
                                s * s * q(p[0], p[1])}};
    };
    f.hessian = [=](const Eigen::VectorXd& p) {
        const double s = 1.0 / (1.0 - p[2]);
        Eigen::MatrixXd h(3, 3);
        h(0, 0) = h(1, 1) = 0.5 * s;
        h(0, 1) = h(1, 0) = s;
        h(0, 2) = h(2, 0) = s * s * (p[0] / 2.0 + p[1] + 1.0);
        h(1, 2) = h(2, 1) = s * s * (p[1] / 2.0 + p[0] + 1.0);
        h(2, 2) = 2.0 * s * s * s * q(p[0], p[1]);
        return h;
    };
    return f;
}

// u_t + u u_x = u_xx + u (1 - u), coordinates (x, t)
NonlinearForm burgers_fisher_form() {
    NonlinearForm form;
    form.residual = [](const FeatureCache& c, const Eigen::VectorXd& beta) -> Eigen::VectorXd {
        const Eigen::VectorXd u = c.matrix({0, 0, 0}) * beta;
        const Eigen::VectorXd u_x = c.matrix({1, 0, 0}) * beta;
        const Eigen::VectorXd u_t = c.matrix({0, 1, 0}) * beta;
        const Eigen::VectorXd u_xx = c.matrix({2, 0, 0}) * beta;
        return u_t + u.cwiseProduct(u_x) - u_xx -
               u.cwiseProduct(Eigen::VectorXd::Ones(u.size()) - u);
    };
    form.jacobian = [](const FeatureCache& c, const Eigen::VectorXd& beta) -> Eigen::MatrixXd {
        const Eigen::MatrixXd& H = c.matrix({0, 0, 0});
        const Eigen::MatrixXd& H_x = c.matrix({1, 0, 0});
        const Eigen::VectorXd u = H * beta;
        const Eigen::VectorXd u_x = H_x * beta;
        return c.matrix({0, 1, 0}) + u.asDiagonal() * H_x + u_x.asDiagonal() * H -
               c.matrix({2, 0, 0}) - H + 2.0 * (u.asDiagonal() * H);
    };
    return form;
}

// u_t = u (u_xx + u_yy), coordinates (x, y, t)
NonlinearForm nonlinear_diffusion_form() {
    NonlinearForm form;
    form.residual = [](const FeatureCache& c, const Eigen::VectorXd& beta) -> Eigen::VectorXd {
        const Eigen::VectorXd u = c.matrix({0, 0, 0}) * beta;
        const Eigen::VectorXd lap = (c.matrix({2, 0, 0}) + c.matrix({0, 2, 0})) * beta;
        return c.matrix({0, 0, 1}) * beta - u.cwiseProduct(lap);
    };
    form.jacobian = [](const FeatureCache& c, const Eigen::VectorXd& beta) -> Eigen::MatrixXd {
        const Eigen::MatrixXd lap_H = c.matrix({2, 0, 0}) + c.matrix({0, 2, 0});
        const Eigen::VectorXd u = c.matrix({0, 0, 0}) * beta;
        const Eigen::VectorXd lap = lap_H * beta;
        return c.matrix({0, 0, 1}) - lap.asDiagonal() * c.matrix({0, 0, 0}) -
               u.asDiagonal() * lap_H;
    };
    return form;
}

BenchmarkProblem make_linear(std::string id, Domain domain, LinearOperatorSpec op,
                             ScalarField exact, Fn source = nullptr) {
    BenchmarkProblem pb;
    pb.id = std::move(id);
    pb.domain = std::move(domain);
    pb.op = std::move(op);
    pb.boundary_op = LinearOperatorSpec::identity();
    pb.exact = std::move(exact);
    pb.source = source ? std::move(source) : manufactured(pb.op, pb.exact);
    pb.boundary_data = pb.exact.value;
    return pb;
}

std::vector<BenchmarkProblem> build_catalog() {
    std::vector<BenchmarkProblem> v;

    const Domain unit_square = Domain::box({{0.0, 1.0}, {0.0, 1.0}});
    const Domain square2 = Domain::box({{-1.0, 1.0}, {-1.0, 1.0}});
    const auto lap2 = LinearOperatorSpec::laplacian(2);

    v.push_back(make_linear("square-gauss", unit_square, lap2,
                            gaussian_field(10.0, 0.4, 0.4, 0.1, 0.2)));

    v.push_back(make_linear("lshape-p1", l_shape_domain(), lap2, poisson1_field()));
    v.push_back(make_linear("lshape-p2", l_shape_domain(), lap2, poisson2_field()));
    v.push_back(make_linear("star-p1", star_domain(), lap2, poisson1_field()));
    v.push_back(make_linear("star-p2", star_domain(), lap2, poisson2_field()));

    {
        BenchmarkProblem pb = make_linear("extrapolation-star", square2, lap2, poisson1_field());
        pb.constraint_curve = star_domain();
        v.push_back(std::move(pb));
        pb = make_linear("extrapolation-lshape", square2, lap2, poisson1_field());
        pb.constraint_curve = l_shape_domain();
        v.push_back(std::move(pb));
    }

    v.push_back(make_linear("peak-50", unit_square, lap2,
                            gaussian_field(50.0, 0.4, 0.4, 0.0, 0.0)));
    v.push_back(make_linear("peak-100", unit_square, lap2,
                            gaussian_field(100.0, 0.4, 0.4, 0.0, 0.0)));

    for (const double delta : {0.1, 0.01}) {
        LinearOperatorSpec op;
        op.add({2, 0, 0}, -delta).add({0, 2, 0}, -delta).add({1, 0, 0}, 2.0).add({0, 1, 0}, 1.0);
        v.push_back(make_linear(delta == 0.1 ? "blayer-0.1" : "blayer-0.01", square2,
                                std::move(op), boundary_layer_field(delta)));
    }

    for (const double r : {1e4, 1e5}) {
        LinearOperatorSpec op;
        op.add({2, 0, 0}, 1.0).add({0, 2, 0}, 1.0 / r);
        v.push_back(make_linear(r == 1e4 ? "aniso-1e4" : "aniso-1e5", square2, std::move(op),
                                anisotropic_field(1e-3, r)));
    }

    {
        // cut at -0.05 keeps the singular point outside the closed domain
        const double c = -0.05;
        const Domain excluded = Domain::polygon({{-1.0, -1.0},
                                                 {1.0, -1.0},
                                                 {1.0, c},
                                                 {c, c},
                                                 {c, 1.0},
                                                 {-1.0, 1.0}});
        v.push_back(make_linear("corner-excluded", excluded, lap2, corner_field(),
                                zero_source()));
        v.push_back(make_linear("corner-included", l_shape_domain(), lap2, corner_field(),
                                zero_source()));
    }

    {
        BenchmarkProblem pb;
        pb.id = "burgers-fisher-1d";
        pb.domain = Domain::space_time(Domain::box({{0.0, 5.0}}), 0.0, 5.0);
        pb.nonlinear = burgers_fisher_form();
        pb.boundary_op = LinearOperatorSpec::identity();
        pb.exact = burgers_fisher_field();
        pb.source = zero_source();  // the traveling wave solves the homogeneous equation
        pb.boundary_data = pb.exact.value;
        v.push_back(std::move(pb));
    }
    {
        BenchmarkProblem pb;
        pb.id = "nonlinear-diffusion-2d";
        pb.domain = Domain::space_time(Domain::box({{0.0, 1.0}, {0.0, 1.0}}), 0.0, 0.25);
        pb.nonlinear = nonlinear_diffusion_form();
        pb.boundary_op = LinearOperatorSpec::identity();
        pb.exact = nonlinear_diffusion_field();
        pb.source = zero_source();
        pb.boundary_data = pb.exact.value;
        v.push_back(std::move(pb));
    }

    return v;
}

}  // namespace

Domain l_shape_domain() {
    return Domain::polygon(
        {{-1.0, -1.0}, {1.0, -1.0}, {1.0, 0.0}, {0.0, 0.0}, {0.0, 1.0}, {-1.0, 1.0}});
}

Domain star_domain() {
    // five-pointed star, outer radius 1, inner radius 0.4, first point up
    std::vector<Eigen::Vector2d> vertices;
    for (int i = 0; i < 10; ++i) {
        const double radius = i % 2 == 0 ? 1.0 : 0.4;
        const double angle = kPi / 2.0 + i * kPi / 5.0;
        vertices.emplace_back(radius * std::cos(angle), radius * std::sin(angle));
    }
    return Domain::polygon(std::move(vertices));
}

const std::vector<BenchmarkProblem>& catalog() {
    static const std::vector<BenchmarkProblem> problems = build_catalog();
    return problems;
}

const BenchmarkProblem& lookup(const std::string& id) {
    for (const auto& pb : catalog()) {
        if (pb.id == id) return pb;
    }
    throw NotFound("unknown problem id: " + id);
}

}  // namespace elmpde
