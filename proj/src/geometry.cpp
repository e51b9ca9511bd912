#include "elmpde/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "elmpde/errors.hpp"

namespace elmpde {

namespace {

void check_dim(const Domain& domain, const Eigen::VectorXd& p) {
    if (p.size() != domain.dim()) {
        throw DimensionMismatch("point dimension " + std::to_string(p.size()) +
                                " does not match domain dimension " +
                                std::to_string(domain.dim()));
    }
}

double polygon_signed_area(const std::vector<Eigen::Vector2d>& v) {
    double a = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& p = v[i];
        const auto& q = v[(i + 1) % v.size()];
        a += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * a;
}

double segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                        const Eigen::Vector2d& b) {
    const Eigen::Vector2d ab = b - a;
    const double len2 = ab.squaredNorm();
    double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

// Even-odd crossing test with a ray in +x direction.
bool polygon_ray_cast(const std::vector<Eigen::Vector2d>& v, const Eigen::Vector2d& p) {
    bool inside = false;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        const auto& a = v[i];
        const auto& b = v[j];
        const bool crosses = (a.y() > p.y()) != (b.y() > p.y());
        if (crosses) {
            const double x_at = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
            if (p.x() < x_at) inside = !inside;
        }
    }
    return inside;
}

double closure_distance(const Domain& d, const Eigen::VectorXd& p) {
    return contains(d, p) ? 0.0 : d.boundary_distance(p);
}

}  // namespace

Domain Domain::box(std::vector<std::array<double, 2>> bounds) {
    if (bounds.empty()) throw DimensionMismatch("box needs at least one axis");
    for (const auto& [lo, hi] : bounds) {
        if (!(lo < hi)) throw std::invalid_argument("box bounds must satisfy lo < hi");
    }
    Domain d;
    d.kind_ = DomainKind::box;
    d.bounds_ = std::move(bounds);
    return d;
}

Domain Domain::polygon(std::vector<Eigen::Vector2d> vertices) {
    if (vertices.size() < 3) throw std::invalid_argument("polygon needs >= 3 vertices");
    if (std::abs(polygon_signed_area(vertices)) == 0.0) {
        throw std::invalid_argument("polygon has zero signed area");
    }
    Domain d;
    d.kind_ = DomainKind::polygon;
    d.vertices_ = std::move(vertices);
    return d;
}

Domain Domain::space_time(Domain spatial, double t0, double tf) {
    if (!(t0 < tf)) throw std::invalid_argument("time interval must satisfy t0 < tf");
    Domain d;
    d.kind_ = DomainKind::space_time_box;
    d.spatial_ = std::make_shared<const Domain>(std::move(spatial));
    d.t0_ = t0;
    d.tf_ = tf;
    return d;
}

int Domain::dim() const {
    switch (kind_) {
        case DomainKind::box: return static_cast<int>(bounds_.size());
        case DomainKind::polygon: return 2;
        case DomainKind::space_time_box: return spatial_->dim() + 1;
    }
    return 0;
}

std::vector<std::array<double, 2>> Domain::bounding_box() const {
    switch (kind_) {
        case DomainKind::box: return bounds_;
        case DomainKind::polygon: {
            std::array<double, 2> bx{vertices_[0].x(), vertices_[0].x()};
            std::array<double, 2> by{vertices_[0].y(), vertices_[0].y()};
            for (const auto& v : vertices_) {
                bx[0] = std::min(bx[0], v.x());
                bx[1] = std::max(bx[1], v.x());
                by[0] = std::min(by[0], v.y());
                by[1] = std::max(by[1], v.y());
            }
            return {bx, by};
        }
        case DomainKind::space_time_box: {
            auto bb = spatial_->bounding_box();
            bb.push_back({t0_, tf_});
            return bb;
        }
    }
    return {};
}

double Domain::volume() const {
    switch (kind_) {
        case DomainKind::box: {
            double v = 1.0;
            for (const auto& [lo, hi] : bounds_) v *= hi - lo;
            return v;
        }
        case DomainKind::polygon: return std::abs(polygon_signed_area(vertices_));
        case DomainKind::space_time_box: return spatial_->volume() * (tf_ - t0_);
    }
    return 0.0;
}

double Domain::boundary_measure() const {
    switch (kind_) {
        case DomainKind::box: {
            const int d = dim();
            if (d == 1) return 2.0;  // two endpoints, counting measure
            double total = 0.0;
            for (int a = 0; a < d; ++a) {
                double face = 1.0;
                for (int b = 0; b < d; ++b) {
                    if (b != a) face *= bounds_[b][1] - bounds_[b][0];
                }
                total += 2.0 * face;
            }
            return total;
        }
        case DomainKind::polygon: {
            double p = 0.0;
            for (std::size_t i = 0; i < vertices_.size(); ++i) {
                p += (vertices_[(i + 1) % vertices_.size()] - vertices_[i]).norm();
            }
            return p;
        }
        case DomainKind::space_time_box:
            // lateral surface plus the initial-time face
            return spatial_->boundary_measure() * (tf_ - t0_) + spatial_->volume();
    }
    return 0.0;
}

double Domain::characteristic_length() const {
    return std::pow(volume(), 1.0 / dim());
}

double Domain::boundary_distance(const Eigen::VectorXd& p) const {
    check_dim(*this, p);
    switch (kind_) {
        case DomainKind::box: {
            const int d = dim();
            bool inside = true;
            double outside2 = 0.0;
            double slack = std::numeric_limits<double>::infinity();
            for (int a = 0; a < d; ++a) {
                const double lo = bounds_[a][0], hi = bounds_[a][1];
                if (p[a] < lo) {
                    inside = false;
                    outside2 += (lo - p[a]) * (lo - p[a]);
                } else if (p[a] > hi) {
                    inside = false;
                    outside2 += (p[a] - hi) * (p[a] - hi);
                } else {
                    slack = std::min(slack, std::min(p[a] - lo, hi - p[a]));
                }
            }
            return inside ? slack : std::sqrt(outside2);
        }
        case DomainKind::polygon: {
            const Eigen::Vector2d q(p[0], p[1]);
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < vertices_.size(); ++i) {
                best = std::min(best, segment_distance(q, vertices_[i],
                                                       vertices_[(i + 1) % vertices_.size()]));
            }
            return best;
        }
        case DomainKind::space_time_box: {
            const Eigen::VectorXd x = p.head(p.size() - 1);
            const double t = p[p.size() - 1];
            // lateral boundary
            double lateral;
            const double sd = spatial_->boundary_distance(x);
            if (t >= t0_ && t <= tf_) {
                lateral = sd;
            } else {
                const double dt = t < t0_ ? t0_ - t : t - tf_;
                lateral = std::hypot(sd, dt);
            }
            // initial-time face
            const double initial = std::hypot(closure_distance(*spatial_, x), t - t0_);
            return std::min(lateral, initial);
        }
    }
    return 0.0;
}

bool contains(const Domain& domain, const Eigen::VectorXd& point) {
    check_dim(domain, point);
    switch (domain.kind()) {
        case DomainKind::box: {
            for (int a = 0; a < domain.dim(); ++a) {
                if (!(point[a] > domain.bounds()[a][0] && point[a] < domain.bounds()[a][1])) {
                    return false;
                }
            }
            return true;
        }
        case DomainKind::polygon: {
            const Eigen::Vector2d q(point[0], point[1]);
            if (domain.boundary_distance(point) <= 1e-12) return false;
            return polygon_ray_cast(domain.vertices(), q);
        }
        case DomainKind::space_time_box: {
            const double t = point[point.size() - 1];
            if (!(t > domain.t0() && t < domain.tf())) return false;
            return contains(domain.spatial(), point.head(point.size() - 1));
        }
    }
    return false;
}

Eigen::MatrixXd sample_interior(const Domain& domain, int n, std::mt19937_64& rng) {
    if (n < 1) throw std::invalid_argument("sample_interior: n must be >= 1");
    const auto bb = domain.bounding_box();
    const int d = domain.dim();
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Eigen::MatrixXd out(n, d);
    Eigen::VectorXd candidate(d);
    long draws = 0, accepted = 0;
    int row = 0;
    while (row < n) {
        for (int a = 0; a < d; ++a) {
            candidate[a] = bb[a][0] + (bb[a][1] - bb[a][0]) * unit(rng);
        }
        ++draws;
        if (contains(domain, candidate)) {
            out.row(row++) = candidate;
            ++accepted;
        }
        if (draws >= 1000 && static_cast<double>(accepted) / draws < 1e-3) {
            throw DegenerateDomain("rejection sampling acceptance ratio below 1e-3");
        }
    }
    return out;
}

namespace {

Eigen::VectorXd sample_boundary_one(const Domain& domain, std::mt19937_64& rng) {
    const int d = domain.dim();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::VectorXd p(d);
    switch (domain.kind()) {
        case DomainKind::box: {
            if (d == 1) {
                p[0] = unit(rng) < 0.5 ? domain.bounds()[0][0] : domain.bounds()[0][1];
                return p;
            }
            // pick a face with probability proportional to its measure
            std::vector<double> weights(2 * d);
            double total = 0.0;
            for (int a = 0; a < d; ++a) {
                double face = 1.0;
                for (int b = 0; b < d; ++b) {
                    if (b != a) face *= domain.bounds()[b][1] - domain.bounds()[b][0];
                }
                weights[2 * a] = weights[2 * a + 1] = face;
                total += 2.0 * face;
            }
            double u = unit(rng) * total;
            int face_id = 0;
            for (; face_id < 2 * d - 1; ++face_id) {
                if (u < weights[face_id]) break;
                u -= weights[face_id];
            }
            const int axis = face_id / 2;
            p[axis] = domain.bounds()[axis][face_id % 2];
            for (int b = 0; b < d; ++b) {
                if (b != axis) {
                    p[b] = domain.bounds()[b][0] +
                           (domain.bounds()[b][1] - domain.bounds()[b][0]) * unit(rng);
                }
            }
            return p;
        }
        case DomainKind::polygon: {
            const auto& v = domain.vertices();
            const double perimeter = domain.boundary_measure();
            double s = unit(rng) * perimeter;
            for (std::size_t i = 0; i < v.size(); ++i) {
                const Eigen::Vector2d a = v[i];
                const Eigen::Vector2d b = v[(i + 1) % v.size()];
                const double len = (b - a).norm();
                if (s <= len || i + 1 == v.size()) {
                    const double t = std::min(s / len, 1.0);
                    p = a + t * (b - a);
                    return p;
                }
                s -= len;
            }
            return p;
        }
        case DomainKind::space_time_box: {
            const Domain& spatial = domain.spatial();
            const double lateral = spatial.boundary_measure() * (domain.tf() - domain.t0());
            const double initial = spatial.volume();
            if (unit(rng) * (lateral + initial) < lateral) {
                p.head(d - 1) = sample_boundary_one(spatial, rng);
                p[d - 1] = domain.t0() + (domain.tf() - domain.t0()) * unit(rng);
            } else {
                p.head(d - 1) = sample_interior(spatial, 1, rng).row(0);
                p[d - 1] = domain.t0();
            }
            return p;
        }
    }
    return p;
}

}  // namespace

Eigen::MatrixXd sample_boundary(const Domain& domain, int n, std::mt19937_64& rng) {
    if (n < 1) throw std::invalid_argument("sample_boundary: n must be >= 1");
    Eigen::MatrixXd out(n, domain.dim());
    for (int i = 0; i < n; ++i) out.row(i) = sample_boundary_one(domain, rng);
    return out;
}

PointSet sample_point_set(const Domain& domain, int n_interior, int n_boundary,
                          std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    PointSet ps;
    ps.seed = seed;
    ps.interior = sample_interior(domain, n_interior, rng);
    ps.boundary = sample_boundary(domain, n_boundary, rng);
    return ps;
}

PointAllocation allocate_counts(int total_n, PointRule rule, const Domain& domain,
                                int fixed_boundary) {
    if (total_n < 2) throw std::invalid_argument("allocate_counts: total_n must be >= 2");
    PointAllocation alloc;
    switch (rule) {
        case PointRule::fixed: {
            if (fixed_boundary < 1 || fixed_boundary >= total_n) {
                throw std::invalid_argument("allocate_counts: fixed boundary count out of range");
            }
            alloc.n_boundary = fixed_boundary;
            break;
        }
        case PointRule::linear:
            alloc.n_boundary = total_n / 2;
            break;
        case PointRule::sqrt_rule: {
            // n_b = c * sqrt(n - n_b) with c = boundary measure / characteristic length
            const double c = domain.boundary_measure() / domain.characteristic_length();
            const double nb = 0.5 * (-c * c + std::sqrt(c * c * c * c + 4.0 * c * c * total_n));
            const int rounded = static_cast<int>(std::lround(nb));
            alloc.n_boundary = std::clamp(rounded, 1, total_n - 1);
            alloc.clamped = alloc.n_boundary != rounded;
            break;
        }
    }
    alloc.n_interior = total_n - alloc.n_boundary;
    return alloc;
}

std::string point_set_csv(const PointSet& points) {
    const int d = static_cast<int>(points.interior.cols());
    std::ostringstream os;
    os.precision(17);
    for (int a = 0; a < d; ++a) os << "x" << a << ",";
    os << "tag\n";
    auto dump = [&](const Eigen::MatrixXd& m, const char* tag) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            for (int a = 0; a < d; ++a) os << m(i, a) << ",";
            os << tag << "\n";
        }
    };
    dump(points.interior, "interior");
    dump(points.boundary, "boundary");
    return os.str();
}

}  // namespace elmpde
