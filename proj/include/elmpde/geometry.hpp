#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace elmpde {

/// Computational domains: tensor-product boxes, simple polygons and
/// space-time cylinders (time flattened into the last coordinate).
enum class DomainKind { box, polygon, space_time_box };

class Domain {
public:
    Domain() = default;  // empty placeholder, filled by the factories
    static Domain box(std::vector<std::array<double, 2>> bounds);
    static Domain polygon(std::vector<Eigen::Vector2d> vertices);
    // The boundary of a space-time box is the lateral surface plus the
    // initial-time face; the final-time face carries no data.
    static Domain space_time(Domain spatial, double t0, double tf);

    DomainKind kind() const { return kind_; }
    int dim() const;

    const std::vector<std::array<double, 2>>& bounds() const { return bounds_; }
    const std::vector<Eigen::Vector2d>& vertices() const { return vertices_; }
    const Domain& spatial() const { return *spatial_; }
    double t0() const { return t0_; }
    double tf() const { return tf_; }

    /// Axis-aligned bounding box, one [lo, hi] pair per coordinate.
    std::vector<std::array<double, 2>> bounding_box() const;

    double volume() const;
    /// Measure of the constrained boundary (excludes the final-time face).
    double boundary_measure() const;
    /// Characteristic length, volume^(1/dim).
    double characteristic_length() const;

    /// Distance from a point to the constrained boundary.
    double boundary_distance(const Eigen::VectorXd& p) const;

private:
    DomainKind kind_{};
    std::vector<std::array<double, 2>> bounds_;
    std::vector<Eigen::Vector2d> vertices_;
    std::shared_ptr<const Domain> spatial_;
    double t0_ = 0.0, tf_ = 0.0;
};

/// True iff the point is strictly inside the domain; points on the
/// boundary return false. Polygon membership uses even-odd ray casting.
bool contains(const Domain& domain, const Eigen::VectorXd& point);

struct PointSet {
    Eigen::MatrixXd interior;  // N_I x d
    Eigen::MatrixXd boundary;  // N_B x d
    std::uint64_t seed = 0;
};

/// n i.i.d. points uniform on the domain, by rejection from the bounding
/// box. Deterministic for a fixed generator state.
Eigen::MatrixXd sample_interior(const Domain& domain, int n, std::mt19937_64& rng);

/// n points uniform w.r.t. arc length (2D) or surface measure on the
/// constrained boundary.
Eigen::MatrixXd sample_boundary(const Domain& domain, int n, std::mt19937_64& rng);

PointSet sample_point_set(const Domain& domain, int n_interior, int n_boundary,
                          std::uint64_t seed);

enum class PointRule { fixed, linear, sqrt_rule };

struct PointAllocation {
    int n_interior = 0;
    int n_boundary = 0;
    bool clamped = false;  // no integer solution in range, nearest feasible used
};

/// Split a point budget between interior and boundary. The sqrt rule
/// solves n_boundary = P * sqrt(n_interior) / l with P the boundary
/// measure and l the characteristic length.
PointAllocation allocate_counts(int total_n, PointRule rule, const Domain& domain,
                                int fixed_boundary = 0);

/// CSV with header "x0,x1[,x2],tag", tag in {interior, boundary}.
std::string point_set_csv(const PointSet& points);

}  // namespace elmpde
