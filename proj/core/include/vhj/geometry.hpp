#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "vhj/errors.hpp"

namespace vhj {

// Points live in at most two dimensions; 1D uses component 0.
using Point = std::array<double, 2>;

inline double norm2(const Point& p, int dim) {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += p[a] * p[a];
    return std::sqrt(s);
}

inline double dist2(const Point& p, const Point& q, int dim) {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += (p[a] - q[a]) * (p[a] - q[a]);
    return std::sqrt(s);
}

enum class ShapeKind { Interval, Box, Ball };

// Simply connected base shape: interval (1D), axis-aligned box or ball (2D).
struct Shape {
    ShapeKind kind = ShapeKind::Interval;
    int dim = 1;
    Point lo{0.0, 0.0};      // interval/box
    Point hi{0.0, 0.0};
    Point center{0.0, 0.0};  // ball
    double radius = 0.0;

    static Shape interval(double a, double b);
    static Shape box(Point lo, Point hi);
    static Shape ball(Point center, double radius, int dim = 2);

    bool contains(const Point& x, double tol = 0.0) const;   // closure test when tol >= 0
    double boundary_distance(const Point& x) const;          // signed: >0 inside
    double inradius() const;
    double diameter() const;
    void bounding_box(Point& lo_out, Point& hi_out) const;
    std::string describe() const;
};

enum class DomainKind { Interval, Box, Ball, Annulus };

// Computational domain U, optionally with an excluded target ball (annulus
// kind, used by the metric problem). The boundary of U is always the outer
// shape's boundary; the target ball is a constraint set, not part of the
// boundary.
class Domain {
  public:
    static Domain interval(double a, double b);
    static Domain box(Point lo, Point hi);
    static Domain ball(Point center, double radius, int dim = 2);
    static Domain annulus(Shape outer, Point target_center, double target_radius);

    DomainKind kind() const { return kind_; }
    int dimension() const { return outer_.dim; }
    const Shape& outer() const { return outer_; }
    bool has_target() const { return target_.has_value(); }
    const Shape& target() const;

    // Closure membership in U (target ball not removed here).
    bool contains(const Point& x, double tol = 0.0) const { return outer_.contains(x, tol); }
    bool in_target(const Point& x) const;  // closed target ball, tie included

    // Exact Euclidean distance to the boundary of U (outer shape only).
    double boundary_distance(const Point& x) const { return outer_.boundary_distance(x); }

    double inradius() const { return outer_.inradius(); }
    double diameter() const { return outer_.diameter(); }
    void bounding_box(Point& lo, Point& hi) const { outer_.bounding_box(lo, hi); }
    std::string describe() const;

  private:
    Domain() = default;
    DomainKind kind_ = DomainKind::Interval;
    Shape outer_;
    std::optional<Shape> target_;
};

}  // namespace vhj
