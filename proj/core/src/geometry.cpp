#include "vhj/geometry.hpp"

#include <algorithm>
#include <sstream>

namespace vhj {

Shape Shape::interval(double a, double b) {
    if (!(b > a)) throw GeometryError("interval requires a < b");
    Shape s;
    s.kind = ShapeKind::Interval;
    s.dim = 1;
    s.lo = {a, 0.0};
    s.hi = {b, 0.0};
    return s;
}

Shape Shape::box(Point lo, Point hi) {
    for (int a = 0; a < 2; ++a)
        if (!(hi[a] > lo[a])) throw GeometryError("box requires positive extent on every axis");
    Shape s;
    s.kind = ShapeKind::Box;
    s.dim = 2;
    s.lo = lo;
    s.hi = hi;
    return s;
}

Shape Shape::ball(Point center, double radius, int dim) {
    if (!(radius > 0.0)) throw GeometryError("ball requires positive radius");
    if (dim != 1 && dim != 2) throw GeometryError("dimension must be 1 or 2");
    Shape s;
    s.kind = ShapeKind::Ball;
    s.dim = dim;
    s.center = center;
    s.radius = radius;
    return s;
}

bool Shape::contains(const Point& x, double tol) const {
    switch (kind) {
        case ShapeKind::Interval:
            return x[0] >= lo[0] - tol && x[0] <= hi[0] + tol;
        case ShapeKind::Box:
            for (int a = 0; a < 2; ++a)
                if (x[a] < lo[a] - tol || x[a] > hi[a] + tol) return false;
            return true;
        case ShapeKind::Ball:
            return dist2(x, center, dim) <= radius + tol;
    }
    return false;
}

double Shape::boundary_distance(const Point& x) const {
    switch (kind) {
        case ShapeKind::Interval:
            return std::min(x[0] - lo[0], hi[0] - x[0]);
        case ShapeKind::Box: {
            double d = hi[0] - x[0];
            for (int a = 0; a < 2; ++a) {
                d = std::min(d, x[a] - lo[a]);
                d = std::min(d, hi[a] - x[a]);
            }
            return d;
        }
        case ShapeKind::Ball:
            return radius - dist2(x, center, dim);
    }
    return 0.0;
}

double Shape::inradius() const {
    switch (kind) {
        case ShapeKind::Interval:
            return 0.5 * (hi[0] - lo[0]);
        case ShapeKind::Box:
            return 0.5 * std::min(hi[0] - lo[0], hi[1] - lo[1]);
        case ShapeKind::Ball:
            return radius;
    }
    return 0.0;
}

double Shape::diameter() const {
    switch (kind) {
        case ShapeKind::Interval:
            return hi[0] - lo[0];
        case ShapeKind::Box: {
            double dx = hi[0] - lo[0], dy = hi[1] - lo[1];
            return std::sqrt(dx * dx + dy * dy);
        }
        case ShapeKind::Ball:
            return 2.0 * radius;
    }
    return 0.0;
}

void Shape::bounding_box(Point& lo_out, Point& hi_out) const {
    if (kind == ShapeKind::Ball) {
        for (int a = 0; a < dim; ++a) {
            lo_out[a] = center[a] - radius;
            hi_out[a] = center[a] + radius;
        }
        if (dim == 1) lo_out[1] = hi_out[1] = 0.0;
    } else {
        lo_out = lo;
        hi_out = hi;
    }
}

std::string Shape::describe() const {
    std::ostringstream os;
    switch (kind) {
        case ShapeKind::Interval:
            os << "interval(" << lo[0] << "," << hi[0] << ")";
            break;
        case ShapeKind::Box:
            os << "box([" << lo[0] << "," << lo[1] << "],[" << hi[0] << "," << hi[1] << "])";
            break;
        case ShapeKind::Ball:
            os << "ball(";
            if (dim == 2)
                os << "[" << center[0] << "," << center[1] << "]";
            else
                os << center[0];
            os << ",r=" << radius << ")";
            break;
    }
    return os.str();
}

Domain Domain::interval(double a, double b) {
    Domain d;
    d.kind_ = DomainKind::Interval;
    d.outer_ = Shape::interval(a, b);
    return d;
}

Domain Domain::box(Point lo, Point hi) {
    Domain d;
    d.kind_ = DomainKind::Box;
    d.outer_ = Shape::box(lo, hi);
    return d;
}

Domain Domain::ball(Point center, double radius, int dim) {
    Domain d;
    d.kind_ = DomainKind::Ball;
    d.outer_ = Shape::ball(center, radius, dim);
    return d;
}

Domain Domain::annulus(Shape outer, Point target_center, double target_radius) {
    if (!(target_radius > 0.0)) throw GeometryError("target ball requires positive radius");
    // Closure of the target ball must sit strictly inside the outer region.
    double margin = outer.boundary_distance(target_center) - target_radius;
    if (!(margin > 0.0))
        throw GeometryError("excluded ball is not strictly inside the outer domain (margin " +
                            std::to_string(margin) + ")");
    Domain d;
    d.kind_ = DomainKind::Annulus;
    d.outer_ = outer;
    d.target_ = Shape::ball(target_center, target_radius, outer.dim);
    return d;
}

const Shape& Domain::target() const {
    if (!target_) throw GeometryError("domain has no target ball");
    return *target_;
}

bool Domain::in_target(const Point& x) const {
    if (!target_) return false;
    return dist2(x, target_->center, outer_.dim) <= target_->radius + 1e-12 * target_->radius;
}

std::string Domain::describe() const {
    if (kind_ == DomainKind::Annulus)
        return outer_.describe() + " \\ " + target_->describe();
    return outer_.describe();
}

}  // namespace vhj
