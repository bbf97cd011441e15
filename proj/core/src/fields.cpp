#include "vhj/fields.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vhj/errors.hpp"

namespace vhj {

namespace {

double parse_double(const std::map<std::string, std::string>& params, const std::string& key,
                    const std::string& context, bool required = true, double fallback = 0.0) {
    auto it = params.find(key);
    if (it == params.end()) {
        if (required) throw ConfigError(context + ": missing parameter '" + key + "'");
        return fallback;
    }
    try {
        size_t pos = 0;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (...) {
        throw ConfigError(context + ": parameter '" + key + "' is not a number: " + it->second);
    }
}

// Distance from a point to the farthest / nearest point of a box.
void box_dist_range(const Point& lo, const Point& hi, int dim, const Point& x0, double& dmin,
                    double& dmax) {
    double s_min = 0.0, s_max = 0.0;
    for (int a = 0; a < dim; ++a) {
        double below = lo[a] - x0[a], above = x0[a] - hi[a];
        double out = std::max({below, above, 0.0});
        s_min += out * out;
        double far_ = std::max(std::abs(x0[a] - lo[a]), std::abs(x0[a] - hi[a]));
        s_max += far_ * far_;
    }
    dmin = std::sqrt(s_min);
    dmax = std::sqrt(s_max);
}

}  // namespace

ScalarField ScalarField::constant(double c) {
    ScalarField f;
    f.form_ = FieldForm::Constant;
    f.c0_ = c;
    return f;
}

ScalarField ScalarField::affine(double c0, double cx, double cy) {
    ScalarField f;
    f.form_ = FieldForm::Affine;
    f.c0_ = c0;
    f.c1_ = cx;
    f.c2_ = cy;
    return f;
}

ScalarField ScalarField::quadratic(double c0, double q, Point x0) {
    ScalarField f;
    f.form_ = FieldForm::Quadratic;
    f.c0_ = c0;
    f.c1_ = q;
    f.x0_ = x0;
    return f;
}

ScalarField ScalarField::trig(double c0, double amp, double freq, int axis, double phase) {
    ScalarField f;
    f.form_ = FieldForm::Trig;
    f.c0_ = c0;
    f.c1_ = amp;
    f.c2_ = freq;
    f.c3_ = phase;
    f.axis_ = axis;
    return f;
}

ScalarField ScalarField::ramp_abs(double cap, double slope, Point x0) {
    ScalarField f;
    f.form_ = FieldForm::RampAbs;
    f.c0_ = cap;
    f.c1_ = slope;
    f.x0_ = x0;
    return f;
}

ScalarField ScalarField::ramp_axis(int axis, double t0, double t1, double v0, double v1) {
    if (!(t1 > t0)) throw ConfigError("ramp_axis requires t1 > t0");
    ScalarField f;
    f.form_ = FieldForm::RampAxis;
    f.axis_ = axis;
    f.c0_ = t0;
    f.c1_ = t1;
    f.c2_ = v0;
    f.c3_ = v1;
    return f;
}

ScalarField ScalarField::log_affine(double c0, double c1, double shift, double k, int axis) {
    ScalarField f;
    f.form_ = FieldForm::LogAffine;
    f.c0_ = c0;
    f.c1_ = c1;
    f.c2_ = shift;
    f.c3_ = k;
    f.axis_ = axis;
    return f;
}

ScalarField ScalarField::clipped(double floor) const {
    ScalarField f = *this;
    f.clip_ = true;
    f.clip_floor_ = floor;
    return f;
}

double ScalarField::operator()(const Point& x, int dim) const {
    double v = 0.0;
    switch (form_) {
        case FieldForm::Constant:
            v = c0_;
            break;
        case FieldForm::Affine:
            v = c0_ + c1_ * x[0] + (dim == 2 ? c2_ * x[1] : 0.0);
            break;
        case FieldForm::Quadratic: {
            double r = dist2(x, x0_, dim);
            v = c0_ + c1_ * r * r;
            break;
        }
        case FieldForm::Trig:
            v = c0_ + c1_ * std::cos(c2_ * x[axis_] + c3_);
            break;
        case FieldForm::RampAbs:
            v = std::min(c0_, c1_ * dist2(x, x0_, dim));
            break;
        case FieldForm::RampAxis: {
            double t = (x[axis_] - c0_) / (c1_ - c0_);
            t = std::clamp(t, 0.0, 1.0);
            v = c2_ + t * (c3_ - c2_);
            break;
        }
        case FieldForm::LogAffine: {
            double arg = c2_ + c3_ * x[axis_];
            if (!(arg > 0.0))
                throw Error("log_affine argument nonpositive at x=" + std::to_string(x[axis_]));
            v = c0_ + c1_ * std::log(arg);
            break;
        }
    }
    return clip_ ? std::max(v, clip_floor_) : v;
}

FieldBounds ScalarField::bounds_on_box(const Point& lo, const Point& hi, int dim) const {
    FieldBounds b;
    switch (form_) {
        case FieldForm::Constant:
            b = {c0_, c0_, 0.0};
            break;
        case FieldForm::Affine: {
            double span = 0.0;
            double mid = c0_ + 0.5 * (c1_ * (lo[0] + hi[0]) + (dim == 2 ? c2_ * (lo[1] + hi[1]) : 0.0));
            span = 0.5 * std::abs(c1_) * (hi[0] - lo[0]);
            if (dim == 2) span += 0.5 * std::abs(c2_) * (hi[1] - lo[1]);
            b.inf = mid - span;
            b.sup = mid + span;
            b.lip = std::sqrt(c1_ * c1_ + (dim == 2 ? c2_ * c2_ : 0.0));
            break;
        }
        case FieldForm::Quadratic: {
            double dmin, dmax;
            box_dist_range(lo, hi, dim, x0_, dmin, dmax);
            double v1 = c0_ + c1_ * dmin * dmin, v2 = c0_ + c1_ * dmax * dmax;
            b.inf = std::min(v1, v2);
            b.sup = std::max(v1, v2);
            b.lip = 2.0 * std::abs(c1_) * dmax;
            break;
        }
        case FieldForm::Trig:
            // Conservative: extrema may lie outside the box.
            b.inf = c0_ - std::abs(c1_);
            b.sup = c0_ + std::abs(c1_);
            b.lip = std::abs(c1_ * c2_);
            break;
        case FieldForm::RampAbs: {
            double dmin, dmax;
            box_dist_range(lo, hi, dim, x0_, dmin, dmax);
            b.inf = std::min(c0_, c1_ * dmin);
            b.sup = std::min(c0_, c1_ * dmax);
            if (b.sup < b.inf) std::swap(b.inf, b.sup);
            b.lip = std::abs(c1_);
            break;
        }
        case FieldForm::RampAxis: {
            double ta = (lo[axis_] - c0_) / (c1_ - c0_);
            double tb = (hi[axis_] - c0_) / (c1_ - c0_);
            ta = std::clamp(ta, 0.0, 1.0);
            tb = std::clamp(tb, 0.0, 1.0);
            double v1 = c2_ + ta * (c3_ - c2_), v2 = c2_ + tb * (c3_ - c2_);
            b.inf = std::min(v1, v2);
            b.sup = std::max(v1, v2);
            b.lip = std::abs((c3_ - c2_) / (c1_ - c0_));
            break;
        }
        case FieldForm::LogAffine: {
            double a1 = c2_ + c3_ * lo[axis_];
            double a2 = c2_ + c3_ * hi[axis_];
            if (!(a1 > 0.0) || !(a2 > 0.0))
                throw ConfigError("log_affine: shift + k*x must stay positive on the domain");
            double v1 = c0_ + c1_ * std::log(a1), v2 = c0_ + c1_ * std::log(a2);
            b.inf = std::min(v1, v2);
            b.sup = std::max(v1, v2);
            b.lip = std::abs(c1_ * c3_) / std::min(a1, a2);
            break;
        }
    }
    if (clip_) {
        b.inf = std::max(b.inf, clip_floor_);
        b.sup = std::max(b.sup, clip_floor_);
        // clipping is a 1-Lipschitz composition
    }
    return b;
}

bool ScalarField::is_zero() const {
    return form_ == FieldForm::Constant && c0_ == 0.0 && (!clip_ || clip_floor_ <= 0.0);
}

std::string ScalarField::describe() const {
    std::ostringstream os;
    switch (form_) {
        case FieldForm::Constant: os << "constant(" << c0_ << ")"; break;
        case FieldForm::Affine: os << "affine(" << c0_ << "," << c1_ << "," << c2_ << ")"; break;
        case FieldForm::Quadratic:
            os << "quadratic(" << c0_ << "+" << c1_ << "*|x-x0|^2)";
            break;
        case FieldForm::Trig:
            os << "trig(" << c0_ << "+" << c1_ << "*cos(" << c2_ << "*x" << axis_ << "+" << c3_
               << "))";
            break;
        case FieldForm::RampAbs: os << "ramp_abs(min(" << c0_ << "," << c1_ << "*|x-x0|))"; break;
        case FieldForm::RampAxis:
            os << "ramp_axis(axis" << axis_ << ":" << c0_ << ".." << c1_ << " -> " << c2_ << ".."
               << c3_ << ")";
            break;
        case FieldForm::LogAffine:
            os << c0_ << "+" << c1_ << "*log(" << c2_ << "+" << c3_ << "*x" << axis_ << ")";
            break;
    }
    if (clip_) os << " clipped at " << clip_floor_;
    return os.str();
}

ScalarField ScalarField::from_params(const std::map<std::string, std::string>& params,
                                     const std::string& context) {
    auto it = params.find("form");
    if (it == params.end()) throw ConfigError(context + ": missing 'form'");
    const std::string& form = it->second;
    ScalarField f;
    if (form == "constant") {
        f = constant(parse_double(params, "value", context));
    } else if (form == "affine") {
        f = affine(parse_double(params, "c0", context),
                   parse_double(params, "cx", context, false, 0.0),
                   parse_double(params, "cy", context, false, 0.0));
    } else if (form == "quadratic") {
        Point x0{parse_double(params, "x0", context, false, 0.0),
                 parse_double(params, "y0", context, false, 0.0)};
        f = quadratic(parse_double(params, "c0", context), parse_double(params, "q", context), x0);
    } else if (form == "trig") {
        f = trig(parse_double(params, "c0", context), parse_double(params, "amp", context),
                 parse_double(params, "freq", context),
                 static_cast<int>(parse_double(params, "axis", context, false, 0.0)),
                 parse_double(params, "phase", context, false, 0.0));
    } else if (form == "ramp_abs") {
        Point x0{parse_double(params, "x0", context, false, 0.0),
                 parse_double(params, "y0", context, false, 0.0)};
        f = ramp_abs(parse_double(params, "cap", context), parse_double(params, "slope", context),
                     x0);
    } else if (form == "ramp_axis") {
        f = ramp_axis(static_cast<int>(parse_double(params, "axis", context, false, 0.0)),
                      parse_double(params, "t0", context), parse_double(params, "t1", context),
                      parse_double(params, "v0", context), parse_double(params, "v1", context));
    } else if (form == "log_affine") {
        f = log_affine(parse_double(params, "c0", context, false, 0.0),
                       parse_double(params, "c1", context),
                       parse_double(params, "shift", context),
                       parse_double(params, "k", context),
                       static_cast<int>(parse_double(params, "axis", context, false, 0.0)));
    } else {
        throw ConfigError(context + ": unknown field form '" + form + "'");
    }
    auto cl = params.find("clip_floor");
    if (cl != params.end()) f = f.clipped(parse_double(params, "clip_floor", context));
    return f;
}

SigmaField SigmaField::scalar(ScalarField s) {
    SigmaField f;
    f.kind = Kind::ScalarTimesId;
    f.s0 = std::move(s);
    return f;
}

SigmaField SigmaField::diagonal(ScalarField sx, ScalarField sy) {
    SigmaField f;
    f.kind = Kind::Diagonal;
    f.s0 = std::move(sx);
    f.s1 = std::move(sy);
    return f;
}

SigmaField SigmaField::full(ScalarField sxx, ScalarField sxy, ScalarField syy) {
    SigmaField f;
    f.kind = Kind::FullSym;
    f.s0 = std::move(sxx);
    f.s01 = std::move(sxy);
    f.s1 = std::move(syy);
    return f;
}

void SigmaField::eval_sigma(const Point& x, int dim, double out[2][2]) const {
    out[0][0] = out[0][1] = out[1][0] = out[1][1] = 0.0;
    switch (kind) {
        case Kind::Zero:
            break;
        case Kind::ScalarTimesId: {
            double s = s0(x, dim);
            out[0][0] = s;
            if (dim == 2) out[1][1] = s;
            break;
        }
        case Kind::Diagonal:
            out[0][0] = s0(x, dim);
            if (dim == 2) out[1][1] = s1(x, dim);
            break;
        case Kind::FullSym:
            out[0][0] = s0(x, dim);
            if (dim == 2) {
                out[1][1] = s1(x, dim);
                out[0][1] = out[1][0] = s01(x, dim);
            }
            break;
    }
}

void SigmaField::eval_A(const Point& x, int dim, double out[2][2]) const {
    double s[2][2];
    eval_sigma(x, dim, s);
    // A = 1/2 sigma^t sigma (sigma symmetric here)
    out[0][0] = 0.5 * (s[0][0] * s[0][0] + s[1][0] * s[1][0]);
    if (dim == 2) {
        out[0][1] = 0.5 * (s[0][0] * s[0][1] + s[1][0] * s[1][1]);
        out[1][0] = out[0][1];
        out[1][1] = 0.5 * (s[0][1] * s[0][1] + s[1][1] * s[1][1]);
    } else {
        out[0][1] = out[1][0] = out[1][1] = 0.0;
    }
}

FieldBounds SigmaField::sigma_bounds(const Point& lo, const Point& hi, int dim) const {
    FieldBounds b{0.0, 0.0, 0.0};
    auto acc = [&](const ScalarField& s, double weight) {
        FieldBounds sb = s.bounds_on_box(lo, hi, dim);
        double amax = std::max(std::abs(sb.inf), std::abs(sb.sup));
        b.sup = std::hypot(b.sup, weight * amax);
        b.lip += weight * sb.lip;
    };
    switch (kind) {
        case Kind::Zero:
            break;
        case Kind::ScalarTimesId:
            acc(s0, std::sqrt(static_cast<double>(dim)));
            break;
        case Kind::Diagonal:
            acc(s0, 1.0);
            if (dim == 2) acc(s1, 1.0);
            break;
        case Kind::FullSym:
            acc(s0, 1.0);
            if (dim == 2) {
                acc(s1, 1.0);
                acc(s01, std::sqrt(2.0));
            }
            break;
    }
    b.inf = 0.0;
    return b;
}

std::string SigmaField::describe() const {
    switch (kind) {
        case Kind::Zero: return "zero";
        case Kind::ScalarTimesId: return s0.describe() + " * Id";
        case Kind::Diagonal: return "diag(" + s0.describe() + "," + s1.describe() + ")";
        case Kind::FullSym:
            return "sym(" + s0.describe() + "," + s01.describe() + "," + s1.describe() + ")";
    }
    return "?";
}

}  // namespace vhj
