#pragma once

#include <map>
#include <string>
#include <vector>

#include "vhj/geometry.hpp"

namespace vhj {

// Envelope of a scalar field on a box: certified inf/sup of values and an
// upper bound for the Lipschitz constant. Validity matters more than
// tightness, but the envelopes below are exact for every form except the
// trigonometric one (whose sup/inf may be attained outside the box).
struct FieldBounds {
    double inf = 0.0;
    double sup = 0.0;
    double lip = 0.0;
};

// Closed library of analytic coefficient forms. Closed on purpose: every form
// carries computable bounds, so structural hypotheses can be certified rather
// than assumed.
enum class FieldForm {
    Constant,   // c0
    Affine,     // c0 + cx*x (+ cy*y)
    Quadratic,  // c0 + q*|x - x0|^2
    Trig,       // c0 + amp*cos(freq*x_axis + phase)
    RampAbs,    // min(cap, slope*|x - x0|)
    RampAxis,   // linear ramp in one coordinate between (t0,v0) and (t1,v1)
    LogAffine   // c0 + c1*log(shift + k*x_axis), requires shift + k*x > 0
};

class ScalarField {
  public:
    ScalarField() = default;  // constant zero

    static ScalarField constant(double c);
    static ScalarField affine(double c0, double cx, double cy = 0.0);
    static ScalarField quadratic(double c0, double q, Point x0 = {0.0, 0.0});
    static ScalarField trig(double c0, double amp, double freq, int axis = 0, double phase = 0.0);
    static ScalarField ramp_abs(double cap, double slope, Point x0 = {0.0, 0.0});
    static ScalarField ramp_axis(int axis, double t0, double t1, double v0, double v1);
    static ScalarField log_affine(double c0, double c1, double shift, double k, int axis = 0);

    // Pointwise clip from below: max(field, floor). Keeps coercivity weights
    // positive without leaving the library.
    ScalarField clipped(double floor) const;

    double operator()(const Point& x, int dim) const;
    FieldBounds bounds_on_box(const Point& lo, const Point& hi, int dim) const;

    FieldForm form() const { return form_; }
    bool is_zero() const;
    std::string describe() const;

    // Construction from parsed config key/value pairs ("form" plus the form's
    // named parameters).
    static ScalarField from_params(const std::map<std::string, std::string>& params,
                                   const std::string& context);

  private:
    FieldForm form_ = FieldForm::Constant;
    double c0_ = 0.0, c1_ = 0.0, c2_ = 0.0, c3_ = 0.0;
    int axis_ = 0;
    Point x0_{0.0, 0.0};
    bool clip_ = false;
    double clip_floor_ = 0.0;
};

// Drift vector field v(x); each component from the scalar library.
struct VectorField {
    ScalarField comp[2];
    bool is_zero() const { return comp[0].is_zero() && comp[1].is_zero(); }
    void eval(const Point& x, int dim, double out[2]) const {
        for (int a = 0; a < dim; ++a) out[a] = comp[a](x, dim);
        if (dim == 1) out[1] = 0.0;
    }
};

// Diffusion square root sigma(x). A(x) = (1/2) sigma^t sigma is evaluated
// pointwise; Frobenius norm is used for the bound |sigma|.
struct SigmaField {
    enum class Kind { Zero, ScalarTimesId, Diagonal, FullSym } kind = Kind::Zero;
    ScalarField s0, s1, s01;  // scalar / diag entries / off-diagonal

    static SigmaField zero() { return {}; }
    static SigmaField scalar(ScalarField s);
    static SigmaField diagonal(ScalarField sx, ScalarField sy);
    static SigmaField full(ScalarField sxx, ScalarField sxy, ScalarField syy);

    bool is_zero() const { return kind == Kind::Zero; }

    // Entries of sigma as a symmetric dim x dim matrix.
    void eval_sigma(const Point& x, int dim, double out[2][2]) const;
    // A = 1/2 sigma^t sigma.
    void eval_A(const Point& x, int dim, double out[2][2]) const;

    // Certified sup of |sigma|_F and Lipschitz bound on a box.
    FieldBounds sigma_bounds(const Point& lo, const Point& hi, int dim) const;

    std::string describe() const;
};

}  // namespace vhj
