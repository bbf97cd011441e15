#include "vhj/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vhj/errors.hpp"

namespace vhj {

double pow_m_from_sq(double p_sq, double m) {
    if (m == 2.0) return p_sq;
    if (m == 1.5) {
        double r = std::sqrt(p_sq);
        return r * std::sqrt(r);
    }
    if (m == 3.0) return p_sq * std::sqrt(p_sq);
    if (m == 4.0) return p_sq * p_sq;
    return p_sq > 0.0 ? std::pow(p_sq, 0.5 * m) : 0.0;
}

double lf_hamiltonian(const HamiltonianSpec& spec, const double p_minus[2], const double p_plus[2],
                      const Point& x, double theta, int dim) {
    double pm[2] = {0.5 * (p_minus[0] + p_plus[0]), dim == 2 ? 0.5 * (p_minus[1] + p_plus[1]) : 0.0};
    double h = eval_H(spec, pm, x, dim);
    double jump = (p_plus[0] - p_minus[0]);
    if (dim == 2) jump += (p_plus[1] - p_minus[1]);
    return h - 0.5 * theta * jump;
}

DiscreteOperator::DiscreteOperator(const ProblemSpec& problem, GridPtr grid, LateralMode mode)
    : problem_(problem), grid_(std::move(grid)), mode_(mode) {
    dim_ = grid_->dimension();
    dx_ = grid_->dx();
    inv_dx_ = 1.0 / dx_;
    inv_dx2_ = inv_dx_ * inv_dx_;
    delta_ = problem.delta;
    m_ = problem.hamiltonian.m;
    has_diffusion_ = !problem.diffusion.is_zero();
    has_drift_ = problem.hamiltonian.has_drift();

    const int n = grid_->node_count();
    rhs_.resize(n);
    b_.resize(n);
    if (has_drift_) {
        vx_.resize(n);
        vy_.resize(n);
    }
    if (has_diffusion_) {
        a11_.resize(n);
        a22_.resize(n);
        a12_.resize(n);
    }
    stencil_.assign(4 * n, -1);
    diag_.assign(4 * n, -1);
    theta_.assign(n, 0.0);
    p_bound_.assign(n, 0.0);

    auto usable = [&](int j) {
        if (j < 0) return -1;
        if (mode_ == LateralMode::StateConstraint && grid_->is_boundary(j)) return -1;
        return j;
    };

    for (int i = 0; i < n; ++i) {
        const Point& x = grid_->position(i);
        rhs_[i] = problem.f(x, dim_);
        b_[i] = problem.hamiltonian.b(x, dim_);
        if (has_drift_) {
            double v[2];
            problem.hamiltonian.drift.eval(x, dim_, v);
            vx_[i] = v[0];
            vy_[i] = v[1];
        }
        if (has_diffusion_) {
            double A[2][2];
            problem.diffusion.sigma.eval_A(x, dim_, A);
            a11_[i] = A[0][0];
            a22_[i] = dim_ == 2 ? A[1][1] : 0.0;
            a12_[i] = dim_ == 2 ? A[0][1] : 0.0;
            maxA_ = std::max({maxA_, std::abs(a11_[i]), std::abs(a22_[i]), std::abs(a12_[i])});
        }
        stencil_[4 * i + 0] = usable(grid_->neighbor(i, 0, 0));
        stencil_[4 * i + 1] = usable(grid_->neighbor(i, 0, 1));
        if (dim_ == 2) {
            stencil_[4 * i + 2] = usable(grid_->neighbor(i, 1, 0));
            stencil_[4 * i + 3] = usable(grid_->neighbor(i, 1, 1));
            for (int q = 0; q < 4; ++q) diag_[4 * i + q] = usable(grid_->diagonal(i, q));
        }
        if (grid_->is_interior(i)) unknowns_.push_back(i);
    }
}

void DiscreteOperator::set_rhs(std::vector<double> rhs) {
    if (static_cast<int>(rhs.size()) != grid_->node_count())
        throw InputError("rhs size mismatch");
    rhs_ = std::move(rhs);
}

void DiscreteOperator::set_theta(double t) {
    std::fill(theta_.begin(), theta_.end(), t);
    theta_max_ = t;
    has_local_theta_ = false;
}

double DiscreteOperator::set_local_theta(const std::vector<double>& p_bound, double lambda_dp) {
    if (static_cast<int>(p_bound.size()) != grid_->node_count())
        throw InputError("p_bound size mismatch");
    p_bound_ = p_bound;
    theta_max_ = 0.0;
    for (int i = 0; i < grid_->node_count(); ++i) {
        theta_[i] = lambda_dp * std::pow(2.0 * p_bound[i] + 1.0, m_ - 1.0);
        theta_max_ = std::max(theta_max_, theta_[i]);
    }
    has_local_theta_ = true;
    return theta_max_;
}

void DiscreteOperator::add_to_rhs(const std::vector<double>& extra) {
    if (extra.size() != rhs_.size()) throw InputError("rhs size mismatch");
    for (size_t i = 0; i < rhs_.size(); ++i) rhs_[i] += extra[i];
}

double DiscreteOperator::residual_at(const std::vector<double>& u, int node) const {
    const int i = node;
    const double ui = u[i];
    double pm[2] = {0.0, 0.0}, pp[2] = {0.0, 0.0};
    double diffusion = 0.0;
    bool full[2] = {false, false};

    for (int a = 0; a < dim_; ++a) {
        const int jm = stencil_[4 * i + 2 * a + 0];
        const int jp = stencil_[4 * i + 2 * a + 1];
        if (jm >= 0 && jp >= 0) {
            pm[a] = (ui - u[jm]) * inv_dx_;
            pp[a] = (u[jp] - ui) * inv_dx_;
            full[a] = true;
            if (has_diffusion_) {
                double second = (u[jp] - 2.0 * ui + u[jm]) * inv_dx2_;
                diffusion += (a == 0 ? a11_[i] : a22_[i]) * second;
            }
        } else if (jm >= 0) {
            pm[a] = pp[a] = (ui - u[jm]) * inv_dx_;
        } else if (jp >= 0) {
            pm[a] = pp[a] = (u[jp] - ui) * inv_dx_;
        }
    }

    // Sign-split 7-point cross stencil; dropped whenever any required
    // neighbor is unavailable (one-sided nodes err on the supersolution side
    // by omitting realizable diffusion only, never inventing exterior data).
    if (dim_ == 2 && has_diffusion_ && a12_[i] != 0.0 && full[0] && full[1]) {
        const int ne = diag_[4 * i + 0], sw = diag_[4 * i + 1];
        const int se = diag_[4 * i + 2], nw = diag_[4 * i + 3];
        const int e = stencil_[4 * i + 1], w = stencil_[4 * i + 0];
        const int nn = stencil_[4 * i + 3], ss = stencil_[4 * i + 2];
        if (a12_[i] > 0.0 && ne >= 0 && sw >= 0) {
            double cross = (u[ne] + u[sw] + 2.0 * ui - u[e] - u[w] - u[nn] - u[ss]) *
                           (0.5 * inv_dx2_);
            diffusion += 2.0 * a12_[i] * cross;
        } else if (a12_[i] < 0.0 && nw >= 0 && se >= 0) {
            double cross = (u[e] + u[w] + u[nn] + u[ss] - 2.0 * ui - u[nw] - u[se]) *
                           (0.5 * inv_dx2_);
            diffusion += 2.0 * a12_[i] * cross;
        }
    }

    // Lax-Friedrichs Hamiltonian, inlined for the hot loop.
    double avg0 = 0.5 * (pm[0] + pp[0]);
    double avg1 = dim_ == 2 ? 0.5 * (pm[1] + pp[1]) : 0.0;
    double p_sq = avg0 * avg0 + avg1 * avg1;
    double h = b_[i] * pow_m_from_sq(p_sq, m_);
    if (has_drift_) {
        h += vx_[i] * avg0;
        if (dim_ == 2) h += vy_[i] * avg1;
    }
    double jump = (pp[0] - pm[0]) + (dim_ == 2 ? pp[1] - pm[1] : 0.0);
    h -= 0.5 * theta_[i] * jump;

    return delta_ * ui - diffusion + h - rhs_[i];
}

void DiscreteOperator::residual_unknowns(const std::vector<double>& u,
                                         std::vector<double>& out) const {
    out.resize(unknowns_.size());
    const int n = static_cast<int>(unknowns_.size());
    for (int k = 0; k < n; ++k) out[k] = residual_at(u, unknowns_[k]);
}

double DiscreteOperator::sup_residual_unknowns(const std::vector<double>& u) const {
    double s = 0.0;
    for (int i : unknowns_) s = std::max(s, std::abs(residual_at(u, i)));
    return s;
}

double DiscreteOperator::max_abs_gradient(const std::vector<double>& u) const {
    double g = 0.0;
    for (int i : unknowns_) {
        for (int a = 0; a < dim_; ++a) {
            const int jm = stencil_[4 * i + 2 * a + 0];
            const int jp = stencil_[4 * i + 2 * a + 1];
            if (jm >= 0) g = std::max(g, std::abs(u[i] - u[jm]) * inv_dx_);
            if (jp >= 0) g = std::max(g, std::abs(u[jp] - u[i]) * inv_dx_);
        }
    }
    return g;
}

bool DiscreteOperator::cross_dominance_ok(std::string* why) const {
    if (dim_ != 2 || !has_diffusion_) return true;
    for (int i : unknowns_) {
        if (std::abs(a12_[i]) > std::min(a11_[i], a22_[i]) + 1e-13 * (1.0 + maxA_)) {
            if (why) {
                std::ostringstream os;
                const Point& x = grid_->position(i);
                os << "cross-derivative dominance |A12| <= min(A11,A22) fails at node " << i
                   << " (x=" << x[0] << "," << x[1] << "): |" << a12_[i] << "| > min(" << a11_[i]
                   << "," << a22_[i] << ")";
                *why = os.str();
            }
            return false;
        }
    }
    return true;
}

double lambda_dp_on_grid(const DiscreteOperator& op) {
    const ProblemSpec& problem = op.problem();
    const Grid& grid = op.grid();
    const int dim = grid.dimension();
    const double m = problem.hamiltonian.m;
    Point lo, hi;
    grid.domain().bounding_box(lo, hi);
    FieldBounds bb = problem.hamiltonian.b.bounds_on_box(lo, hi, dim);
    double vsup = 0.0;
    if (problem.hamiltonian.has_drift()) {
        double s2 = 0.0;
        for (int a = 0; a < dim; ++a) {
            FieldBounds vb = problem.hamiltonian.drift.comp[a].bounds_on_box(lo, hi, dim);
            double amax = std::max(std::abs(vb.inf), std::abs(vb.sup));
            s2 += amax * amax;
        }
        vsup = std::sqrt(s2);
    }
    double cm = std::max(1.0, m * std::pow(2.0, 1.0 - m));
    return std::max(1.0, cm * std::max(std::abs(bb.inf), std::abs(bb.sup)) + vsup);
}

Certificate certify_monotonicity(const DiscreteOperator& op, SchemeParams& params) {
    Certificate cert;
    const Grid& grid = op.grid();
    const int dim = grid.dimension();
    const double m = op.problem().hamiltonian.m;
    double lambda1_dp = lambda_dp_on_grid(op);

    double theta_for_dt = params.theta;
    if (op.has_local_theta()) {
        // Nodewise: theta(x) >= Lambda_1^dp (2 P(x) + 1)^{m-1}.
        const std::vector<double>& theta = op.theta_field();
        const std::vector<double>& pb = op.p_bound_field();
        for (int i : op.unknowns()) {
            double need = lambda1_dp * std::pow(2.0 * pb[i] + 1.0, m - 1.0);
            cert.theta_required = std::max(cert.theta_required, need);
            if (theta[i] + 1e-12 * need < need) {
                std::ostringstream os;
                os << "dissipation too small at node " << i << ": theta = " << theta[i] << " < "
                   << need;
                cert.failure = os.str();
                params.cfl_certified = false;
                return cert;
            }
        }
        theta_for_dt = std::max(theta_for_dt, op.theta_max());
    } else {
        const double P = params.gradient_bound;
        cert.theta_required = lambda1_dp * std::pow(2.0 * P + 1.0, m - 1.0);
        if (params.theta + 1e-12 * cert.theta_required < cert.theta_required) {
            std::ostringstream os;
            os << "dissipation too small: theta = " << params.theta
               << " < Lambda_1^dp (2P+1)^{m-1} = " << cert.theta_required << " (P = " << P << ")";
            cert.failure = os.str();
            params.cfl_certified = false;
            return cert;
        }
    }

    std::string why;
    if (!op.cross_dominance_ok(&why)) {
        cert.failure = why;
        params.cfl_certified = false;
        return cert;
    }

    const double dx = grid.dx();
    double denom = 2.0 * dim * op.max_abs_A() / (dx * dx) + dim * theta_for_dt / dx +
                   std::max(0.0, op.delta());
    cert.dt_bound = denom > 0.0 ? 1.0 / denom : std::numeric_limits<double>::infinity();
    if (params.dt > cert.dt_bound * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "time step too large: dt = " << params.dt << " > 1/(2 d maxA/dx^2 + d theta/dx + delta) = "
           << cert.dt_bound;
        cert.failure = os.str();
        params.cfl_certified = false;
        return cert;
    }

    cert.ok = true;
    cert.notes.push_back("theta >= " + std::to_string(cert.theta_required));
    cert.notes.push_back("dt <= " + std::to_string(cert.dt_bound));
    params.cfl_certified = true;
    return cert;
}

SchemeParams make_certified_params_local(DiscreteOperator& op, const std::vector<double>& p_bound,
                                         double dt_safety) {
    double theta_max = op.set_local_theta(p_bound, lambda_dp_on_grid(op));
    SchemeParams params;
    params.theta = theta_max;
    double pmax = 1.0;
    for (int i : op.unknowns()) pmax = std::max(pmax, p_bound[i]);
    params.gradient_bound = pmax;
    Certificate c = certify_monotonicity(op, params);
    params.dt = c.dt_bound * dt_safety;
    c = certify_monotonicity(op, params);
    if (!c.ok) throw CertificateError("make_certified_params_local failed: " + c.failure);
    return params;
}

SchemeParams make_certified_params(const DiscreteOperator& op, double gradient_bound,
                                   double dt_safety) {
    SchemeParams params;
    params.gradient_bound = gradient_bound;
    params.theta = 0.0;
    params.dt = 0.0;
    // First pass computes the required theta, second pass the dt bound.
    Certificate c = certify_monotonicity(op, params);
    params.theta = c.theta_required;
    c = certify_monotonicity(op, params);
    params.dt = c.dt_bound * dt_safety;
    c = certify_monotonicity(op, params);
    if (!c.ok) throw CertificateError("make_certified_params failed: " + c.failure);
    return params;
}

}  // namespace vhj
