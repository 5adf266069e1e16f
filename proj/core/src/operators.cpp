#include "fraclimit/operators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "fraclimit/errors.hpp"
#include "fraclimit/parallel.hpp"
#include "fraclimit/quadrature.hpp"

namespace fraclimit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// How the value along a jump x + r theta is read.
enum class Jump {
    Free,        // psi(x + w) on all of R^d
    Mirror,      // psi(eta(x, w))
    Regional,    // psi(x + w) inside, excluded outside
    ExitExtend,  // psi(x + w) inside, psi(x_f) outside
    ExitOnly,    // only jumps leaving the domain, valued psi(x_f)
    Inward,      // directions with theta_d > 0 only
};

// Radial kernel k(|w|) with the quantities the direction integrator needs.
// moment = 1 weighs the integrand by w instead of 1.
struct RadialKernel {
    std::function<double(double)> k;
    std::function<double(double)> tail;            // int_R^inf k r^{d-1+m} dr
    std::function<double(int, double)> inner;      // int_0^delta k r^{d-1+j} dr
    int moment = 0;
    bool pv = false;           // linear Taylor term cancels and is skipped
    double delta_base = 0.0;   // inner ball radius before the wall cap
    double scale = 1.0;        // transition scale of k
};

RadialKernel power_kernel(double coef, int d, double s, int moment) {
    RadialKernel K;
    K.k = [coef, d, s](double r) { return coef * std::pow(r, -d - 2.0 * s); };
    if (moment == 0)
        K.tail = [coef, s](double R) { return coef * std::pow(R, -2.0 * s) / (2.0 * s); };
    else
        K.tail = [coef, s](double R) { return coef * std::pow(R, 1.0 - 2.0 * s) / (2.0 * s - 1.0); };
    K.inner = [coef, s](int j, double delta) { return coef * std::pow(delta, j - 2.0 * s) / (j - 2.0 * s); };
    K.moment = moment;
    K.pv = moment == 0;
    K.delta_base = 1e-4;
    K.scale = 1.0;
    return K;
}

RadialKernel eps_F1_kernel(const OperatorContext& ctx, double eps) {
    const int d = ctx.params().d;
    const double s = ctx.params().s;
    const KernelTable* tab = &ctx.table();
    const OperatorContext* c = &ctx;
    const double pre = std::pow(eps, -2.0 * s - d);
    RadialKernel K;
    K.k = [tab, pre, eps](double r) { return pre * tab->F1(r / eps); };
    K.tail = [tab, eps, s](double R) { return std::pow(eps, -2.0 * s) * tab->F1_tail(R / eps); };
    K.inner = [c, eps, s](int j, double delta) {
        return std::pow(eps, j - 2.0 * s) * c->small_moment(false, j, delta / eps);
    };
    K.moment = 0;
    K.pv = false;
    K.delta_base = eps * OperatorContext::kSmallArg;
    K.scale = eps;
    return K;
}

RadialKernel eps_F0_flux_kernel(const OperatorContext& ctx, double eps) {
    const int d = ctx.params().d;
    const double s = ctx.params().s;
    const double c0 = ctx.equilibrium().c0();
    const KernelTable* tab = &ctx.table();
    const OperatorContext* c = &ctx;
    const double pre = c0 * std::pow(eps, -2.0 * s - d);
    RadialKernel K;
    K.k = [tab, pre, eps](double r) { return pre * tab->F0(r / eps); };
    K.tail = [tab, eps, s, c0](double R) { return c0 * std::pow(eps, 1.0 - 2.0 * s) * tab->F0_flux_tail(R / eps); };
    K.inner = [c, eps, s, c0](int j, double delta) {
        return c0 * std::pow(eps, j - 2.0 * s) * c->small_moment(true, j, delta / eps);
    };
    K.moment = 1;
    K.pv = false;
    K.delta_base = eps * OperatorContext::kSmallArg;
    K.scale = eps;
    return K;
}

bool wall_sensitive(Jump j) { return j != Jump::Free && j != Jump::Inward; }

// int_0^inf (u(r) - psi(x)) k(r) r^{d-1+m} dr along one direction.
double direction_integral(const TestFunction& psi, const Vec& x, double psix, const Vec& grad, const Mat& hess,
                          const Vec& theta, const RadialKernel& K, Jump jump, double rel_tol, double* err) {
    const int d = static_cast<int>(x.size());
    const double xd = x[d - 1], thd = theta[d - 1];
    const bool exits = wall_sensitive(jump) && thd < 0.0;
    const double rstar = exits ? xd / -thd : kInf;
    Vec xf;
    if (exits) {
        if (rstar <= 0.0) {
            // Starting on the wall and leaving at once: the exit value is psi(x).
            if (jump != Jump::Mirror) return 0.0;
        }
        xf = x + rstar * theta;
        xf[d - 1] = 0.0;
    }
    auto T = [&](double r) { return std::isfinite(r) ? K.tail(r) : 0.0; };

    if (jump == Jump::ExitOnly) return exits ? (psi.value(xf) - psix) * T(rstar) : 0.0;

    // Inner ball by Taylor expansion.
    double delta = K.delta_base;
    if (wall_sensitive(jump)) delta = std::min(delta, K.pv ? 0.5 * xd : 0.5 * rstar);
    const int m = K.moment;
    double acc = 0.0;
    if (delta > 0.0) {
        const double g = theta.dot(grad), h = theta.dot(hess * theta);
        if (!K.pv) acc += g * K.inner(1 + m, delta);
        acc += 0.5 * h * K.inner(2 + m, delta);
    }

    const double R = psi.far_radius(x);
    const double far = psi.far_value;
    const double lo = delta;
    double hi = std::max(R, lo);
    double tail = 0.0;
    switch (jump) {
        case Jump::Free:
        case Jump::Mirror:
        case Jump::Inward:
            tail = (far - psix) * T(hi);
            break;
        case Jump::Regional:
            if (rstar <= hi) hi = rstar;
            else tail = (far - psix) * (T(hi) - T(rstar));
            break;
        case Jump::ExitExtend:
            if (rstar <= hi) {
                hi = rstar;
                tail = (psi.value(xf) - psix) * T(rstar);
            } else {
                tail = (far - psix) * (T(hi) - T(rstar));
                if (exits) tail += (psi.value(xf) - psix) * T(rstar);
            }
            break;
        case Jump::ExitOnly:
            break;
    }
    acc += tail;
    if (!(hi > lo)) return acc;

    auto u = [&](double r) {
        Vec y = x + r * theta;
        if (jump == Jump::Mirror) y[d - 1] = std::abs(y[d - 1]);
        return psi.value(y);
    };
    auto f = [&](double r) {
        if (r <= 0.0) return 0.0;
        return (u(r) - psix) * K.k(r) * std::pow(r, d - 1 + m);
    };
    const double start = lo > 0.0 ? lo : std::min(hi, K.scale * OperatorContext::kSmallArg);
    std::vector<double> pts = geometric_points(start, hi, 2.0);
    if (lo < start) pts.insert(pts.begin(), lo);
    std::vector<double> extra{rstar, K.scale};
    if (psi.radius > 0.0) {
        Vec cm = psi.center;
        cm[d - 1] = -cm[d - 1];
        extra.push_back((psi.center - x).dot(theta));
        extra.push_back((cm - x).dot(theta));
    }
    pts = merge_points(pts, extra, lo, hi);
    QuadOptions opt;
    opt.rel_tol = rel_tol;
    acc += integrate_panels(f, pts, opt, err);
    return acc;
}

// Direction rule on the unit circle: nodes clustered at the grazing angles
// 0 and pi, where the integrands lose smoothness.
struct DirectionRule {
    std::vector<double> phi, w;  // on (0, pi); the lower half is phi + pi
};

const DirectionRule& half_circle_rule() {
    static const DirectionRule rule = [] {
        DirectionRule r;
        const GaussRule& g = gauss_legendre(16);
        const int panels = 8;
        for (int p = 0; p < panels; ++p) {
            for (std::size_t i = 0; i < g.x.size(); ++i) {
                const double u = (p + g.x[i]) / panels;
                const double wu = g.w[i] / panels;
                const double map = u * u * (3.0 - 2.0 * u);
                const double dmap = 6.0 * u * (1.0 - u);
                r.phi.push_back(std::numbers::pi * map);
                r.w.push_back(std::numbers::pi * dmap * wu);
            }
        }
        return r;
    }();
    return rule;
}

// Sum over directions of theta^m times the direction integral.
Vec integrate_jumps(const TestFunction& psi, const Vec& x, const RadialKernel& K, Jump jump,
                    const OperatorContext& ctx, double* err) {
    const int d = static_cast<int>(x.size());
    if (d != ctx.params().d || psi.d != d) throw ConfigError("dimension mismatch in operator evaluation");
    if (d > 2) throw ConfigError("operator quadrature supports d <= 2");
    if (x[d - 1] < 0.0) throw ConfigError("evaluation point outside the half-space");
    if (K.pv && wall_sensitive(jump) && !(x[d - 1] > 0.0))
        throw NumericError("principal value integral evaluated on the wall");
    const double psix = psi.value(x);
    const Vec grad = psi.gradient(x);
    const Mat hess = psi.hessian(x);
    const int out = K.moment ? d : 1;
    Vec acc = Vec::Zero(out);
    auto add = [&](const Vec& theta, double w) {
        if (jump == Jump::Inward && !(theta[d - 1] > 0.0)) return;
        double v = direction_integral(psi, x, psix, grad, hess, theta, K, jump, ctx.rel_tol, err);
        if (K.moment) acc += w * v * theta;
        else acc[0] += w * v;
    };
    if (d == 1) {
        add(vec1(1.0), 1.0);
        add(vec1(-1.0), 1.0);
    } else {
        const DirectionRule& rule = half_circle_rule();
        for (std::size_t i = 0; i < rule.phi.size(); ++i) {
            const double p = rule.phi[i];
            add(vec2(std::cos(p), std::sin(p)), rule.w[i]);
            add(vec2(std::cos(p + std::numbers::pi), std::sin(p + std::numbers::pi)), rule.w[i]);
        }
    }
    return acc;
}

void require_flux(const OperatorContext& ctx) {
    if (!(ctx.params().s > 0.5)) throw ConfigError("the nonlocal gradient requires s > 1/2");
}

}  // namespace

OperatorContext::OperatorContext(const Equilibrium& eq, const KernelTable& table)
    : eq_(&eq), table_(&table), k_(fraclimit::constants(eq.params(), eq)) {
    if (&table.equilibrium() != &eq) throw ConfigError("kernel table was built for another equilibrium");
    for (int f = 0; f < 2; ++f) {
        if (f == 1 && !(eq.s() > 0.5)) continue;
        for (int j = 1; j <= 4; ++j) moments_[f][j] = small_moment(f == 1, j, -1.0);
    }
}

double OperatorContext::small_moment(bool f0, int j, double rho) const {
    if (j < 1 || j > 4) throw ConfigError("small_moment order out of range");
    const bool cached = rho < 0.0;
    if (!cached && rho == kSmallArg && moments_[f0][j] != 0.0) return moments_[f0][j];
    if (cached) rho = kSmallArg;
    if (!(rho > 0.0)) return 0.0;
    const int d = params().d;
    auto f = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double k = f0 ? kernel_F0(*eq_, u) : kernel_F1(*eq_, u);
        return k * std::pow(u, d - 1 + j);
    };
    std::vector<double> pts{0.0};
    for (double p : geometric_points(rho * 1e-12, rho, 8.0)) pts.push_back(p);
    QuadOptions opt;
    opt.rel_tol = 1e-10;
    return integrate_panels(f, pts, opt);
}

double op_LSR(const TestFunction& psi, const Vec& x, const OperatorContext& ctx, double* err) {
    const auto& p = ctx.params();
    return integrate_jumps(psi, x, power_kernel(ctx.constants().gamma1, p.d, p.s, 0), Jump::Mirror, ctx, err)[0];
}

double op_regional(const TestFunction& psi, const Vec& x, const OperatorContext& ctx, double* err) {
    const auto& p = ctx.params();
    return -integrate_jumps(psi, x, power_kernel(ctx.constants().c_ds, p.d, p.s, 0), Jump::Regional, ctx, err)[0];
}

double op_fractional_laplacian(const TestFunction& psi, const Vec& x, const OperatorContext& ctx, double* err) {
    const auto& p = ctx.params();
    return -integrate_jumps(psi, x, power_kernel(ctx.constants().c_ds, p.d, p.s, 0), Jump::Free, ctx, err)[0];
}

double op_kappa_volume(const TestFunction& psi, const Vec& x, const OperatorContext& ctx, double* err) {
    const auto& p = ctx.params();
    if (!(x[p.d - 1] > 0.0)) throw NumericError("kappa is evaluated at interior points only");
    return integrate_jumps(psi, x, power_kernel(ctx.constants().gamma1, p.d, p.s, 0), Jump::ExitOnly, ctx,
                           err)[0];
}

double op_kappa_surface(const TestFunction& psi, const Vec& x, const OperatorContext& ctx, double* err) {
    const auto& p = ctx.params();
    const int d = p.d;
    const double s = p.s, g0 = ctx.constants().gamma0;
    if (d != static_cast<int>(x.size()) || psi.d != d) throw ConfigError("dimension mismatch in operator evaluation");
    const double xd = x[d - 1];
    if (!(xd > 0.0)) throw NumericError("kappa is evaluated at interior points only");
    const double psix = psi.value(x);
    if (d == 1) return g0 * (psi.value(vec1(0.0)) - psix) * std::pow(xd, -2.0 * s);
    if (d != 2) throw ConfigError("operator quadrature supports d <= 2");
    // Wall points y = (x1 + t, 0); (y - x).n = x2.
    auto f = [&](double t) {
        return (psi.value(vec2(x[0] + t, 0.0)) - psix) * xd * std::pow(t * t + xd * xd, -1.0 - s);
    };
    double R = psi.radius > 0.0 ? psi.far_radius(x) : xd;
    std::vector<double> pos = geometric_points(1e-3 * xd, R, 2.0);
    std::vector<double> pts;
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) pts.push_back(-*it);
    pts.push_back(0.0);
    pts.insert(pts.end(), pos.begin(), pos.end());
    std::vector<double> extra;
    if (psi.radius > 0.0) extra.push_back(psi.center[0] - x[0]);
    pts = merge_points(pts, extra, -R, R);
    QuadOptions opt;
    opt.rel_tol = ctx.rel_tol;
    double acc = integrate_panels(f, pts, opt, err);
    // |t| > R: psi = far value; int_R^inf x2 (t^2 + x2^2)^{-1-s} dt with t = 1/u.
    auto g = [&](double u) {
        if (u <= 0.0) return 0.0;
        return xd * std::pow(u, 2.0 * s) * std::pow(1.0 + xd * xd * u * u, -1.0 - s);
    };
    acc += 2.0 * (psi.far_value - psix) * integrate(g, 0.0, 1.0 / R, opt, err);
    return g0 * acc;
}

Vec op_D2sm1(const TestFunction& psi, const Vec& y, const OperatorContext& ctx, double* err) {
    require_flux(ctx);
    const auto& p = ctx.params();
    return integrate_jumps(psi, y, power_kernel(ctx.constants().gamma0, p.d, p.s, 1), Jump::ExitExtend, ctx, err);
}

double op_LD(const TestFunction& psi, const Vec& x, const OperatorContext& ctx, double* err) {
    return -ctx.constants().gamma_ds * op_regional(psi, x, ctx, err) + op_kappa_volume(psi, x, ctx, err);
}

double op_LM(const TestFunction& psi, const Vec& x, const OperatorContext& ctx, double alpha, double* err) {
    if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha must lie in [0, 1]");
    double v = 0.0;
    if (alpha < 1.0) v += (1.0 - alpha) * op_LSR(psi, x, ctx, err);
    if (alpha > 0.0) v += alpha * op_LD(psi, x, ctx, err);
    return v;
}

double op_LSR_eps(const TestFunction& psi, const Vec& x, const OperatorContext& ctx, double eps, double* err) {
    return integrate_jumps(psi, x, eps_F1_kernel(ctx, eps), Jump::Mirror, ctx, err)[0];
}

double op_Leps(const TestFunction& psi, const Vec& x, const OperatorContext& ctx, double eps, double* err) {
    return integrate_jumps(psi, x, eps_F1_kernel(ctx, eps), Jump::Regional, ctx, err)[0];
}

double op_kappa_eps(const TestFunction& psi, const Vec& x, const OperatorContext& ctx, double eps, double* err) {
    return integrate_jumps(psi, x, eps_F1_kernel(ctx, eps), Jump::ExitOnly, ctx, err)[0];
}

double op_Leps_extended(const TestFunction& psi, const Vec& x, const OperatorContext& ctx, double eps,
                        double* err) {
    return integrate_jumps(psi, x, eps_F1_kernel(ctx, eps), Jump::ExitExtend, ctx, err)[0];
}

double op_Deps(const TestFunction& psi, const Vec& y, const OperatorContext& ctx, double eps, double* err) {
    require_flux(ctx);
    const int d = ctx.params().d;
    return integrate_jumps(psi, y, eps_F0_flux_kernel(ctx, eps), Jump::Inward, ctx, err)[d - 1];
}

double op_LM_eps(const TestFunction& psi, const Vec& x, const OperatorContext& ctx, double eps, double alpha,
                 double* err) {
    if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha must lie in [0, 1]");
    double v = 0.0;
    if (alpha < 1.0) v += (1.0 - alpha) * op_LSR_eps(psi, x, ctx, eps, err);
    if (alpha > 0.0) v += alpha * op_Leps_extended(psi, x, ctx, eps, err);
    return v;
}

TestFunction flux_corrected(const TestFunction& psi, const OperatorContext& ctx) {
    if (psi.d != 1) throw ConfigError("flux correction is implemented for d = 1");
    const TestFunction chi = wall_corrector();
    const Vec y0 = vec1(0.0);
    const double a = op_D2sm1(psi, y0, ctx)[0];
    const double b = op_D2sm1(chi, y0, ctx)[0];
    if (!(std::abs(b) > 0.0)) throw NumericError("corrector has zero wall flux");
    TestFunction out = combine(1.0, psi, -a / b, chi, psi.id + "_fc");
    out.in_Ds_class = psi.in_Ds_class;
    return out;
}

const std::vector<std::string>& operator_names() {
    static const std::vector<std::string> names{
        "LSR",     "regional", "frac_lap", "kappa_volume", "kappa_surface", "D2sm1", "LD",     "LM",
        "LSR_eps", "Leps",     "kappa_eps", "Leps_ext",    "Deps",          "LM_eps"};
    return names;
}

double evaluate_operator(const std::string& op, const TestFunction& psi, const Vec& x, const OperatorContext& ctx,
                         double eps, double alpha, double* err) {
    const int d = ctx.params().d;
    auto need_eps = [&] {
        if (!(eps > 0.0 && eps <= 1.0)) throw ConfigError("operator " + op + " needs eps in (0, 1]");
    };
    if (op == "LSR") return op_LSR(psi, x, ctx, err);
    if (op == "regional") return op_regional(psi, x, ctx, err);
    if (op == "frac_lap") return op_fractional_laplacian(psi, x, ctx, err);
    if (op == "kappa_volume") return op_kappa_volume(psi, x, ctx, err);
    if (op == "kappa_surface") return op_kappa_surface(psi, x, ctx, err);
    if (op == "D2sm1") return -op_D2sm1(psi, x, ctx, err)[d - 1];
    if (op == "LD") return op_LD(psi, x, ctx, err);
    if (op == "LM") return op_LM(psi, x, ctx, alpha, err);
    need_eps();
    if (op == "LSR_eps") return op_LSR_eps(psi, x, ctx, eps, err);
    if (op == "Leps") return op_Leps(psi, x, ctx, eps, err);
    if (op == "kappa_eps") return op_kappa_eps(psi, x, ctx, eps, err);
    if (op == "Leps_ext") return op_Leps_extended(psi, x, ctx, eps, err);
    if (op == "Deps") return op_Deps(psi, x, ctx, eps, err);
    if (op == "LM_eps") return op_LM_eps(psi, x, ctx, eps, alpha, err);
    throw ConfigError("unknown operator '" + op + "'");
}

OperatorSample sample_operator(const std::string& op, const TestFunction& psi, const std::vector<Vec>& points,
                               const OperatorContext& ctx, double eps, double alpha, int workers) {
    OperatorSample out;
    out.op = op;
    out.psi = psi.id;
    out.eps = eps;
    out.alpha = alpha;
    out.points = points;
    out.values.assign(points.size(), 0.0);
    out.errors.assign(points.size(), 0.0);
    parallel_blocks(points.size(), workers, [&](std::size_t lo, std::size_t hi, int) {
        for (std::size_t i = lo; i < hi; ++i) {
            double e = 0.0;
            out.values[i] = evaluate_operator(op, psi, points[i], ctx, eps, alpha, &e);
            out.errors[i] = e;
        }
    });
    return out;
}

}  // namespace fraclimit
