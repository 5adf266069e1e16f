#include "fraclimit/resolvent.hpp"

#include <cmath>
#include <limits>

#include "fraclimit/errors.hpp"
#include "fraclimit/halfspace.hpp"
#include "fraclimit/quadrature.hpp"

namespace fraclimit {

namespace {

constexpr double kTauCut = 40.0;  // e^{-40} below round-off

}  // namespace

Resolvent::Resolvent(const TestFunction& psi, const OperatorContext& ctx, double eps, double alpha)
    : psi_(&psi), ctx_(&ctx), eps_(eps), alpha_(alpha), nu0_(ctx.params().nu0) {
    if (!(eps > 0.0 && eps <= 1.0)) throw ConfigError("eps must lie in (0, 1]");
    if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha must lie in [0, 1]");
    if (alpha > 0.0 && !(ctx.params().s > 0.5))
        throw ConfigError(kMaxwellRangeMessage);
    if (psi.d != ctx.params().d) throw ConfigError("dimension mismatch in resolvent");
    if (alpha > 0.0 && psi.d == 1) wall_average_ = boundary_average(vec1(0.0));
}

double Resolvent::path_integral(const Vec& x, const Vec& v, double t_end) const {
    const double speed = eps_ * v.norm();
    const double T = std::min(t_end, kTauCut / nu0_);
    if (!(T > 0.0)) return 0.0;
    if (speed == 0.0) return psi_->value(x) * (1.0 - std::exp(-nu0_ * T));
    const TestFunction& psi = *psi_;
    // Beyond tau_R the path is outside the support.
    const double R = psi.far_radius(x);
    const double tauR = psi.radius > 0.0 ? R / speed : 0.0;
    const double hi = std::min(T, tauR);
    double acc = 0.0;
    if (hi > 0.0) {
        auto f = [&](double tau) { return nu0_ * std::exp(-nu0_ * tau) * psi.value(x + (eps_ * tau) * v); };
        std::vector<double> pts{0.0, hi};
        std::vector<double> extra;
        const double v2 = eps_ * eps_ * v.squaredNorm();
        if (psi.radius > 0.0) {
            Vec cm = psi.center;
            cm[cm.size() - 1] = -cm[cm.size() - 1];
            extra.push_back((psi.center - x).dot(eps_ * v) / v2);
            extra.push_back((cm - x).dot(eps_ * v) / v2);
        }
        for (int k = 1; k < 8; ++k) extra.push_back(hi * k / 8.0);
        pts = merge_points(pts, extra, 0.0, hi);
        QuadOptions opt;
        opt.rel_tol = rel_tol;
        acc = integrate_panels(f, pts, opt);
    }
    if (hi < T) acc += psi.far_value * (std::exp(-nu0_ * hi) - std::exp(-nu0_ * T));
    return acc;
}

double Resolvent::free(const Vec& x, const Vec& v) const {
    return path_integral(x, v, std::numeric_limits<double>::infinity());
}

double Resolvent::boundary_average(const Vec& y) const {
    if (!(ctx_->params().s > 0.5)) throw ConfigError("diffuse boundary average requires s > 1/2");
    const double s = ctx_->params().s;
    return psi_->value(y) + std::pow(eps_, 2.0 * s - 1.0) * op_Deps(*psi_, y, *ctx_, eps_);
}

double Resolvent::operator()(const Vec& x, const Vec& v) const {
    const int d = static_cast<int>(x.size());
    if (x[d - 1] < 0.0) throw ConfigError("resolvent evaluated outside the half-space");
    ExitRecord ex = exit_scaled(x, v, eps_);
    if (!ex.finite()) return free(x, v);
    double acc = path_integral(x, v, ex.tau_f);
    const double damp = std::exp(-nu0_ * ex.tau_f);
    if (damp == 0.0) return acc;
    double wall = 0.0;
    if (alpha_ < 1.0) wall += (1.0 - alpha_) * free(ex.x_f, specular_reflect(v));
    if (alpha_ > 0.0) wall += alpha_ * (d == 1 ? wall_average_ : boundary_average(ex.x_f));
    return acc + damp * wall;
}

double resolvent_phi_eps(const TestFunction& psi, const Vec& x, const Vec& v, const OperatorContext& ctx,
                         double eps, double alpha) {
    return Resolvent(psi, ctx, eps, alpha)(x, v);
}

}  // namespace fraclimit
