#include "fraclimit/halfspace.hpp"

#include <cmath>

#include "fraclimit/errors.hpp"

namespace fraclimit {

ExitRecord exit(const Vec& x, const Vec& v) {
    const int d = static_cast<int>(x.size());
    const double xd = x[d - 1], vd = v[d - 1];
    if (xd < 0.0) throw ConfigError("exit: point lies outside the half-space");
    if (xd == 0.0 && vd == 0.0) throw ConfigError("exit: grazing velocity on the boundary");
    ExitRecord rec;
    if (vd < 0.0) {
        rec.tau_f = xd / (-vd);
        rec.x_f = x + rec.tau_f * v;
        rec.x_f[d - 1] = 0.0;
    }
    return rec;
}

ExitRecord exit_scaled(const Vec& x, const Vec& v, double eps) { return exit(x, Vec(eps * v)); }

Vec specular_reflect(const Vec& v) {
    Vec r = v;
    r[r.size() - 1] = -r[r.size() - 1];
    return r;
}

Vec eta(const Vec& x, const Vec& w) {
    Vec y = x + w;
    const int d = static_cast<int>(y.size());
    if (y[d - 1] <= 0.0) y[d - 1] = -y[d - 1];
    return y;
}

WallRule WallRule::diffuse(const Equilibrium& eq, RandomStream& re) {
    WallRule r;
    r.kind = Kind::Diffuse;
    r.alpha = 1.0;
    r.eq = &eq;
    r.reemission = &re;
    return r;
}

WallRule WallRule::maxwell(double alpha, const Equilibrium& eq, RandomStream& bern, RandomStream& re) {
    WallRule r;
    r.kind = Kind::Maxwell;
    r.alpha = alpha;
    r.eq = &eq;
    r.bernoulli = &bern;
    r.reemission = &re;
    return r;
}

AdvectResult advect_with_reflection(const Vec& x0, const Vec& v0, double duration, const WallRule& rule) {
    AdvectResult res{x0, v0, 0};
    Vec& x = res.x;
    Vec& v = res.v;
    const int d = static_cast<int>(x.size());
    double left = duration;
    while (left > 0.0) {
        const double vd = v[d - 1];
        double t_hit = std::numeric_limits<double>::infinity();
        bool far = false;
        if (vd < 0.0) {
            t_hit = x[d - 1] / (-vd);
        } else if (vd > 0.0 && std::isfinite(rule.far_wall)) {
            t_hit = (rule.far_wall - x[d - 1]) / vd;
            far = true;
        }
        if (!(t_hit < left)) {
            x += left * v;
            if (x[d - 1] < 0.0) x[d - 1] = 0.0;  // rounding at a grazing end point
            break;
        }
        x += t_hit * v;
        left -= t_hit;
        if (far) {
            x[d - 1] = rule.far_wall;
            v[d - 1] = -v[d - 1];
            continue;
        }
        x[d - 1] = 0.0;
        ++res.hits;
        bool diffuse = false;
        switch (rule.kind) {
            case WallRule::Kind::Specular: break;
            case WallRule::Kind::Diffuse: diffuse = true; break;
            case WallRule::Kind::Maxwell: diffuse = rule.bernoulli->uniform() < rule.alpha; break;
        }
        if (diffuse) {
            Vec n = Vec::Zero(d);
            n[d - 1] = -1.0;
            v = rule.eq->sample_diffuse_velocity(n, *rule.reemission);
        } else {
            v[d - 1] = -v[d - 1];
        }
    }
    return res;
}

}  // namespace fraclimit
