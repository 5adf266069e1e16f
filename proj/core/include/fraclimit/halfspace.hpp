#pragma once

#include <limits>

#include "fraclimit/model.hpp"
#include "fraclimit/random.hpp"
#include "fraclimit/types.hpp"

namespace fraclimit {

//! The half-space {x_d > 0} with outward normal (0, ..., 0, -1).
struct HalfSpace {
    int d = 1;

    Vec outward_normal() const {
        Vec n = Vec::Zero(d);
        n[d - 1] = -1.0;
        return n;
    }
    bool contains(const Vec& x) const { return x[d - 1] > 0.0; }
};

struct ExitRecord {
    double tau_f = std::numeric_limits<double>::infinity();
    Vec x_f;  // valid only when tau_f is finite
    bool finite() const { return tau_f < std::numeric_limits<double>::infinity(); }
};

//! Forward exit time and point of the ray x + t v.
ExitRecord exit(const Vec& x, const Vec& v);
//! Exit record of the ray with velocity eps * v.
ExitRecord exit_scaled(const Vec& x, const Vec& v, double eps);

//! (v', -v_d).
Vec specular_reflect(const Vec& v);

//! Mirror-reflected endpoint of x + w.
Vec eta(const Vec& x, const Vec& w);

struct WallRule {
    enum class Kind { Specular, Diffuse, Maxwell };
    Kind kind = Kind::Specular;
    double alpha = 0.0;
    const Equilibrium* eq = nullptr;       // needed for diffuse draws
    RandomStream* bernoulli = nullptr;     // maxwell choice, one draw per hit
    RandomStream* reemission = nullptr;    // diffuse velocity draws
    //! Optional specular mirror at x_d = far_wall (stationary tests only).
    double far_wall = std::numeric_limits<double>::infinity();

    static WallRule specular() { return {}; }
    static WallRule diffuse(const Equilibrium& eq, RandomStream& re);
    static WallRule maxwell(double alpha, const Equilibrium& eq, RandomStream& bern, RandomStream& re);
};

struct AdvectResult {
    Vec x;
    Vec v;
    int hits = 0;
};

//! Straight-line motion x + t v for the given duration, applying the wall rule at
//! every crossing of x_d = 0 and continuing with the residual duration.
AdvectResult advect_with_reflection(const Vec& x, const Vec& v, double duration, const WallRule& rule);

}  // namespace fraclimit
