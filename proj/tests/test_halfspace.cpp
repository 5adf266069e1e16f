#include <gtest/gtest.h>

#include <cmath>

#include "fraclimit/errors.hpp"
#include "fraclimit/halfspace.hpp"

using namespace fraclimit;

namespace {

Equilibrium default_eq(int d = 1) {
    ModelParams p;
    p.d = d;
    p.s = 0.75;
    return make_default_equilibrium(p);
}

}  // namespace

TEST(Exit, OneDimensional) {
    ExitRecord r = exit(vec1(0.5), vec1(-1.0));
    ASSERT_TRUE(r.finite());
    EXPECT_DOUBLE_EQ(r.tau_f, 0.5);
    EXPECT_DOUBLE_EQ(r.x_f[0], 0.0);
    EXPECT_FALSE(exit(vec1(0.5), vec1(1.0)).finite());
}

TEST(Exit, TwoDimensional) {
    ExitRecord r = exit(vec2(0.0, 2.0), vec2(1.0, -4.0));
    ASSERT_TRUE(r.finite());
    EXPECT_DOUBLE_EQ(r.tau_f, 0.5);
    EXPECT_DOUBLE_EQ(r.x_f[0], 0.5);
    EXPECT_DOUBLE_EQ(r.x_f[1], 0.0);
    EXPECT_FALSE(exit(vec2(3.0, 1.0), vec2(5.0, 0.0)).finite());
}

TEST(Exit, ScaledAndErrors) {
    ExitRecord r = exit_scaled(vec1(0.5), vec1(-1.0), 0.1);
    EXPECT_DOUBLE_EQ(r.tau_f, 5.0);
    EXPECT_THROW(exit(vec1(-0.1), vec1(1.0)), ConfigError);
    EXPECT_THROW(exit(vec1(0.0), vec1(0.0)), ConfigError);
    EXPECT_DOUBLE_EQ(exit(vec1(0.0), vec1(-2.0)).tau_f, 0.0);
}

TEST(Exit, ExitTimeDerivative) {
    // d tau_f / d x_d = 1 / |v_d| by finite differences.
    const Vec v = vec2(0.3, -1.7);
    const double h = 1e-6;
    const double a = exit(vec2(0.0, 1.0 + h), v).tau_f, b = exit(vec2(0.0, 1.0 - h), v).tau_f;
    EXPECT_NEAR((a - b) / (2 * h), 1.0 / 1.7, 1e-8);
}

TEST(Reflect, Specular) {
    Vec r = specular_reflect(vec2(1.0, -3.0));
    EXPECT_DOUBLE_EQ(r[0], 1.0);
    EXPECT_DOUBLE_EQ(r[1], 3.0);
    Vec r1 = specular_reflect(vec1(-2.0));
    EXPECT_DOUBLE_EQ(r1[0], 2.0);
}

TEST(Eta, MirrorsEndpoint) {
    EXPECT_DOUBLE_EQ(eta(vec1(0.5), vec1(-1.2))[0], 0.7);
    EXPECT_DOUBLE_EQ(eta(vec1(0.5), vec1(1.2))[0], 1.7);
    Vec y = eta(vec2(1.0, 0.5), vec2(2.0, -2.0));
    EXPECT_DOUBLE_EQ(y[0], 3.0);
    EXPECT_DOUBLE_EQ(y[1], 1.5);
}

TEST(Advect, SpecularExample) {
    AdvectResult r = advect_with_reflection(vec1(0.5), vec1(-1.0), 1.2, WallRule::specular());
    EXPECT_NEAR(r.x[0], 0.7, 1e-15);
    EXPECT_DOUBLE_EQ(r.v[0], 1.0);
    EXPECT_EQ(r.hits, 1);
}

TEST(Advect, ZeroDuration) {
    AdvectResult r = advect_with_reflection(vec1(0.5), vec1(-1.0), 0.0, WallRule::specular());
    EXPECT_DOUBLE_EQ(r.x[0], 0.5);
    EXPECT_DOUBLE_EQ(r.v[0], -1.0);
    EXPECT_EQ(r.hits, 0);
}

TEST(Advect, AgreesWithEta) {
    for (double x : {0.1, 1.0, 3.0})
        for (double w : {-5.0, -0.5, 0.2, 4.0}) {
            AdvectResult r = advect_with_reflection(vec1(x), vec1(w), 1.0, WallRule::specular());
            EXPECT_NEAR(r.x[0], eta(vec1(x), vec1(w))[0], 1e-14);
        }
}

TEST(Advect, FarMirrorBouncesBetweenWalls) {
    WallRule rule = WallRule::specular();
    rule.far_wall = 1.0;
    // From 0.25 at speed 1 for 3.5: 0.25 -> 1 -> 0 -> 1 -> 0.25. Only the wall at 0 counts as a hit.
    AdvectResult r = advect_with_reflection(vec1(0.25), vec1(1.0), 3.5, rule);
    EXPECT_NEAR(r.x[0], 0.25, 1e-14);
    EXPECT_DOUBLE_EQ(r.v[0], -1.0);
    EXPECT_EQ(r.hits, 1);
}

TEST(Advect, TangentialMotionKept) {
    AdvectResult r = advect_with_reflection(vec2(0.0, 1.0), vec2(2.0, -1.0), 3.0, WallRule::specular());
    EXPECT_NEAR(r.x[0], 6.0, 1e-14);
    EXPECT_NEAR(r.x[1], 2.0, 1e-14);
    EXPECT_EQ(r.hits, 1);
}

TEST(Advect, DiffuseReemitsInward) {
    Equilibrium eq = default_eq();
    RandomStream re(5, 0);
    WallRule rule = WallRule::diffuse(eq, re);
    for (int i = 0; i < 1000; ++i) {
        AdvectResult r = advect_with_reflection(vec1(0.1), vec1(-1.0), 0.1 + 1e-9, rule);
        ASSERT_EQ(r.hits, 1);
        ASSERT_GT(r.v[0], 0.0);
        ASSERT_GE(r.x[0], 0.0);
    }
}

TEST(Advect, MaxwellLimits) {
    Equilibrium eq = default_eq();
    // alpha = 0: identical to specular, whatever the streams hold.
    RandomStream b0(1, 0), e0(1, 1);
    WallRule m0 = WallRule::maxwell(0.0, eq, b0, e0);
    AdvectResult a = advect_with_reflection(vec1(0.3), vec1(-2.0), 1.0, m0);
    AdvectResult s = advect_with_reflection(vec1(0.3), vec1(-2.0), 1.0, WallRule::specular());
    EXPECT_EQ(a.x[0], s.x[0]);
    EXPECT_EQ(a.v[0], s.v[0]);
    // alpha = 1: identical to diffuse with the same re-emission stream.
    RandomStream b1(2, 0), e1(2, 1), e2(2, 1);
    WallRule m1 = WallRule::maxwell(1.0, eq, b1, e1);
    WallRule d1 = WallRule::diffuse(eq, e2);
    for (int i = 0; i < 100; ++i) {
        AdvectResult p = advect_with_reflection(vec1(0.3), vec1(-2.0), 1.0, m1);
        AdvectResult q = advect_with_reflection(vec1(0.3), vec1(-2.0), 1.0, d1);
        EXPECT_EQ(p.x[0], q.x[0]);
        EXPECT_EQ(p.v[0], q.v[0]);
    }
}

TEST(Advect, MaxwellDiffuseFraction) {
    Equilibrium eq = default_eq();
    RandomStream b(3, 0), e(3, 1);
    const double alpha = 0.3;
    WallRule m = WallRule::maxwell(alpha, eq, b, e);
    const int n = 100000;
    int specular = 0;
    for (int i = 0; i < n; ++i) {
        AdvectResult r = advect_with_reflection(vec1(0.5), vec1(-1.0), 0.5 + 1e-9, m);
        specular += r.v[0] == 1.0;
    }
    EXPECT_NEAR(double(specular) / n, 1 - alpha, 4.0 * std::sqrt(alpha * (1 - alpha) / n));
}

TEST(HalfSpace, NormalAndContainment) {
    HalfSpace h{2};
    Vec n = h.outward_normal();
    EXPECT_DOUBLE_EQ(n[0], 0.0);
    EXPECT_DOUBLE_EQ(n[1], -1.0);
    EXPECT_TRUE(h.contains(vec2(-5.0, 0.1)));
    EXPECT_FALSE(h.contains(vec2(5.0, 0.0)));
}
