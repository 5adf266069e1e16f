#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fraclimit/errors.hpp"
#include "fraclimit/kinetic.hpp"
#include "oracles.hpp"

using namespace fraclimit;

namespace {

ModelParams params_1d(double eps, double alpha = 0.0) {
    ModelParams p;
    p.d = 1;
    p.s = 0.75;
    p.eps = eps;
    p.alpha = alpha;
    return p;
}

double mean_stderr(const DensityField& f) {
    double sum = 0;
    int n = 0;
    for (std::size_t k = 0; k < f.values.size(); ++k)
        if (f.values[k] > 0) {
            sum += f.std_err[k];
            ++n;
        }
    return sum / n;
}

// Two-sample KS distance.
double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
    }
    return d;
}

}  // namespace

TEST(Init, RejectsEmptyEnsemble) {
    ModelParams p = params_1d(0.1);
    Equilibrium eq = make_default_equilibrium(p);
    EXPECT_THROW(init_ensemble(point_mass(vec1(1.0)), 0, p, eq, 1), ConfigError);
}

TEST(Init, PointMass) {
    ModelParams p = params_1d(0.1);
    Equilibrium eq = make_default_equilibrium(p);
    ParticleEnsemble ens = init_ensemble(point_mass(vec1(1.25)), 1000, p, eq, 1);
    for (std::size_t i = 0; i < ens.n; ++i) EXPECT_EQ(ens.position(i)[0], 1.25);
}

TEST(Init, HistogramWithinPoissonBands) {
    ModelParams p = params_1d(0.1);
    Equilibrium eq = make_default_equilibrium(p);
    const std::size_t n = 200000;
    InitialProfile prof = gaussian_profile(vec1(1.0), 0.6);
    ParticleEnsemble ens = init_ensemble(prof, n, p, eq, 3);
    GridSpec grid = uniform_grid_1d(0.0, 4.0, 40);
    DensityField f = density(ens, grid);
    // The profile is truncated at the wall and renormalized by P(X > 0).
    const double inside = 0.5 * std::erfc(-1.0 / (0.6 * std::sqrt(2.0)));
    for (int b = 0; b < 40; ++b) {
        const double lo = 0.1 * b, hi = lo + 0.1;
        const double pb = oracle::gaussian_bin_mean(lo, hi, 1.0, 0.6) * 0.1 /
                          (0.6 * std::sqrt(2 * M_PI) * inside);
        const double count = f.values[b] * 0.1 * n;
        EXPECT_NEAR(count, n * pb, 4.0 * std::sqrt(n * pb * (1 - pb)) + 1.0) << "bin " << b;
    }
}

TEST(Density, SingleParticle) {
    ModelParams p = params_1d(0.1);
    Equilibrium eq = make_default_equilibrium(p);
    ParticleEnsemble ens = init_ensemble(point_mass(vec1(0.37)), 1, p, eq, 1);
    GridSpec grid = uniform_grid_1d(0.0, 1.0, 20);
    DensityField f = density(ens, grid);
    for (int b = 0; b < 20; ++b) EXPECT_DOUBLE_EQ(f.values[b], b == 7 ? 20.0 : 0.0);
    EXPECT_DOUBLE_EQ(f.window_mass(), 1.0);
}

TEST(Density, MassAccountsForWindow) {
    ModelParams p = params_1d(0.1);
    Equilibrium eq = make_default_equilibrium(p);
    ParticleEnsemble ens = init_ensemble(gaussian_profile(vec1(2.0), 0.5), 50000, p, eq, 4);
    run(ens, eq, 0.5, {}, uniform_grid_1d(0, 8, 80));
    DensityField f = density(ens, uniform_grid_1d(0.0, 8.0, 80));
    EXPECT_NEAR(f.window_mass() + f.out_of_window, 1.0, 1e-12);
    EXPECT_GT(f.out_of_window, 0.0);
}

TEST(Density, StandardErrorScaling) {
    // The standard error of a bin estimate scales as N^{-1/2}: four times the
    // particles halve it.
    ModelParams p = params_1d(0.1);
    Equilibrium eq = make_default_equilibrium(p);
    GridSpec grid = uniform_grid_1d(0.0, 4.0, 20);
    InitialProfile prof = gaussian_profile(vec1(2.0), 0.5);
    const double se1 = mean_stderr(density(init_ensemble(prof, 25000, p, eq, 5), grid));
    const double se4 = mean_stderr(density(init_ensemble(prof, 100000, p, eq, 6), grid));
    EXPECT_NEAR(se1 / se4, 2.0, 0.2 * 2.0);
}

TEST(Run, ScatteringCountIsPoisson) {
    const double t = 0.5;
    for (double eps : {0.2, 0.1}) {
        ModelParams p = params_1d(eps);
        p.nu0 = 1.5;
        Equilibrium eq = make_default_equilibrium(p);
        const std::size_t n = 20000;
        ParticleEnsemble ens = init_ensemble(gaussian_profile(vec1(2.0), 0.5), n, p, eq, 8);
        run(ens, eq, t, {}, uniform_grid_1d(0, 8, 8));
        const double mean = n * p.nu0 * t * std::pow(eps, -2 * p.s);
        EXPECT_NEAR(double(ens.scatterings), mean, 4.0 * std::sqrt(mean)) << "eps=" << eps;
    }
}

TEST(Run, ScatteringScalingLaw) {
    std::vector<double> per;
    for (double eps : {0.1, 0.05}) {
        ModelParams p = params_1d(eps);
        Equilibrium eq = make_default_equilibrium(p);
        const std::size_t n = 100000;
        ParticleEnsemble ens = init_ensemble(gaussian_profile(vec1(2.0), 0.5), n, p, eq, 9);
        run(ens, eq, 0.2, {}, uniform_grid_1d(0, 8, 8));
        per.push_back(double(ens.scatterings) / n);
    }
    EXPECT_NEAR(per[1] / per[0], std::pow(2.0, 1.5), 0.02 * std::pow(2.0, 1.5));
}

TEST(Run, ParticlesStayInHalfSpace) {
    for (double alpha : {0.0, 0.5, 1.0}) {
        ModelParams p = params_1d(0.1, alpha);
        Equilibrium eq = make_default_equilibrium(p);
        ParticleEnsemble ens = init_ensemble(gaussian_profile(vec1(0.5), 0.5), 20000, p, eq, 10);
        run(ens, eq, 0.5, {0.25, 0.5}, uniform_grid_1d(0, 8, 8));
        EXPECT_GT(ens.wall_hits, 0u);
        for (std::size_t i = 0; i < ens.n; ++i) ASSERT_GE(ens.x[i], 0.0);
        EXPECT_DOUBLE_EQ(ens.t, 0.5);
    }
}

TEST(Run, DeterministicAcrossWorkersAndRuns) {
    ModelParams p = params_1d(0.1, 0.5);
    Equilibrium eq = make_default_equilibrium(p);
    GridSpec grid = uniform_grid_1d(0, 8, 40);
    auto go = [&](int workers) {
        ParticleEnsemble ens = init_ensemble(gaussian_profile(vec1(2.0), 0.5), 20000, p, eq, 11);
        RunOptions opt;
        opt.workers = workers;
        auto f = run(ens, eq, 0.5, {0.1, 0.5}, grid, opt);
        return std::make_pair(f, ens);
    };
    auto [f1, e1] = go(1);
    auto [f2, e2] = go(1);
    auto [f3, e3] = go(3);
    ASSERT_EQ(f1.size(), 2u);
    for (std::size_t k = 0; k < f1.size(); ++k) {
        EXPECT_EQ(f1[k].values, f2[k].values);
        EXPECT_EQ(f1[k].values, f3[k].values);
        EXPECT_EQ(f1[k].t, f3[k].t);
    }
    EXPECT_EQ(e1.x, e3.x);
    EXPECT_EQ(e1.v, e3.v);
    EXPECT_EQ(e1.scatterings, e3.scatterings);
    EXPECT_EQ(e1.wall_hits, e3.wall_hits);
}

TEST(Run, SnapshotsSplitWithoutChangingPaths) {
    // Stopping at snapshot times does not alter the trajectories.
    ModelParams p = params_1d(0.1, 0.5);
    Equilibrium eq = make_default_equilibrium(p);
    GridSpec grid = uniform_grid_1d(0, 8, 40);
    ParticleEnsemble a = init_ensemble(gaussian_profile(vec1(2.0), 0.5), 5000, p, eq, 12);
    ParticleEnsemble b = a;
    run(a, eq, 0.5, {}, grid);
    run(b, eq, 0.2, {0.1}, grid);
    run(b, eq, 0.5, {0.3}, grid);
    for (std::size_t i = 0; i < a.n; ++i) ASSERT_NEAR(a.x[i], b.x[i], 1e-9 * (1 + std::abs(a.x[i])));
    EXPECT_EQ(a.scatterings, b.scatterings);
}

TEST(Run, MaxwellLimitsArePathwiseIdentical) {
    GridSpec grid = uniform_grid_1d(0, 8, 40);
    auto go = [&](double alpha, WallRule::Kind kind) {
        ModelParams p = params_1d(0.1, alpha);
        Equilibrium eq = make_default_equilibrium(p);
        ParticleEnsemble ens = init_ensemble(gaussian_profile(vec1(0.5), 0.5), 5000, p, eq, 13);
        RunOptions opt;
        opt.wall = kind;
        run(ens, eq, 0.3, {}, grid, opt);
        return ens;
    };
    EXPECT_EQ(go(0.0, WallRule::Kind::Maxwell).x, go(0.0, WallRule::Kind::Specular).x);
    EXPECT_EQ(go(1.0, WallRule::Kind::Maxwell).x, go(1.0, WallRule::Kind::Diffuse).x);
    EXPECT_NE(go(0.0, WallRule::Kind::Specular).x, go(1.0, WallRule::Kind::Diffuse).x);
}

TEST(Run, FarFromWallIgnoresTheRule) {
    // eps = 1, short time, start far from the wall: positions under the specular
    // and diffuse rules are indistinguishable.
    GridSpec grid = uniform_grid_1d(40, 60, 40);
    std::vector<double> pos[2];
    int k = 0;
    for (double alpha : {0.0, 1.0}) {
        ModelParams p = params_1d(1.0, alpha);
        Equilibrium eq = make_default_equilibrium(p);
        ParticleEnsemble ens = init_ensemble(point_mass(vec1(50.0)), 20000, p, eq, 14 + k);
        run(ens, eq, 0.05, {}, grid);
        pos[k++] = ens.x;
    }
    const double n = 20000;
    EXPECT_LT(ks_two_sample(pos[0], pos[1]), 1.63 * std::sqrt(2.0 / n));
}

TEST(Run, StationarySlabKeepsEquilibrium) {
    const double L = 2.0;
    ModelParams p = params_1d(0.5, 0.5);
    Equilibrium eq = make_default_equilibrium(p);
    const std::size_t n = 100000;
    ParticleEnsemble ens = init_ensemble(uniform_slab(1, L), n, p, eq, 15);
    RunOptions opt;
    opt.far_wall = L;
    auto f = run(ens, eq, 1.0, {1.0}, uniform_grid_1d(0, L, 10), opt);
    EXPECT_GT(ens.wall_hits, 0u);
    EXPECT_LT(ks_velocity(ens, eq), ks_critical(n, 1e-3));
    // The uniform density is stationary too.
    for (int b = 0; b < 10; ++b) EXPECT_NEAR(f[0].values[b], 1.0 / L, 4.0 * f[0].std_err[b]);
    for (std::size_t i = 0; i < n; ++i) ASSERT_LE(ens.x[i], L);
}

TEST(Run, DisequilibriumSmallForWellPreparedData) {
    ModelParams p = params_1d(0.1);
    Equilibrium eq = make_default_equilibrium(p);
    ParticleEnsemble ens = init_ensemble(gaussian_profile(vec1(2.0), 0.5), 50000, p, eq, 16);
    const double d0 = velocity_disequilibrium(ens, eq);
    EXPECT_TRUE(std::isfinite(d0));
    EXPECT_LT(d0, 0.05);
    // A non-equilibrium marginal is detected.
    for (std::size_t i = 0; i < ens.n; ++i) ens.v[i] = 1.0;
    EXPECT_GT(velocity_disequilibrium(ens, eq), 10 * d0);
    EXPECT_GT(ks_velocity(ens, eq), 0.5);
}

TEST(Run, RejectsBadTimes) {
    ModelParams p = params_1d(0.1);
    Equilibrium eq = make_default_equilibrium(p);
    ParticleEnsemble ens = init_ensemble(point_mass(vec1(1.0)), 10, p, eq, 1);
    GridSpec grid = uniform_grid_1d(0, 8, 8);
    run(ens, eq, 0.5, {}, grid);
    EXPECT_THROW(run(ens, eq, 0.4, {}, grid), ConfigError);
    EXPECT_THROW(run(ens, eq, 0.6, {0.7}, grid), ConfigError);
}

TEST(Profile, FromFieldSamplesHistogram) {
    DensityField f = zero_field(uniform_grid_1d(0.0, 2.0, 2));
    f.values = {3.0, 1.0};
    InitialProfile prof = profile_from_field(f);
    RandomStream r(1, 0);
    int left = 0;
    const int n = 40000;
    for (int i = 0; i < n; ++i) left += prof.sample(r)[0] < 1.0;
    EXPECT_NEAR(double(left) / n, 0.75, 4.0 * std::sqrt(0.75 * 0.25 / n));
    EXPECT_DOUBLE_EQ(prof.density(vec1(0.5)), 0.75);
    f.values = {0.0, 0.0};
    EXPECT_THROW(profile_from_field(f), ConfigError);
}

TEST(Ks, CriticalValue) {
    EXPECT_NEAR(ks_critical(100000, 1e-3), std::sqrt(-std::log(5e-4) / 2) / std::sqrt(1e5), 1e-15);
}
