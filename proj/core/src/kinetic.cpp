#include "fraclimit/kinetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fraclimit/errors.hpp"
#include "fraclimit/parallel.hpp"

namespace fraclimit {

namespace {

double std_normal(RandomStream& rng) {
    // Box-Muller, one value per call keeps the stream usage fixed.
    double u1 = rng.uniform(), u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

InitialProfile gaussian_profile(const Vec& center, double sigma) {
    if (!(sigma > 0.0)) throw ConfigError("gaussian profile needs sigma > 0");
    const int d = static_cast<int>(center.size());
    if (center[d - 1] < 0.0) throw ConfigError("gaussian profile centered outside the half-space");
    InitialProfile p;
    p.id = "gaussian";
    p.d = d;
    p.sample = [center, sigma, d](RandomStream& rng) {
        Vec x(d);
        do {
            for (int a = 0; a < d; ++a) x[a] = center[a] + sigma * std_normal(rng);
        } while (!(x[d - 1] > 0.0));
        return x;
    };
    const double inside = 0.5 * std::erfc(-center[d - 1] / (sigma * std::numbers::sqrt2));
    const double norm = 1.0 / (std::pow(2.0 * std::numbers::pi * sigma * sigma, 0.5 * d) * inside);
    p.density = [center, sigma, norm, d](const Vec& x) {
        if (x[d - 1] < 0.0) return 0.0;
        return norm * std::exp(-(x - center).squaredNorm() / (2.0 * sigma * sigma));
    };
    return p;
}

InitialProfile point_mass(const Vec& x0) {
    const int d = static_cast<int>(x0.size());
    if (x0[d - 1] < 0.0) throw ConfigError("point mass outside the half-space");
    InitialProfile p;
    p.id = "point";
    p.d = d;
    p.sample = [x0](RandomStream&) { return x0; };
    return p;
}

InitialProfile uniform_slab(int d, double L) {
    if (!(L > 0.0)) throw ConfigError("uniform slab needs L > 0");
    InitialProfile p;
    p.id = "uniform";
    p.d = d;
    p.sample = [d, L](RandomStream& rng) {
        Vec x(d);
        for (int a = 0; a + 1 < d; ++a) x[a] = L * (rng.uniform() - 0.5);
        x[d - 1] = L * rng.uniform();
        return x;
    };
    p.density = [d, L](const Vec& x) {
        for (int a = 0; a + 1 < d; ++a)
            if (std::abs(x[a]) > 0.5 * L) return 0.0;
        return (x[d - 1] >= 0.0 && x[d - 1] <= L) ? std::pow(L, -d) : 0.0;
    };
    return p;
}

InitialProfile profile_from_field(const DensityField& field) {
    if (field.grid.dim() != 1) throw ConfigError("profile_from_field supports d = 1 only");
    std::vector<double> cum{0.0};
    for (double v : field.values) {
        if (v < 0.0) throw ConfigError("initial density must be nonnegative");
        cum.push_back(cum.back() + v);
    }
    if (!(cum.back() > 0.0)) throw ConfigError("initial density has zero mass");
    const double lo = field.grid.lower[0], w = field.grid.width(0);
    if (lo < 0.0) throw ConfigError("initial density window extends outside the half-space");
    InitialProfile p;
    p.id = "field";
    p.d = 1;
    p.sample = [cum, lo, w](RandomStream& rng) {
        double m = rng.uniform() * cum.back();
        std::size_t k = std::upper_bound(cum.begin(), cum.end(), m) - cum.begin() - 1;
        k = std::min(k, cum.size() - 2);
        double f = (m - cum[k]) / std::max(cum[k + 1] - cum[k], 1e-300);
        return vec1(lo + (k + f) * w);
    };
    const double total = cum.back() * w;
    p.density = [field, total](const Vec& x) {
        long k = field.grid.locate(x);
        return k < 0 ? 0.0 : field.values[k] / total;
    };
    return p;
}

Vec ParticleEnsemble::position(std::size_t i) const {
    const int d = dim();
    return Eigen::Map<const Eigen::VectorXd>(&x[i * d], d);
}

Vec ParticleEnsemble::velocity(std::size_t i) const {
    const int d = dim();
    return Eigen::Map<const Eigen::VectorXd>(&v[i * d], d);
}

ParticleEnsemble init_ensemble(const InitialProfile& rho_in, std::size_t n, const ModelParams& params,
                               const Equilibrium& eq, std::uint64_t seed) {
    params.validate();
    if (n == 0) throw ConfigError("particle count must be at least 1");
    if (rho_in.d != params.d) throw ConfigError("initial profile dimension does not match d");
    if (!rho_in.sample) throw ConfigError("initial profile has no sampler");
    const int d = params.d;
    ParticleEnsemble ens;
    ens.params = params;
    ens.seed = seed;
    ens.n = n;
    ens.x.resize(n * d);
    ens.v.resize(n * d);
    ens.next_event.resize(n);
    ens.pos_scatter.assign(n, 0);
    ens.pos_choice.assign(n, 0);
    ens.pos_emit.assign(n, 0);
    const double rate = params.nu0 * std::pow(params.eps, -2.0 * params.s);
    for (std::size_t i = 0; i < n; ++i) {
        RandomStream init(seed, i, kInit);
        Vec x = rho_in.sample(init);
        if (x[d - 1] < 0.0) throw ConfigError("initial sampler produced a point outside the half-space");
        Vec v = eq.sample_velocity(init);
        for (int a = 0; a < d; ++a) {
            ens.x[i * d + a] = x[a];
            ens.v[i * d + a] = v[a];
        }
        RandomStream sc(seed, i, kScatter);
        ens.next_event[i] = sc.exponential() / rate;
        ens.pos_scatter[i] = sc.position();
    }
    return ens;
}

std::vector<DensityField> run(ParticleEnsemble& ens, const Equilibrium& eq, double t_end,
                              const std::vector<double>& snapshot_times, const GridSpec& grid,
                              const RunOptions& opt) {
    if (t_end < ens.t) throw ConfigError("t_end precedes the ensemble time");
    std::vector<double> snaps = snapshot_times;
    std::sort(snaps.begin(), snaps.end());
    for (double s : snaps)
        if (s < ens.t || s > t_end) throw ConfigError("snapshot time outside [t, t_end]");
    if (grid.dim() != ens.dim()) throw ConfigError("grid dimension does not match the ensemble");

    const ModelParams& p = ens.params;
    const int d = p.d;
    const double rate = p.nu0 * std::pow(p.eps, -2.0 * p.s);
    const double speed = std::pow(p.eps, 1.0 - 2.0 * p.s);
    const std::size_t nbins = grid.size();
    const int nb = blocks_for(ens.n, opt.workers);

    // Per-block integer histograms; merged by summation (order independent).
    std::vector<std::vector<std::uint64_t>> counts(nb, std::vector<std::uint64_t>(snaps.size() * nbins, 0));
    std::vector<std::vector<std::uint64_t>> outside(nb, std::vector<std::uint64_t>(snaps.size(), 0));
    std::vector<std::uint64_t> scat(nb, 0), hits(nb, 0);

    parallel_blocks(ens.n, opt.workers, [&](std::size_t lo, std::size_t hi, int b) {
        for (std::size_t i = lo; i < hi; ++i) {
            RandomStream sc(ens.seed, i, kScatter, ens.pos_scatter[i]);
            RandomStream ch(ens.seed, i, kChoice, ens.pos_choice[i]);
            RandomStream em(ens.seed, i, kEmit, ens.pos_emit[i]);
            WallRule rule;
            switch (opt.wall) {
                case WallRule::Kind::Specular: rule = WallRule::specular(); break;
                case WallRule::Kind::Diffuse: rule = WallRule::diffuse(eq, em); break;
                case WallRule::Kind::Maxwell: rule = WallRule::maxwell(p.alpha, eq, ch, em); break;
            }
            rule.far_wall = opt.far_wall;
            Vec x = Eigen::Map<const Eigen::VectorXd>(&ens.x[i * d], d);
            Vec v = Eigen::Map<const Eigen::VectorXd>(&ens.v[i * d], d);
            double t = ens.t;
            double te = ens.next_event[i];
            auto advance_to = [&](double target) {
                while (te <= target) {
                    AdvectResult r = advect_with_reflection(x, v, speed * (te - t), rule);
                    x = r.x;
                    hits[b] += r.hits;
                    t = te;
                    v = eq.sample_velocity(sc);
                    te = t + sc.exponential() / rate;
                    ++scat[b];
                }
                AdvectResult r = advect_with_reflection(x, v, speed * (target - t), rule);
                x = r.x;
                v = r.v;
                hits[b] += r.hits;
                t = target;
            };
            for (std::size_t k = 0; k < snaps.size(); ++k) {
                advance_to(snaps[k]);
                long idx = grid.locate(x);
                if (idx < 0) ++outside[b][k];
                else ++counts[b][k * nbins + idx];
            }
            advance_to(t_end);
            for (int a = 0; a < d; ++a) {
                ens.x[i * d + a] = x[a];
                ens.v[i * d + a] = v[a];
            }
            ens.next_event[i] = te;
            ens.pos_scatter[i] = sc.position();
            ens.pos_choice[i] = ch.position();
            ens.pos_emit[i] = em.position();
        }
    });

    std::vector<DensityField> out;
    const double vol = grid.bin_volume();
    const double n = static_cast<double>(ens.n);
    for (std::size_t k = 0; k < snaps.size(); ++k) {
        DensityField f = zero_field(grid, snaps[k]);
        std::uint64_t out_k = 0;
        for (int b = 0; b < nb; ++b) out_k += outside[b][k];
        for (std::size_t j = 0; j < nbins; ++j) {
            std::uint64_t c = 0;
            for (int b = 0; b < nb; ++b) c += counts[b][k * nbins + j];
            f.values[j] = c / (n * vol);
            f.std_err[j] = std::sqrt(static_cast<double>(c)) / (n * vol);
        }
        f.out_of_window = out_k / n;
        out.push_back(std::move(f));
    }
    for (int b = 0; b < nb; ++b) {
        ens.scatterings += scat[b];
        ens.wall_hits += hits[b];
    }
    ens.t = t_end;
    return out;
}

DensityField density(const ParticleEnsemble& ens, const GridSpec& grid) {
    if (grid.dim() != ens.dim()) throw ConfigError("grid dimension does not match the ensemble");
    DensityField f = zero_field(grid, ens.t);
    std::vector<std::uint64_t> c(grid.size(), 0);
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < ens.n; ++i) {
        long idx = grid.locate(ens.position(i));
        if (idx < 0) ++out;
        else ++c[idx];
    }
    const double n = static_cast<double>(ens.n), vol = grid.bin_volume();
    for (std::size_t j = 0; j < c.size(); ++j) {
        f.values[j] = c[j] / (n * vol);
        f.std_err[j] = std::sqrt(static_cast<double>(c[j])) / (n * vol);
    }
    f.out_of_window = out / n;
    return f;
}

double velocity_disequilibrium(const ParticleEnsemble& ens, const Equilibrium& eq, double v_cut, int bins) {
    const int d = ens.dim();
    const double n = static_cast<double>(ens.n);
    double dist = 0.0;
    if (d == 1) {
        // Signed bins on [-v_cut, v_cut] plus two lumped tails.
        std::vector<double> emp(bins + 2, 0.0);
        const double w = 2.0 * v_cut / bins;
        for (std::size_t i = 0; i < ens.n; ++i) {
            double v = ens.v[i];
            int k = v < -v_cut ? 0 : (v >= v_cut ? bins + 1 : 1 + std::min(bins - 1, static_cast<int>((v + v_cut) / w)));
            emp[k] += 1.0 / n;
        }
        auto cdf = [&](double v) { return 0.5 + std::copysign(0.5 * eq.speed_cdf(std::abs(v)), v); };
        for (int k = 0; k < bins + 2; ++k) {
            double a = k == 0 ? -INFINITY : -v_cut + (k - 1) * w;
            double b = k == bins + 1 ? INFINITY : -v_cut + k * w;
            double pk = (std::isfinite(b) ? cdf(b) : 1.0) - (std::isfinite(a) ? cdf(a) : 0.0);
            if (pk > 0.0) dist += (emp[k] - pk) * (emp[k] - pk) / pk;
        }
        return dist;
    }
    std::vector<double> emp(bins + 1, 0.0);
    const double w = v_cut / bins;
    for (std::size_t i = 0; i < ens.n; ++i) {
        double r = ens.velocity(i).norm();
        int k = r >= v_cut ? bins : std::min(bins - 1, static_cast<int>(r / w));
        emp[k] += 1.0 / n;
    }
    for (int k = 0; k <= bins; ++k) {
        double pk = k == bins ? eq.speed_survival(v_cut) : eq.speed_cdf((k + 1) * w) - eq.speed_cdf(k * w);
        if (pk > 0.0) dist += (emp[k] - pk) * (emp[k] - pk) / pk;
    }
    return dist;
}

double ks_velocity(const ParticleEnsemble& ens, const Equilibrium& eq) {
    const int d = ens.dim();
    std::vector<double> s(ens.n);
    for (std::size_t i = 0; i < ens.n; ++i) s[i] = d == 1 ? ens.v[i] : ens.velocity(i).norm();
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(ens.n);
    double D = 0.0;
    for (std::size_t i = 0; i < ens.n; ++i) {
        double F = d == 1 ? 0.5 + std::copysign(0.5 * eq.speed_cdf(std::abs(s[i])), s[i])
                          : eq.speed_cdf(s[i]);
        D = std::max({D, std::abs((i + 1) / n - F), std::abs(F - i / n)});
    }
    return D;
}

double ks_critical(std::size_t n, double level) {
    return std::sqrt(-0.5 * std::log(0.5 * level)) / std::sqrt(static_cast<double>(n));
}

}  // namespace fraclimit
