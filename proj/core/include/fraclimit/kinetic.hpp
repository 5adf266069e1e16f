#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "fraclimit/density.hpp"
#include "fraclimit/halfspace.hpp"
#include "fraclimit/model.hpp"
#include "fraclimit/random.hpp"

namespace fraclimit {

//! Initial density rho_in: a sampler for positions and (optionally) the density.
struct InitialProfile {
    std::string id;
    int d = 1;
    std::function<Vec(RandomStream&)> sample;
    std::function<double(const Vec&)> density;  // normalized on the half-space
};

//! Gaussian bump exp(-|x-c|^2 / 2 sigma^2) restricted to the half-space and renormalized.
InitialProfile gaussian_profile(const Vec& center, double sigma);
InitialProfile point_mass(const Vec& x0);
//! Uniform on [0, L] in x_d (and on [-L/2, L/2] in each tangential coordinate).
InitialProfile uniform_slab(int d, double L);
//! Piecewise-constant profile from a histogram (d = 1).
InitialProfile profile_from_field(const DensityField& field);

//! Particle state in struct-of-arrays layout. Velocities are in the scale of F;
//! the rescaled dynamics move them at speed eps^{1-2s}.
struct ParticleEnsemble {
    ModelParams params;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    double t = 0.0;
    std::vector<double> x;           // n * d
    std::vector<double> v;           // n * d
    std::vector<double> next_event;  // macroscopic time of the next scattering
    // Stream positions per particle: scattering, Maxwell choice, re-emission.
    std::vector<std::uint64_t> pos_scatter, pos_choice, pos_emit;
    std::uint64_t scatterings = 0;
    std::uint64_t wall_hits = 0;

    int dim() const { return params.d; }
    Vec position(std::size_t i) const;
    Vec velocity(std::size_t i) const;
};

// Substream tags of the per-particle counter-based streams.
enum Substream : std::uint32_t { kScatter = 0, kChoice = 1, kEmit = 2, kInit = 3 };

ParticleEnsemble init_ensemble(const InitialProfile& rho_in, std::size_t n, const ModelParams& params,
                               const Equilibrium& eq, std::uint64_t seed);

struct RunOptions {
    int workers = 1;
    //! Wall rule; Maxwell uses params.alpha.
    WallRule::Kind wall = WallRule::Kind::Maxwell;
    //! Specular mirror at x_d = far_wall (stationary scenario); infinity disables it.
    double far_wall = std::numeric_limits<double>::infinity();
};

//! Advance every particle to t_end, recording densities at the snapshot times.
std::vector<DensityField> run(ParticleEnsemble& ens, const Equilibrium& eq, double t_end,
                              const std::vector<double>& snapshot_times, const GridSpec& grid,
                              const RunOptions& opt = {});

//! Histogram of the current positions with Poisson standard errors.
DensityField density(const ParticleEnsemble& ens, const GridSpec& grid);

//! Chi-square style distance between the binned velocity marginal (|v| <= v_cut,
//! tail lumped) and F.
double velocity_disequilibrium(const ParticleEnsemble& ens, const Equilibrium& eq, double v_cut = 50.0,
                               int bins = 50);

//! Kolmogorov-Smirnov distance of the velocity marginal from F: signed v in d = 1,
//! speeds otherwise.
double ks_velocity(const ParticleEnsemble& ens, const Equilibrium& eq);

//! Two-sided KS critical value sqrt(-log(level/2)/2)/sqrt(n).
double ks_critical(std::size_t n, double level);

}  // namespace fraclimit
