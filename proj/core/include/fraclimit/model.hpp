#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fraclimit/random.hpp"
#include "fraclimit/types.hpp"

namespace fraclimit {

//! Message for alpha > 0 with s <= 1/2.
inline constexpr const char* kMaxwellRangeMessage =
    "alpha > 0 requires s > 1/2: the diffuse re-emission constant c0 is finite only when the half-space "
    "flux moment of F converges, which needs s > 1/2";

struct ModelParams {
    int d = 1;
    double s = 0.75;
    double nu0 = 1.0;
    double gamma = 0.0;  // tail constant of F; filled in by the equilibrium
    double alpha = 0.0;  // accommodation coefficient
    double eps = 0.1;    // Knudsen number

    //! Throws ConfigError on any violated range.
    void validate() const;
};

//! Surface measure of the unit sphere S^{d-1}.
double sphere_area(int d);
//! Integral of |cos| over a unit hemisphere of S^{d-1}.
double hemisphere_cos_moment(int d);

//! Tabulated radial law with density g(r) on (0, inf), sampled by inverse
//! transform. Near 0, g ~ lo_coef r^lo_pow; at infinity, g ~ hi_coef r^{-1-hi_exp}.
class RadialLaw {
  public:
    RadialLaw() = default;
    RadialLaw(std::function<double(double)> g, double lo_pow, double lo_coef, double hi_exp,
              double hi_coef, int nodes = 4096, double r_min = 1e-8, double r_max = 1e8);

    double mass() const { return mass_; }
    //! Normalized distribution function and survival function.
    double cdf(double r) const;
    double survival(double r) const;
    //! Inverse transform of a uniform variate in (0, 1).
    double sample(double u) const;

  private:
    double partial(std::size_t k, double r) const;

    std::function<double(double)> g_;
    double lo_pow_ = 0, lo_coef_ = 0, hi_exp_ = 1, hi_coef_ = 0;
    std::vector<double> r_;
    std::vector<double> bin_;
    std::vector<double> cum_lo_;  // mass of (0, r_k)
    std::vector<double> cum_hi_;  // mass of (r_k, inf)
    double head_ = 0, tail_ = 0, mass_ = 0;
};

//! Radial heavy-tailed equilibrium F, normalized to unit mass.
class Equilibrium {
  public:
    using RadialFn = std::function<double(double)>;

    //! shape: unnormalized radial profile; shape_gamma: its tail constant.
    //! shape_gap, if given, must return shape(r) - shape_gamma / r^{d+2s} without
    //! cancellation; shape_deriv is d shape / dr.
    Equilibrium(ModelParams params, RadialFn shape, double shape_gamma, RadialFn shape_gap = {},
                RadialFn shape_deriv = {}, std::string tag = "custom");

    const ModelParams& params() const { return params_; }
    int dim() const { return params_.d; }
    double s() const { return params_.s; }
    double gamma() const { return params_.gamma; }
    //! Multiplicative constant turning shape into F (C_norm for the default family).
    double normalization() const { return norm_; }

    double radial(double r) const { return norm_ * shape_(r); }
    double radial_derivative(double r) const;
    //! F(r) - gamma / r^{d+2s}.
    double gap(double r) const;
    double operator()(const Vec& v) const { return radial(v.norm()); }

    //! Measured C in |F - gamma/|v|^{d+2s}| <= C |v|^{-d-4s} over |v| in [1, 1e4].
    double tail_constant() const { return tail_constant_; }

    //! Inverse half-space flux moment. Throws NumericError if s <= 1/2.
    double c0() const;
    double c0(const Vec& n) const;

    //! P(|V| <= r) and P(|V| > r).
    double speed_cdf(double r) const { return speed_.cdf(r); }
    double speed_survival(double r) const { return speed_.survival(r); }
    //! Integral over r > x of F(r) r^{d-1} dr (radial, no sphere factor).
    double radial_tail(double x) const;
    //! Integral over r > x of F(r) r^d dr. Requires s > 1/2.
    double radial_flux_tail(double x) const;
    //! Law of |W| for the diffuse re-emission density, normalized.
    double flux_speed_cdf(double r) const;

    Vec sample_velocity(RandomStream& rng) const;
    //! Draw w with w.n < 0 from c0 F(w) |w.n|. The speed follows r^d F(r) and the
    //! direction the cosine law about -n; both are sampled exactly.
    Vec sample_diffuse_velocity(const Vec& n, RandomStream& rng) const;

    std::uint64_t hash() const { return hash_; }
    const std::string& tag() const { return tag_; }

  private:
    ModelParams params_;
    RadialFn shape_, shape_gap_, shape_deriv_;
    double shape_gamma_ = 0;
    double norm_ = 1;
    double tail_constant_ = 0;
    std::string tag_;
    std::uint64_t hash_ = 0;
    RadialLaw speed_;
    RadialLaw flux_;
    bool has_flux_ = false;
};

//! F(v) = C_norm / (1 + |v|^{d+2s}).
Equilibrium make_default_equilibrium(const ModelParams& params);

struct Constants {
    double gamma0 = 0;
    double gamma1 = 0;
    double c_ds = 0;
    double gamma_ds = 0;
};

//! c_{d,s} with c^{-1} = int (1 - cos(e.w)) |w|^{-d-2s} dw.
double c_ds(int d, double s);
Constants constants(const ModelParams& params, const Equilibrium& eq);
//! Same constants for an explicit tail constant gamma.
Constants constants(int d, double s, double nu0, double gamma);

}  // namespace fraclimit
