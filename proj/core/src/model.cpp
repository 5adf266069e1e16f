#include "fraclimit/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fraclimit/errors.hpp"
#include "fraclimit/quadrature.hpp"

namespace fraclimit {

void ModelParams::validate() const {
    if (d < 1 || d > 3) throw ConfigError("d must be 1, 2 or 3");
    if (!(s > 0.0 && s < 1.0)) throw ConfigError("s must lie in (0, 1)");
    if (!(nu0 > 0.0)) throw ConfigError("nu0 must be positive");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
    if (!(eps > 0.0 && eps <= 1.0)) throw ConfigError("eps must lie in (0, 1]");
    if (gamma < 0.0) throw ConfigError("gamma must be nonnegative");
    if (alpha > 0.0 && !(s > 0.5))
        throw ConfigError(kMaxwellRangeMessage);
}

double sphere_area(int d) { return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d); }

double hemisphere_cos_moment(int d) {
    return std::pow(std::numbers::pi, 0.5 * (d - 1)) / std::tgamma(0.5 * (d + 1));
}

// ---------------------------------------------------------------------------

RadialLaw::RadialLaw(std::function<double(double)> g, double lo_pow, double lo_coef, double hi_exp,
                     double hi_coef, int nodes, double r_min, double r_max)
    : g_(std::move(g)), lo_pow_(lo_pow), lo_coef_(lo_coef), hi_exp_(hi_exp), hi_coef_(hi_coef) {
    r_.resize(nodes);
    double lmin = std::log(r_min), lmax = std::log(r_max);
    for (int k = 0; k < nodes; ++k) r_[k] = std::exp(lmin + (lmax - lmin) * k / (nodes - 1));
    r_.front() = r_min;
    r_.back() = r_max;
    const GaussRule& gl = gauss_legendre(10);
    bin_.assign(nodes - 1, 0.0);
    for (int k = 0; k + 1 < nodes; ++k) {
        double a = r_[k], h = r_[k + 1] - r_[k], acc = 0.0;
        for (std::size_t q = 0; q < gl.x.size(); ++q) acc += gl.w[q] * g_(a + h * gl.x[q]);
        bin_[k] = acc * h;
    }
    head_ = lo_coef_ * std::pow(r_min, lo_pow_ + 1.0) / (lo_pow_ + 1.0);
    tail_ = hi_coef_ * std::pow(r_max, -hi_exp_) / hi_exp_;
    cum_lo_.assign(nodes, 0.0);
    cum_hi_.assign(nodes, 0.0);
    cum_lo_[0] = head_;
    for (int k = 0; k + 1 < nodes; ++k) cum_lo_[k + 1] = cum_lo_[k] + bin_[k];
    cum_hi_[nodes - 1] = tail_;
    for (int k = nodes - 2; k >= 0; --k) cum_hi_[k] = cum_hi_[k + 1] + bin_[k];
    mass_ = cum_lo_.back() + tail_;
}

double RadialLaw::partial(std::size_t k, double r) const {
    const GaussRule& gl = gauss_legendre(10);
    double a = r_[k], h = r - a, acc = 0.0;
    for (std::size_t q = 0; q < gl.x.size(); ++q) acc += gl.w[q] * g_(a + h * gl.x[q]);
    return acc * h;
}

double RadialLaw::cdf(double r) const {
    if (r <= 0.0) return 0.0;
    if (r < r_.front()) return lo_coef_ * std::pow(r, lo_pow_ + 1.0) / (lo_pow_ + 1.0) / mass_;
    if (r >= r_.back()) return 1.0 - survival(r);
    std::size_t k = std::upper_bound(r_.begin(), r_.end(), r) - r_.begin() - 1;
    double lo = cum_lo_[k] + partial(k, r);
    if (lo < 0.5 * mass_) return lo / mass_;
    return 1.0 - (cum_hi_[k] - partial(k, r)) / mass_;
}

double RadialLaw::survival(double r) const {
    if (r >= r_.back()) return hi_coef_ * std::pow(r, -hi_exp_) / hi_exp_ / mass_;
    if (r <= 0.0) return 1.0;
    if (r < r_.front()) return 1.0 - cdf(r);
    std::size_t k = std::upper_bound(r_.begin(), r_.end(), r) - r_.begin() - 1;
    double hi = cum_hi_[k] - partial(k, r);
    if (hi < 0.5 * mass_) return hi / mass_;
    return 1.0 - (cum_lo_[k] + partial(k, r)) / mass_;
}

double RadialLaw::sample(double u) const {
    if (u < 0.5) {
        double m = u * mass_;
        if (m < head_) return std::pow(m * (lo_pow_ + 1.0) / lo_coef_, 1.0 / (lo_pow_ + 1.0));
        std::size_t k = std::upper_bound(cum_lo_.begin(), cum_lo_.end(), m) - cum_lo_.begin() - 1;
        if (k >= bin_.size()) k = bin_.size() - 1;
        double f = bin_[k] > 0.0 ? (m - cum_lo_[k]) / bin_[k] : 0.0;
        return r_[k] + f * (r_[k + 1] - r_[k]);
    }
    double q = (1.0 - u) * mass_;
    if (q < tail_) return std::pow(hi_coef_ / (hi_exp_ * q), 1.0 / hi_exp_);
    // cum_hi_ is decreasing; find the last k with cum_hi_[k] >= q.
    auto it = std::lower_bound(cum_hi_.begin(), cum_hi_.end(), q, std::greater<double>());
    std::size_t k = static_cast<std::size_t>(it - cum_hi_.begin());
    k = k == 0 ? 0 : k - 1;
    if (k >= bin_.size()) k = bin_.size() - 1;
    double f = bin_[k] > 0.0 ? (cum_hi_[k] - q) / bin_[k] : 0.0;
    return r_[k] + f * (r_[k + 1] - r_[k]);
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ull) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

Equilibrium::Equilibrium(ModelParams params, RadialFn shape, double shape_gamma, RadialFn shape_gap,
                         RadialFn shape_deriv, std::string tag)
    : params_(params),
      shape_(std::move(shape)),
      shape_gap_(std::move(shape_gap)),
      shape_deriv_(std::move(shape_deriv)),
      shape_gamma_(shape_gamma),
      tag_(std::move(tag)) {
    params_.gamma = 0.0;
    params_.validate();
    if (!(shape_gamma_ > 0.0)) throw ConfigError("tail constant of F must be positive");
    const int d = params_.d;
    const double s = params_.s;
    const double area = sphere_area(d);
    const double s0 = shape_(0.0);
    if (!std::isfinite(s0) || s0 < 0.0) throw ConfigError("radial profile must be finite at 0");

    RadialFn f = shape_;
    speed_ = RadialLaw([f, area, d](double r) { return area * std::pow(r, d - 1) * f(r); },
                       d - 1.0, area * s0, 2.0 * s, area * shape_gamma_);
    norm_ = 1.0 / speed_.mass();
    params_.gamma = shape_gamma_ * norm_;

    if (s > 0.5) {
        const double hemi = hemisphere_cos_moment(d);
        const double nrm = norm_;
        flux_ = RadialLaw(
            [f, hemi, nrm, d](double r) { return hemi * nrm * std::pow(r, d) * f(r); },
            static_cast<double>(d), hemi * norm_ * s0, 2.0 * s - 1.0, hemi * params_.gamma);
        has_flux_ = true;
    }

    // Tail constant of the gap bound over [1, 1e4].
    double cmax = 0.0, c_late = 0.0, c_early = 0.0;
    for (int k = 0; k <= 400; ++k) {
        double r = std::pow(10.0, 4.0 * k / 400.0);
        double c = std::abs(gap(r)) * std::pow(r, d + 4.0 * s);
        cmax = std::max(cmax, c);
        if (r <= 1e3) c_early = std::max(c_early, c);
        else c_late = std::max(c_late, c);
    }
    if (!std::isfinite(cmax) || c_late > 10.0 * std::max(c_early, 1e-300))
        throw ConfigError("radial profile violates the heavy-tail gap bound");
    tail_constant_ = cmax;

    std::ostringstream key;
    key.precision(17);
    key << tag_ << ':' << d << ':' << s << ':' << params_.nu0;
    for (double r : {0.0, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0}) key << ':' << shape_(r);
    hash_ = fnv1a(key.str());
}

double Equilibrium::radial_derivative(double r) const {
    if (shape_deriv_) return norm_ * shape_deriv_(r);
    double h = 1e-5 * std::max(r, 1e-3);
    return norm_ * (shape_(r + h) - shape_(std::max(r - h, 0.0))) / (r + h - std::max(r - h, 0.0));
}

double Equilibrium::gap(double r) const {
    if (shape_gap_) return norm_ * shape_gap_(r);
    return radial(r) - params_.gamma * std::pow(r, -params_.d - 2.0 * params_.s);
}

double Equilibrium::c0() const {
    if (!has_flux_) throw NumericError("c0 diverges for s <= 1/2");
    return 1.0 / flux_.mass();
}

double Equilibrium::c0(const Vec&) const { return c0(); }

double Equilibrium::radial_tail(double x) const {
    return speed_survival(x) / sphere_area(params_.d);
}

double Equilibrium::radial_flux_tail(double x) const {
    if (!has_flux_) throw NumericError("flux moment diverges for s <= 1/2");
    return flux_.survival(x) * flux_.mass() / hemisphere_cos_moment(params_.d);
}

double Equilibrium::flux_speed_cdf(double r) const {
    if (!has_flux_) throw NumericError("flux moment diverges for s <= 1/2");
    return flux_.cdf(r);
}

Vec Equilibrium::sample_velocity(RandomStream& rng) const {
    const double r = speed_.sample(rng.uniform());
    const int d = params_.d;
    Vec v(d);
    if (d == 1) {
        v[0] = (rng() & 1u) ? r : -r;
    } else if (d == 2) {
        double phi = 2.0 * std::numbers::pi * rng.uniform();
        v << r * std::cos(phi), r * std::sin(phi);
    } else {
        double z = 2.0 * rng.uniform() - 1.0;
        double phi = 2.0 * std::numbers::pi * rng.uniform();
        double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        v << r * rho * std::cos(phi), r * rho * std::sin(phi), r * z;
    }
    return v;
}

Vec Equilibrium::sample_diffuse_velocity(const Vec& n, RandomStream& rng) const {
    if (!has_flux_) throw NumericError("diffuse re-emission requires s > 1/2");
    const double r = flux_.sample(rng.uniform());
    const int d = params_.d;
    if (d == 1) return Vec(-r * n);
    if (d == 2) {
        double sn = 2.0 * rng.uniform() - 1.0;
        double cs = std::sqrt(std::max(0.0, 1.0 - sn * sn));
        Vec t = vec2(-n[1], n[0]);
        return Vec(r * (-cs * n + sn * t));
    }
    double cs = std::sqrt(rng.uniform());
    double sn = std::sqrt(std::max(0.0, 1.0 - cs * cs));
    double phi = 2.0 * std::numbers::pi * rng.uniform();
    Vec a = std::abs(n[0]) < 0.9 ? vec3(1, 0, 0) : vec3(0, 1, 0);
    Vec t1 = (a - a.dot(n) * n).normalized();
    Vec t2 = vec3(n[1] * t1[2] - n[2] * t1[1], n[2] * t1[0] - n[0] * t1[2], n[0] * t1[1] - n[1] * t1[0]);
    return Vec(r * (-cs * n + sn * (std::cos(phi) * t1 + std::sin(phi) * t2)));
}

Equilibrium make_default_equilibrium(const ModelParams& params) {
    if (params.d < 1 || params.d > 3) throw ConfigError("d must be 1, 2 or 3");
    if (!(params.s > 0.0 && params.s < 1.0)) throw ConfigError("s must lie in (0, 1)");
    const double p = params.d + 2.0 * params.s;
    auto shape = [p](double r) { return 1.0 / (1.0 + std::pow(r, p)); };
    auto gap = [p](double r) {
        double rp = std::pow(r, p);
        return -1.0 / (rp * (1.0 + rp));
    };
    auto deriv = [p](double r) {
        if (r <= 0.0) return 0.0;
        double rp = std::pow(r, p);
        return -p * rp / r / ((1.0 + rp) * (1.0 + rp));
    };
    return Equilibrium(params, shape, 1.0, gap, deriv, "default");
}

double c_ds(int d, double s) {
    return s * std::pow(4.0, s) * std::tgamma(0.5 * d + s) /
           (std::pow(std::numbers::pi, 0.5 * d) * std::tgamma(1.0 - s));
}

Constants constants(int d, double s, double nu0, double gamma) {
    Constants c;
    const double scale = gamma * std::pow(nu0, 1.0 - 2.0 * s);
    c.gamma0 = scale * std::tgamma(2.0 * s);
    c.gamma1 = scale * std::tgamma(2.0 * s + 1.0);
    c.c_ds = c_ds(d, s);
    c.gamma_ds = c.gamma1 / c.c_ds;
    return c;
}

Constants constants(const ModelParams& params, const Equilibrium& eq) {
    return constants(params.d, params.s, params.nu0, eq.gamma());
}

}  // namespace fraclimit
