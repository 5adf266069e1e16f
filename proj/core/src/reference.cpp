#include "fraclimit/reference.hpp"

#include <cmath>
#include <complex>
#include <mutex>

#include <fftw3.h>

#include "fraclimit/errors.hpp"

namespace fraclimit {

namespace {

struct Spectrum {
    double L = 0.0;                          // box width
    std::size_t n = 0;                       // samples
    std::vector<std::complex<double>> c;     // c_k for k = 0..n/2, damped by the multiplier
};

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

Spectrum spectrum(const InitialProfile& rho0, double t, const ModelParams& params, const ReferenceOptions& opt) {
    if (params.d != 1 || rho0.d != 1) throw ConfigError("reference solution is implemented for d = 1");
    if (!rho0.density) throw ConfigError("reference solution needs an initial profile with a density");
    if (!(t >= 0.0)) throw ConfigError("reference time must be >= 0");
    if (!(params.gamma > 0.0)) throw ConfigError("reference solution needs the tail constant gamma of F");
    if (!(opt.box_width > 0.0 && opt.dx > 0.0)) throw ConfigError("reference box width and dx must be positive");
    const double gds = constants(params.d, params.s, params.nu0, params.gamma).gamma_ds;

    std::size_t n = 2;
    while (n * opt.dx < opt.box_width) n *= 2;
    const double dx = opt.box_width / n;
    std::vector<double> f(n);
    double fmax = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double x = j < n / 2 ? j * dx : (static_cast<double>(j) - static_cast<double>(n)) * dx;
        double v = 0.0;
        if (opt.even_extension) v = rho0.density(vec1(std::abs(x)));
        else if (x >= 0.0) v = rho0.density(vec1(x));
        f[j] = v;
        fmax = std::max(fmax, std::abs(v));
    }
    double support = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double x = j < n / 2 ? j * dx : (static_cast<double>(n) - static_cast<double>(j)) * dx;
        if (std::abs(f[j]) > 1e-16 * fmax) support = std::max(support, x);
    }
    const double diffusion = std::pow(gds * t, 0.5 / params.s);
    if (opt.box_width < 8.0 * (2.0 * support + diffusion))
        throw ConfigError("reference box too small: width must be >= 8x (support + diffusion length)");

    std::vector<std::complex<double>> F(n / 2 + 1);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), f.data(),
                                              reinterpret_cast<fftw_complex*>(F.data()), FFTW_ESTIMATE);
        if (!plan) throw NumericError("FFTW planning failed");
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }
    Spectrum S;
    S.L = opt.box_width;
    S.n = n;
    S.c.resize(n / 2 + 1);
    for (std::size_t k = 0; k <= n / 2; ++k) {
        const double xi = 2.0 * M_PI * k / S.L;
        S.c[k] = F[k] / static_cast<double>(n) * std::exp(-gds * std::pow(xi, 2.0 * params.s) * t);
    }
    return S;
}

// Mean over [a, b] (point value when a == b) of sum_k c_k e^{i xi_k x}, real part,
// with the conjugate modes folded in.
double mean(const Spectrum& S, double a, double b) {
    const std::size_t h = S.n / 2;
    double acc = S.c[0].real();
    const double floor = 1e-18 * std::abs(S.c[0]);
    for (std::size_t k = 1; k <= h; ++k) {
        if (std::abs(S.c[k]) < floor) continue;
        const double xi = 2.0 * M_PI * k / S.L;
        std::complex<double> e;
        if (b > a) e = (std::polar(1.0, xi * b) - std::polar(1.0, xi * a)) / (std::complex<double>(0.0, xi) * (b - a));
        else e = std::polar(1.0, xi * a);
        acc += (k == h ? 1.0 : 2.0) * (S.c[k] * e).real();
    }
    return acc;
}

}  // namespace

DensityField reference_specular(const InitialProfile& rho0, double t, const ModelParams& params, const GridSpec& grid,
                                const ReferenceOptions& opt) {
    if (grid.dim() != 1) throw ConfigError("reference solution is implemented for d = 1");
    const Spectrum S = spectrum(rho0, t, params, opt);
    DensityField out = zero_field(grid, t);
    const double w = grid.width(0);
    for (int b = 0; b < grid.bins[0]; ++b) {
        const double lo = grid.lower[0] + b * w;
        out.values[b] = mean(S, lo, lo + w);
    }
    // Mass on the half-line is half the mass of the extension.
    const double total = opt.even_extension ? 0.5 * S.c[0].real() * S.L : S.c[0].real() * S.L;
    out.out_of_window = total != 0.0 ? (total - out.window_mass()) / total : 0.0;
    return out;
}

std::vector<double> reference_values(const InitialProfile& rho0, double t, const ModelParams& params,
                                     const std::vector<double>& x, const ReferenceOptions& opt) {
    const Spectrum S = spectrum(rho0, t, params, opt);
    std::vector<double> out;
    for (double xi : x) out.push_back(mean(S, xi, xi));
    return out;
}

}  // namespace fraclimit
