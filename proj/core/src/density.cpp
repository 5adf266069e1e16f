#include "fraclimit/density.hpp"

#include <cmath>

#include "fraclimit/errors.hpp"

namespace fraclimit {

std::size_t GridSpec::size() const {
    std::size_t n = 1;
    for (int b : bins) n *= static_cast<std::size_t>(b);
    return n;
}

double GridSpec::bin_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim(); ++a) v *= width(a);
    return v;
}

long GridSpec::locate(const Vec& x) const {
    long flat = 0;
    for (int a = 0; a < dim(); ++a) {
        double u = (x[a] - lower[a]) / (upper[a] - lower[a]);
        if (!(u >= 0.0) || u >= 1.0) return -1;
        long k = static_cast<long>(u * bins[a]);
        if (k >= bins[a]) k = bins[a] - 1;
        flat = flat * bins[a] + k;
    }
    return flat;
}

Vec GridSpec::center(std::size_t flat) const {
    Vec c(dim());
    for (int a = dim() - 1; a >= 0; --a) {
        std::size_t k = flat % static_cast<std::size_t>(bins[a]);
        flat /= static_cast<std::size_t>(bins[a]);
        c[a] = lower[a] + (k + 0.5) * width(a);
    }
    return c;
}

bool GridSpec::same_as(const GridSpec& o) const {
    if (bins != o.bins) return false;
    for (int a = 0; a < dim(); ++a) {
        if (std::abs(lower[a] - o.lower[a]) > 1e-12 * (1 + std::abs(lower[a]))) return false;
        if (std::abs(upper[a] - o.upper[a]) > 1e-12 * (1 + std::abs(upper[a]))) return false;
    }
    return true;
}

GridSpec uniform_grid_1d(double lower, double upper, int bins) {
    if (!(upper > lower) || bins < 1) throw ConfigError("invalid 1-d grid");
    return GridSpec{{lower}, {upper}, {bins}};
}

double DensityField::window_mass() const {
    double m = 0.0;
    for (double v : values) m += v;
    return m * grid.bin_volume();
}

DensityField zero_field(const GridSpec& grid, double t) {
    DensityField f;
    f.grid = grid;
    f.values.assign(grid.size(), 0.0);
    f.std_err.assign(grid.size(), 0.0);
    f.t = t;
    return f;
}

}  // namespace fraclimit
