#include "fraclimit/compare.hpp"

#include <algorithm>
#include <cmath>

#include "fraclimit/errors.hpp"

namespace fraclimit {

DensityField rebin(const DensityField& field, const GridSpec& target) {
    const GridSpec& src = field.grid;
    if (src.dim() != 1 || target.dim() != 1) throw ConfigError("rebinning is implemented for d = 1");
    const double tol = 1e-9 * (src.upper[0] - src.lower[0]);
    if (target.lower[0] < src.lower[0] - tol || target.upper[0] > src.upper[0] + tol)
        throw ConfigError("incompatible windows: target grid is not inside the source grid");
    DensityField out = zero_field(target, field.t);
    const bool has_se = field.std_err.size() == field.values.size();
    const double ws = src.width(0), wt = target.width(0);
    for (int b = 0; b < target.bins[0]; ++b) {
        const double lo = target.lower[0] + b * wt, hi = lo + wt;
        const int k0 = std::max(0, static_cast<int>(std::floor((lo - src.lower[0]) / ws)));
        const int k1 = std::min(src.bins[0] - 1, static_cast<int>(std::floor((hi - src.lower[0]) / ws)));
        double acc = 0.0, var = 0.0;
        for (int k = k0; k <= k1; ++k) {
            const double a = std::max(lo, src.lower[0] + k * ws), c = std::min(hi, src.lower[0] + (k + 1) * ws);
            if (c <= a) continue;
            const double frac = (c - a) / wt;
            acc += frac * field.values[k];
            if (has_se) var += frac * frac * field.std_err[k] * field.std_err[k];
        }
        out.values[b] = acc;
        out.std_err[b] = std::sqrt(var);
    }
    out.out_of_window = field.out_of_window;
    return out;
}

CompareResult compare(const DensityField& A, const DensityField& B) {
    if (A.grid.dim() != B.grid.dim()) throw ConfigError("incompatible windows: dimensions differ");
    const DensityField Ar = A.grid.same_as(B.grid) ? A : rebin(A, B.grid);
    if (Ar.values.size() != B.values.size()) throw ConfigError("incompatible windows: bin counts differ");
    double diff2 = 0.0, ref2 = 0.0, dmax = 0.0, rmax = 0.0, var = 0.0;
    for (std::size_t i = 0; i < B.values.size(); ++i) {
        const double d = Ar.values[i] - B.values[i];
        diff2 += d * d;
        ref2 += B.values[i] * B.values[i];
        dmax = std::max(dmax, std::abs(d));
        rmax = std::max(rmax, std::abs(B.values[i]));
        if (i < Ar.std_err.size()) var += Ar.std_err[i] * Ar.std_err[i];
        if (i < B.std_err.size()) var += B.std_err[i] * B.std_err[i];
    }
    if (ref2 == 0.0) throw NumericError("reference field is identically zero");
    CompareResult r;
    r.l2_rel = std::sqrt(diff2 / ref2);
    r.linf_rel = dmax / rmax;
    const double mb = B.window_mass();
    r.mass_gap = mb != 0.0 ? std::abs(Ar.window_mass() - mb) / std::abs(mb) : std::abs(Ar.window_mass());
    r.noise_rel = std::sqrt(var / ref2);
    r.l2_rel_debiased = std::sqrt(std::max(0.0, diff2 - var) / ref2);
    return r;
}

}  // namespace fraclimit
