#include "fraclimit/kernels.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "fraclimit/errors.hpp"
#include "fraclimit/quadrature.hpp"

namespace fraclimit {

namespace {

// int_0^T weight(tau) inner(r / tau) dtau with panels clustered toward tau = 0
// and around tau = r, where inner changes regime.
template <class W, class I>
double tau_integral(const Equilibrium& eq, double r, W weight, I inner) {
    const double nu0 = eq.params().nu0;
    const double T = KernelTable::kTruncation / nu0;
    const double anchor = std::min(r, T);
    std::vector<double> pts{0.0};
    for (double t = anchor * 1e-6; t < T; t *= 4.0) pts.push_back(t);
    pts.push_back(T);
    pts = merge_points(pts, {r, 0.5 * r, 2.0 * r}, 0.0, T);
    QuadOptions opt;
    opt.rel_tol = 1e-11;
    return integrate_panels(
        [&](double tau) {
            if (tau <= 0.0) return 0.0;
            return weight(tau) * inner(r / tau);
        },
        pts, opt);
}

}  // namespace

double kernel_F1(const Equilibrium& eq, double r) {
    const double nu0 = eq.params().nu0;
    const int d = eq.dim();
    return tau_integral(
        eq, r, [&](double t) { return nu0 * nu0 * std::exp(-nu0 * t) * std::pow(t, -d); },
        [&](double u) { return eq.radial(u); });
}

double kernel_F0(const Equilibrium& eq, double r) {
    const double nu0 = eq.params().nu0;
    const int d = eq.dim();
    return tau_integral(
        eq, r, [&](double t) { return nu0 * std::exp(-nu0 * t) * std::pow(t, -d - 1); },
        [&](double u) { return eq.radial(u); });
}

double kernel_F1_derivative(const Equilibrium& eq, double r) {
    const double nu0 = eq.params().nu0;
    const int d = eq.dim();
    return tau_integral(
        eq, r, [&](double t) { return nu0 * nu0 * std::exp(-nu0 * t) * std::pow(t, -d - 1); },
        [&](double u) { return eq.radial_derivative(u); });
}

double kernel_F0_derivative(const Equilibrium& eq, double r) {
    const double nu0 = eq.params().nu0;
    const int d = eq.dim();
    return tau_integral(
        eq, r, [&](double t) { return nu0 * std::exp(-nu0 * t) * std::pow(t, -d - 2); },
        [&](double u) { return eq.radial_derivative(u); });
}

TailGap tail_gap(const Equilibrium& eq, double r) {
    const double nu0 = eq.params().nu0;
    const int d = eq.dim();
    TailGap g;
    g.G = tau_integral(
        eq, r, [&](double t) { return nu0 * nu0 * std::exp(-nu0 * t) * std::pow(t, -d); },
        [&](double u) { return eq.gap(u); });
    g.G0 = std::abs(tau_integral(
        eq, r, [&](double t) { return nu0 * std::exp(-nu0 * t) * std::pow(t, -d - 1); },
        [&](double u) { return eq.gap(u); }));
    return g;
}

double kernel_F1_tail(const Equilibrium& eq, double rho) {
    const double nu0 = eq.params().nu0;
    return tau_integral(
        eq, rho, [&](double t) { return nu0 * nu0 * std::exp(-nu0 * t); },
        [&](double u) { return eq.radial_tail(u); });
}

double kernel_F0_flux_tail(const Equilibrium& eq, double rho) {
    const double nu0 = eq.params().nu0;
    return tau_integral(
        eq, rho, [&](double t) { return nu0 * std::exp(-nu0 * t); },
        [&](double u) { return eq.radial_flux_tail(u); });
}

// ---------------------------------------------------------------------------

KernelTable::KernelTable(const Equilibrium& eq, int nodes) : eq_(&eq) {
    if (nodes < 4) throw ConfigError("kernel table needs at least 4 nodes");
    const int d = eq.dim();
    const bool flux = eq.s() > 0.5;
    x0_ = std::log(kRmin);
    h_ = (std::log(kRmax) - x0_) / (nodes - 1);
    r_.resize(nodes);
    for (auto& c : logv_) c.assign(nodes, 0.0);
    for (auto& c : slope_) c.assign(nodes, 0.0);
    G_.assign(nodes, 0.0);
    G0_.assign(nodes, 0.0);
    for (int k = 0; k < nodes; ++k) {
        const double r = std::exp(x0_ + h_ * k);
        r_[k] = r;
        const double f1 = kernel_F1(eq, r), f0 = kernel_F0(eq, r);
        if (!(f1 > 0.0) || !(f0 > 0.0)) throw NumericError("kernel quadrature returned a nonpositive value");
        logv_[kF1][k] = std::log(f1);
        logv_[kF0][k] = std::log(f0);
        slope_[kF1][k] = r * kernel_F1_derivative(eq, r) / f1;
        slope_[kF0][k] = r * kernel_F0_derivative(eq, r) / f0;
        const double t1 = kernel_F1_tail(eq, r);
        logv_[kT1][k] = std::log(t1);
        slope_[kT1][k] = -r * f1 * std::pow(r, d - 1) / t1;
        if (flux) {
            const double t0 = kernel_F0_flux_tail(eq, r);
            logv_[kT0][k] = std::log(t0);
            slope_[kT0][k] = -r * f0 * std::pow(r, d) / t0;
        }
        TailGap g = tail_gap(eq, r);
        G_[k] = g.G;
        G0_[k] = g.G0;
    }
}

double KernelTable::interp(int col, double r) const {
    const double x = std::log(r);
    const double u = (x - x0_) / h_;
    int k = static_cast<int>(u);
    if (k < 0) k = 0;
    if (k > nodes() - 2) k = nodes() - 2;
    const double t = u - k;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    const auto& y = logv_[col];
    const auto& m = slope_[col];
    return std::exp(h00 * y[k] + h10 * h_ * m[k] + h01 * y[k + 1] + h11 * h_ * m[k + 1]);
}

double KernelTable::F1(double r) const {
    if (r < kRmin || r > kRmax) return kernel_F1(*eq_, r);
    return interp(kF1, r);
}

double KernelTable::F0(double r) const {
    if (r < kRmin || r > kRmax) return kernel_F0(*eq_, r);
    return interp(kF0, r);
}

double KernelTable::F1_tail(double rho) const {
    if (rho < kRmin || rho > kRmax) return kernel_F1_tail(*eq_, rho);
    return interp(kT1, rho);
}

double KernelTable::F0_flux_tail(double rho) const {
    if (!(eq_->s() > 0.5)) throw NumericError("flux tail requires s > 1/2");
    if (rho < kRmin || rho > kRmax) return kernel_F0_flux_tail(*eq_, rho);
    return interp(kT0, rho);
}

void KernelTable::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    const auto& p = eq_->params();
    out << "# fraclimit-kernel-table v1 d=" << p.d << " s=" << std::setprecision(17) << p.s
        << " nu0=" << p.nu0 << " hash=" << eq_->hash() << " nodes=" << nodes()
        << " truncation=" << kTruncation << " tol=" << kTolerance << "\n";
    out << "abs_w,F1,F0,G,G0,dlogF1,dlogF0,tail1,dlogtail1,tail0,dlogtail0\n";
    out << std::setprecision(17);
    for (int k = 0; k < nodes(); ++k) {
        out << r_[k] << ',' << std::exp(logv_[kF1][k]) << ',' << std::exp(logv_[kF0][k]) << ','
            << G_[k] << ',' << G0_[k] << ',' << slope_[kF1][k] << ',' << slope_[kF0][k] << ','
            << std::exp(logv_[kT1][k]) << ',' << slope_[kT1][k] << ',' << std::exp(logv_[kT0][k])
            << ',' << slope_[kT0][k] << '\n';
    }
    if (!out) throw IoError("write failed for " + path);
}

KernelTable KernelTable::read_csv(const std::string& path, const Equilibrium& eq) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string header, cols;
    std::getline(in, header);
    std::getline(in, cols);
    std::ostringstream want;
    want << "hash=" << eq.hash() << ' ';
    if (header.rfind("# fraclimit-kernel-table v1", 0) != 0 || header.find(want.str()) == std::string::npos)
        throw IoError("kernel cache " + path + " does not match this equilibrium");
    KernelTable t;
    t.eq_ = &eq;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> v;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
        if (v.size() != 11) throw IoError("malformed kernel cache row in " + path);
        t.r_.push_back(v[0]);
        t.logv_[kF1].push_back(std::log(v[1]));
        t.logv_[kF0].push_back(std::log(v[2]));
        t.G_.push_back(v[3]);
        t.G0_.push_back(v[4]);
        t.slope_[kF1].push_back(v[5]);
        t.slope_[kF0].push_back(v[6]);
        t.logv_[kT1].push_back(std::log(v[7]));
        t.slope_[kT1].push_back(v[8]);
        t.logv_[kT0].push_back(v[9] > 0 ? std::log(v[9]) : 0.0);
        t.slope_[kT0].push_back(v[10]);
    }
    if (t.r_.size() < 4) throw IoError("kernel cache " + path + " has too few rows");
    t.x0_ = std::log(t.r_.front());
    t.h_ = (std::log(t.r_.back()) - t.x0_) / (t.r_.size() - 1);
    return t;
}

}  // namespace fraclimit
