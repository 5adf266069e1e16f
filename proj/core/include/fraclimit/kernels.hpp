#pragma once

#include <string>
#include <vector>

#include "fraclimit/model.hpp"

namespace fraclimit {

//! F1(r) = int_0^inf e^{-nu0 tau} nu0^2 tau^{-d} F(r/tau) dtau, by direct quadrature.
double kernel_F1(const Equilibrium& eq, double r);
//! F0(r) = int_0^inf nu0 e^{-nu0 tau} tau^{-d-1} F(r/tau) dtau.
double kernel_F0(const Equilibrium& eq, double r);
double kernel_F1_derivative(const Equilibrium& eq, double r);
double kernel_F0_derivative(const Equilibrium& eq, double r);

struct TailGap {
    double G = 0;   // F1 - gamma1 / r^{d+2s}
    double G0 = 0;  // |F0 - gamma0 / r^{d+2s}|
};
//! Computed directly from the gap of F, without subtracting large numbers.
TailGap tail_gap(const Equilibrium& eq, double r);

//! int_rho^inf F1(u) u^{d-1} du and int_rho^inf F0(u) u^d du (radial, no angular factor).
double kernel_F1_tail(const Equilibrium& eq, double rho);
double kernel_F0_flux_tail(const Equilibrium& eq, double rho);

//! Memoized F1, F0 on a log grid with cubic Hermite interpolation of log F
//! against log r using exact slopes. Outside the grid, direct quadrature.
class KernelTable {
  public:
    static constexpr int kDefaultNodes = 2048;
    static constexpr double kRmin = 1e-4;
    static constexpr double kRmax = 1e4;
    static constexpr double kTruncation = 40.0;  // tau cut at kTruncation / nu0
    static constexpr double kTolerance = 1e-8;

    KernelTable(const Equilibrium& eq, int nodes = kDefaultNodes);

    const Equilibrium& equilibrium() const { return *eq_; }
    double F1(double r) const;
    double F0(double r) const;
    double F1_tail(double rho) const;
    double F0_flux_tail(double rho) const;

    int nodes() const { return static_cast<int>(r_.size()); }
    const std::vector<double>& grid() const { return r_; }

    //! CSV cache (columns documented in docs/file_formats.md).
    void write_csv(const std::string& path) const;
    static KernelTable read_csv(const std::string& path, const Equilibrium& eq);

  private:
    KernelTable() = default;
    enum Col { kF1 = 0, kF0 = 1, kT1 = 2, kT0 = 3, kCols = 4 };
    double interp(int col, double r) const;

    const Equilibrium* eq_ = nullptr;
    std::vector<double> r_;
    double x0_ = 0, h_ = 1;
    std::vector<double> logv_[kCols];
    std::vector<double> slope_[kCols];
    std::vector<double> G_, G0_;
};

}  // namespace fraclimit
