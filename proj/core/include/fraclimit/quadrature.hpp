#pragma once

#include <functional>
#include <vector>

namespace fraclimit {

struct GaussRule {
    std::vector<double> x;  // nodes on [0, 1]
    std::vector<double> w;  // weights summing to 1
};

//! n-point Gauss-Legendre rule on [0, 1]. Rules are cached per n.
const GaussRule& gauss_legendre(int n);

struct QuadOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_intervals = 2000;
};

//! Globally adaptive Gauss-Kronrod (15/31) on a finite interval: the panel with
//! the largest error estimate is bisected until the summed estimate meets
//! max(abs_tol, rel_tol |I|), with a round-off floor relative to int |f|.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadOptions& opt = {});
//! As above; adds the absolute error estimate to *err.
double integrate(const std::function<double(double)>& f, double a, double b, const QuadOptions& opt,
                 double* err);

//! Adaptive integral over [p_0, p_n] with the breakpoints as initial panels.
//! Breakpoints must be sorted; duplicates are skipped.
double integrate_panels(const std::function<double(double)>& f, const std::vector<double>& points,
                        const QuadOptions& opt = {});
double integrate_panels(const std::function<double(double)>& f, const std::vector<double>& points,
                        const QuadOptions& opt, double* err);

//! Points lo, lo*q, lo*q^2, ... capped at hi (hi included).
std::vector<double> geometric_points(double lo, double hi, double ratio);

//! Merge extra breakpoints into a sorted list, keeping those in [lo, hi].
std::vector<double> merge_points(std::vector<double> pts, const std::vector<double>& extra, double lo,
                                 double hi);

}  // namespace fraclimit
