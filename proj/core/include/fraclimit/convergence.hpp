#pragma once

#include <string>
#include <vector>

#include "fraclimit/operators.hpp"

namespace fraclimit {

//! Evaluation grid x_i = L t_i^2, t_i = i/n (i = 1..n) on (0, L], graded toward
//! the wall, with trapezoid weights in t.
struct L2Grid {
    std::vector<double> x;
    std::vector<double> w;
};
L2Grid l2_grid(int n = 400, double L = 8.0);

//! Quantities tracked by the study.
//!  "LSR":    || L^eps_SR psi - L_SR psi ||
//!  "Lreg":   || L_eps psi + gamma_{d,s} (-Delta)^s_Omega psi ||
//!  "kappa":  || kappa_eps psi - kappa psi ||
//!  "LD":     || (L_eps + kappa_eps) psi - L_D psi ||
//!  "phi":    || phi_eps - psi ||_{L^2_F} for each requested alpha
//!  "flux":   eps^{-1} |D_eps[psi_c]|^2 at the wall, psi_c = flux_corrected(psi)
const std::vector<std::string>& convergence_quantities();

struct ConvergenceRow {
    double eps = 0.0;
    std::string quantity;  // "phi" rows carry the alpha in the name, e.g. "phi[a=0.5]"
    std::string psi;
    double error = 0.0;
    double order = 0.0;  // log-ratio against the previous eps; 0 on the first row
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    //! For each (quantity, psi) series: strictly decreasing and every consecutive
    //! ratio <= max_ratio.
    bool passed = true;
    double worst_ratio = 0.0;
    std::vector<std::string> failures;
    std::string summary() const;
};

struct ConvergenceOptions {
    std::vector<std::string> quantities{"LSR", "LD"};
    std::vector<double> alphas{0.0};
    double max_ratio = 0.8;
    int grid_points = 400;
    double grid_length = 8.0;
    int workers = 1;
};

//! eps must be strictly decreasing.
ConvergenceReport convergence_study(const std::vector<TestFunction>& psis, const std::vector<double>& eps,
                                    const OperatorContext& ctx, const ConvergenceOptions& opt = {});

//! || phi_eps - psi ||_{L^2_F(Omega x R^d)} on the grid (d = 1).
double phi_error_norm(const TestFunction& psi, const OperatorContext& ctx, double eps, double alpha,
                      const L2Grid& grid, int workers = 1);

}  // namespace fraclimit
