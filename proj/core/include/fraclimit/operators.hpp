#pragma once

#include <string>
#include <vector>

#include "fraclimit/kernels.hpp"
#include "fraclimit/model.hpp"
#include "fraclimit/test_functions.hpp"

namespace fraclimit {

//! Shared read-only state for operator quadrature: equilibrium, kernel table,
//! named constants and small-argument kernel moments.
class OperatorContext {
  public:
    OperatorContext(const Equilibrium& eq, const KernelTable& table);

    const Equilibrium& equilibrium() const { return *eq_; }
    const KernelTable& table() const { return *table_; }
    const ModelParams& params() const { return eq_->params(); }
    const Constants& constants() const { return k_; }

    //! int_0^rho K(u) u^{d-1+j} du for K = F1 (f0 = false) or F0, j = 1..4.
    double small_moment(bool f0, int j, double rho) const;

    //! Relative tolerance of the radial quadratures.
    double rel_tol = 1e-10;
    //! Radial argument below which the kernels are replaced by a Taylor-expanded ball.
    static constexpr double kSmallArg = 1e-4;

  private:
    const Equilibrium* eq_;
    const KernelTable* table_;
    Constants k_;
    double moments_[2][5] = {};
};

// Limit operators. err, if given, receives an absolute quadrature error estimate.

//! L_SR = gamma1 PV int (psi(eta(x, w)) - psi(x)) |w|^{-d-2s} dw.
double op_LSR(const TestFunction& psi, const Vec& x, const OperatorContext& ctx, double* err = nullptr);
//! Regional fractional Laplacian (-Delta)^s_Omega with the c_{d,s} normalization.
double op_regional(const TestFunction& psi, const Vec& x, const OperatorContext& ctx, double* err = nullptr);
//! Free-space fractional Laplacian (-Delta)^s (psi evaluated on all of R^d).
double op_fractional_laplacian(const TestFunction& psi, const Vec& x, const OperatorContext& ctx,
                               double* err = nullptr);
//! kappa as an integral over jumps leaving the half-space.
double op_kappa_volume(const TestFunction& psi, const Vec& x, const OperatorContext& ctx,
                       double* err = nullptr);
//! kappa as an integral over the wall: gamma0 int (psi(y) - psi(x)) (y - x).n / |y - x|^{d+2s} dy.
double op_kappa_surface(const TestFunction& psi, const Vec& x, const OperatorContext& ctx,
                        double* err = nullptr);
//! Nonlocal gradient gamma0 int (psi~(y, w) - psi(y)) w / |w|^{d+2s} dw, where psi~ is
//! psi(y + w) inside the half-space and psi at the exit point otherwise. Requires s > 1/2.
Vec op_D2sm1(const TestFunction& psi, const Vec& y, const OperatorContext& ctx, double* err = nullptr);
//! L_D = -gamma_{d,s} (-Delta)^s_Omega + kappa.
double op_LD(const TestFunction& psi, const Vec& x, const OperatorContext& ctx, double* err = nullptr);
//! (1 - alpha) L_SR + alpha L_D.
double op_LM(const TestFunction& psi, const Vec& x, const OperatorContext& ctx, double alpha,
             double* err = nullptr);

// Operators at Knudsen number eps.

//! eps^{-2s} int (psi(eta(x, eps w)) - psi(x)) F1(w) dw.
double op_LSR_eps(const TestFunction& psi, const Vec& x, const OperatorContext& ctx, double eps,
                  double* err = nullptr);
//! eps^{-2s} int_{x + eps w in Omega} (psi(x + eps w) - psi(x)) F1(w) dw.
double op_Leps(const TestFunction& psi, const Vec& x, const OperatorContext& ctx, double eps,
               double* err = nullptr);
//! eps^{-2s} int nu0 exp(-nu0 tau_f^eps) (psi(x_f) - psi(x)) F(v) dv.
double op_kappa_eps(const TestFunction& psi, const Vec& x, const OperatorContext& ctx, double eps,
                    double* err = nullptr);
//! eps^{-2s} int (psi~(x, eps w) - psi(x)) F1(w) dw with the exit extension psi~.
double op_Leps_extended(const TestFunction& psi, const Vec& x, const OperatorContext& ctx, double eps,
                        double* err = nullptr);
//! eps^{1-2s} c0 int_{w.n < 0} (psi(y + eps w) - psi(y)) F0(w) |w.n| dw. Requires s > 1/2.
double op_Deps(const TestFunction& psi, const Vec& y, const OperatorContext& ctx, double eps,
               double* err = nullptr);
//! (1 - alpha) L^eps_SR + alpha (L_eps + kappa_eps).
double op_LM_eps(const TestFunction& psi, const Vec& x, const OperatorContext& ctx, double eps, double alpha,
                 double* err = nullptr);

//! psi + c chi with chi = x^2 exp(-x^2/2) and c chosen so that D^{2s-1}[psi].n = 0
//! at the wall (d = 1).
TestFunction flux_corrected(const TestFunction& psi, const OperatorContext& ctx);

struct OperatorSample {
    std::string op;
    std::string psi;
    double eps = 0.0;
    double alpha = 0.0;
    std::vector<Vec> points;
    std::vector<double> values;
    std::vector<double> errors;
};

//! Operator names accepted by evaluate_operator.
const std::vector<std::string>& operator_names();
//! Evaluate a named scalar operator; "D2sm1" returns the normal component D.n.
double evaluate_operator(const std::string& op, const TestFunction& psi, const Vec& x,
                         const OperatorContext& ctx, double eps, double alpha, double* err = nullptr);
//! Evaluate over a list of points, data-parallel over points.
OperatorSample sample_operator(const std::string& op, const TestFunction& psi, const std::vector<Vec>& points,
                               const OperatorContext& ctx, double eps = 0.0, double alpha = 0.0,
                               int workers = 1);

}  // namespace fraclimit
