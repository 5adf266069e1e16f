#pragma once

#include "fraclimit/operators.hpp"

namespace fraclimit {

//! phi_eps = A_eps^{-1}[nu0 psi] with A_eps phi = nu0 phi - eps v.grad_x phi and the
//! Maxwell boundary condition of accommodation alpha (0 specular, 1 diffuse).
class Resolvent {
  public:
    Resolvent(const TestFunction& psi, const OperatorContext& ctx, double eps, double alpha);

    double operator()(const Vec& x, const Vec& v) const;

    //! int_0^inf nu0 e^{-nu0 tau} psi(x + eps tau v) dtau (no wall).
    double free(const Vec& x, const Vec& v) const;

    //! Diffuse re-emission average c0 int_{w.n<0} free(y, w) F(w) |w.n| dw, computed as
    //! psi(y) + eps^{2s-1} D_eps[psi](y).
    double boundary_average(const Vec& y) const;

    //! Relative tolerance of the tau quadratures.
    double rel_tol = 1e-13;

  private:
    double path_integral(const Vec& x, const Vec& v, double t_end) const;

    const TestFunction* psi_;
    const OperatorContext* ctx_;
    double eps_;
    double alpha_;
    double nu0_;
    double wall_average_ = 0.0;  // boundary_average at the wall point in d = 1
};

//! One-shot evaluation of the resolvent.
double resolvent_phi_eps(const TestFunction& psi, const Vec& x, const Vec& v, const OperatorContext& ctx,
                         double eps, double alpha);

}  // namespace fraclimit
