#pragma once

#include <functional>
#include <string>

#include "fraclimit/types.hpp"

namespace fraclimit {

//! Smooth scalar field on the closed half-space with analytic derivatives.
//! Outside the ball B(center, radius) (and its mirror image across the wall)
//! the value equals far_value up to round-off.
struct TestFunction {
    std::string id;
    int d = 1;
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;
    std::function<Mat(const Vec&)> hessian;
    Vec center;
    double radius = 0.0;
    double far_value = 0.0;
    //! d_n psi = 0 on the wall.
    bool in_Ds_class = false;
    //! Order of vanishing of d_d psi at x_d = 0 (0 when it does not vanish).
    int dn_zero_order = 0;
    double sup_norm = 0.0;

    double operator()(const Vec& x) const { return value(x); }
    //! Radius beyond which |y - x| > R implies psi(y) = psi(eta(x, y - x)) = far_value.
    double far_radius(const Vec& x) const;
};

TestFunction constant_function(int d, double c);
//! exp(-|x - c|^2 / (2 sigma^2)).
TestFunction gaussian_bump(const Vec& center, double sigma);
//! Sum of the bump at c and at its mirror image; even in x_d.
TestFunction even_gaussian(const Vec& center, double sigma);
//! (1 + a x_d^2) exp(-(|x' - c'|^2 + x_d^2) / (2 sigma^2)) with c on the wall.
TestFunction poly_even_gaussian(const Vec& center, double sigma, double a);
//! x_d^2 exp(-x_d^2 / 2) (d = 1 only).
TestFunction wall_corrector();
//! x_d exp(-x_d) (d = 1 only).
TestFunction x_exp();
//! a f + b g.
TestFunction combine(double a, const TestFunction& f, double b, const TestFunction& g,
                     std::string id = {});

//! Build a family member from its id: "const", "gauss", "even_gauss", "poly_even",
//! "xexp", "corrector". Parameters use the defaults of the d = 1 studies.
TestFunction test_function_by_id(const std::string& id, int d);

}  // namespace fraclimit
