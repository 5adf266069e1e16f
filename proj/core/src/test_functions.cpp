#include "fraclimit/test_functions.hpp"

#include <cmath>

#include "fraclimit/errors.hpp"

namespace fraclimit {

namespace {

constexpr double kGaussRadius = 9.2;  // exp(-9.2^2/2) < 1e-18

Vec mirror(Vec c) {
    c[c.size() - 1] = -c[c.size() - 1];
    return c;
}

struct Gauss {
    Vec c;
    double sigma;
    double value(const Vec& x) const { return std::exp(-(x - c).squaredNorm() / (2 * sigma * sigma)); }
    Vec gradient(const Vec& x) const { return -value(x) / (sigma * sigma) * (x - c); }
    Mat hessian(const Vec& x) const {
        const int d = static_cast<int>(x.size());
        const double s2 = sigma * sigma;
        Vec y = x - c;
        Mat h = (y * y.transpose()) / (s2 * s2);
        h -= Mat::Identity(d, d) / s2;
        return value(x) * h;
    }
};

}  // namespace

double TestFunction::far_radius(const Vec& x) const {
    if (radius <= 0.0) return 0.0;
    return (x - mirror(center)).norm() + radius;
}

TestFunction constant_function(int d, double c) {
    TestFunction f;
    f.id = "const";
    f.d = d;
    f.value = [c](const Vec&) { return c; };
    f.gradient = [d](const Vec&) { return Vec(Vec::Zero(d)); };
    f.hessian = [d](const Vec&) { return Mat(Mat::Zero(d, d)); };
    f.center = Vec::Zero(d);
    f.radius = 0.0;
    f.far_value = c;
    f.in_Ds_class = true;
    f.dn_zero_order = 100;
    f.sup_norm = std::abs(c);
    return f;
}

TestFunction gaussian_bump(const Vec& center, double sigma) {
    if (!(sigma > 0.0)) throw ConfigError("gaussian bump needs sigma > 0");
    Gauss g{center, sigma};
    TestFunction f;
    f.id = "gauss";
    f.d = static_cast<int>(center.size());
    f.value = [g](const Vec& x) { return g.value(x); };
    f.gradient = [g](const Vec& x) { return g.gradient(x); };
    f.hessian = [g](const Vec& x) { return g.hessian(x); };
    f.center = center;
    f.radius = kGaussRadius * sigma;
    f.in_Ds_class = center[f.d - 1] == 0.0;
    f.dn_zero_order = f.in_Ds_class ? 1 : 0;
    f.sup_norm = 1.0;
    return f;
}

TestFunction even_gaussian(const Vec& center, double sigma) {
    if (!(sigma > 0.0)) throw ConfigError("gaussian bump needs sigma > 0");
    Gauss a{center, sigma}, b{mirror(center), sigma};
    TestFunction f;
    f.id = "even_gauss";
    f.d = static_cast<int>(center.size());
    f.value = [a, b](const Vec& x) { return a.value(x) + b.value(x); };
    f.gradient = [a, b](const Vec& x) { return Vec(a.gradient(x) + b.gradient(x)); };
    f.hessian = [a, b](const Vec& x) { return Mat(a.hessian(x) + b.hessian(x)); };
    f.center = center;
    f.radius = 2.0 * std::abs(center[f.d - 1]) + kGaussRadius * sigma;
    f.in_Ds_class = true;
    f.dn_zero_order = 1;
    f.sup_norm = 2.0;
    return f;
}

TestFunction poly_even_gaussian(const Vec& center, double sigma, double a) {
    if (!(sigma > 0.0)) throw ConfigError("gaussian bump needs sigma > 0");
    Vec c = center;
    const int d = static_cast<int>(c.size());
    c[d - 1] = 0.0;
    Gauss g{c, sigma};
    TestFunction f;
    f.id = "poly_even";
    f.d = d;
    f.value = [g, a, d](const Vec& x) { return (1.0 + a * x[d - 1] * x[d - 1]) * g.value(x); };
    f.gradient = [g, a, d](const Vec& x) {
        const double p = 1.0 + a * x[d - 1] * x[d - 1];
        Vec r = p * g.gradient(x);
        r[d - 1] += 2.0 * a * x[d - 1] * g.value(x);
        return r;
    };
    f.hessian = [g, a, d](const Vec& x) {
        const double p = 1.0 + a * x[d - 1] * x[d - 1];
        Vec dp = Vec::Zero(d);
        dp[d - 1] = 2.0 * a * x[d - 1];
        Vec gg = g.gradient(x);
        Mat h = p * g.hessian(x) + dp * gg.transpose() + gg * dp.transpose();
        h(d - 1, d - 1) += 2.0 * a * g.value(x);
        return h;
    };
    f.center = c;
    // (1 + a r^2) exp(-r^2/2 sigma^2) < 1e-17 beyond this radius for moderate a.
    f.radius = (kGaussRadius + 1.0) * sigma;
    f.in_Ds_class = true;
    f.dn_zero_order = 1;
    // Maximum of (1 + a t) e^{-t / 2 sigma^2} over t = x_d^2 >= 0.
    const double t = std::max(0.0, 2.0 * sigma * sigma - 1.0 / a);
    f.sup_norm = a > 0.0 ? (1.0 + a * t) * std::exp(-t / (2.0 * sigma * sigma)) : 1.0;
    return f;
}

TestFunction wall_corrector() {
    TestFunction f;
    f.id = "corrector";
    f.d = 1;
    f.value = [](const Vec& x) { return x[0] * x[0] * std::exp(-0.5 * x[0] * x[0]); };
    f.gradient = [](const Vec& x) {
        const double y = x[0];
        return vec1((2.0 * y - y * y * y) * std::exp(-0.5 * y * y));
    };
    f.hessian = [](const Vec& x) {
        const double y = x[0], y2 = y * y;
        Mat h(1, 1);
        h(0, 0) = (2.0 - 5.0 * y2 + y2 * y2) * std::exp(-0.5 * y2);
        return h;
    };
    f.center = vec1(0.0);
    f.radius = 10.0;
    f.in_Ds_class = true;
    f.dn_zero_order = 1;
    f.sup_norm = 2.0 / std::exp(1.0);
    return f;
}

TestFunction x_exp() {
    TestFunction f;
    f.id = "xexp";
    f.d = 1;
    f.value = [](const Vec& x) { return x[0] * std::exp(-x[0]); };
    f.gradient = [](const Vec& x) { return vec1((1.0 - x[0]) * std::exp(-x[0])); };
    f.hessian = [](const Vec& x) {
        Mat h(1, 1);
        h(0, 0) = (x[0] - 2.0) * std::exp(-x[0]);
        return h;
    };
    f.center = vec1(0.0);
    f.radius = 46.0;  // x e^{-x} < 1e-18 beyond
    f.in_Ds_class = false;
    f.dn_zero_order = 0;
    f.sup_norm = 1.0 / std::exp(1.0);
    return f;
}

TestFunction combine(double a, const TestFunction& f, double b, const TestFunction& g, std::string id) {
    if (f.d != g.d) throw ConfigError("combined test functions differ in dimension");
    TestFunction h;
    h.id = id.empty() ? f.id + "+" + g.id : std::move(id);
    h.d = f.d;
    h.value = [a, b, f, g](const Vec& x) { return a * f.value(x) + b * g.value(x); };
    h.gradient = [a, b, f, g](const Vec& x) { return Vec(a * f.gradient(x) + b * g.gradient(x)); };
    h.hessian = [a, b, f, g](const Vec& x) { return Mat(a * f.hessian(x) + b * g.hessian(x)); };
    if (f.radius <= 0.0) {
        h.center = g.center;
        h.radius = g.radius;
    } else if (g.radius <= 0.0) {
        h.center = f.center;
        h.radius = f.radius;
    } else {
        h.center = f.center;
        h.radius = std::max(f.radius, (g.center - f.center).norm() + g.radius);
    }
    h.far_value = a * f.far_value + b * g.far_value;
    h.in_Ds_class = f.in_Ds_class && g.in_Ds_class;
    h.dn_zero_order = std::min(f.dn_zero_order, g.dn_zero_order);
    h.sup_norm = std::abs(a) * f.sup_norm + std::abs(b) * g.sup_norm;
    return h;
}

TestFunction test_function_by_id(const std::string& id, int d) {
    Vec c = Vec::Zero(d);
    if (id == "const") return constant_function(d, 1.0);
    if (id == "gauss") {
        c[d - 1] = 2.0;
        return gaussian_bump(c, 0.5);
    }
    if (id == "even_gauss") {
        c[d - 1] = 1.0;
        return even_gaussian(c, 0.7);
    }
    if (id == "poly_even") return poly_even_gaussian(c, 1.0, 1.0);
    if (d == 1 && id == "xexp") return x_exp();
    if (d == 1 && id == "corrector") return wall_corrector();
    throw ConfigError("unknown test function id '" + id + "' for d = " + std::to_string(d));
}

}  // namespace fraclimit
