#include "fraclimit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fraclimit/errors.hpp"

namespace fraclimit {

namespace {

GaussRule build_rule(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton on P_n starting from the Chebyshev-like guess.
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double wt = 2.0 / ((1.0 - z * z) * dp * dp);
        r.x[n - 1 - i] = 0.5 * (1.0 + z);
        r.w[n - 1 - i] = 0.5 * wt;
    }
    return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
    return it->second;
}

namespace {

struct Panel {
    double a, b, val, err, l1;
    bool operator<(const Panel& o) const { return err < o.err; }
};

Panel gk_panel(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    auto g = [&](double t) { return half * f(mid + half * t); };
    double e = 0.0, l1 = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, -1.0, 1.0, 0, 0.0, &e, &l1);
    if (!std::isfinite(v)) throw NumericError("quadrature produced a non-finite value");
    return {a, b, v, e, l1};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, const QuadOptions& opt) {
    return integrate_panels(f, {a, b}, opt, nullptr);
}

double integrate(const std::function<double(double)>& f, double a, double b, const QuadOptions& opt,
                 double* err) {
    return integrate_panels(f, {a, b}, opt, err);
}

double integrate_panels(const std::function<double(double)>& f, const std::vector<double>& points,
                        const QuadOptions& opt) {
    return integrate_panels(f, points, opt, nullptr);
}

double integrate_panels(const std::function<double(double)>& f, const std::vector<double>& points,
                        const QuadOptions& opt, double* err) {
    std::priority_queue<Panel> heap;
    double total = 0.0, total_err = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (!(points[i + 1] > points[i])) continue;
        Panel p = gk_panel(f, points[i], points[i + 1]);
        total += p.val;
        total_err += p.err;
        l1 += p.l1;
        heap.push(p);
    }
    int splits = 0;
    while (!heap.empty() && splits < opt.max_intervals) {
        const double tol = std::max({opt.abs_tol, opt.rel_tol * std::abs(total), 1e-14 * l1});
        if (total_err <= tol) break;
        Panel p = heap.top();
        heap.pop();
        const double m = 0.5 * (p.a + p.b);
        if (!(m > p.a && m < p.b)) {
            // Panel cannot be split further; keep its estimate.
            if (heap.empty()) break;
            continue;
        }
        Panel l = gk_panel(f, p.a, m), r = gk_panel(f, m, p.b);
        total += l.val + r.val - p.val;
        total_err += l.err + r.err - p.err;
        l1 += l.l1 + r.l1 - p.l1;
        heap.push(l);
        heap.push(r);
        ++splits;
    }
    if (!std::isfinite(total)) throw NumericError("quadrature produced a non-finite value");
    if (err) *err += std::max(total_err, 0.0);
    return total;
}

std::vector<double> geometric_points(double lo, double hi, double ratio) {
    std::vector<double> p;
    if (!(hi > lo)) return {lo};
    for (double x = lo; x < hi; x *= ratio) p.push_back(x);
    p.push_back(hi);
    return p;
}

std::vector<double> merge_points(std::vector<double> pts, const std::vector<double>& extra, double lo,
                                 double hi) {
    for (double e : extra)
        if (e > lo && e < hi && std::isfinite(e)) pts.push_back(e);
    std::sort(pts.begin(), pts.end());
    std::vector<double> out;
    for (double p : pts) {
        if (p < lo || p > hi) continue;
        if (out.empty() || p > out.back() * (1.0 + 1e-14) + 1e-300) out.push_back(p);
    }
    return out;
}

}  // namespace fraclimit
