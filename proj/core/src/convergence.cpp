#include "fraclimit/convergence.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "fraclimit/errors.hpp"
#include "fraclimit/parallel.hpp"
#include "fraclimit/quadrature.hpp"
#include "fraclimit/resolvent.hpp"

namespace fraclimit {

L2Grid l2_grid(int n, double L) {
    if (n < 2 || !(L > 0.0)) throw ConfigError("l2 grid needs n >= 2 and L > 0");
    L2Grid g;
    const double h = 1.0 / n;
    for (int i = 1; i <= n; ++i) {
        const double t = i * h;
        g.x.push_back(L * t * t);
        // dx = 2 L t dt; trapezoid in t (the t = 0 node has zero weight).
        g.w.push_back((i == n ? 0.5 : 1.0) * h * 2.0 * L * t);
    }
    return g;
}

const std::vector<std::string>& convergence_quantities() {
    static const std::vector<std::string> q{"LSR", "Lreg", "kappa", "LD", "phi", "flux"};
    return q;
}

namespace {

using Op = std::function<double(const Vec&)>;

std::vector<double> evaluate(const Op& op, const L2Grid& g, int workers) {
    std::vector<double> out(g.x.size());
    parallel_blocks(g.x.size(), workers, [&](std::size_t lo, std::size_t hi, int) {
        for (std::size_t i = lo; i < hi; ++i) out[i] = op(vec1(g.x[i]));
    });
    return out;
}

double l2_diff(const std::vector<double>& a, const std::vector<double>& b, const L2Grid& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += g.w[i] * (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace

double phi_error_norm(const TestFunction& psi, const OperatorContext& ctx, double eps, double alpha,
                      const L2Grid& grid, int workers) {
    if (ctx.params().d != 1) throw ConfigError("phi error norm is implemented for d = 1");
    const Equilibrium& eq = ctx.equilibrium();
    Resolvent R(psi, ctx, eps, alpha);
    R.rel_tol = 1e-9;
    // Speeds: 8-point Gauss rule per decade over [1e-8, 1e8]; below, phi - psi = O(eps |v|).
    std::vector<double> vs, vw;
    const GaussRule& gr = gauss_legendre(8);
    for (int k = -8; k < 8; ++k) {
        const double a = std::pow(10.0, k), b = std::pow(10.0, k + 1);
        for (std::size_t i = 0; i < gr.x.size(); ++i) {
            const double v = a + (b - a) * gr.x[i];
            vs.push_back(v);
            vw.push_back((b - a) * gr.w[i] * eq.radial(v));
        }
    }
    std::vector<double> part(grid.x.size(), 0.0);
    parallel_blocks(grid.x.size(), workers, [&](std::size_t lo, std::size_t hi, int) {
        for (std::size_t i = lo; i < hi; ++i) {
            const Vec x = vec1(grid.x[i]);
            const double px = psi.value(x);
            double acc = 0.0;
            for (std::size_t j = 0; j < vs.size(); ++j) {
                const double dp = R(x, vec1(vs[j])) - px;
                const double dm = R(x, vec1(-vs[j])) - px;
                acc += vw[j] * (dp * dp + dm * dm);
            }
            part[i] = grid.w[i] * acc;
        }
    });
    double s = 0.0;
    for (double v : part) s += v;
    return std::sqrt(s);
}

ConvergenceReport convergence_study(const std::vector<TestFunction>& psis, const std::vector<double>& eps,
                                    const OperatorContext& ctx, const ConvergenceOptions& opt) {
    if (eps.empty()) throw ConfigError("convergence study needs at least one eps");
    for (std::size_t k = 1; k < eps.size(); ++k)
        if (!(eps[k] < eps[k - 1])) throw ConfigError("eps list must be strictly decreasing");
    for (double e : eps)
        if (!(e > 0.0 && e <= 1.0)) throw ConfigError("eps must lie in (0, 1]");
    if (ctx.params().d != 1) throw ConfigError("convergence study is implemented for d = 1");
    for (const auto& q : opt.quantities) {
        bool known = false;
        for (const auto& n : convergence_quantities()) known = known || n == q;
        if (!known) throw ConfigError("unknown convergence quantity '" + q + "'");
    }
    const L2Grid g = l2_grid(opt.grid_points, opt.grid_length);
    const double gds = ctx.constants().gamma_ds;
    ConvergenceReport rep;
    for (const auto& psi : psis) {
        for (const auto& q : opt.quantities) {
            std::vector<std::string> names;
            std::vector<std::vector<double>> errs;
            std::string psi_id = psi.id;
            if (q == "phi") {
                for (double a : opt.alphas) {
                    std::ostringstream nm;
                    nm << "phi[a=" << a << "]";
                    names.push_back(nm.str());
                    std::vector<double> e;
                    for (double ep : eps) e.push_back(phi_error_norm(psi, ctx, ep, a, g, opt.workers));
                    errs.push_back(e);
                }
            } else if (q == "flux") {
                // Measured on the flux-corrected function, whose limit flux vanishes.
                const TestFunction pc = flux_corrected(psi, ctx);
                psi_id = pc.id;
                names.push_back(q);
                std::vector<double> e;
                for (double ep : eps) {
                    const double D = op_Deps(pc, vec1(0.0), ctx, ep);
                    e.push_back(D * D / ep);
                }
                errs.push_back(e);
            } else {
                Op lim;
                std::function<Op(double)> approx;
                if (q == "LSR") {
                    lim = [&](const Vec& x) { return op_LSR(psi, x, ctx); };
                    approx = [&](double e) { return Op([&, e](const Vec& x) { return op_LSR_eps(psi, x, ctx, e); }); };
                } else if (q == "Lreg") {
                    lim = [&](const Vec& x) { return -gds * op_regional(psi, x, ctx); };
                    approx = [&](double e) { return Op([&, e](const Vec& x) { return op_Leps(psi, x, ctx, e); }); };
                } else if (q == "kappa") {
                    lim = [&](const Vec& x) { return op_kappa_volume(psi, x, ctx); };
                    approx = [&](double e) { return Op([&, e](const Vec& x) { return op_kappa_eps(psi, x, ctx, e); }); };
                } else {
                    lim = [&](const Vec& x) { return op_LD(psi, x, ctx); };
                    approx = [&](double e) {
                        return Op([&, e](const Vec& x) { return op_Leps_extended(psi, x, ctx, e); });
                    };
                }
                const auto ref = evaluate(lim, g, opt.workers);
                names.push_back(q);
                std::vector<double> e;
                for (double ep : eps) e.push_back(l2_diff(evaluate(approx(ep), g, opt.workers), ref, g));
                errs.push_back(e);
            }
            for (std::size_t s = 0; s < names.size(); ++s) {
                for (std::size_t k = 0; k < eps.size(); ++k) {
                    ConvergenceRow row;
                    row.eps = eps[k];
                    row.quantity = names[s];
                    row.psi = psi_id;
                    row.error = errs[s][k];
                    if (k > 0 && errs[s][k] > 0.0 && errs[s][k - 1] > 0.0)
                        row.order = std::log(errs[s][k - 1] / errs[s][k]) / std::log(eps[k - 1] / eps[k]);
                    rep.rows.push_back(row);
                    if (k == 0) continue;
                    const double prev = errs[s][k - 1], cur = errs[s][k];
                    if (prev == 0.0 && cur == 0.0) continue;  // exact zeros (constants)
                    const double ratio = prev > 0.0 ? cur / prev : INFINITY;
                    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
                    if (!(ratio <= opt.max_ratio)) {
                        rep.passed = false;
                        std::ostringstream msg;
                        msg << names[s] << " " << psi_id << ": ratio " << ratio << " at eps " << eps[k];
                        rep.failures.push_back(msg.str());
                    }
                }
            }
        }
    }
    return rep;
}

std::string ConvergenceReport::summary() const {
    std::ostringstream out;
    out << std::setprecision(4);
    out << (passed ? "PASS" : "FAIL") << ": worst consecutive ratio " << worst_ratio << "\n";
    for (const auto& r : rows)
        out << "  " << r.quantity << " " << r.psi << " eps=" << r.eps << " error=" << r.error
            << " order=" << r.order << "\n";
    for (const auto& f : failures) out << "  failure: " << f << "\n";
    return out.str();
}

}  // namespace fraclimit
