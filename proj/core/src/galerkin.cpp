#include "fraclimit/galerkin.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <sstream>

#include <Eigen/Cholesky>

#include "fraclimit/errors.hpp"
#include "fraclimit/parallel.hpp"
#include "fraclimit/quadrature.hpp"

namespace fraclimit {

void Mesh1D::validate() const {
    if (nodes.size() < 2) throw ConfigError("mesh needs at least two nodes");
    if (nodes[0] != 0.0) throw ConfigError("mesh must start at the wall (x = 0)");
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1])) throw ConfigError("mesh nodes must increase strictly");
}

std::string Mesh1D::describe() const {
    double hmin = INFINITY, hmax = 0.0;
    for (std::size_t e = 0; e < num_elements(); ++e) {
        hmin = std::min(hmin, h(e));
        hmax = std::max(hmax, h(e));
    }
    std::ostringstream out;
    out << "elements=" << num_elements() << " L=" << length() << " hmin=" << hmin << " hmax=" << hmax;
    return out.str();
}

Mesh1D Mesh1D::uniform(double L, int elements) {
    if (!(L > 0.0) || elements < 1) throw ConfigError("uniform mesh needs L > 0 and at least one element");
    Mesh1D m;
    for (int i = 0; i <= elements; ++i) m.nodes.push_back(L * i / elements);
    m.nodes.back() = L;
    return m;
}

Mesh1D Mesh1D::graded(double L, int elements, double factor) {
    if (!(L > 0.0) || elements < 3) throw ConfigError("graded mesh needs L > 0 and at least three elements");
    if (!(factor >= 1.0)) throw ConfigError("grading factor must be >= 1");
    const int m = std::min(elements / 3, 40);
    // Graded sizes H g^{-m}, ..., H g^{-1}, then H.
    double units = elements - m;
    for (int j = 1; j <= m; ++j) units += std::pow(factor, -j);
    const double H = L / units;
    Mesh1D mesh;
    mesh.nodes.push_back(0.0);
    for (int k = 0; k < elements; ++k) {
        const double hk = k < m ? H * std::pow(factor, -(m - k)) : H;
        mesh.nodes.push_back(mesh.nodes.back() + hk);
    }
    mesh.nodes.back() = L;
    return mesh;
}

Eigen::MatrixXd AssembledForms::form(double alpha) const {
    if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha must lie in [0, 1]");
    if (alpha > 0.0 && A_D.size() == 0)
        throw ConfigError(kMaxwellRangeMessage);
    if (alpha == 0.0) return A_SR;
    if (alpha == 1.0) return A_D;
    return (1.0 - alpha) * A_SR + alpha * A_D;
}

namespace {

// Hat function of global node g restricted to element e.
double hat(const Mesh1D& m, std::size_t g, std::size_t e, double x) {
    if (g == e) return (m.nodes[e + 1] - x) / m.h(e);
    if (g == e + 1) return (x - m.nodes[e]) / m.h(e);
    return 0.0;
}

double slope(const Mesh1D& m, std::size_t g, std::size_t e) {
    if (g == e) return -1.0 / m.h(e);
    if (g == e + 1) return 1.0 / m.h(e);
    return 0.0;
}

struct PairLocal {
    std::size_t e = 0, f = 0;
    std::array<std::size_t, 4> g{};
    int n = 0;
    std::array<double, 16> a{};  // symmetric n x n block, row-major with stride 4
};

struct Pair {
    const Mesh1D& m;
    std::size_t e, f;
    PairLocal loc;

    Pair(const Mesh1D& mesh, std::size_t e_, std::size_t f_) : m(mesh), e(e_), f(f_) {
        loc.e = e;
        loc.f = f;
        auto add = [&](std::size_t g) {
            for (int k = 0; k < loc.n; ++k)
                if (loc.g[k] == g) return;
            loc.g[loc.n++] = g;
        };
        add(e);
        add(e + 1);
        add(f);
        add(f + 1);
    }

    void accumulate(double w, const std::array<double, 4>& D) {
        for (int k = 0; k < loc.n; ++k)
            for (int l = 0; l < loc.n; ++l) loc.a[4 * k + l] += w * D[k] * D[l];
    }

    std::array<double, 4> diffs(double x, double y) const {
        std::array<double, 4> D{};
        for (int k = 0; k < loc.n; ++k) D[k] = hat(m, loc.g[k], f, y) - hat(m, loc.g[k], e, x);
        return D;
    }

    // Tensor Gauss rule over [xa, xb] x [ya, yb] (x in e, y in f), subdividing
    // while the kernel singularity is closer than the rectangle size.
    template <class Kernel, class Dist>
    void tensor(double xa, double xb, double ya, double yb, const Kernel& K, const Dist& dist, int order,
                int depth = 0) {
        const double size = std::max(xb - xa, yb - ya);
        if (depth < 10 && dist(xa, xb, ya, yb) < size) {
            const double xm = 0.5 * (xa + xb), ym = 0.5 * (ya + yb);
            tensor(xa, xm, ya, ym, K, dist, order, depth + 1);
            tensor(xm, xb, ya, ym, K, dist, order, depth + 1);
            tensor(xa, xm, ym, yb, K, dist, order, depth + 1);
            tensor(xm, xb, ym, yb, K, dist, order, depth + 1);
            return;
        }
        const GaussRule& r = gauss_legendre(order);
        for (std::size_t i = 0; i < r.x.size(); ++i) {
            const double x = xa + (xb - xa) * r.x[i];
            for (std::size_t j = 0; j < r.x.size(); ++j) {
                const double y = ya + (yb - ya) * r.x[j];
                accumulate((xb - xa) * (yb - ya) * r.w[i] * r.w[j] * K(x, y), diffs(x, y));
            }
        }
    }
};

PairLocal sr_pair(const Mesh1D& m, std::size_t e, std::size_t f, double s, const AssemblyOptions& opt) {
    Pair P(m, e, f);
    const double p = 1.0 + 2.0 * s;
    auto free_k = [p](double x, double y) { return std::pow(std::abs(y - x), -p); };
    auto mirror_k = [p](double x, double y) { return std::pow(x + y, -p); };
    auto free_dist = [](double, double xb, double ya, double) { return ya - xb; };
    auto mirror_dist = [](double xa, double, double ya, double) { return xa + ya; };
    const double xa = m.nodes[e], xb = m.nodes[e + 1], ya = m.nodes[f], yb = m.nodes[f + 1];
    const GaussRule& r16 = gauss_legendre(16);

    if (e == f) {
        // Differences are sigma_k (y - x) on a single element.
        const double h = m.h(e);
        std::array<double, 4> sig{};
        for (int k = 0; k < P.loc.n; ++k) sig[k] = slope(m, P.loc.g[k], e);
        const double free_int = 2.0 * std::pow(h, 3.0 - 2.0 * s) / ((2.0 - 2.0 * s) * (3.0 - 2.0 * s));
        P.accumulate(free_int, sig);
        if (xa == 0.0) {
            // Duffy on the two triangles: int (1-w)^2 (1+w)^{-1-2s} dw.
            double J = 0.0;
            for (std::size_t i = 0; i < r16.x.size(); ++i) {
                const double w = r16.x[i];
                J += r16.w[i] * (1.0 - w) * (1.0 - w) * std::pow(1.0 + w, -p);
            }
            P.accumulate(2.0 * std::pow(h, 3.0 - 2.0 * s) / (3.0 - 2.0 * s) * J, sig);
        } else {
            P.tensor(xa, xb, ya, yb, mirror_k, mirror_dist, opt.gauss_near);
        }
        return P.loc;
    }

    if (f == e + 1) {
        // p = b - x, q = y - b; differences are sigma_f q + sigma_e p.
        const double b = xb, he = m.h(e), hf = m.h(f), mm = std::min(he, hf);
        std::array<double, 4> se{}, sf{};
        for (int k = 0; k < P.loc.n; ++k) {
            se[k] = slope(m, P.loc.g[k], e);
            sf[k] = slope(m, P.loc.g[k], f);
        }
        const double radial = std::pow(mm, 3.0 - 2.0 * s) / (3.0 - 2.0 * s);
        for (std::size_t i = 0; i < r16.x.size(); ++i) {
            const double t = r16.x[i];
            const double w = radial * r16.w[i] * std::pow(1.0 + t, -p);
            std::array<double, 4> D1{}, D2{};
            for (int k = 0; k < P.loc.n; ++k) {
                D1[k] = se[k] + sf[k] * t;  // p >= q
                D2[k] = sf[k] + se[k] * t;  // q >= p
            }
            P.accumulate(w, D1);
            P.accumulate(w, D2);
        }
        if (he > mm) P.tensor(xa, b - mm, ya, yb, free_k, free_dist, opt.gauss_near);
        if (hf > mm) P.tensor(xa, xb, b + mm, yb, free_k, free_dist, opt.gauss_near);
        P.tensor(xa, xb, ya, yb, mirror_k, mirror_dist, opt.gauss_near);
        return P.loc;
    }

    const double gap = ya - xb;
    const int order = gap < 2.0 * std::max(m.h(e), m.h(f)) ? opt.gauss_near : opt.gauss_far;
    auto both = [p](double x, double y) { return std::pow(y - x, -p) + std::pow(x + y, -p); };
    auto both_dist = [](double xa_, double xb_, double ya_, double) { return std::min(ya_ - xb_, xa_ + ya_); };
    P.tensor(xa, xb, ya, yb, both, both_dist, order);
    return P.loc;
}

// int_e int_f |x - y|^beta dy dx.
double riesz_pair(const Mesh1D& m, std::size_t e, std::size_t f, double beta) {
    const double a = m.nodes[e], b = m.nodes[e + 1], c = m.nodes[f], d = m.nodes[f + 1];
    const double gap = std::max(c - b, a - d);
    if (gap > 4.0 * std::max(b - a, d - c)) {
        const GaussRule& r = gauss_legendre(8);
        double acc = 0.0;
        for (std::size_t i = 0; i < r.x.size(); ++i)
            for (std::size_t j = 0; j < r.x.size(); ++j)
                acc += r.w[i] * r.w[j] * std::pow(std::abs(a + (b - a) * r.x[i] - c - (d - c) * r.x[j]), beta);
        return acc * (b - a) * (d - c);
    }
    auto Phi = [beta](double t) { return std::pow(std::abs(t), beta + 2.0) / ((beta + 1.0) * (beta + 2.0)); };
    return Phi(b - c) + Phi(a - d) - Phi(a - c) - Phi(b - d);
}

}  // namespace

AssembledForms assemble(const Mesh1D& mesh, const ModelParams& params, const Equilibrium& eq,
                        const AssemblyOptions& opt) {
    mesh.validate();
    params.validate();
    if (params.d != 1) throw ConfigError("Galerkin assembly is implemented for d = 1");
    const double s = params.s;
    AssembledForms F;
    F.mesh = mesh;
    F.params = params;
    F.constants = constants(params, eq);
    F.gauss_near = opt.gauss_near;
    F.gauss_far = opt.gauss_far;
    const std::size_t N = mesh.num_nodes(), E = mesh.num_elements();

    F.M = Eigen::MatrixXd::Zero(N, N);
    for (std::size_t e = 0; e < E; ++e) {
        const double h = mesh.h(e);
        F.M(e, e) += h / 3.0;
        F.M(e + 1, e + 1) += h / 3.0;
        F.M(e, e + 1) += h / 6.0;
        F.M(e + 1, e) += h / 6.0;
    }

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(E * (E + 1) / 2);
    for (std::size_t e = 0; e < E; ++e)
        for (std::size_t f = e; f < E; ++f) pairs.emplace_back(e, f);
    std::vector<PairLocal> locals(pairs.size());
    parallel_blocks(pairs.size(), opt.workers, [&](std::size_t lo, std::size_t hi, int) {
        for (std::size_t k = lo; k < hi; ++k) locals[k] = sr_pair(mesh, pairs[k].first, pairs[k].second, s, opt);
    });
    F.A_SR = Eigen::MatrixXd::Zero(N, N);
    const double g1 = F.constants.gamma1;
    for (const auto& L : locals) {
        const double w = L.e == L.f ? 0.5 * g1 : g1;
        for (int k = 0; k < L.n; ++k)
            for (int l = 0; l < L.n; ++l) {
                const double v = L.a[4 * k + l];
                if (!std::isfinite(v)) throw NumericError("non-finite element-pair integral in A_SR assembly");
                F.A_SR(L.g[k], L.g[l]) += w * v;
            }
    }

    if (s > 0.5) {
        const double beta = 1.0 - 2.0 * s;
        const double c = F.constants.gamma0 / (2.0 * s - 1.0);
        std::vector<double> I(pairs.size());
        parallel_blocks(pairs.size(), opt.workers, [&](std::size_t lo, std::size_t hi, int) {
            for (std::size_t k = lo; k < hi; ++k) I[k] = riesz_pair(mesh, pairs[k].first, pairs[k].second, beta);
        });
        F.A_D = Eigen::MatrixXd::Zero(N, N);
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            const auto [e, f] = pairs[k];
            const std::size_t ge[2] = {e, e + 1}, gf[2] = {f, f + 1};
            for (std::size_t i : ge)
                for (std::size_t j : gf) {
                    const double v = c * slope(mesh, i, e) * slope(mesh, j, f) * I[k];
                    F.A_D(i, j) += v;
                    if (e != f) F.A_D(j, i) += v;
                }
        }
    }
    return F;
}

Eigen::VectorXd interpolate(const Mesh1D& mesh, const std::function<double(double)>& g) {
    Eigen::VectorXd u(mesh.num_nodes());
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i) u[i] = g(mesh.nodes[i]);
    return u;
}

Eigen::VectorXd project(const AssembledForms& forms, const std::function<double(double)>& g) {
    const Mesh1D& m = forms.mesh;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m.num_nodes());
    const GaussRule& r = gauss_legendre(8);
    for (std::size_t e = 0; e < m.num_elements(); ++e) {
        const double h = m.h(e);
        for (std::size_t q = 0; q < r.x.size(); ++q) {
            const double x = m.nodes[e] + h * r.x[q];
            const double gv = h * r.w[q] * g(x);
            rhs[e] += gv * (1.0 - r.x[q]);
            rhs[e + 1] += gv * r.x[q];
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(forms.M);
    if (llt.info() != Eigen::Success) throw NumericError("mass matrix is not positive definite");
    return llt.solve(rhs);
}

namespace {

Eigen::LLT<Eigen::MatrixXd> factor(const Eigen::MatrixXd& S) {
    Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() != Eigen::Success) {
        Eigen::LDLT<Eigen::MatrixXd> ldlt(S);
        std::ostringstream msg;
        msg << "Cholesky factorization failed (reciprocal condition estimate " << ldlt.rcond() << ")";
        throw NumericError(msg.str());
    }
    return llt;
}

}  // namespace

Eigen::VectorXd solve_stationary(const AssembledForms& forms, const Eigen::VectorXd& g, double alpha) {
    if (g.size() != forms.M.rows()) throw ConfigError("load vector size does not match the mesh");
    const Eigen::MatrixXd S = forms.M + forms.form(alpha);
    return factor(S).solve(forms.M * g);
}

std::vector<Eigen::VectorXd> evolve(const AssembledForms& forms, const Eigen::VectorXd& rho0, double T, double dt,
                                    double alpha) {
    if (!(dt > 0.0) || !(T >= 0.0)) throw ConfigError("evolve needs dt > 0 and T >= 0");
    if (rho0.size() != forms.M.rows()) throw ConfigError("initial vector size does not match the mesh");
    const long steps = std::lround(T / dt);
    const auto llt = factor(forms.M + dt * forms.form(alpha));
    std::vector<Eigen::VectorXd> out{rho0};
    out.reserve(steps + 1);
    for (long n = 0; n < steps; ++n) out.push_back(llt.solve(forms.M * out.back()));
    return out;
}

double evaluate(const Mesh1D& mesh, const Eigen::VectorXd& u, double x) {
    if (x < 0.0 || x > mesh.length()) return 0.0;
    auto it = std::upper_bound(mesh.nodes.begin(), mesh.nodes.end(), x);
    std::size_t e = it == mesh.nodes.end() ? mesh.num_elements() - 1 : (it - mesh.nodes.begin()) - 1;
    const double t = (x - mesh.nodes[e]) / mesh.h(e);
    return (1.0 - t) * u[e] + t * u[e + 1];
}

DensityField to_field(const Mesh1D& mesh, const Eigen::VectorXd& u, const GridSpec& grid, double t) {
    if (grid.dim() != 1) throw ConfigError("Galerkin fields are one-dimensional");
    DensityField out = zero_field(grid, t);
    const double w = grid.width(0);
    for (int b = 0; b < grid.bins[0]; ++b) {
        const double lo = std::max(0.0, grid.lower[0] + b * w);
        const double hi = std::min(mesh.length(), grid.lower[0] + (b + 1) * w);
        double acc = 0.0;
        if (hi > lo) {
            // Split at mesh nodes; the trapezoid rule is exact on each piece.
            auto it = std::upper_bound(mesh.nodes.begin(), mesh.nodes.end(), lo);
            double a = lo;
            while (a < hi) {
                const double c = (it == mesh.nodes.end()) ? hi : std::min(hi, *it);
                acc += 0.5 * (c - a) * (evaluate(mesh, u, a) + evaluate(mesh, u, c));
                a = c;
                if (it != mesh.nodes.end()) ++it;
            }
        }
        out.values[b] = acc / w;
    }
    double total = 0.0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) total += 0.5 * mesh.h(e) * (u[e] + u[e + 1]);
    const double in = out.window_mass();
    out.out_of_window = total != 0.0 ? (total - in) / total : 0.0;
    return out;
}

double mass(const AssembledForms& forms, const Eigen::VectorXd& u) {
    return (forms.M * u).sum();
}

double m_norm2(const AssembledForms& forms, const Eigen::VectorXd& u) {
    return u.dot(forms.M * u);
}

void write_coo(std::ostream& out, const Eigen::MatrixXd& A, double drop) {
    out.precision(17);
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            if (A(i, j) != 0.0 && std::abs(A(i, j)) > drop) out << i << " " << j << " " << A(i, j) << "\n";
    if (!out) throw IoError("failed writing matrix");
}

}  // namespace fraclimit
