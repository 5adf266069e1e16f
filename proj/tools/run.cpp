#include "run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "fraclimit/compare.hpp"
#include "fraclimit/convergence.hpp"
#include "fraclimit/csv.hpp"
#include "fraclimit/errors.hpp"
#include "fraclimit/galerkin.hpp"
#include "fraclimit/kernels.hpp"
#include "fraclimit/kinetic.hpp"
#include "fraclimit/operators.hpp"
#include "fraclimit/reference.hpp"
#include "fraclimit/version.hpp"

namespace fraclimit::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

class Manifest {
  public:
    explicit Manifest(const RunConfig& cfg) : cfg_(cfg), start_(Clock::now()) {
        const std::time_t now = std::time(nullptr);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        doc_["started_utc"] = buf;
        doc_["fraclimit_version"] = version();
        doc_["backends"] = backend_versions();
        doc_["mode"] = mode_name(cfg.mode);
        json conf = json::object();
        for (const auto& [k, v] : cfg.raw.values()) conf[k] = v;
        doc_["config"] = conf;
        json set = json::array();
        for (const auto& [k, v] : cfg.raw.values())
            if (cfg.raw.explicitly_set(k)) set.push_back(k);
        doc_["explicit_keys"] = set;
        doc_["seeds"] = {{"master", cfg.seed},
                         {"streams", "particle i draws from Philox-4x32 keyed by the master seed, counter (i, substream)"}};
        doc_["workers"] = cfg.workers;
        doc_["phases"] = json::array();
        doc_["checks"] = json::array();
        doc_["outputs"] = json::array();
        doc_["results"] = json::object();
    }

    template <class F>
    auto phase(const std::string& name, F&& f) {
        const auto t0 = Clock::now();
        struct Rec {
            Manifest* m;
            std::string n;
            Clock::time_point t0;
            ~Rec() {
                m->doc_["phases"].push_back(
                    {{"name", n}, {"seconds", std::chrono::duration<double>(Clock::now() - t0).count()}});
            }
        } rec{this, name, t0};
        return f();
    }

    void check(const std::string& name, bool passed, const std::string& detail, std::ostream& log) {
        doc_["checks"].push_back({{"name", name}, {"passed", passed}, {"detail", detail}});
        all_passed_ = all_passed_ && passed;
        log << (passed ? "check ok:     " : "check FAILED: ") << name << " (" << detail << ")\n";
    }

    std::string output(const std::string& file) {
        doc_["outputs"].push_back(file);
        return (fs::path(cfg_.out_dir) / file).string();
    }

    json& results() { return doc_["results"]; }
    bool passed() const { return all_passed_; }

    void write(int status, const std::string& error = "") {
        doc_["wall_clock_seconds"] = std::chrono::duration<double>(Clock::now() - start_).count();
        doc_["exit_status"] = status;
        if (!error.empty()) doc_["error"] = error;
        const fs::path p = fs::path(cfg_.out_dir) / "manifest.json";
        std::ofstream out(p);
        out << doc_.dump(2) << "\n";
        if (!out) throw IoError("failed writing '" + p.string() + "'");
    }

  private:
    const RunConfig& cfg_;
    Clock::time_point start_;
    json doc_;
    bool all_passed_ = true;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string indexed(const std::string& stem, std::size_t k) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "_%03zu.csv", k);
    return stem + buf;
}

Vec to_vec(const std::vector<double>& v) {
    Vec x(static_cast<int>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) x[static_cast<int>(i)] = v[i];
    return x;
}

InitialProfile make_profile(const RunConfig& c) {
    if (c.profile == "gaussian") return gaussian_profile(to_vec(c.center), c.sigma);
    if (c.profile == "point") return point_mass(to_vec(c.center));
    return uniform_slab(c.params.d, c.slab_length);
}

GridSpec make_grid(const RunConfig& c) {
    GridSpec g;
    g.lower = c.grid_lower;
    g.upper = c.grid_upper;
    g.bins = c.grid_bins;
    return g;
}

RunOptions run_options(const RunConfig& c) {
    RunOptions o;
    o.workers = c.workers;
    o.far_wall = c.far_wall;
    if (c.wall == "specular") o.wall = WallRule::Kind::Specular;
    else if (c.wall == "diffuse") o.wall = WallRule::Kind::Diffuse;
    else o.wall = WallRule::Kind::Maxwell;
    return o;
}

std::function<double(double)> profile_density_1d(const InitialProfile& p) {
    if (!p.density) throw ConfigError("kinetic.profile: this profile has no density for the limit solver");
    return [&p](double x) { return p.density(vec1(x)); };
}

void simulate_kinetic(const RunConfig& c, Manifest& m, std::ostream& log) {
    const Equilibrium eq = m.phase("equilibrium", [&] { return make_default_equilibrium(c.params); });
    const InitialProfile prof = make_profile(c);
    ParticleEnsemble ens =
        m.phase("init", [&] { return init_ensemble(prof, c.particles, eq.params(), eq, c.seed); });
    const GridSpec grid = make_grid(c);
    auto fields = m.phase("transport", [&] { return run(ens, eq, c.t_end, c.snapshot_times, grid, run_options(c)); });
    m.phase("write", [&] {
        for (std::size_t k = 0; k < fields.size(); ++k) write_density(m.output(indexed("density", k)), fields[k]);
        return 0;
    });
    const double ks = ks_velocity(ens, eq), crit = ks_critical(ens.n, 1e-3);
    m.results() = {{"particles", ens.n},
                   {"scatterings_per_particle", static_cast<double>(ens.scatterings) / ens.n},
                   {"wall_hits", ens.wall_hits},
                   {"ks_velocity", ks},
                   {"ks_critical_1e-3", crit},
                   {"snapshot_times", c.snapshot_times}};
    log << "simulated " << ens.n << " particles to t=" << c.t_end << ", "
        << fmt(static_cast<double>(ens.scatterings) / ens.n) << " scatterings per particle\n";
    double lowest = INFINITY;
    for (std::size_t i = 0; i < ens.n; ++i) lowest = std::min(lowest, ens.x[i * ens.dim() + ens.dim() - 1]);
    m.check("all particles in the half-space", lowest >= 0.0, "smallest normal coordinate " + fmt(lowest), log);
    // F is invariant only for the stationary slab closed by the far mirror.
    const bool stationary = c.profile == "slab" && c.far_wall == c.slab_length;
    if (stationary)
        m.check("velocity marginal KS below the 1e-3 critical value", ks < crit,
                "D=" + fmt(ks) + " crit=" + fmt(crit), log);
}

void eval_operators(const RunConfig& c, Manifest& m, std::ostream& log) {
    const Equilibrium eq = m.phase("equilibrium", [&] { return make_default_equilibrium(c.params); });
    const KernelTable table = m.phase("kernel_table", [&] { return KernelTable(eq); });
    const OperatorContext ctx(eq, table);
    std::vector<Vec> pts;
    for (int i = 0; i < c.op_points; ++i) {
        const double x = c.op_points == 1 ? c.op_x_min
                                          : c.op_x_min + (c.op_x_max - c.op_x_min) * i / (c.op_points - 1);
        pts.push_back(c.params.d == 1 ? vec1(x) : vec2(0.0, x));
    }
    std::vector<OperatorSample> samples;
    m.phase("evaluate", [&] {
        for (const auto& name : c.op_names)
            for (const auto& id : c.op_psi) {
                const TestFunction psi = test_function_by_id(id, c.params.d);
                samples.push_back(
                    sample_operator(name, psi, pts, ctx, c.params.eps, c.params.alpha, c.workers));
            }
        return 0;
    });
    write_operator_samples(m.output("operators.csv"), samples);
    bool finite = true;
    for (const auto& s : samples)
        for (double v : s.values) finite = finite && std::isfinite(v);
    log << "evaluated " << samples.size() << " operator/test-function pairs at " << pts.size() << " points\n";
    m.check("operator values finite", finite, std::to_string(samples.size()) + " series", log);
}

void converge(const RunConfig& c, Manifest& m, std::ostream& log) {
    const Equilibrium eq = m.phase("equilibrium", [&] { return make_default_equilibrium(c.params); });
    const KernelTable table = m.phase("kernel_table", [&] { return KernelTable(eq); });
    const OperatorContext ctx(eq, table);
    std::vector<TestFunction> psis;
    for (const auto& id : c.conv_psi) psis.push_back(test_function_by_id(id, 1));
    ConvergenceOptions o;
    o.quantities = c.conv_quantities;
    o.alphas = c.conv_alphas;
    o.max_ratio = c.conv_max_ratio;
    o.grid_points = c.conv_grid_points;
    o.grid_length = c.conv_grid_length;
    o.workers = c.workers;
    const ConvergenceReport rep = m.phase("study", [&] { return convergence_study(psis, c.eps_list, ctx, o); });
    write_convergence(m.output("convergence.csv"), rep);
    log << rep.summary();
    m.results()["worst_ratio"] = rep.worst_ratio;
    m.check("errors decrease with consecutive ratio <= " + fmt(c.conv_max_ratio), rep.passed,
            "worst ratio " + fmt(rep.worst_ratio), log);
}

AssembledForms assemble_forms(const RunConfig& c, const Equilibrium& eq, Manifest& m, std::ostream& log) {
    const Mesh1D mesh = Mesh1D::graded(c.limit_length, c.limit_elements, c.limit_grading);
    AssemblyOptions ao;
    ao.workers = c.workers;
    AssembledForms F = m.phase("assemble", [&] { return assemble(mesh, eq.params(), eq, ao); });
    m.results()["mesh"] = mesh.describe();
    log << "assembled forms on " << mesh.describe() << "\n";
    return F;
}

void solve_limit(const RunConfig& c, Manifest& m, std::ostream& log) {
    const Equilibrium eq = m.phase("equilibrium", [&] { return make_default_equilibrium(c.params); });
    const AssembledForms F = assemble_forms(c, eq, m, log);
    const double asym = (F.A_SR - F.A_SR.transpose()).cwiseAbs().maxCoeff();
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(F.mesh.num_nodes());
    const double null = (F.A_SR * one).cwiseAbs().maxCoeff();
    m.check("A_SR symmetric to 1e-10", asym <= 1e-10, "max asymmetry " + fmt(asym), log);
    m.check("A_SR annihilates constants to 1e-8", null <= 1e-8, "max row sum " + fmt(null), log);
    if (c.export_matrices) {
        auto dump = [&](const std::string& name, const Eigen::MatrixXd& A) {
            std::ofstream out(m.output(name));
            if (!out) throw IoError("cannot write " + name);
            write_coo(out, A);
        };
        dump("M.coo", F.M);
        dump("A_SR.coo", F.A_SR);
        if (F.A_D.size()) dump("A_D.coo", F.A_D);
    }
    const double alpha = c.params.alpha;
    const InitialProfile prof = make_profile(c);
    if (c.limit_problem == "stationary") {
        const Eigen::VectorXd g = c.limit_load == "one" ? one : interpolate(F.mesh, profile_density_1d(prof));
        const Eigen::VectorXd u = m.phase("solve", [&] { return solve_stationary(F, g, alpha); });
        write_nodal(m.output("stationary_nodes.csv"), F.mesh.nodes, std::vector<double>(u.data(), u.data() + u.size()));
        m.check("stationary solution finite", u.allFinite(), "nodes " + std::to_string(u.size()), log);
        return;
    }
    const Eigen::VectorXd u0 = project(F, profile_density_1d(prof));
    const auto us = m.phase("evolve", [&] { return evolve(F, u0, c.t_end, c.limit_dt, alpha); });
    const GridSpec grid = make_grid(c);
    for (std::size_t k = 0; k < c.snapshot_times.size(); ++k) {
        const std::size_t n = std::min(us.size() - 1, static_cast<std::size_t>(std::lround(c.snapshot_times[k] / c.limit_dt)));
        write_density(m.output(indexed("limit", k)), to_field(F.mesh, us[n], grid, n * c.limit_dt));
    }
    write_nodal(m.output("limit_nodes.csv"), F.mesh.nodes,
                std::vector<double>(us.back().data(), us.back().data() + us.back().size()));
    const double m0 = mass(F, us.front());
    double drift = 0.0, energy_up = 0.0;
    for (std::size_t n = 1; n < us.size(); ++n) {
        drift = std::max(drift, std::abs(mass(F, us[n]) - m0) / std::abs(m0));
        energy_up = std::max(energy_up, m_norm2(F, us[n]) - m_norm2(F, us[n - 1]));
    }
    m.results()["steps"] = us.size() - 1;
    m.results()["mass_drift"] = drift;
    m.check("mass drift below 1e-6", drift < 1e-6, "relative drift " + fmt(drift), log);
    m.check("M-norm non-increasing", energy_up <= 1e-14 * m_norm2(F, u0), "largest increase " + fmt(energy_up), log);
}

void compare_mode(const RunConfig& c, Manifest& m, std::ostream& log) {
    const DensityField A = read_density(c.compare_a), B = read_density(c.compare_b);
    const CompareResult r = compare(A, B);
    const std::string path = m.output("compare.csv");
    std::ofstream out(path);
    out.precision(17);
    out << "l2_rel,linf_rel,mass_gap,noise_rel,l2_rel_debiased\n"
        << r.l2_rel << "," << r.linf_rel << "," << r.mass_gap << "," << r.noise_rel << "," << r.l2_rel_debiased << "\n";
    if (!out) throw IoError("failed writing '" + path + "'");
    m.results() = {{"l2_rel", r.l2_rel}, {"linf_rel", r.linf_rel}, {"mass_gap", r.mass_gap}};
    log << "l2_rel=" << fmt(r.l2_rel) << " linf_rel=" << fmt(r.linf_rel) << " mass_gap=" << fmt(r.mass_gap) << "\n";
}

void full_pipeline(const RunConfig& c, Manifest& m, std::ostream& log) {
    const InitialProfile prof = make_profile(c);
    const GridSpec grid = make_grid(c);
    const double alpha = c.params.alpha;
    const bool use_reference = c.pipeline_limit == "reference" || (c.pipeline_limit == "auto" && alpha == 0.0);
    const Equilibrium eq0 = make_default_equilibrium(c.params);
    DensityField limit;
    if (use_reference) {
        limit = m.phase("reference", [&] { return reference_specular(prof, c.t_end, eq0.params(), grid); });
    } else {
        const AssembledForms F = assemble_forms(c, eq0, m, log);
        const Eigen::VectorXd u0 = project(F, profile_density_1d(prof));
        const auto us = m.phase("evolve", [&] { return evolve(F, u0, c.t_end, c.limit_dt, alpha); });
        limit = to_field(F.mesh, us.back(), grid, c.t_end);
    }
    write_density(m.output("limit.csv"), limit);
    m.results()["limit_solver"] = use_reference ? "reference_specular" : "galerkin";

    const std::string table = m.output("pipeline.csv");
    std::ofstream out(table);
    out.precision(10);
    out << "epsilon,l2_rel,linf_rel,mass_gap,noise_rel,l2_rel_debiased,scatterings_per_particle\n";
    std::vector<double> errs;
    json rows = json::array();
    for (std::size_t k = 0; k < c.eps_list.size(); ++k) {
        ModelParams p = c.params;
        p.eps = c.eps_list[k];
        const Equilibrium eq = make_default_equilibrium(p);
        ParticleEnsemble ens = init_ensemble(prof, c.particles, eq.params(), eq, c.seed);
        auto fields = m.phase("kinetic eps=" + fmt(p.eps),
                              [&] { return run(ens, eq, c.t_end, {c.t_end}, grid, run_options(c)); });
        write_density(m.output(indexed("mc", k)), fields.back());
        const CompareResult r = compare(fields.back(), limit);
        const double spp = static_cast<double>(ens.scatterings) / ens.n;
        out << p.eps << "," << r.l2_rel << "," << r.linf_rel << "," << r.mass_gap << "," << r.noise_rel << ","
            << r.l2_rel_debiased << "," << spp << "\n";
        rows.push_back({{"epsilon", p.eps}, {"l2_rel", r.l2_rel}, {"linf_rel", r.linf_rel}, {"mass_gap", r.mass_gap}});
        errs.push_back(r.l2_rel);
        log << "eps=" << fmt(p.eps) << " l2_rel=" << fmt(r.l2_rel) << " (noise " << fmt(r.noise_rel) << ")\n";
    }
    if (!out) throw IoError("failed writing '" + table + "'");
    m.results()["table"] = rows;
    bool decreasing = true;
    for (std::size_t k = 1; k < errs.size(); ++k) decreasing = decreasing && errs[k] < errs[k - 1];
    m.check("MC-to-limit error decreases along the eps ladder", decreasing, "final l2_rel " + fmt(errs.back()), log);
}

}  // namespace

int run_mode(const RunConfig& cfg, std::ostream& log) {
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + cfg.out_dir + "': " + ec.message());
    {
        std::ofstream out(fs::path(cfg.out_dir) / "config.cfg");
        out << cfg.raw.dump();
        if (!out) throw IoError("failed writing config.cfg");
    }
    Manifest m(cfg);
    try {
        switch (cfg.mode) {
            case Mode::SimulateKinetic: simulate_kinetic(cfg, m, log); break;
            case Mode::EvalOperators: eval_operators(cfg, m, log); break;
            case Mode::Converge: converge(cfg, m, log); break;
            case Mode::SolveLimit: solve_limit(cfg, m, log); break;
            case Mode::Compare: compare_mode(cfg, m, log); break;
            case Mode::FullPipeline: full_pipeline(cfg, m, log); break;
        }
    } catch (...) {
        std::string msg;
        const int code = exit_code_for_current_exception(msg);
        try {
            m.write(code, msg);
        } catch (...) {
        }
        throw;
    }
    const int status = m.passed() ? kOk : kCheckFailed;
    m.write(status);
    return status;
}

int exit_code_for_current_exception(std::string& message) {
    try {
        throw;
    } catch (const ConfigError& e) {
        message = e.what();
        return kConfigError;
    } catch (const IoError& e) {
        message = e.what();
        return kIoError;
    } catch (const fs::filesystem_error& e) {
        message = e.what();
        return kIoError;
    } catch (const NumericError& e) {
        message = e.what();
        return kNumericError;
    } catch (const std::exception& e) {
        message = e.what();
        return kNumericError;
    }
}

}  // namespace fraclimit::cli
