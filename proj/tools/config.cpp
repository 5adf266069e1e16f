#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "fraclimit/errors.hpp"

namespace fraclimit::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string full_key(const std::string& section, const std::string& key) {
    return section.empty() ? key : section + "." + key;
}

const std::map<std::string, const KeySpec*>& schema_index() {
    static const std::map<std::string, const KeySpec*> idx = [] {
        std::map<std::string, const KeySpec*> m;
        for (const auto& k : config_schema()) m[full_key(k.section, k.key)] = &k;
        return m;
    }();
    return idx;
}

double to_real(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    double out = 0.0;
    const char* end = t.data() + t.size();
    auto [p, ec] = std::from_chars(t.data(), end, out);
    if (t.empty() || ec != std::errc() || p != end) throw ConfigError(key + ": expected a number, got '" + v + "'");
    return out;
}

long long to_int(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    // Accept integral values written in floating notation, e.g. 1e6.
    const double d = to_real(key, t);
    if (d != std::floor(d) || std::abs(d) > 9.0e15) throw ConfigError(key + ": expected an integer, got '" + v + "'");
    return static_cast<long long>(d);
}

std::vector<std::string> to_list(const std::string& v) {
    std::vector<std::string> out;
    std::istringstream in(v);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

std::vector<double> to_reals(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const auto& t : to_list(v)) out.push_back(to_real(key, t));
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

void one_of(const std::string& key, const std::string& v, std::initializer_list<const char*> allowed) {
    std::string list;
    for (const char* a : allowed) {
        if (v == a) return;
        list += std::string(list.empty() ? "" : ", ") + a;
    }
    throw ConfigError(key + ": '" + v + "' is not one of " + list);
}

}  // namespace

Mode parse_mode(const std::string& s) {
    if (s == "simulate-kinetic") return Mode::SimulateKinetic;
    if (s == "eval-operators") return Mode::EvalOperators;
    if (s == "converge") return Mode::Converge;
    if (s == "solve-limit") return Mode::SolveLimit;
    if (s == "compare") return Mode::Compare;
    if (s == "full-pipeline") return Mode::FullPipeline;
    throw ConfigError("mode: unknown mode '" + s +
                      "' (expected simulate-kinetic, eval-operators, converge, solve-limit, compare or "
                      "full-pipeline)");
}

std::string mode_name(Mode m) {
    switch (m) {
        case Mode::SimulateKinetic: return "simulate-kinetic";
        case Mode::EvalOperators: return "eval-operators";
        case Mode::Converge: return "converge";
        case Mode::SolveLimit: return "solve-limit";
        case Mode::Compare: return "compare";
        case Mode::FullPipeline: return "full-pipeline";
    }
    return "?";
}

const std::vector<KeySpec>& config_schema() {
    static const std::vector<KeySpec> s{
        {"", "mode", "", "simulate-kinetic | eval-operators | converge | solve-limit | compare | full-pipeline"},
        {"", "workers", "1", "data-parallel width; results do not depend on it"},
        {"", "seed", "20240611", "master seed of the particle streams"},
        {"", "out", "fraclimit_out", "output directory (overridden by --out)"},

        {"model", "d", "1", "space dimension"},
        {"model", "s", "0.75", "fractional order in (0, 1)"},
        {"model", "nu0", "1", "scattering rate"},
        {"model", "alpha", "0", "accommodation coefficient in [0, 1]"},
        {"model", "eps", "0.1", "Knudsen number for single-eps modes"},
        {"model", "eps_list", "0.2, 0.1, 0.05", "strictly decreasing eps ladder (converge, full-pipeline)"},

        {"kinetic", "particles", "100000", "number of particles"},
        {"kinetic", "t_end", "0.5", "final macroscopic time"},
        {"kinetic", "snapshot_times", "", "density snapshot times; empty means t_end only"},
        {"kinetic", "wall", "maxwell", "maxwell | specular | diffuse"},
        {"kinetic", "far_wall", "inf", "specular mirror at x_d = far_wall (inf disables)"},
        {"kinetic", "profile", "gaussian", "initial density: gaussian | point | slab"},
        {"kinetic", "center", "2", "profile center; one value sets the normal coordinate"},
        {"kinetic", "sigma", "0.5", "gaussian width"},
        {"kinetic", "slab_length", "1", "slab thickness"},

        {"grid", "lower", "0", "lower corner of the histogram window, per axis"},
        {"grid", "upper", "8", "upper corner, per axis"},
        {"grid", "bins", "80", "bins per axis"},

        {"operators", "names", "LSR, LD", "operators to sample"},
        {"operators", "psi", "gauss", "test function ids"},
        {"operators", "x_min", "0.05", "first sample point (normal coordinate)"},
        {"operators", "x_max", "6", "last sample point"},
        {"operators", "points", "60", "number of sample points"},

        {"converge", "quantities", "LSR, Lreg, kappa, LD, phi", "tracked quantities"},
        {"converge", "psi", "even_gauss, poly_even, corrector", "test function ids"},
        {"converge", "alphas", "0", "alpha values for the phi quantity"},
        {"converge", "max_ratio", "0.8", "largest accepted consecutive error ratio"},
        {"converge", "grid_points", "400", "evaluation points of the L2 grid"},
        {"converge", "grid_length", "8", "extent of the L2 grid"},

        {"limit", "length", "16", "truncation length of the half-line"},
        {"limit", "elements", "360", "number of elements"},
        {"limit", "grading", "1.15", "geometric grading factor toward the wall"},
        {"limit", "dt", "0.0025", "implicit Euler step"},
        {"limit", "problem", "evolve", "evolve | stationary"},
        {"limit", "load", "profile", "stationary load: profile | one"},
        {"limit", "export_matrices", "false", "write M, A_SR, A_D in coordinate format"},

        {"pipeline", "limit", "auto", "auto | reference | galerkin (auto: reference when alpha = 0)"},

        {"compare", "a", "", "density CSV to test"},
        {"compare", "b", "", "reference density CSV"},
    };
    return s;
}

ConfigValues::ConfigValues() {
    for (const auto& k : config_schema()) values_[full_key(k.section, k.key)] = k.default_value;
}

void ConfigValues::assign(const std::string& key, const std::string& value, const std::string& where) {
    if (!schema_index().count(key)) {
        const auto dot = key.find('.');
        if (dot == std::string::npos) throw ConfigError(where + ": unknown key '" + key + "'");
        throw ConfigError(where + ": unknown key '" + key.substr(dot + 1) + "' in section [" + key.substr(0, dot) +
                          "]");
    }
    values_[key] = value;
    explicit_[key] = true;
}

ConfigValues ConfigValues::parse(const std::string& text, const std::string& source) {
    static const std::set<std::string> sections = [] {
        std::set<std::string> s;
        for (const auto& k : config_schema()) s.insert(k.section);
        return s;
    }();
    ConfigValues c;
    std::istringstream in(text);
    std::string line, section;
    std::set<std::string> seen;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        const std::string where = source + ":" + std::to_string(n);
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty() || !sections.count(section))
                throw ConfigError(where + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError(where + ": missing key before '='");
        const std::string fk = full_key(section, key);
        if (seen.count(fk)) throw ConfigError(where + ": duplicate key '" + key + "'");
        seen.insert(fk);
        c.assign(fk, trim(line.substr(eq + 1)), where);
    }
    return c;
}

ConfigValues ConfigValues::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

void ConfigValues::set(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + assignment + "'");
    assign(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)), "--set " + assignment);
}

const std::string& ConfigValues::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("internal: unknown key '" + key + "'");
    return it->second;
}

bool ConfigValues::explicitly_set(const std::string& key) const { return explicit_.count(key) > 0; }

std::string ConfigValues::dump() const {
    std::ostringstream out;
    std::string section = "\x01";
    for (const auto& k : config_schema()) {
        if (k.section != section) {
            section = k.section;
            if (!section.empty()) out << "\n[" << section << "]\n";
        }
        out << k.key << " = " << get(full_key(k.section, k.key)) << "\n";
    }
    return out.str();
}

RunConfig make_run_config(const ConfigValues& raw) {
    RunConfig c;
    c.raw = raw;
    auto g = [&](const char* k) -> const std::string& { return raw.get(k); };
    if (trim(g("mode")).empty()) throw ConfigError("mode: required key is missing");
    c.mode = parse_mode(trim(g("mode")));
    c.workers = static_cast<int>(to_int("workers", g("workers")));
    if (c.workers < 1) throw ConfigError("workers: must be >= 1");
    const long long seed = to_int("seed", g("seed"));
    if (seed < 0) throw ConfigError("seed: must be >= 0");
    c.seed = static_cast<std::uint64_t>(seed);
    c.out_dir = g("out");

    c.params.d = static_cast<int>(to_int("model.d", g("model.d")));
    c.params.s = to_real("model.s", g("model.s"));
    c.params.nu0 = to_real("model.nu0", g("model.nu0"));
    c.params.alpha = to_real("model.alpha", g("model.alpha"));
    c.params.eps = to_real("model.eps", g("model.eps"));
    c.params.validate();
    c.eps_list = to_reals("model.eps_list", g("model.eps_list"));
    for (std::size_t i = 0; i < c.eps_list.size(); ++i) {
        if (!(c.eps_list[i] > 0.0 && c.eps_list[i] <= 1.0)) throw ConfigError("model.eps_list: values must lie in (0, 1]");
        if (i > 0 && !(c.eps_list[i] < c.eps_list[i - 1]))
            throw ConfigError("model.eps_list: must be strictly decreasing");
    }

    const long long np = to_int("kinetic.particles", g("kinetic.particles"));
    if (np < 1) throw ConfigError("kinetic.particles: must be >= 1");
    c.particles = static_cast<std::size_t>(np);
    c.t_end = to_real("kinetic.t_end", g("kinetic.t_end"));
    if (!(c.t_end >= 0.0)) throw ConfigError("kinetic.t_end: must be >= 0");
    c.snapshot_times = to_reals("kinetic.snapshot_times", g("kinetic.snapshot_times"));
    if (c.snapshot_times.empty()) c.snapshot_times.push_back(c.t_end);
    for (std::size_t i = 0; i < c.snapshot_times.size(); ++i) {
        if (c.snapshot_times[i] < 0.0 || c.snapshot_times[i] > c.t_end)
            throw ConfigError("kinetic.snapshot_times: times must lie in [0, t_end]");
        if (i > 0 && !(c.snapshot_times[i] > c.snapshot_times[i - 1]))
            throw ConfigError("kinetic.snapshot_times: must be strictly increasing");
    }
    c.wall = trim(g("kinetic.wall"));
    one_of("kinetic.wall", c.wall, {"maxwell", "specular", "diffuse"});
    if (c.wall == "diffuse" && !(c.params.s > 0.5)) throw ConfigError(kMaxwellRangeMessage);
    c.far_wall = to_real("kinetic.far_wall", g("kinetic.far_wall"));
    if (!(c.far_wall > 0.0)) throw ConfigError("kinetic.far_wall: must be positive");
    c.profile = trim(g("kinetic.profile"));
    one_of("kinetic.profile", c.profile, {"gaussian", "point", "slab"});
    c.center = to_reals("kinetic.center", g("kinetic.center"));
    if (c.center.size() == 1 && c.params.d > 1) {
        std::vector<double> full(c.params.d, 0.0);
        full.back() = c.center[0];
        c.center = full;
    }
    if (static_cast<int>(c.center.size()) != c.params.d)
        throw ConfigError("kinetic.center: needs one value or d values");
    if (!(c.center.back() > 0.0)) throw ConfigError("kinetic.center: normal coordinate must be positive");
    c.sigma = to_real("kinetic.sigma", g("kinetic.sigma"));
    if (!(c.sigma > 0.0)) throw ConfigError("kinetic.sigma: must be positive");
    c.slab_length = to_real("kinetic.slab_length", g("kinetic.slab_length"));
    if (!(c.slab_length > 0.0)) throw ConfigError("kinetic.slab_length: must be positive");

    c.grid_lower = to_reals("grid.lower", g("grid.lower"));
    c.grid_upper = to_reals("grid.upper", g("grid.upper"));
    for (double b : to_reals("grid.bins", g("grid.bins"))) {
        if (b != std::floor(b) || b < 1) throw ConfigError("grid.bins: must be positive integers");
        c.grid_bins.push_back(static_cast<int>(b));
    }
    auto widen = [&](auto& v, const char* key) {
        if (v.size() == 1 && c.params.d > 1) {
            auto last = v[0];
            v.assign(c.params.d, last);
        }
        if (static_cast<int>(v.size()) != c.params.d) throw ConfigError(std::string(key) + ": needs one value or d values");
    };
    widen(c.grid_lower, "grid.lower");
    widen(c.grid_upper, "grid.upper");
    widen(c.grid_bins, "grid.bins");
    for (int a = 0; a < c.params.d; ++a)
        if (!(c.grid_upper[a] > c.grid_lower[a])) throw ConfigError("grid: upper must exceed lower on every axis");

    c.op_names = to_list(g("operators.names"));
    c.op_psi = to_list(g("operators.psi"));
    c.op_x_min = to_real("operators.x_min", g("operators.x_min"));
    c.op_x_max = to_real("operators.x_max", g("operators.x_max"));
    c.op_points = static_cast<int>(to_int("operators.points", g("operators.points")));
    if (c.op_points < 1) throw ConfigError("operators.points: must be >= 1");
    if (!(c.op_x_min > 0.0 && c.op_x_max >= c.op_x_min))
        throw ConfigError("operators: need 0 < x_min <= x_max (interior points)");

    c.conv_quantities = to_list(g("converge.quantities"));
    c.conv_psi = to_list(g("converge.psi"));
    c.conv_alphas = to_reals("converge.alphas", g("converge.alphas"));
    for (double a : c.conv_alphas) {
        if (a < 0.0 || a > 1.0) throw ConfigError("converge.alphas: values must lie in [0, 1]");
        if (a > 0.0 && !(c.params.s > 0.5)) throw ConfigError(kMaxwellRangeMessage);
    }
    c.conv_max_ratio = to_real("converge.max_ratio", g("converge.max_ratio"));
    c.conv_grid_points = static_cast<int>(to_int("converge.grid_points", g("converge.grid_points")));
    c.conv_grid_length = to_real("converge.grid_length", g("converge.grid_length"));

    c.limit_length = to_real("limit.length", g("limit.length"));
    c.limit_elements = static_cast<int>(to_int("limit.elements", g("limit.elements")));
    c.limit_grading = to_real("limit.grading", g("limit.grading"));
    c.limit_dt = to_real("limit.dt", g("limit.dt"));
    if (!(c.limit_length > 0.0)) throw ConfigError("limit.length: must be positive");
    if (c.limit_elements < 3) throw ConfigError("limit.elements: must be >= 3");
    if (!(c.limit_grading >= 1.0)) throw ConfigError("limit.grading: must be >= 1");
    if (!(c.limit_dt > 0.0)) throw ConfigError("limit.dt: must be positive");
    c.limit_problem = trim(g("limit.problem"));
    one_of("limit.problem", c.limit_problem, {"evolve", "stationary"});
    c.limit_load = trim(g("limit.load"));
    one_of("limit.load", c.limit_load, {"profile", "one"});
    c.export_matrices = to_bool("limit.export_matrices", g("limit.export_matrices"));

    c.pipeline_limit = trim(g("pipeline.limit"));
    one_of("pipeline.limit", c.pipeline_limit, {"auto", "reference", "galerkin"});
    if (c.pipeline_limit == "reference" && c.params.alpha != 0.0)
        throw ConfigError("pipeline.limit: the reference solution covers the specular case alpha = 0 only");

    c.compare_a = trim(g("compare.a"));
    c.compare_b = trim(g("compare.b"));

    switch (c.mode) {
        case Mode::Converge:
        case Mode::FullPipeline:
            if (c.eps_list.empty()) throw ConfigError("model.eps_list: required for mode " + mode_name(c.mode));
            break;
        case Mode::Compare:
            if (c.compare_a.empty() || c.compare_b.empty())
                throw ConfigError("compare.a and compare.b: required for mode compare");
            break;
        default:
            break;
    }
    if ((c.mode == Mode::SolveLimit || c.mode == Mode::FullPipeline || c.mode == Mode::Converge) && c.params.d != 1)
        throw ConfigError("model.d: mode " + mode_name(c.mode) + " is implemented for d = 1");
    if (c.mode == Mode::EvalOperators && c.params.d > 2)
        throw ConfigError("model.d: operator evaluation supports d <= 2");
    return c;
}

}  // namespace fraclimit::cli
