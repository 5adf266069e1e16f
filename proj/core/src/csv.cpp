#include "fraclimit/csv.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "fraclimit/errors.hpp"

namespace fraclimit {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.precision(17);
    return out;
}

void check(const std::ostream& out, const std::string& path) {
    if (!out) throw IoError("failed writing '" + path + "'");
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::ostringstream o;
    o.precision(17);
    for (std::size_t i = 0; i < v.size(); ++i) o << (i ? "," : "") << v[i];
    return o.str();
}

template <class T>
std::vector<T> split(const std::string& s) {
    std::vector<T> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        std::istringstream t(tok);
        T v;
        if (!(t >> v)) throw IoError("malformed number list '" + s + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace

void write_density(std::ostream& out, const DensityField& f) {
    out.precision(17);
    const int d = f.grid.dim();
    out << "# fraclimit density\n";
    out << "# t=" << f.t << "\n";
    out << "# lower=" << join(f.grid.lower) << "\n";
    out << "# upper=" << join(f.grid.upper) << "\n";
    out << "# bins=" << join(f.grid.bins) << "\n";
    out << "# out_of_window=" << f.out_of_window << "\n";
    if (d == 1) out << "x";
    else
        for (int a = 0; a < d; ++a) out << (a ? "," : "") << "x" << a + 1;
    out << ",rho,stderr\n";
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const Vec c = f.grid.center(i);
        for (int a = 0; a < d; ++a) out << c[a] << ",";
        out << f.values[i] << "," << (i < f.std_err.size() ? f.std_err[i] : 0.0) << "\n";
    }
}

void write_density(const std::string& path, const DensityField& field) {
    auto out = open_out(path);
    write_density(out, field);
    check(out, path);
}

DensityField read_density(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    DensityField f;
    bool have_grid = false;
    std::string line;
    std::vector<std::vector<double>> rows;
    int lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = line.substr(2, eq - 2), val = line.substr(eq + 1);
            if (key == "t") f.t = std::stod(val);
            else if (key == "lower") f.grid.lower = split<double>(val);
            else if (key == "upper") f.grid.upper = split<double>(val);
            else if (key == "bins") {
                f.grid.bins = split<int>(val);
                have_grid = true;
            } else if (key == "out_of_window") f.out_of_window = std::stod(val);
            continue;
        }
        if (!header) {
            header = true;
            continue;
        }
        try {
            rows.push_back(split<double>(line));
        } catch (const IoError&) {
            throw IoError(path + ":" + std::to_string(lineno) + ": malformed row");
        }
    }
    if (rows.empty()) throw IoError("'" + path + "' has no data rows");
    const std::size_t cols = rows[0].size();
    if (cols < 3) throw IoError("'" + path + "' needs columns x, rho, stderr");
    if (!have_grid) {
        if (cols != 3 || rows.size() < 2) throw IoError("'" + path + "' lacks grid metadata");
        const double w = rows[1][0] - rows[0][0];
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (std::abs(rows[i][0] - rows[i - 1][0] - w) > 1e-9 * std::abs(w))
                throw IoError("'" + path + "': bin centers are not equally spaced");
        f.grid = uniform_grid_1d(rows[0][0] - 0.5 * w, rows.back()[0] + 0.5 * w, static_cast<int>(rows.size()));
    }
    if (f.grid.lower.size() != f.grid.bins.size() || f.grid.upper.size() != f.grid.bins.size())
        throw IoError("'" + path + "': inconsistent grid metadata");
    if (rows.size() != f.grid.size()) throw IoError("'" + path + "': row count does not match the grid");
    for (const auto& r : rows) {
        if (r.size() != cols) throw IoError("'" + path + "': ragged rows");
        f.values.push_back(r[cols - 2]);
        f.std_err.push_back(r[cols - 1]);
    }
    return f;
}

void write_convergence(const std::string& path, const ConvergenceReport& report) {
    auto out = open_out(path);
    out << "epsilon,operator,psi_id,l2_error,order_estimate\n";
    for (const auto& r : report.rows)
        out << r.eps << "," << r.quantity << "," << r.psi << "," << r.error << "," << r.order << "\n";
    check(out, path);
}

void write_operator_samples(const std::string& path, const std::vector<OperatorSample>& samples) {
    auto out = open_out(path);
    int d = 1;
    for (const auto& s : samples)
        if (!s.points.empty()) d = static_cast<int>(s.points[0].size());
    out << "op,psi_id,eps,alpha,";
    for (int a = 0; a < d; ++a) out << "x" << a + 1 << ",";
    out << "value,error_estimate\n";
    for (const auto& s : samples)
        for (std::size_t i = 0; i < s.points.size(); ++i) {
            out << s.op << "," << s.psi << "," << s.eps << "," << s.alpha << ",";
            for (int a = 0; a < d; ++a) out << s.points[i][a] << ",";
            out << s.values[i] << "," << (i < s.errors.size() ? s.errors[i] : 0.0) << "\n";
        }
    check(out, path);
}

void write_nodal(const std::string& path, const std::vector<double>& x, const std::vector<double>& rho) {
    if (x.size() != rho.size()) throw ConfigError("nodal output needs matching x and rho");
    auto out = open_out(path);
    out << "x,rho\n";
    for (std::size_t i = 0; i < x.size(); ++i) out << x[i] << "," << rho[i] << "\n";
    check(out, path);
}

}  // namespace fraclimit
