#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fraclimit/density.hpp"
#include "fraclimit/model.hpp"

namespace fraclimit {

//! Piecewise-linear elements on [0, L]; node 0 sits on the wall.
struct Mesh1D {
    std::vector<double> nodes;

    std::size_t num_nodes() const { return nodes.size(); }
    std::size_t num_elements() const { return nodes.size() - 1; }
    double length() const { return nodes.back(); }
    double h(std::size_t e) const { return nodes[e + 1] - nodes[e]; }
    //! Throws ConfigError unless nodes start at 0 and increase strictly.
    void validate() const;
    std::string describe() const;

    static Mesh1D uniform(double L, int elements);
    //! The first elements/3 elements shrink geometrically toward the wall by
    //! `factor` per element; the rest are uniform.
    static Mesh1D graded(double L, int elements, double factor = 1.15);
};

struct AssemblyOptions {
    int workers = 1;
    int gauss_near = 16;  // touching, identical and close pairs
    int gauss_far = 8;    // well separated pairs
};

//! M: mass matrix. A_SR: specular form with kernel gamma_1 (|x-y|^{-1-2s} + (x+y)^{-1-2s}).
//! A_D: form of the nonlocal gradient, int D^{2s-1}[phi_j] phi_i'.
struct AssembledForms {
    Mesh1D mesh;
    ModelParams params;
    Constants constants;
    Eigen::MatrixXd M;
    Eigen::MatrixXd A_SR;
    Eigen::MatrixXd A_D;  // empty when s <= 1/2
    int gauss_near = 16;
    int gauss_far = 8;

    //! (1 - alpha) A_SR + alpha A_D.
    Eigen::MatrixXd form(double alpha) const;
};

AssembledForms assemble(const Mesh1D& mesh, const ModelParams& params, const Equilibrium& eq,
                        const AssemblyOptions& opt = {});

//! Nodal interpolant of g.
Eigen::VectorXd interpolate(const Mesh1D& mesh, const std::function<double(double)>& g);
//! L2 projection of g onto the hat functions.
Eigen::VectorXd project(const AssembledForms& forms, const std::function<double(double)>& g);

//! Solve (M + A(alpha)) u = M g for nodal load values g.
Eigen::VectorXd solve_stationary(const AssembledForms& forms, const Eigen::VectorXd& g, double alpha);

//! Implicit Euler: (M + dt A(alpha)) u^{n+1} = M u^n. Returns u^0 .. u^N, N = round(T/dt).
std::vector<Eigen::VectorXd> evolve(const AssembledForms& forms, const Eigen::VectorXd& rho0, double T,
                                    double dt, double alpha);

//! Value of the piecewise-linear function at x (0 beyond the mesh).
double evaluate(const Mesh1D& mesh, const Eigen::VectorXd& u, double x);
//! Exact bin averages of the piecewise-linear function.
DensityField to_field(const Mesh1D& mesh, const Eigen::VectorXd& u, const GridSpec& grid, double t = 0.0);

//! 1^T M u.
double mass(const AssembledForms& forms, const Eigen::VectorXd& u);
//! u^T M u.
double m_norm2(const AssembledForms& forms, const Eigen::VectorXd& u);

//! Coordinate text format: one "i j value" line per nonzero, 0-based.
void write_coo(std::ostream& out, const Eigen::MatrixXd& A, double drop = 0.0);

}  // namespace fraclimit
