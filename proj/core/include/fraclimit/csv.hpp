#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fraclimit/convergence.hpp"
#include "fraclimit/density.hpp"
#include "fraclimit/operators.hpp"

namespace fraclimit {

//! Density CSV: '#' metadata lines (t, lower, upper, bins, out_of_window), then
//! columns x (or x1..xd), rho, stderr with one row per bin in flat order.
void write_density(std::ostream& out, const DensityField& field);
void write_density(const std::string& path, const DensityField& field);
//! Reads files written by write_density. Without metadata, the grid is inferred
//! from equally spaced 1-d bin centers.
DensityField read_density(const std::string& path);

//! Columns epsilon, operator, psi_id, l2_error, order_estimate.
void write_convergence(const std::string& path, const ConvergenceReport& report);

//! Columns op, psi_id, eps, alpha, x1..xd, value, error_estimate.
void write_operator_samples(const std::string& path, const std::vector<OperatorSample>& samples);

//! Columns x, rho for nodal values of a piecewise-linear field.
void write_nodal(const std::string& path, const std::vector<double>& x, const std::vector<double>& rho);

}  // namespace fraclimit
