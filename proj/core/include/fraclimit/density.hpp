#pragma once

#include <cstddef>
#include <vector>

#include "fraclimit/types.hpp"

namespace fraclimit {

//! Uniform bins over a box; dimension d = lower.size(). In d = 1 the box is
//! [lower, upper] in the normal coordinate.
struct GridSpec {
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<int> bins;

    int dim() const { return static_cast<int>(bins.size()); }
    std::size_t size() const;
    double bin_volume() const;
    double width(int axis) const { return (upper[axis] - lower[axis]) / bins[axis]; }
    //! Flat bin index of x, or -1 when outside the window.
    long locate(const Vec& x) const;
    Vec center(std::size_t flat) const;
    bool same_as(const GridSpec& o) const;
};

GridSpec uniform_grid_1d(double lower, double upper, int bins);

struct DensityField {
    GridSpec grid;
    std::vector<double> values;   // density per bin
    std::vector<double> std_err;  // standard error per bin (zero for deterministic fields)
    double t = 0.0;
    double out_of_window = 0.0;   // mass fraction outside the grid

    //! Sum of values times bin volume.
    double window_mass() const;
};

DensityField zero_field(const GridSpec& grid, double t = 0.0);

}  // namespace fraclimit
