#pragma once

#include "fraclimit/density.hpp"
#include "fraclimit/kinetic.hpp"
#include "fraclimit/model.hpp"

namespace fraclimit {

struct ReferenceOptions {
    double box_width = 2048.0;  // periodic box [-W/2, W/2)
    double dx = 1.0 / 32.0;     // sampling step; W/dx is rounded up to a power of two
    //! Evolve the even extension (specular wall). When false, rho0 is extended by
    //! zero and evolved on the whole line (no wall).
    bool even_extension = true;
};

//! Exact solution of d_t rho = -gamma_{d,s} (-Delta)^s rho applied to the even
//! extension of rho0, by the Fourier multiplier exp(-gamma_{d,s} |xi|^{2s} t).
//! Values are exact bin averages of the trigonometric interpolant. params.gamma
//! must hold the tail constant of F. d = 1 only.
DensityField reference_specular(const InitialProfile& rho0, double t, const ModelParams& params,
                                const GridSpec& grid, const ReferenceOptions& opt = {});

//! Point values of the same solution.
std::vector<double> reference_values(const InitialProfile& rho0, double t, const ModelParams& params,
                                     const std::vector<double>& x, const ReferenceOptions& opt = {});

}  // namespace fraclimit
