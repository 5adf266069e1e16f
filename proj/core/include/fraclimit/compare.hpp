#pragma once

#include "fraclimit/density.hpp"

namespace fraclimit {

struct CompareResult {
    double l2_rel = 0.0;    // ||A - B|| / ||B|| over the bins
    double linf_rel = 0.0;  // max |A - B| / max |B|
    double mass_gap = 0.0;  // |mass(A) - mass(B)| / |mass(B)| over the window
    //! Monte Carlo noise level sqrt(sum se_A^2 + se_B^2) / ||B||, and l2_rel with the
    //! expected noise contribution removed (floored at 0).
    double noise_rel = 0.0;
    double l2_rel_debiased = 0.0;
};

//! Compare A against the reference B. When the grids differ (d = 1), A is rebinned
//! conservatively onto B's grid; B's window must lie inside A's.
CompareResult compare(const DensityField& A, const DensityField& B);

//! Conservative rebinning of a 1-d field onto another grid.
DensityField rebin(const DensityField& field, const GridSpec& target);

}  // namespace fraclimit
