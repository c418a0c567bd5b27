#pragma once

namespace quasifree {

/// Numerical thresholds shared by all modules. Every check that compares
/// against a tolerance reads it from here so a run can be reproduced from
/// its recorded configuration.
struct Tolerances {
    double structural = 1e-10;      // antisymmetry, translational invariance, Fourier round trips
    double spectral = 1e-8;         // eigenvalue comparisons, purity, CM bound
    double antisymmetry_input = 1e-8;  // relative asymmetry accepted by antisymmetrize()
    double zero_absolute = 1e-10;   // absolute floor of the ADR zero threshold
    double zero_relative = 1e-8;    // relative part of the ADR zero threshold
    double singular_relative = 1e-10;  // smallest/largest singular value for steady-state solves
    double steady_residual = 1e-8;  // residual bound of steady-state solves
    double cm_bound = 1e-6;         // eigenvalue excess over 1 tolerated during evolution
    double critical_beta = 1e-12;   // smallest admissible per-mode gap in momentum sums
    int dense_dimension_cap = 10000;   // max (2N)^2 for the dense spectral path
};

inline const Tolerances& default_tolerances() {
    static const Tolerances t{};
    return t;
}

}  // namespace quasifree
