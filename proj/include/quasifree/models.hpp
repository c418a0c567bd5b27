#pragma once

#include <map>

#include "quasifree/majorana.hpp"

namespace quasifree {

/// Periodic anisotropic XY chain in a transverse field,
///   H = -J sum_j [(1+gamma) X_j X_{j+1} + (1-gamma) Y_j Y_{j+1}] + B sum_j Z_j,
/// in its fermionic form H_0 = ((0,-2B),(2B,0)), H_1 = ((0,2J(1-gamma)),(-2J(1+gamma),0)).
/// Under the Jordan-Wigner map used here these blocks give the bulk spin operator
/// J[(1-gamma) X X + (1+gamma) Y Y] + B Z; for even N it is unitarily equivalent to the
/// form above by rotations about z, so spectra and z-observables agree.
struct XYParams {
    int sites = 2;
    double coupling = 1.0;     // J
    double anisotropy = 0.0;   // gamma
    double field = 0.0;        // B
};

/// Translationally invariant Hamiltonian given by its site blocks H_s = H_{j+s,j}.
/// Only non-negative or negative offsets that are actually present need to be
/// listed; H_{-s} = -H_s^T must hold for every pair that is given.
struct TIBlockSpec {
    int sites = 2;
    std::map<int, Block2> blocks;
};

AntisymmetricMatrix xy_chain(const XYParams& params);
TIBlockSpec xy_blocks(const XYParams& params);
AntisymmetricMatrix from_blocks(const TIBlockSpec& spec, const Tolerances& tol = default_tolerances());
/// Momentum blocks straight from the site blocks in O(N * offsets), without the dense matrix.
/// Agrees with to_momentum(from_blocks(spec)).
MomentumBlocks to_momentum(const TIBlockSpec& spec, const Tolerances& tol = default_tolerances());

}  // namespace quasifree
