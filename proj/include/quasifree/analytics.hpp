#pragma once

// Closed-form and perturbative results for translationally invariant chains.
// Per-mode quantities use the momentum blocks ((i k_m, h_m), (-h_m^*, i l_m)).

#include <vector>

#include "quasifree/majorana.hpp"

namespace quasifree {

/// alpha_m = |k_m + l_m|/2, beta_m = sqrt(|h_m|^2 + (k_m - l_m)^2/4) and the
/// unit-norm per-mode triple (a_m, b_m, c_m) = ((k_m - l_m)/2, Im h_m, Re h_m) / beta_m.
struct PerturbationData {
    RealVector alpha;
    RealVector beta;
    RealVector a;
    RealVector b;
    RealVector c;

    int size() const { return static_cast<int>(beta.size()); }
    /// max_m |a_m^2 + b_m^2 + c_m^2 - 1|
    double normalization_defect() const;
};

/// Throws DegenerateModeError if some beta_m < tol.critical_beta.
PerturbationData perturbation_data(const MomentumBlocks& blocks, const Tolerances& tol = default_tolerances());

/// Weak-coupling ADR for site dephasing g sigma^z:
/// (4 g^2 / N) sum_m [4 Im(h_m)^2 + (k_m - l_m)^2] / [4 |h_m|^2 + (k_m - l_m)^2].
double adr_weak_coupling_sum(const MomentumBlocks& blocks, double g, const Tolerances& tol = default_tolerances());

struct RatePair {
    double plus = 0.0;
    double minus = 0.0;
    double eps_z = 0.0;
    double eps_x = 0.0;
    double eps = 0.0;
};

/// The two lowest weak-coupling rates for g mu sigma^z_alpha together with the
/// swapped-ordering bond operator g nu (i/2)[c_{alpha,0}, c_{alpha+1,1}],
/// returned as magnitudes (plus >= minus). Sums use theta_m = 2 pi m / N:
///   eps_z = mu^2/N sum Re(h)^2/beta^2,  eps_x = nu^2/N sum Re(h e^{-i theta})^2/beta^2,
///   eps   = mu nu/N sum Re(h) Re(h e^{-i theta})/beta^2.
RatePair two_lowest_rates(const MomentumBlocks& blocks, double g, double mu, double nu,
                          const Tolerances& tol = default_tolerances());

/// Perturbation matrix on the zero-eigenvalue sector, P = |c><c| + |b><b| - |a><a|.
struct PerturbationMatrix {
    RealMatrix p;
    PerturbationData data;
    /// Delta_P = <c|c> = sum_m Re(h_m)^2 / beta_m^2.
    double delta_p = 0.0;
    double overlap_ca = 0.0;
    double overlap_cb = 0.0;
    /// ||P - (|c><c| + |b><b| - |a><a|)||_max
    double reconstruction_defect = 0.0;
};

/// P_mn = [2 h_m h_n^* + 2 h_m^* h_n - (k_m - l_m)(k_n - l_n)] / (4 beta_m beta_n).
PerturbationMatrix perturbation_matrix(const MomentumBlocks& blocks, const Tolerances& tol = default_tolerances());

/// Thermodynamic-limit ADR of the XY chain under g sigma^z dephasing.
double xy_adr_closed_form(double gamma, double field, double coupling, double g);

/// Thermodynamic-limit steady value of Gamma_{jj,01} under loss/gain on the XY chain.
double xy_polarization_closed_form(double gamma, double field, double coupling, double mu, double nu);

/// Finite-N weak-coupling steady value of Gamma_{jj,01}:
/// (1/2) r (1/N) sum_n Re(h_n)^2 / ((k_n - l_n)^2/4 + |h_n|^2), r = (mu^2 - nu^2)/(mu^2 + nu^2).
double particle_number_sum(const MomentumBlocks& blocks, double mu, double nu,
                           const Tolerances& tol = default_tolerances());

struct Pole {
    Complex z;
    bool inside = false;
    bool critical = false;  // on the unit circle within 1e-12
};

/// Poles of the XY contour integrand: z0 = 0 and
/// z+- = [B +- sqrt(B^2 - 4 J^2 (1 - gamma^2))] / (2 J (1 + gamma)).
struct PoleSet {
    Pole zero;
    Pole plus;
    Pole minus;
    bool any_critical() const { return zero.critical || plus.critical || minus.critical; }
};

PoleSet poles(double field, double coupling, double gamma);

/// Q_kl = <(i/2)[a_k, a_l]> = (1/4)(G_{k0,l0} - i G_{k0,l1} - i G_{k1,l0} - G_{k1,l1}).
ComplexMatrix pairing_matrix(const CovarianceMatrix& gamma);

}  // namespace quasifree
