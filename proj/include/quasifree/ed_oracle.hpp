#pragma once

// Brute-force density-matrix reference for chains of at most a few sites.
// Operators are dense 2^N x 2^N matrices in the spin basis, |0> = spin up,
// with Majoranas from the Jordan-Wigner strings
//   c_{j,0} = Z_0 ... Z_{j-1} X_j,   c_{j,1} = Z_0 ... Z_{j-1} Y_j.
// Superoperators act on column-major vec(rho).

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "quasifree/channels.hpp"
#include "quasifree/majorana.hpp"

namespace quasifree::ed {

inline constexpr int kRecommendedModes = 3;
inline constexpr int kMaxModes = 4;

struct FockOperator {
    ComplexMatrix matrix;
    std::string label;
};

/// 2N Majorana operators; N = 4 is accepted with a warning on stderr.
std::vector<FockOperator> build_majoranas(int modes);
/// max |{c_a, c_b} - 2 delta_ab|.
double car_defect(const std::vector<FockOperator>& c);
/// Z_0 Z_1 ... Z_{N-1}.
ComplexMatrix parity_operator(int modes);

/// (i/4) sum_ab M_ab c_a c_b.
ComplexMatrix quadratic_operator(const RealMatrix& m, const std::vector<FockOperator>& c);
/// sum_a l_a c_a.
ComplexMatrix linear_operator(const ComplexVector& l, const std::vector<FockOperator>& c);

/// Hamiltonian and Lindblad operators of a quasi-free model as Fock-space matrices.
struct FockModel {
    ComplexMatrix hamiltonian;
    std::vector<ComplexMatrix> lindblads;
};
FockModel fock_model(const AntisymmetricMatrix& h, const Channel& channel);

/// rho -> -i[H, rho] + sum L rho L^dag - (1/2){L^dag L, rho}.
ComplexMatrix liouvillian_dense(const FockModel& model);
ComplexMatrix liouvillian_dense(const AntisymmetricMatrix& h, const Channel& channel);

/// Gamma_ab = tr(rho (i/2)[c_a, c_b]).
CovarianceMatrix cm_from_rho(const ComplexMatrix& rho, const std::vector<FockOperator>& c);

struct DensityDiagnostics {
    double hermiticity_defect = 0.0;
    double trace_defect = 0.0;
    double min_eigenvalue = 0.0;
    bool valid = false;
};
DensityDiagnostics validate_density(const ComplexMatrix& rho, double tol = 1e-10);

/// Ground state projector of the Fock-space Hamiltonian (requires a unique ground state).
ComplexMatrix ground_state_density(const ComplexMatrix& hamiltonian);
/// Full-rank random state with seeded entries; generic initial condition for comparisons.
ComplexMatrix random_density(int modes, unsigned seed);

struct OracleOptions {
    double t_end = 50.0;
    int samples = 101;
    unsigned seed = 7;
    double tolerance = 1e-8;
};

struct OracleReport {
    int modes = 0;
    double trajectory_deviation = 0.0;   // max_t max_ab |Gamma_CM - Gamma_rho|
    double spectrum_deviation = 0.0;     // max over CM eigenvalues of the distance to the dense spectrum
    double steady_deviation = 0.0;       // linear channels: unique steady CMs; quadratic: kernel CMs vs 0
    int dense_kernel_dimension = 0;
    int cm_zero_cluster = 0;
    bool linear = false;
    bool passed = false;
    std::vector<std::string> mismatches;

    nlohmann::json to_json() const;
};

/// Compares the covariance-matrix formalism with the density-matrix reference:
/// trajectories from a random initial state, spectra and steady states.
OracleReport oracle_compare(const AntisymmetricMatrix& h, const Channel& channel,
                            const OracleOptions& options = {});

}  // namespace quasifree::ed
