#pragma once

// Covariance-matrix level Liouvillian
//
//   d|Gamma>/dt = S |Gamma> - |V>,   S = Hcal + D,
//
// with Hcal = 1 (x) H + H (x) 1 the commutator with H, D = -M for linear
// channels (M = sum_alpha {|L><L| + |L*><L*|, .}) and D = (1/2) sum (Lcal)^2 for
// Hermitian quadratic channels. |V> = vec(2i sum(|L><L| - |L*><L*|)) is
// nonzero for linear channels only. Vectorization is column-major over the
// flattened Majorana index: |Gamma>_{a + 2N b} = Gamma_ab.
//
// Physical covariance matrices live in the antisymmetric subspace, which S
// leaves invariant. Spectra and steady states are computed there by default;
// the full (2N)^2 space additionally carries symmetric eigenmatrices that have
// no counterpart in any state.

#include <Eigen/SparseCore>

#include <array>
#include <optional>
#include <vector>

#include "quasifree/channels.hpp"
#include "quasifree/majorana.hpp"

namespace quasifree {

using SparseMatrix = Eigen::SparseMatrix<double>;

enum class ChannelClass { Linear, Quadratic };
enum class Sector { Antisymmetric, Full };

class Superoperator {
public:
    Superoperator(int modes, ChannelClass kind, SparseMatrix hamiltonian, SparseMatrix dissipator,
                  RealVector affine, RealMatrix drift_left, RealMatrix drift_right,
                  std::vector<SparseMatrix> quadratic_ops, RealMatrix hamiltonian_matrix, double rate_scale);

    int modes() const noexcept { return modes_; }
    int dimension() const noexcept { return 4 * modes_ * modes_; }
    ChannelClass kind() const noexcept { return kind_; }

    const SparseMatrix& hamiltonian_part() const noexcept { return hamiltonian_; }
    /// -M for linear channels, (1/2) sum (Lcal)^2 for quadratic ones.
    const SparseMatrix& dissipative_part() const noexcept { return dissipator_; }
    SparseMatrix total() const { return hamiltonian_ + dissipator_; }
    /// |V>; zero for quadratic channels.
    const RealVector& affine() const noexcept { return affine_; }
    RealMatrix affine_matrix() const;

    /// Dense (2N)^2 x (2N)^2 matrix; refuses above the configured cap.
    RealMatrix dense(const Tolerances& tol = default_tolerances()) const;

    /// Homogeneous part S Gamma evaluated directly on a matrix.
    RealMatrix apply_linear(const RealMatrix& gamma) const;
    /// Full right-hand side S Gamma - V.
    RealMatrix apply(const RealMatrix& gamma) const;

    const RealMatrix& hamiltonian_matrix() const noexcept { return hamiltonian_matrix_; }
    /// Upper bound on the dissipative decay rates: 2||2 Re M||_2 or 2||sum L^2||_2.
    double dissipative_rate_scale() const noexcept { return rate_scale_; }

private:
    int modes_;
    ChannelClass kind_;
    SparseMatrix hamiltonian_;
    SparseMatrix dissipator_;
    RealVector affine_;
    // apply_linear(G) = drift_left_ G + G drift_right_ - sum_a L_a G L_a.
    RealMatrix drift_left_;
    RealMatrix drift_right_;
    std::vector<SparseMatrix> quadratic_ops_;
    RealMatrix hamiltonian_matrix_;
    double rate_scale_;
};

Superoperator assemble_linear(const AntisymmetricMatrix& h, const LinearChannel& channel);
Superoperator assemble_quadratic(const AntisymmetricMatrix& h, const QuadraticChannel& channel);
Superoperator assemble(const AntisymmetricMatrix& h, const Channel& channel);

/// Orthonormal basis (a<b) of antisymmetric matrices as columns of a (2N)^2 x N(2N-1) matrix.
SparseMatrix antisymmetric_basis(int modes);
/// S restricted to a sector, dense, in that sector's orthonormal basis.
RealMatrix sector_matrix(const Superoperator& s, Sector sector);
SparseMatrix sector_matrix_sparse(const Superoperator& s, Sector sector);
/// Coordinates of an antisymmetric matrix in antisymmetric_basis and back.
RealVector to_sector(const RealMatrix& gamma);
RealMatrix from_sector(const RealVector& coords, int modes);

/// All eigenvalues of a real square matrix (LAPACK dgeev).
std::vector<Complex> real_eigenvalues(const RealMatrix& m);

struct SpectrumOptions {
    Sector sector = Sector::Antisymmetric;
    Tolerances tol = default_tolerances();
};

struct LiouvillianSpectrum {
    std::vector<Complex> eigenvalues;
    double zero_threshold = 0.0;
    /// Smallest nonzero |Re lambda|; zero when every eigenvalue is in the zero cluster.
    double adr = 0.0;
    int zero_cluster = 0;
    int adr_cluster = 0;
    double max_real_part = 0.0;
    Sector sector = Sector::Antisymmetric;
};

/// ADR and cluster bookkeeping for a given eigenvalue list.
LiouvillianSpectrum classify_spectrum(std::vector<Complex> eigenvalues, const Tolerances& tol);
LiouvillianSpectrum spectrum(const Superoperator& s, const SpectrumOptions& options = {});

struct SteadyStateResult {
    CovarianceMatrix gamma;
    double residual = 0.0;
    double condition_ratio = 0.0;  // smallest / largest singular value, when computed
    CmDiagnostics diagnostics;
};

/// Solves S Gamma_0 = V in the antisymmetric sector. Throws
/// SingularSuperoperatorError when the steady state is not unique.
SteadyStateResult steady_state_linear(const Superoperator& s, const Tolerances& tol = default_tolerances());

/// Exact per-mode treatment of site-local loss/gain on a translationally
/// invariant Hamiltonian. Every momentum block evolves independently as
///   dG_n/dt = [H~_n, G_n] - g^2(mu^2+nu^2) G_n + g^2(mu^2-nu^2) (i sigma_y).
struct MomentumLinearResult {
    std::vector<ComplexBlock2> steady_blocks;
    /// Eigenvalues of each diagonal block's 4x4 generator.
    std::vector<std::array<Complex, 4>> mode_eigenvalues;
    double adr = 0.0;
    CovarianceMatrix real_space(const Tolerances& tol = default_tolerances()) const;
};

MomentumLinearResult momentum_spectrum_linear(const MomentumBlocks& blocks, ChannelStrengths s);
/// All 4N^2 eigenvalues, including the blocks coupling mode m to mode n.
std::vector<Complex> momentum_full_spectrum_linear(const MomentumBlocks& blocks, ChannelStrengths s);

/// g -> 0 limit of the steady block: r Re(h)/beta^2 ((i(k-l)/2, h), (-h^*, -i(k-l)/2)),
/// r = (mu^2 - nu^2)/(mu^2 + nu^2).
ComplexBlock2 weak_coupling_steady_block(const ModeBlock& mode, double mu, double nu);
/// Leading finite-g correction to the steady block:
/// 2i g^2 (mu^2-nu^2) / ((k-l)^2 + 4|h|^2) (-Im(h) sigma_z + (k-l)/2 sigma_x).
ComplexBlock2 steady_block_correction(const ModeBlock& mode, ChannelStrengths s);

}  // namespace quasifree
