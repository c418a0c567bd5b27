#pragma once

// Majorana-indexed matrices, covariance matrices and the Fourier block
// structure of translationally invariant quadratic Hamiltonians.
//
// Conventions
//   * Majorana operators c_{j,0} = a_j^dag + a_j and c_{j,1} = -i(a_j^dag - a_j);
//     the flattened index of c_{j,u} is 2j + u.
//   * A quadratic Hamiltonian is (i/4) sum_{ab} H_ab c_a c_b with H real
//     antisymmetric; the covariance matrix is Gamma_ab = <(i/2)[c_a, c_b]>.
//   * Momentum blocks H~_n = sum_s H_s exp(-2 pi i s n / N), where
//     H_s = H_{j+s, j}. The matching unitary is
//     U_{mj,uv} = exp(-2 pi i m j / N) delta_uv / sqrt(N) and H~ = U H U^dag.

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "quasifree/tolerances.hpp"

namespace quasifree {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using Block2 = Eigen::Matrix2d;
using ComplexBlock2 = Eigen::Matrix2cd;

struct MajoranaIndex {
    int site = 0;
    int flavor = 0;

    constexpr int flat() const noexcept { return 2 * site + flavor; }
    static constexpr MajoranaIndex from_flat(int index) noexcept {
        return MajoranaIndex{index / 2, index % 2};
    }
    friend constexpr bool operator==(const MajoranaIndex&, const MajoranaIndex&) = default;
};

/// Real 2N x 2N matrix with A = -A^T holding exactly.
class AntisymmetricMatrix {
public:
    AntisymmetricMatrix() = default;
    /// Projects onto the antisymmetric part, (raw - raw^T) / 2.
    explicit AntisymmetricMatrix(const RealMatrix& raw);
    static AntisymmetricMatrix zero(int modes);

    int dimension() const noexcept { return static_cast<int>(m_.rows()); }
    int modes() const noexcept { return dimension() / 2; }
    const RealMatrix& matrix() const noexcept { return m_; }
    double operator()(int a, int b) const { return m_(a, b); }
    Block2 block(int j, int k) const { return m_.block<2, 2>(2 * j, 2 * k); }

    AntisymmetricMatrix operator*(double s) const;
    AntisymmetricMatrix operator+(const AntisymmetricMatrix& other) const;
    AntisymmetricMatrix operator-(const AntisymmetricMatrix& other) const;

private:
    RealMatrix m_;
};

/// Checked antisymmetrization: throws InvalidArgument for odd or non-square
/// input, or when ||raw + raw^T||_inf / ||raw||_inf exceeds the tolerance.
AntisymmetricMatrix antisymmetrize(const RealMatrix& raw,
                                   const Tolerances& tol = default_tolerances());

/// State object of the dynamics. Physical states obey Gamma^T Gamma <= 1;
/// that bound is checked by validate_cm, not on construction, so that
/// intermediate and averaged quantities can be represented.
class CovarianceMatrix {
public:
    CovarianceMatrix() = default;
    explicit CovarianceMatrix(AntisymmetricMatrix gamma) : g_(std::move(gamma)) {}
    explicit CovarianceMatrix(const RealMatrix& raw) : g_(raw) {}
    static CovarianceMatrix maximally_mixed(int modes);
    /// Fock state with the given occupations (1 = occupied).
    static CovarianceMatrix fock(const std::vector<int>& occupations);

    int modes() const noexcept { return g_.modes(); }
    int dimension() const noexcept { return g_.dimension(); }
    const AntisymmetricMatrix& antisymmetric() const noexcept { return g_; }
    const RealMatrix& matrix() const noexcept { return g_.matrix(); }

    /// Gamma_{jj,01}. With the Majorana convention above this is <1 - 2 a_j^dag a_j>,
    /// i.e. minus the Jordan-Wigner magnetization <sigma^z_j>.
    double polarization(int site) const { return g_(2 * site, 2 * site + 1); }
    double occupation(int site) const { return 0.5 * (1.0 - polarization(site)); }

private:
    AntisymmetricMatrix g_;
};

struct CmDiagnostics {
    double antisymmetry_defect = 0.0;  // max |Gamma + Gamma^T|
    double max_eigenvalue = 0.0;       // largest eigenvalue of Gamma^T Gamma
    double purity_defect = 0.0;        // ||Gamma^T Gamma - 1||_2
    bool valid = false;                // eigenvalue bound holds within tolerance
    bool pure = false;
};

CmDiagnostics validate_cm(const RealMatrix& gamma, const Tolerances& tol = default_tolerances());
inline CmDiagnostics validate_cm(const CovarianceMatrix& gamma,
                                 const Tolerances& tol = default_tolerances()) {
    return validate_cm(gamma.matrix(), tol);
}

/// Per-mode parameters of H~_nn = ((i k_n, h_n), (-h_n^*, i l_n)).
struct ModeBlock {
    Complex h{0.0, 0.0};
    double k = 0.0;
    double l = 0.0;

    ComplexBlock2 matrix() const;
    /// beta_n = sqrt(|h_n|^2 + (k_n - l_n)^2 / 4)
    double beta() const;
};

class MomentumBlocks {
public:
    MomentumBlocks() = default;
    explicit MomentumBlocks(std::vector<ModeBlock> modes) : modes_(std::move(modes)) {}

    int size() const noexcept { return static_cast<int>(modes_.size()); }
    const ModeBlock& operator[](int n) const { return modes_.at(static_cast<std::size_t>(n)); }
    const std::vector<ModeBlock>& modes() const noexcept { return modes_; }
    /// Wavenumber 2 pi n / N.
    double wavenumber(int n) const;

    /// Largest violation of h_{-n} = h_n^*, k_{-n} = -k_n, l_{-n} = -l_n.
    double symmetry_defect() const;
    bool reflection_symmetric(double tol) const;

private:
    std::vector<ModeBlock> modes_;
};

/// Dense Fourier unitary acting on the 2N-dimensional Majorana space.
ComplexMatrix fourier_matrix(int modes);

/// Throws InvalidArgument if H is not block circulant within tol.structural.
MomentumBlocks to_momentum(const AntisymmetricMatrix& h, const Tolerances& tol = default_tolerances());
AntisymmetricMatrix from_momentum(const MomentumBlocks& blocks,
                                  const Tolerances& tol = default_tolerances());

/// Max deviation of H_{jk} from H_{(j-k) mod N}; zero for block-circulant H.
double translation_defect(const AntisymmetricMatrix& h);

struct ExcitationPair {
    double plus = 0.0;
    double minus = 0.0;
};
std::vector<ExcitationPair> excitation_energies(const MomentumBlocks& blocks);

/// Momentum-space block of the ground-state covariance matrix of one mode.
ComplexBlock2 ground_state_block(const ModeBlock& mode, int index,
                                 const Tolerances& tol = default_tolerances());
/// Real-space CM assembled from per-mode blocks (inverse Fourier transform).
CovarianceMatrix from_mode_blocks(const std::vector<ComplexBlock2>& blocks,
                                  const Tolerances& tol = default_tolerances());
/// Pure Gaussian ground state. Throws DegenerateModeError for a gapless mode.
CovarianceMatrix ground_state_cm(const MomentumBlocks& blocks,
                                 const Tolerances& tol = default_tolerances());

/// Tr(H^T Gamma); the energy <H> of the state is a quarter of this value.
double energy_expectation(const AntisymmetricMatrix& h, const CovarianceMatrix& gamma);

}  // namespace quasifree
