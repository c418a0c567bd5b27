#include "quasifree/majorana.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <sstream>

#include "quasifree/errors.hpp"

namespace quasifree {

namespace {

Complex phase(double angle) { return std::polar(1.0, angle); }

int wrap(int i, int n) { return ((i % n) + n) % n; }

}  // namespace

AntisymmetricMatrix::AntisymmetricMatrix(const RealMatrix& raw) {
    if (raw.rows() != raw.cols()) {
        throw InvalidArgument("antisymmetric matrix must be square");
    }
    if (raw.rows() % 2 != 0) {
        throw InvalidArgument("Majorana matrices have even dimension");
    }
    m_ = 0.5 * (raw - raw.transpose());
}

AntisymmetricMatrix AntisymmetricMatrix::zero(int modes) {
    if (modes < 0) throw InvalidArgument("negative mode count");
    return AntisymmetricMatrix(RealMatrix::Zero(2 * modes, 2 * modes));
}

AntisymmetricMatrix AntisymmetricMatrix::operator*(double s) const {
    AntisymmetricMatrix out;
    out.m_ = m_ * s;
    return out;
}

AntisymmetricMatrix AntisymmetricMatrix::operator+(const AntisymmetricMatrix& other) const {
    if (other.dimension() != dimension()) throw InvalidArgument("dimension mismatch");
    AntisymmetricMatrix out;
    out.m_ = m_ + other.m_;
    return out;
}

AntisymmetricMatrix AntisymmetricMatrix::operator-(const AntisymmetricMatrix& other) const {
    if (other.dimension() != dimension()) throw InvalidArgument("dimension mismatch");
    AntisymmetricMatrix out;
    out.m_ = m_ - other.m_;
    return out;
}

AntisymmetricMatrix antisymmetrize(const RealMatrix& raw, const Tolerances& tol) {
    if (raw.rows() != raw.cols()) throw InvalidArgument("antisymmetrize: matrix is not square");
    if (raw.rows() % 2 != 0) throw InvalidArgument("antisymmetrize: odd dimension");
    if (!raw.allFinite()) throw InvalidArgument("antisymmetrize: non-finite entries");
    const double scale = raw.cwiseAbs().rowwise().sum().maxCoeff();
    if (scale > 0.0) {
        const double defect = (raw + raw.transpose()).cwiseAbs().rowwise().sum().maxCoeff();
        if (defect / scale > tol.antisymmetry_input) {
            std::ostringstream msg;
            msg << "antisymmetrize: relative asymmetry " << defect / scale << " exceeds "
                << tol.antisymmetry_input;
            throw InvalidArgument(msg.str());
        }
    }
    return AntisymmetricMatrix(raw);
}

CovarianceMatrix CovarianceMatrix::maximally_mixed(int modes) {
    return CovarianceMatrix(AntisymmetricMatrix::zero(modes));
}

CovarianceMatrix CovarianceMatrix::fock(const std::vector<int>& occupations) {
    const int n = static_cast<int>(occupations.size());
    RealMatrix g = RealMatrix::Zero(2 * n, 2 * n);
    for (int j = 0; j < n; ++j) {
        // <i c_{j,0} c_{j,1}> = <1 - 2 n_j>
        const double p = occupations[static_cast<std::size_t>(j)] ? -1.0 : 1.0;
        g(2 * j, 2 * j + 1) = p;
        g(2 * j + 1, 2 * j) = -p;
    }
    return CovarianceMatrix(g);
}

CmDiagnostics validate_cm(const RealMatrix& gamma, const Tolerances& tol) {
    CmDiagnostics d;
    if (gamma.rows() != gamma.cols() || gamma.rows() % 2 != 0) {
        return d;
    }
    d.antisymmetry_defect = (gamma + gamma.transpose()).cwiseAbs().maxCoeff();
    const RealMatrix gtg = gamma.transpose() * gamma;
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(gtg, Eigen::EigenvaluesOnly);
    d.max_eigenvalue = gamma.rows() > 0 ? eig.eigenvalues().maxCoeff() : 0.0;
    d.purity_defect = gamma.rows() > 0
                          ? (eig.eigenvalues().array() - 1.0).abs().maxCoeff()
                          : 0.0;
    d.valid = d.antisymmetry_defect <= tol.structural && d.max_eigenvalue <= 1.0 + tol.spectral;
    d.pure = d.valid && d.purity_defect <= tol.spectral;
    return d;
}

ComplexBlock2 ModeBlock::matrix() const {
    ComplexBlock2 m;
    m << Complex(0.0, k), h, -std::conj(h), Complex(0.0, l);
    return m;
}

double ModeBlock::beta() const {
    const double d = 0.5 * (k - l);
    return std::sqrt(std::norm(h) + d * d);
}

double MomentumBlocks::wavenumber(int n) const {
    return 2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(size());
}

double MomentumBlocks::symmetry_defect() const {
    const int n = size();
    double defect = 0.0;
    for (int m = 0; m < n; ++m) {
        const ModeBlock& a = modes_[static_cast<std::size_t>(m)];
        const ModeBlock& b = modes_[static_cast<std::size_t>(wrap(-m, n))];
        defect = std::max(defect, std::abs(b.h - std::conj(a.h)));
        defect = std::max(defect, std::abs(b.k + a.k));
        defect = std::max(defect, std::abs(b.l + a.l));
    }
    return defect;
}

bool MomentumBlocks::reflection_symmetric(double tol) const {
    for (const auto& m : modes_) {
        if (std::abs(m.k) > tol || std::abs(m.l) > tol) return false;
    }
    return true;
}

ComplexMatrix fourier_matrix(int modes) {
    if (modes < 1) throw InvalidArgument("fourier_matrix: need at least one mode");
    const int d = 2 * modes;
    ComplexMatrix u = ComplexMatrix::Zero(d, d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(modes));
    for (int m = 0; m < modes; ++m) {
        for (int j = 0; j < modes; ++j) {
            const Complex w = norm * phase(-2.0 * std::numbers::pi * m * j / modes);
            u(2 * m, 2 * j) = w;
            u(2 * m + 1, 2 * j + 1) = w;
        }
    }
    return u;
}

double translation_defect(const AntisymmetricMatrix& h) {
    const int n = h.modes();
    double defect = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            const Block2 ref = h.block(wrap(j - k, n), 0);
            defect = std::max(defect, (h.block(j, k) - ref).cwiseAbs().maxCoeff());
        }
    }
    return defect;
}

MomentumBlocks to_momentum(const AntisymmetricMatrix& h, const Tolerances& tol) {
    const int n = h.modes();
    if (n < 1) throw InvalidArgument("to_momentum: empty Hamiltonian");
    const double defect = translation_defect(h);
    if (defect > tol.structural) {
        std::ostringstream msg;
        msg << "to_momentum: Hamiltonian is not translationally invariant (defect " << defect << ")";
        throw InvalidArgument(msg.str());
    }
    std::vector<ModeBlock> modes(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        ComplexBlock2 acc = ComplexBlock2::Zero();
        for (int s = 0; s < n; ++s) {
            acc += h.block(s, 0).cast<Complex>() * phase(-2.0 * std::numbers::pi * s * m / n);
        }
        ModeBlock& mb = modes[static_cast<std::size_t>(m)];
        mb.k = acc(0, 0).imag();
        mb.l = acc(1, 1).imag();
        mb.h = acc(0, 1);
    }
    return MomentumBlocks(std::move(modes));
}

AntisymmetricMatrix from_momentum(const MomentumBlocks& blocks, const Tolerances& tol) {
    const int n = blocks.size();
    if (n < 1) throw InvalidArgument("from_momentum: no modes");
    RealMatrix out = RealMatrix::Zero(2 * n, 2 * n);
    std::vector<Block2> sblocks(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        ComplexBlock2 acc = ComplexBlock2::Zero();
        for (int m = 0; m < n; ++m) {
            acc += blocks[m].matrix() * phase(2.0 * std::numbers::pi * s * m / n);
        }
        acc /= static_cast<double>(n);
        if (acc.imag().cwiseAbs().maxCoeff() > tol.structural * std::max(1.0, acc.cwiseAbs().maxCoeff())) {
            throw InvalidArgument("from_momentum: blocks do not describe a real Hamiltonian");
        }
        sblocks[static_cast<std::size_t>(s)] = acc.real();
    }
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            out.block<2, 2>(2 * j, 2 * k) = sblocks[static_cast<std::size_t>(wrap(j - k, n))];
        }
    }
    return AntisymmetricMatrix(out);
}

std::vector<ExcitationPair> excitation_energies(const MomentumBlocks& blocks) {
    std::vector<ExcitationPair> out;
    out.reserve(static_cast<std::size_t>(blocks.size()));
    for (const auto& m : blocks.modes()) {
        const double mean = 0.5 * (m.k + m.l);
        const double b = m.beta();
        out.push_back({std::abs(mean + b), std::abs(mean - b)});
    }
    return out;
}

ComplexBlock2 ground_state_block(const ModeBlock& mode, int index, const Tolerances& tol) {
    // Minimizing Tr(H~^dag Gamma~) per block gives Gamma~ = -i sign(-i H~), where
    // -i H~ = ((k, -i h), (i h^*, l)) has eigenvalues (k+l)/2 +- beta.
    const double mean = 0.5 * (mode.k + mode.l);
    const double b = mode.beta();
    const double scale = std::max({1.0, std::abs(mode.h), std::abs(mode.k), std::abs(mode.l)});
    const double lo = mean - b;
    const double hi = mean + b;
    const double gate = tol.critical_beta * scale;
    if (std::abs(lo) <= gate || std::abs(hi) <= gate) {
        std::ostringstream msg;
        msg << "ground_state_cm: mode " << index << " has a zero single-particle energy";
        throw DegenerateModeError(index, msg.str());
    }
    ComplexBlock2 g;
    if (lo < 0.0 && hi > 0.0) {
        const double d = 0.5 * (mode.k - mode.l);
        g << Complex(0.0, -d), -mode.h, std::conj(mode.h), Complex(0.0, d);
        g /= b;
    } else {
        const double s = hi > 0.0 ? 1.0 : -1.0;
        g = Complex(0.0, -s) * ComplexBlock2::Identity();
    }
    return g;
}

CovarianceMatrix from_mode_blocks(const std::vector<ComplexBlock2>& blocks, const Tolerances& tol) {
    const int n = static_cast<int>(blocks.size());
    if (n < 1) throw InvalidArgument("from_mode_blocks: no modes");
    std::vector<Block2> sblocks(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        ComplexBlock2 acc = ComplexBlock2::Zero();
        for (int m = 0; m < n; ++m) {
            acc += blocks[static_cast<std::size_t>(m)] * phase(2.0 * std::numbers::pi * s * m / n);
        }
        acc /= static_cast<double>(n);
        if (acc.imag().cwiseAbs().maxCoeff() > std::sqrt(tol.structural)) {
            throw NumericalError("from_mode_blocks: momentum blocks violate the reality condition");
        }
        sblocks[static_cast<std::size_t>(s)] = acc.real();
    }
    RealMatrix g(2 * n, 2 * n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            g.block<2, 2>(2 * j, 2 * k) = sblocks[static_cast<std::size_t>(wrap(j - k, n))];
        }
    }
    return CovarianceMatrix(g);
}

CovarianceMatrix ground_state_cm(const MomentumBlocks& blocks, const Tolerances& tol) {
    std::vector<ComplexBlock2> g;
    g.reserve(static_cast<std::size_t>(blocks.size()));
    for (int n = 0; n < blocks.size(); ++n) g.push_back(ground_state_block(blocks[n], n, tol));
    return from_mode_blocks(g, tol);
}

double energy_expectation(const AntisymmetricMatrix& h, const CovarianceMatrix& gamma) {
    if (h.dimension() != gamma.dimension()) {
        throw InvalidArgument("energy_expectation: dimension mismatch");
    }
    return (h.matrix().transpose().cwiseProduct(gamma.matrix().transpose())).sum();
}

}  // namespace quasifree
