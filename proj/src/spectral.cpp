#include "quasifree/spectral.hpp"

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

#include <unsupported/Eigen/KroneckerProduct>

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "quasifree/errors.hpp"

namespace quasifree {

namespace {

SparseMatrix sparse_identity(int n) {
    SparseMatrix id(n, n);
    id.setIdentity();
    return id;
}

SparseMatrix to_sparse(const RealMatrix& m) { return m.sparseView(0.0, 0.0); }

// vec([X, .]) for antisymmetric X in column-major order: 1 (x) X - X^T (x) 1 = 1 (x) X + X (x) 1.
SparseMatrix commutator_superoperator(const RealMatrix& x) {
    const int d = static_cast<int>(x.rows());
    const SparseMatrix xs = to_sparse(x);
    const SparseMatrix id = sparse_identity(d);
    SparseMatrix left = Eigen::kroneckerProduct(id, xs);
    SparseMatrix right = Eigen::kroneckerProduct(xs, id);
    return left + right;
}

// vec({S, .}) for symmetric S.
SparseMatrix anticommutator_superoperator(const RealMatrix& s) {
    const int d = static_cast<int>(s.rows());
    const SparseMatrix ss = to_sparse(s);
    const SparseMatrix id = sparse_identity(d);
    SparseMatrix left = Eigen::kroneckerProduct(id, ss);
    SparseMatrix right = Eigen::kroneckerProduct(ss, id);
    return left + right;
}

double symmetric_norm(const RealMatrix& m) {
    if (m.size() == 0) return 0.0;
    const RealVector ev = Eigen::SelfAdjointEigenSolver<RealMatrix>(m, Eigen::EigenvaluesOnly).eigenvalues();
    return ev.cwiseAbs().maxCoeff();
}

RealVector vectorize(const RealMatrix& m) { return Eigen::Map<const RealVector>(m.data(), m.size()); }

void check_hamiltonian(const AntisymmetricMatrix& h, int modes) {
    if (h.dimension() != 2 * modes) {
        std::ostringstream msg;
        msg << "superoperator: Hamiltonian has dimension " << h.dimension() << " but the channel acts on "
            << modes << " modes";
        throw InvalidArgument(msg.str());
    }
}

}  // namespace

Superoperator::Superoperator(int modes, ChannelClass kind, SparseMatrix hamiltonian, SparseMatrix dissipator,
                             RealVector affine, RealMatrix drift_left, RealMatrix drift_right,
                             std::vector<SparseMatrix> quadratic_ops, RealMatrix hamiltonian_matrix,
                             double rate_scale)
    : modes_(modes),
      kind_(kind),
      hamiltonian_(std::move(hamiltonian)),
      dissipator_(std::move(dissipator)),
      affine_(std::move(affine)),
      drift_left_(std::move(drift_left)),
      drift_right_(std::move(drift_right)),
      quadratic_ops_(std::move(quadratic_ops)),
      hamiltonian_matrix_(std::move(hamiltonian_matrix)),
      rate_scale_(rate_scale) {}

RealMatrix Superoperator::affine_matrix() const {
    const int d = 2 * modes_;
    return Eigen::Map<const RealMatrix>(affine_.data(), d, d);
}

RealMatrix Superoperator::dense(const Tolerances& tol) const {
    if (dimension() > tol.dense_dimension_cap) {
        std::ostringstream msg;
        msg << "dense superoperator of dimension " << dimension() << " exceeds the cap "
            << tol.dense_dimension_cap;
        throw InvalidArgument(msg.str());
    }
    return RealMatrix(total());
}

RealMatrix Superoperator::apply_linear(const RealMatrix& gamma) const {
    if (gamma.rows() != 2 * modes_ || gamma.cols() != 2 * modes_) {
        throw InvalidArgument("superoperator: matrix has the wrong dimension");
    }
    RealMatrix out = drift_left_ * gamma + gamma * drift_right_;
    for (const auto& l : quadratic_ops_) {
        const RealMatrix lg = l * gamma;
        out.noalias() -= lg * l;
    }
    return out;
}

RealMatrix Superoperator::apply(const RealMatrix& gamma) const {
    RealMatrix out = apply_linear(gamma);
    if (kind_ == ChannelClass::Linear) out -= affine_matrix();
    return out;
}

Superoperator assemble_linear(const AntisymmetricMatrix& h, const LinearChannel& channel) {
    const int n = channel.modes();
    check_hamiltonian(h, n);
    const int d = 2 * n;
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    for (const auto& l : channel.vectors()) m.noalias() += l * l.adjoint();
    // M + M^* = 2 Re M enters the anticommutator; -2i (M - M^*) = 4 Im M is the source.
    const RealMatrix a = 2.0 * m.real();
    const RealMatrix source = 4.0 * m.imag();
    SparseMatrix ham = commutator_superoperator(h.matrix());
    SparseMatrix diss = -anticommutator_superoperator(a);
    ham.prune(0.0);
    diss.prune(0.0);
    return Superoperator(n, ChannelClass::Linear, std::move(ham), std::move(diss), -vectorize(source),
                         h.matrix() - a, -h.matrix() - a, {}, h.matrix(), 2.0 * symmetric_norm(a));
}

Superoperator assemble_quadratic(const AntisymmetricMatrix& h, const QuadraticChannel& channel) {
    const int n = channel.modes();
    check_hamiltonian(h, n);
    const int d = 2 * n;
    RealMatrix k = RealMatrix::Zero(d, d);
    std::vector<SparseMatrix> ops;
    SparseMatrix sandwich(d * d, d * d);
    for (const auto& l : channel.matrices()) {
        const RealMatrix& lm = l.matrix();
        if (lm.cwiseAbs().maxCoeff() == 0.0) continue;
        k.noalias() += lm * lm;
        const SparseMatrix ls = to_sparse(lm);
        // vec(-L X L) = -(L^T (x) L) vec X = (L (x) L) vec X.
        SparseMatrix term = Eigen::kroneckerProduct(ls, ls);
        sandwich += term;
        ops.push_back(ls);
    }
    // (1/2)[L,[L,X]] = (1/2)(L^2 X + X L^2) - L X L.
    SparseMatrix diss = 0.5 * anticommutator_superoperator(k) + sandwich;
    SparseMatrix ham = commutator_superoperator(h.matrix());
    diss.prune(0.0);
    ham.prune(0.0);
    return Superoperator(n, ChannelClass::Quadratic, std::move(ham), std::move(diss), RealVector::Zero(d * d),
                         h.matrix() + 0.5 * k, -h.matrix() + 0.5 * k, std::move(ops), h.matrix(),
                         2.0 * symmetric_norm(k));
}

Superoperator assemble(const AntisymmetricMatrix& h, const Channel& channel) {
    return std::visit(
        [&](const auto& c) -> Superoperator {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, LinearChannel>) {
                return assemble_linear(h, c);
            } else {
                return assemble_quadratic(h, c);
            }
        },
        channel);
}

SparseMatrix antisymmetric_basis(int modes) {
    const int d = 2 * modes;
    const int cols = modes * (2 * modes - 1);
    SparseMatrix p(d * d, cols);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(2 * cols));
    const double w = 1.0 / std::sqrt(2.0);
    int c = 0;
    for (int a = 0; a < d; ++a) {
        for (int b = a + 1; b < d; ++b) {
            trip.emplace_back(a + b * d, c, w);
            trip.emplace_back(b + a * d, c, -w);
            ++c;
        }
    }
    p.setFromTriplets(trip.begin(), trip.end());
    return p;
}

SparseMatrix sector_matrix_sparse(const Superoperator& s, Sector sector) {
    if (sector == Sector::Full) return s.total();
    const SparseMatrix p = antisymmetric_basis(s.modes());
    SparseMatrix pt = p.transpose();
    SparseMatrix sp = s.total() * p;
    SparseMatrix out = pt * sp;
    out.prune(0.0);
    return out;
}

RealMatrix sector_matrix(const Superoperator& s, Sector sector) {
    return RealMatrix(sector_matrix_sparse(s, sector));
}

RealVector to_sector(const RealMatrix& gamma) {
    const int d = static_cast<int>(gamma.rows());
    RealVector out(d * (d - 1) / 2);
    const double w = std::sqrt(2.0);
    int c = 0;
    for (int a = 0; a < d; ++a) {
        for (int b = a + 1; b < d; ++b) out(c++) = w * 0.5 * (gamma(a, b) - gamma(b, a));
    }
    return out;
}

RealMatrix from_sector(const RealVector& coords, int modes) {
    const int d = 2 * modes;
    if (coords.size() != d * (d - 1) / 2) throw InvalidArgument("from_sector: wrong coordinate count");
    RealMatrix g = RealMatrix::Zero(d, d);
    const double w = 1.0 / std::sqrt(2.0);
    int c = 0;
    for (int a = 0; a < d; ++a) {
        for (int b = a + 1; b < d; ++b) {
            g(a, b) = w * coords(c);
            g(b, a) = -w * coords(c);
            ++c;
        }
    }
    return g;
}

std::vector<Complex> real_eigenvalues(const RealMatrix& m) {
    if (m.rows() != m.cols()) throw InvalidArgument("real_eigenvalues: matrix is not square");
    const lapack_int n = static_cast<lapack_int>(m.rows());
    if (n == 0) return {};
    if (!m.allFinite()) throw NumericalError("real_eigenvalues: non-finite matrix entries");
    RealMatrix a = m;
    std::vector<double> wr(static_cast<std::size_t>(n)), wi(static_cast<std::size_t>(n));
    const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, wr.data(), wi.data(),
                                          nullptr, 1, nullptr, 1);
    if (info != 0) {
        std::ostringstream msg;
        msg << "real_eigenvalues: dgeev failed with info " << info;
        throw NumericalError(msg.str());
    }
    std::vector<Complex> out(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = Complex(wr[i], wi[i]);
    return out;
}

LiouvillianSpectrum classify_spectrum(std::vector<Complex> eigenvalues, const Tolerances& tol) {
    LiouvillianSpectrum s;
    std::sort(eigenvalues.begin(), eigenvalues.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() < b.imag();
    });
    double max_abs = 0.0;
    double max_re = -std::numeric_limits<double>::infinity();
    for (const auto& l : eigenvalues) {
        max_abs = std::max(max_abs, std::abs(l.real()));
        max_re = std::max(max_re, l.real());
    }
    s.zero_threshold = std::max(tol.zero_absolute, tol.zero_relative * max_abs);
    s.max_real_part = eigenvalues.empty() ? 0.0 : max_re;
    double adr = std::numeric_limits<double>::infinity();
    for (const auto& l : eigenvalues) {
        const double r = std::abs(l.real());
        if (r <= s.zero_threshold) {
            ++s.zero_cluster;
        } else {
            adr = std::min(adr, r);
        }
    }
    if (std::isfinite(adr)) {
        s.adr = adr;
        for (const auto& l : eigenvalues) {
            if (std::abs(std::abs(l.real()) - adr) <= s.zero_threshold) ++s.adr_cluster;
        }
    }
    s.eigenvalues = std::move(eigenvalues);
    return s;
}

LiouvillianSpectrum spectrum(const Superoperator& s, const SpectrumOptions& options) {
    if (s.dimension() > options.tol.dense_dimension_cap) {
        std::ostringstream msg;
        msg << "spectrum: superoperator dimension " << s.dimension() << " exceeds the dense cap "
            << options.tol.dense_dimension_cap << "; use the momentum path";
        throw InvalidArgument(msg.str());
    }
    LiouvillianSpectrum out = classify_spectrum(real_eigenvalues(sector_matrix(s, options.sector)), options.tol);
    out.sector = options.sector;
    return out;
}

SteadyStateResult steady_state_linear(const Superoperator& s, const Tolerances& tol) {
    if (s.kind() != ChannelClass::Linear) {
        throw InvalidArgument("steady_state_linear: requires a linear channel");
    }
    const int n = s.modes();
    const SparseMatrix p = antisymmetric_basis(n);
    const SparseMatrix a = sector_matrix_sparse(s, Sector::Antisymmetric);
    const RealVector rhs = p.transpose() * s.affine();
    const int m = static_cast<int>(a.rows());

    SteadyStateResult out;
    RealVector x;
    // Singular values are affordable up to a few thousand unknowns; beyond that
    // the sparse LU pivots decide.
    if (m <= 3000) {
        RealMatrix dense(a);
        RealMatrix work = dense;
        RealVector sv(m);
        const lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', m, m, work.data(), m, sv.data(), nullptr,
                                               1, nullptr, 1);
        if (info != 0) throw NumericalError("steady_state_linear: singular value decomposition failed");
        const double smax = sv(0);
        int nullity = 0;
        for (int i = 0; i < m; ++i) {
            if (sv(i) <= tol.singular_relative * smax) ++nullity;
        }
        out.condition_ratio = smax > 0.0 ? sv(m - 1) / smax : 0.0;
        if (smax == 0.0 || nullity > 0) {
            std::ostringstream msg;
            msg << "steady_state_linear: superoperator is singular (nullity " << (smax == 0.0 ? m : nullity)
                << "); the steady state is not unique";
            throw SingularSuperoperatorError(smax == 0.0 ? m : nullity, msg.str());
        }
        x = dense.partialPivLu().solve(rhs);
    } else {
        Eigen::SparseLU<SparseMatrix> lu;
        lu.compute(a);
        if (lu.info() != Eigen::Success) {
            throw SingularSuperoperatorError(-1, "steady_state_linear: sparse factorization failed; "
                                                 "superoperator appears singular");
        }
        x = lu.solve(rhs);
        out.condition_ratio = std::numeric_limits<double>::quiet_NaN();
    }
    out.residual = (a * x - rhs).norm();
    if (!(out.residual <= tol.steady_residual * std::max(1.0, rhs.norm()))) {
        std::ostringstream msg;
        msg << "steady_state_linear: residual " << out.residual << " above tolerance";
        throw NumericalError(msg.str());
    }
    out.gamma = CovarianceMatrix(from_sector(x, n));
    out.diagnostics = validate_cm(out.gamma, tol);
    if (!out.diagnostics.valid) {
        std::ostringstream msg;
        msg << "steady_state_linear: solution violates the CM bound (max eigenvalue "
            << out.diagnostics.max_eigenvalue << ")";
        throw NumericalError(msg.str());
    }
    return out;
}

namespace {

using Matrix4c = Eigen::Matrix4cd;

// Column-major vec of X -> A X - X B: (1 (x) A) - (B^T (x) 1).
Matrix4c sylvester_operator(const ComplexBlock2& a, const ComplexBlock2& b) {
    Matrix4c op = Matrix4c::Zero();
    const ComplexBlock2 id = ComplexBlock2::Identity();
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            op.block<2, 2>(2 * i, 2 * j) += id(i, j) * a;
            op.block<2, 2>(2 * i, 2 * j) -= b(j, i) * id;
        }
    }
    return op;
}

std::array<Complex, 2> block_eigenvalues(const ModeBlock& mode) {
    const double centre = 0.5 * (mode.k + mode.l);
    const double beta = mode.beta();
    return {Complex(0.0, centre + beta), Complex(0.0, centre - beta)};
}

ComplexBlock2 sigma_y_times_i() {
    ComplexBlock2 j;
    j << 0.0, 1.0, -1.0, 0.0;
    return j;
}

}  // namespace

CovarianceMatrix MomentumLinearResult::real_space(const Tolerances& tol) const {
    return from_mode_blocks(steady_blocks, tol);
}

MomentumLinearResult momentum_spectrum_linear(const MomentumBlocks& blocks, ChannelStrengths s) {
    if (blocks.size() < 1) throw InvalidArgument("momentum_spectrum_linear: no modes");
    const double kappa = s.g * s.g * (s.mu * s.mu + s.nu * s.nu);
    const double source = s.g * s.g * (s.mu * s.mu - s.nu * s.nu);
    MomentumLinearResult out;
    out.adr = kappa;
    const ComplexBlock2 j2 = sigma_y_times_i();
    for (int n = 0; n < blocks.size(); ++n) {
        const ModeBlock& mode = blocks[n];
        const ComplexBlock2 h = mode.matrix();
        const auto e = block_eigenvalues(mode);
        out.mode_eigenvalues.push_back(
            {e[0] - e[0] - kappa, e[0] - e[1] - kappa, e[1] - e[0] - kappa, e[1] - e[1] - kappa});
        if (kappa == 0.0) {
            // No dissipation: the steady state is not unique, report the zero block.
            out.steady_blocks.push_back(ComplexBlock2::Zero());
            continue;
        }
        Matrix4c op = sylvester_operator(h, h) - kappa * Matrix4c::Identity();
        Eigen::Vector4cd rhs;
        rhs << -source * j2(0, 0), -source * j2(1, 0), -source * j2(0, 1), -source * j2(1, 1);
        const Eigen::Vector4cd x = op.partialPivLu().solve(rhs);
        ComplexBlock2 g;
        g << x(0), x(2), x(1), x(3);
        out.steady_blocks.push_back(g);
    }
    return out;
}

std::vector<Complex> momentum_full_spectrum_linear(const MomentumBlocks& blocks, ChannelStrengths s) {
    const double kappa = s.g * s.g * (s.mu * s.mu + s.nu * s.nu);
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(4 * blocks.size() * blocks.size()));
    for (int m = 0; m < blocks.size(); ++m) {
        const auto em = block_eigenvalues(blocks[m]);
        for (int n = 0; n < blocks.size(); ++n) {
            const auto en = block_eigenvalues(blocks[n]);
            for (const auto& a : em) {
                for (const auto& b : en) out.push_back(a - b - kappa);
            }
        }
    }
    return out;
}

ComplexBlock2 weak_coupling_steady_block(const ModeBlock& mode, double mu, double nu) {
    const double norm = mu * mu + nu * nu;
    if (norm == 0.0) throw InvalidArgument("weak_coupling_steady_block: mu and nu both vanish");
    const double beta = mode.beta();
    if (beta == 0.0) throw InvalidArgument("weak_coupling_steady_block: gapless mode");
    const double r = (mu * mu - nu * nu) / norm;
    const Complex half_diff(0.0, 0.5 * (mode.k - mode.l));
    ComplexBlock2 traceless;
    traceless << half_diff, mode.h, -std::conj(mode.h), -half_diff;
    return r * mode.h.real() / (beta * beta) * traceless;
}

ComplexBlock2 steady_block_correction(const ModeBlock& mode, ChannelStrengths s) {
    const double diff = mode.k - mode.l;
    const double denom = diff * diff + 4.0 * std::norm(mode.h);
    if (denom == 0.0) throw InvalidArgument("steady_block_correction: gapless mode");
    const Complex pref = Complex(0.0, 2.0) * s.g * s.g * (s.mu * s.mu - s.nu * s.nu) / denom;
    ComplexBlock2 m;
    m << -mode.h.imag(), 0.5 * diff, 0.5 * diff, mode.h.imag();
    return pref * m;
}

}  // namespace quasifree
