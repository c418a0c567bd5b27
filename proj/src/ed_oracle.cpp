#include "quasifree/ed_oracle.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include "quasifree/errors.hpp"
#include "quasifree/spectral.hpp"

namespace quasifree::ed {

namespace {

const Complex I(0.0, 1.0);

ComplexMatrix pauli(char which) {
    ComplexMatrix m(2, 2);
    switch (which) {
        case 'x': m << 0.0, 1.0, 1.0, 0.0; break;
        case 'y': m << 0.0, -I, I, 0.0; break;
        case 'z': m << 1.0, 0.0, 0.0, -1.0; break;
        default: m.setIdentity(); break;
    }
    return m;
}

// Site 0 is the most significant tensor factor.
ComplexMatrix string_operator(const std::vector<char>& factors) {
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (char f : factors) {
        ComplexMatrix next = Eigen::kroneckerProduct(out, pauli(f)).eval();
        out = std::move(next);
    }
    return out;
}

void check_modes(int modes) {
    if (modes < 1) throw InvalidArgument("ed oracle: need at least one mode");
    if (modes > kMaxModes) {
        std::ostringstream msg;
        msg << "ed oracle: " << modes << " modes exceed the hard cap of " << kMaxModes;
        throw InvalidArgument(msg.str());
    }
}

// Column-major vec: vec(A X B) = (B^T (x) A) vec X.
ComplexMatrix left_mult(const ComplexMatrix& a) {
    return Eigen::kroneckerProduct(ComplexMatrix::Identity(a.rows(), a.cols()), a).eval();
}
ComplexMatrix right_mult(const ComplexMatrix& b) {
    return Eigen::kroneckerProduct(b.transpose(), ComplexMatrix::Identity(b.rows(), b.cols())).eval();
}

ComplexMatrix unvec(const ComplexVector& v, int dim) { return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim); }
ComplexVector vec(const ComplexMatrix& m) { return Eigen::Map<const ComplexVector>(m.data(), m.size()); }

// Orthonormal kernel basis of a square matrix from its singular value decomposition.
std::vector<ComplexVector> kernel_basis(const ComplexMatrix& m, double rel_tol) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    std::vector<ComplexVector> out;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) <= rel_tol * std::max(smax, 1.0)) out.push_back(svd.matrixV().col(i));
    }
    return out;
}

// Exact propagator of the affine system dx/dt = A x - v over one step, as an augmented matrix.
RealMatrix affine_step(const RealMatrix& a, const RealVector& v, double dt) {
    const Eigen::Index n = a.rows();
    RealMatrix aug = RealMatrix::Zero(n + 1, n + 1);
    aug.topLeftCorner(n, n) = a * dt;
    aug.topRightCorner(n, 1) = -v * dt;
    return aug.exp();
}

}  // namespace

std::vector<FockOperator> build_majoranas(int modes) {
    check_modes(modes);
    if (modes > kRecommendedModes) {
        std::cerr << "warning: ed oracle with " << modes << " modes builds " << (1 << (2 * modes))
                  << "-dimensional superoperators\n";
    }
    std::vector<FockOperator> out;
    for (int j = 0; j < modes; ++j) {
        for (int u = 0; u < 2; ++u) {
            std::vector<char> f(static_cast<std::size_t>(modes), 'i');
            for (int k = 0; k < j; ++k) f[static_cast<std::size_t>(k)] = 'z';
            f[static_cast<std::size_t>(j)] = u == 0 ? 'x' : 'y';
            std::ostringstream label;
            label << "c_" << j << "," << u;
            out.push_back({string_operator(f), label.str()});
        }
    }
    return out;
}

double car_defect(const std::vector<FockOperator>& c) {
    double worst = 0.0;
    for (std::size_t a = 0; a < c.size(); ++a) {
        for (std::size_t b = 0; b < c.size(); ++b) {
            ComplexMatrix ac = c[a].matrix * c[b].matrix + c[b].matrix * c[a].matrix;
            if (a == b) ac -= 2.0 * ComplexMatrix::Identity(ac.rows(), ac.cols());
            worst = std::max(worst, ac.cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

ComplexMatrix parity_operator(int modes) {
    check_modes(modes);
    return string_operator(std::vector<char>(static_cast<std::size_t>(modes), 'z'));
}

ComplexMatrix quadratic_operator(const RealMatrix& m, const std::vector<FockOperator>& c) {
    const int d = static_cast<int>(c.size());
    if (m.rows() != d || m.cols() != d) throw InvalidArgument("quadratic_operator: dimension mismatch");
    const Eigen::Index dim = c.front().matrix.rows();
    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            if (m(a, b) != 0.0) out.noalias() += m(a, b) * (c[a].matrix * c[b].matrix);
        }
    }
    return 0.25 * I * out;
}

ComplexMatrix linear_operator(const ComplexVector& l, const std::vector<FockOperator>& c) {
    if (l.size() != static_cast<Eigen::Index>(c.size())) throw InvalidArgument("linear_operator: dimension mismatch");
    const Eigen::Index dim = c.front().matrix.rows();
    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index a = 0; a < l.size(); ++a) out += l(a) * c[static_cast<std::size_t>(a)].matrix;
    return out;
}

FockModel fock_model(const AntisymmetricMatrix& h, const Channel& channel) {
    const int modes = channel_modes(channel);
    if (h.modes() != modes) throw InvalidArgument("fock_model: Hamiltonian and channel sizes differ");
    const auto c = build_majoranas(modes);
    FockModel model;
    model.hamiltonian = quadratic_operator(h.matrix(), c);
    if (const auto* lin = std::get_if<LinearChannel>(&channel)) {
        for (const auto& l : lin->vectors()) model.lindblads.push_back(linear_operator(l, c));
    } else {
        for (const auto& l : std::get<QuadraticChannel>(channel).matrices()) {
            model.lindblads.push_back(quadratic_operator(l.matrix(), c));
        }
    }
    return model;
}

ComplexMatrix liouvillian_dense(const FockModel& model) {
    const ComplexMatrix& h = model.hamiltonian;
    ComplexMatrix out = -I * (left_mult(h) - right_mult(h));
    for (const auto& l : model.lindblads) {
        const ComplexMatrix ldl = l.adjoint() * l;
        out += Eigen::kroneckerProduct(l.conjugate(), l).eval();
        out -= 0.5 * (left_mult(ldl) + right_mult(ldl));
    }
    return out;
}

ComplexMatrix liouvillian_dense(const AntisymmetricMatrix& h, const Channel& channel) {
    return liouvillian_dense(fock_model(h, channel));
}

CovarianceMatrix cm_from_rho(const ComplexMatrix& rho, const std::vector<FockOperator>& c) {
    const int d = static_cast<int>(c.size());
    RealMatrix g = RealMatrix::Zero(d, d);
    for (int a = 0; a < d; ++a) {
        for (int b = a + 1; b < d; ++b) {
            const ComplexMatrix comm = c[a].matrix * c[b].matrix - c[b].matrix * c[a].matrix;
            const Complex v = (rho * (0.5 * I * comm)).trace();
            g(a, b) = v.real();
            g(b, a) = -v.real();
        }
    }
    return CovarianceMatrix(g);
}

DensityDiagnostics validate_density(const ComplexMatrix& rho, double tol) {
    DensityDiagnostics d;
    d.hermiticity_defect = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    d.trace_defect = std::abs(rho.trace() - 1.0);
    const ComplexMatrix herm = 0.5 * (rho + rho.adjoint());
    d.min_eigenvalue = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(herm, Eigen::EigenvaluesOnly).eigenvalues()(0);
    d.valid = d.hermiticity_defect <= tol && d.trace_defect <= tol && d.min_eigenvalue >= -tol;
    return d;
}

ComplexMatrix ground_state_density(const ComplexMatrix& hamiltonian) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (hamiltonian + hamiltonian.adjoint()));
    const auto& e = es.eigenvalues();
    if (e.size() > 1 && e(1) - e(0) < 1e-9 * std::max(1.0, std::abs(e(0)))) {
        throw NumericalError("ground_state_density: ground state is degenerate");
    }
    const ComplexVector v = es.eigenvectors().col(0);
    return v * v.adjoint();
}

ComplexMatrix random_density(int modes, unsigned seed) {
    check_modes(modes);
    const int dim = 1 << modes;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) g(i, j) = Complex(normal(rng), normal(rng));
    }
    ComplexMatrix rho = g * g.adjoint();
    return rho / rho.trace();
}

nlohmann::json OracleReport::to_json() const {
    return nlohmann::json{{"modes", modes},
                          {"channel_class", linear ? "linear" : "quadratic"},
                          {"trajectory_deviation", trajectory_deviation},
                          {"spectrum_deviation", spectrum_deviation},
                          {"steady_deviation", steady_deviation},
                          {"dense_kernel_dimension", dense_kernel_dimension},
                          {"cm_zero_cluster", cm_zero_cluster},
                          {"passed", passed},
                          {"mismatches", mismatches}};
}

OracleReport oracle_compare(const AntisymmetricMatrix& h, const Channel& channel, const OracleOptions& options) {
    if (options.samples < 2 || !(options.t_end > 0.0)) {
        throw InvalidArgument("oracle_compare: need t_end > 0 and at least two samples");
    }
    const int modes = channel_modes(channel);
    check_modes(modes);
    const auto c = build_majoranas(modes);
    const int dim = 1 << modes;
    const ComplexMatrix liou = liouvillian_dense(fock_model(h, channel));
    const Superoperator sup = assemble(h, channel);

    OracleReport report;
    report.modes = modes;
    report.linear = sup.kind() == ChannelClass::Linear;

    // Trajectories from a generic (non-Gaussian) initial state: the CM equation
    // holds for every state, not only Gaussian ones.
    const ComplexMatrix rho0 = random_density(modes, options.seed);
    const double dt = options.t_end / (options.samples - 1);
    const ComplexMatrix rho_step = (liou * dt).exp();
    const RealMatrix a = sector_matrix(sup, Sector::Antisymmetric);
    const RealVector v = antisymmetric_basis(modes).transpose() * sup.affine();
    const RealMatrix cm_step = affine_step(a, v, dt);

    ComplexVector r = vec(rho0);
    RealVector x(a.rows() + 1);
    x << to_sector(cm_from_rho(rho0, c).matrix()), 1.0;
    for (int i = 0; i < options.samples; ++i) {
        if (i > 0) {
            r = rho_step * r;
            x = cm_step * x;
        }
        const RealMatrix from_rho = cm_from_rho(unvec(r, dim), c).matrix();
        const RealMatrix from_cm = from_sector(x.head(a.rows()), modes);
        report.trajectory_deviation =
            std::max(report.trajectory_deviation, (from_rho - from_cm).cwiseAbs().maxCoeff());
    }

    // Every CM eigenvalue must reappear in the density-matrix Liouvillian.
    const Eigen::ComplexEigenSolver<ComplexMatrix> dense_es(liou, false);
    const ComplexVector dense_ev = dense_es.eigenvalues();
    const LiouvillianSpectrum cm_spec = spectrum(sup);
    report.cm_zero_cluster = cm_spec.zero_cluster;
    for (const auto& lambda : cm_spec.eigenvalues) {
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < dense_ev.size(); ++i) best = std::min(best, std::abs(dense_ev(i) - lambda));
        report.spectrum_deviation = std::max(report.spectrum_deviation, best);
    }

    const auto kernel = kernel_basis(liou, 1e-9);
    report.dense_kernel_dimension = static_cast<int>(kernel.size());
    if (report.linear) {
        if (kernel.size() == 1) {
            ComplexMatrix rho_ss = unvec(kernel.front(), dim);
            rho_ss /= rho_ss.trace();
            try {
                const auto cm_ss = steady_state_linear(sup);
                report.steady_deviation =
                    (cm_from_rho(rho_ss, c).matrix() - cm_ss.gamma.matrix()).cwiseAbs().maxCoeff();
            } catch (const SingularSuperoperatorError& e) {
                report.mismatches.push_back(std::string("CM steady state not unique: ") + e.what());
            }
        } else {
            std::ostringstream msg;
            msg << "density-matrix steady state not unique (kernel dimension " << kernel.size() << ")";
            report.mismatches.push_back(msg.str());
        }
    } else {
        // Without a CM zero mode the only stationary CM is 0, so every dense
        // steady state must have a vanishing CM; otherwise it must be stationary.
        for (const auto& k : kernel) {
            const RealMatrix g = cm_from_rho(unvec(k, dim), c).matrix();
            const double dev = cm_spec.zero_cluster == 0 ? g.cwiseAbs().maxCoeff()
                                                         : sup.apply_linear(g).cwiseAbs().maxCoeff();
            report.steady_deviation = std::max(report.steady_deviation, dev);
        }
    }

    const double tol = options.tolerance;
    if (report.trajectory_deviation > tol) {
        std::ostringstream msg;
        msg << "trajectory deviation " << report.trajectory_deviation << " exceeds " << tol;
        report.mismatches.push_back(msg.str());
    }
    if (report.spectrum_deviation > tol) {
        std::ostringstream msg;
        msg << "CM eigenvalue missing from the dense spectrum (distance " << report.spectrum_deviation << ")";
        report.mismatches.push_back(msg.str());
    }
    if (report.steady_deviation > tol) {
        std::ostringstream msg;
        msg << "steady-state deviation " << report.steady_deviation << " exceeds " << tol;
        report.mismatches.push_back(msg.str());
    }
    report.passed = report.mismatches.empty();
    return report;
}

}  // namespace quasifree::ed
