#include "quasifree/evolution.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <locale>
#include <ostream>
#include <sstream>

#include "quasifree/errors.hpp"

namespace quasifree {

namespace {

constexpr long long kDirectStepLimit = 20000;

double spectral_norm_antisymmetric(const RealMatrix& h) {
    if (h.size() == 0) return 0.0;
    const RealMatrix hth = h.transpose() * h;
    const RealVector ev = Eigen::SelfAdjointEigenSolver<RealMatrix>(hth, Eigen::EigenvaluesOnly).eigenvalues();
    return std::sqrt(std::max(0.0, ev.maxCoeff()));
}

// [[A, -v], [0, 0]] generates the affine flow x' = A x - v on (x, 1).
RealMatrix augmented_generator(const Superoperator& s) {
    const RealMatrix a = sector_matrix(s, Sector::Antisymmetric);
    const RealVector v = antisymmetric_basis(s.modes()).transpose() * s.affine();
    const Eigen::Index n = a.rows();
    RealMatrix aug = RealMatrix::Zero(n + 1, n + 1);
    aug.topLeftCorner(n, n) = a;
    aug.topRightCorner(n, 1) = -v;
    return aug;
}

// Degree-four Taylor polynomial of exp(h G): exactly the classical RK4 one-step map.
RealMatrix rk4_map(const RealMatrix& generator, double h) {
    const RealMatrix x = h * generator;
    RealMatrix term = RealMatrix::Identity(x.rows(), x.cols());
    RealMatrix out = term;
    for (int k = 1; k <= 4; ++k) {
        term = (term * x) / static_cast<double>(k);
        out += term;
    }
    return out;
}

RealMatrix matrix_power(RealMatrix base, long long exponent) {
    RealMatrix out = RealMatrix::Identity(base.rows(), base.cols());
    while (exponent > 0) {
        if (exponent & 1) out = out * base;
        exponent >>= 1;
        if (exponent > 0) base = base * base;
    }
    return out;
}

struct Recorder {
    Trajectory& traj;
    const std::optional<RealMatrix>& reference;
    const Tolerances& tol;

    void record(double t, const RealMatrix& g) {
        const int n = static_cast<int>(g.rows()) / 2;
        const Eigen::Index row = static_cast<Eigen::Index>(traj.time.size());
        traj.time.push_back(t);
        traj.site_polarization.conservativeResize(row + 1, n);
        double mean = 0.0;
        for (int j = 0; j < n; ++j) {
            traj.site_polarization(row, j) = g(2 * j, 2 * j + 1);
            mean += g(2 * j, 2 * j + 1);
        }
        traj.mean_polarization.push_back(mean / n);
        traj.distance_to_reference.push_back(reference ? (g - *reference).norm()
                                                       : std::numeric_limits<double>::quiet_NaN());
        traj.frobenius_norm.push_back(g.norm());
        const CmDiagnostics d = validate_cm(g, tol);
        traj.max_cm_eigenvalue = std::max(traj.max_cm_eigenvalue, d.max_eigenvalue);
        if (d.max_eigenvalue > 1.0 + tol.cm_bound) {
            std::ostringstream msg;
            msg << "evolve: covariance bound violated at t = " << t << " (eigenvalue " << d.max_eigenvalue
                << "); the integration is unstable";
            throw NumericalError(msg.str());
        }
    }
};

}  // namespace

double max_stable_step(const Superoperator& s) {
    const double scale = std::max(spectral_norm_antisymmetric(s.hamiltonian_matrix()), s.dissipative_rate_scale());
    return scale > 0.0 ? 0.1 / scale : std::numeric_limits<double>::infinity();
}

RealMatrix rk4_step(const Superoperator& s, const RealMatrix& gamma, double dt) {
    const RealMatrix k1 = s.apply(gamma);
    const RealMatrix k2 = s.apply(gamma + 0.5 * dt * k1);
    const RealMatrix k3 = s.apply(gamma + 0.5 * dt * k2);
    const RealMatrix k4 = s.apply(gamma + dt * k3);
    return gamma + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Trajectory evolve(const CovarianceMatrix& gamma0, const Superoperator& s, const EvolutionOptions& options) {
    if (gamma0.modes() != s.modes()) throw InvalidArgument("evolve: initial state and superoperator sizes differ");
    if (!(options.t_end > 0.0) || !(options.dt > 0.0)) throw InvalidArgument("evolve: need t_end > 0 and dt > 0");
    const Tolerances& tol = options.tol;
    const CmDiagnostics d0 = validate_cm(gamma0, tol);
    if (!d0.valid) throw InvalidArgument("evolve: initial matrix is not a valid covariance matrix");

    Stepping mode = options.stepping;
    const long long total_steps = std::llround(options.t_end / options.dt);
    if (total_steps < 1) throw InvalidArgument("evolve: t_end is shorter than one step");
    if (mode == Stepping::Automatic) mode = total_steps <= kDirectStepLimit ? Stepping::Direct : Stepping::Propagator;
    if (mode != Stepping::Exact) {
        const double limit = max_stable_step(s);
        if (options.dt > limit * (1.0 + 1e-12)) {
            std::ostringstream msg;
            msg << "evolve: dt = " << options.dt << " exceeds the stability bound " << limit;
            throw InvalidArgument(msg.str());
        }
    }
    const long long per_sample =
        options.sample_interval > 0.0 ? std::max(1LL, std::llround(options.sample_interval / options.dt)) : 1LL;
    const long long samples = total_steps / per_sample;

    std::optional<RealMatrix> reference = options.reference;
    if (!reference) {
        if (s.kind() == ChannelClass::Quadratic) {
            reference = RealMatrix::Zero(gamma0.dimension(), gamma0.dimension());
        } else {
            try {
                reference = steady_state_linear(s, tol).gamma.matrix();
            } catch (const SingularSuperoperatorError&) {
                reference.reset();
            }
        }
    }

    Trajectory traj;
    traj.stepping_used = mode;
    Recorder rec{traj, reference, tol};
    rec.record(0.0, gamma0.matrix());

    if (mode == Stepping::Direct) {
        RealMatrix g = gamma0.matrix();
        double norm = g.norm();
        const bool contracting = s.kind() == ChannelClass::Quadratic;
        for (long long step = 1; step <= samples * per_sample; ++step) {
            g = rk4_step(s, g, options.dt);
            const double defect = (g + g.transpose()).cwiseAbs().maxCoeff();
            traj.max_antisymmetry_defect = std::max(traj.max_antisymmetry_defect, defect);
            g = 0.5 * (g - g.transpose());
            if (contracting) {
                const double next = g.norm();
                traj.max_norm_increase = std::max(traj.max_norm_increase, next - norm);
                norm = next;
            }
            if (step % per_sample == 0) rec.record(static_cast<double>(step) * options.dt, g);
        }
        traj.steps = samples * per_sample;
        traj.final_gamma = g;
        return traj;
    }

    const RealMatrix generator = augmented_generator(s);
    const double interval = static_cast<double>(per_sample) * options.dt;
    const RealMatrix step_map = mode == Stepping::Exact
                                    ? RealMatrix((generator * interval).exp())
                                    : matrix_power(rk4_map(generator, options.dt), per_sample);
    const Eigen::Index n = generator.rows() - 1;
    RealVector x(n + 1);
    x << to_sector(gamma0.matrix()), 1.0;
    RealMatrix g = gamma0.matrix();
    for (long long i = 1; i <= samples; ++i) {
        x = step_map * x;
        x(n) = 1.0;
        g = from_sector(x.head(n), s.modes());
        rec.record(static_cast<double>(i) * interval, g);
    }
    traj.steps = samples * per_sample;
    traj.final_gamma = g;
    return traj;
}

void Trajectory::write_csv(std::ostream& out) const {
    std::ostringstream buf;
    buf.imbue(std::locale::classic());
    buf << std::setprecision(17);
    buf << "t";
    for (int j = 0; j < sites(); ++j) buf << ",site_" << j;
    buf << ",mean_mag,dist_ss\n";
    for (std::size_t i = 0; i < time.size(); ++i) {
        buf << time[i];
        for (int j = 0; j < sites(); ++j) buf << ',' << site_polarization(static_cast<Eigen::Index>(i), j);
        buf << ',' << mean_polarization[i] << ',' << distance_to_reference[i] << '\n';
    }
    out << buf.str();
}

DecayFit fit_decay_rate(const std::vector<double>& time, const std::vector<double>& signal, double asymptote,
                        const DecayFitOptions& options) {
    if (time.size() != signal.size()) throw InvalidArgument("fit_decay_rate: time and signal lengths differ");
    std::vector<std::size_t> valid;
    for (std::size_t i = 0; i < time.size(); ++i) {
        if (std::abs(signal[i] - asymptote) > options.floor) valid.push_back(i);
    }
    const auto tail_len = static_cast<std::size_t>(std::ceil(options.tail_fraction * static_cast<double>(valid.size())));
    if (tail_len < static_cast<std::size_t>(options.min_points)) {
        std::ostringstream msg;
        msg << "fit_decay_rate: tail window has " << tail_len << " points, need at least " << options.min_points;
        throw InvalidArgument(msg.str());
    }
    std::vector<std::size_t> window(valid.end() - static_cast<std::ptrdiff_t>(tail_len), valid.end());

    auto residual = [&](std::size_t i) { return std::abs(signal[i] - asymptote); };
    bool monotone = true;
    for (std::size_t k = 1; k < window.size(); ++k) {
        if (residual(window[k]) > residual(window[k - 1])) {
            monotone = false;
            break;
        }
    }

    DecayFit fit;
    std::vector<std::size_t> points = window;
    if (!monotone) {
        // Oscillating tail: fit the envelope through local maxima of the residual.
        points.clear();
        for (std::size_t k = 1; k + 1 < window.size(); ++k) {
            const double r = residual(window[k]);
            if (r >= residual(window[k - 1]) && r >= residual(window[k + 1])) points.push_back(window[k]);
        }
        if (points.size() < 3) {
            throw InvalidArgument("fit_decay_rate: oscillating tail with fewer than three envelope maxima");
        }
        fit.envelope = true;
    }

    const double m = static_cast<double>(points.size());
    double sx = 0.0, sy = 0.0;
    for (auto i : points) {
        sx += time[i];
        sy += std::log(residual(i));
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (auto i : points) {
        const double dx = time[i] - mx, dy = std::log(residual(i)) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw InvalidArgument("fit_decay_rate: tail window spans no time");
    const double slope = sxy / sxx;
    fit.rate = -slope;
    fit.intercept = my - slope * mx;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    fit.window_begin = time[window.front()];
    fit.window_end = time[window.back()];
    fit.points = static_cast<int>(points.size());
    return fit;
}

}  // namespace quasifree
