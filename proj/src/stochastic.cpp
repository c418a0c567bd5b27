#include "quasifree/stochastic.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <limits>
#include <locale>
#include <numbers>
#include <random>
#include <sstream>

#include "quasifree/channels.hpp"
#include "quasifree/errors.hpp"
#include "quasifree/parallel.hpp"

namespace quasifree {

namespace {

constexpr int kMinTrajectories = 20;
constexpr double kKernelCut = 5.0;  // kernel support in units of T
constexpr double kMaxStoredValues = 1.0e8;
constexpr std::uint64_t kBootstrapTag = 0x626f6f7473747261ULL;

std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

// In-place Gamma -> R Gamma R^T with R a 2x2 rotation by angle[a] on every site block.
void rotate_sites(RealMatrix& g, const double* angle, int sites) {
    const Eigen::Index d = g.rows();
    for (int a = 0; a < sites; ++a) {
        if (angle[a] == 0.0) continue;
        const double c = std::cos(angle[a]), s = std::sin(angle[a]);
        const Eigen::Index r0 = 2 * a, r1 = 2 * a + 1;
        for (Eigen::Index j = 0; j < d; ++j) {
            const double x = g(r0, j), y = g(r1, j);
            g(r0, j) = c * x - s * y;
            g(r1, j) = s * x + c * y;
        }
        for (Eigen::Index i = 0; i < d; ++i) {
            const double x = g(i, r0), y = g(i, r1);
            g(i, r0) = c * x - s * y;
            g(i, r1) = s * x + c * y;
        }
    }
}

// exp(G t) flow on the antisymmetric sector sampled every `interval`, samples + 1 matrices.
std::vector<RealMatrix> sector_run(const RealMatrix& generator, const CovarianceMatrix& gamma0, double interval,
                                   long long samples) {
    const int n = gamma0.modes();
    const RealMatrix step = (generator * interval).exp();
    std::vector<RealMatrix> out;
    out.reserve(static_cast<std::size_t>(samples + 1));
    RealVector x = to_sector(gamma0.matrix());
    out.push_back(gamma0.matrix());
    for (long long i = 1; i <= samples; ++i) {
        x = step * x;
        out.push_back(from_sector(x, n));
    }
    return out;
}

std::vector<RealMatrix> reference_run(const AntisymmetricMatrix& h, const CovarianceMatrix& gamma0, double g2,
                                      double interval, long long samples) {
    const Superoperator s =
        assemble(h, Channel{dephasing_z(h.modes(), ChannelStrengths{std::sqrt(g2), 1.0, 0.0})});
    return sector_run(sector_matrix(s, Sector::Antisymmetric), gamma0, interval, samples);
}

// Commutator with an antisymmetric matrix, restricted to the antisymmetric sector.
RealMatrix commutator_sector(const RealMatrix& a) {
    const int n = static_cast<int>(a.rows()) / 2;
    return sector_matrix(assemble(AntisymmetricMatrix(a), Channel{LinearChannel::none(n)}), Sector::Antisymmetric);
}

double log_log_slope(const std::vector<ScalingPoint>& points, double ScalingPoint::*field) {
    if (points.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    const double k = static_cast<double>(points.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& p : points) {
        sx += std::log(p.trajectories);
        sy += std::log(p.*field);
    }
    double sxx = 0.0, sxy = 0.0;
    for (const auto& p : points) {
        const double dx = std::log(p.trajectories) - sx / k;
        sxx += dx * dx;
        sxy += dx * (std::log(p.*field) - sy / k);
    }
    return sxy / sxx;
}

double mean_polarization(const RealMatrix& g) {
    const int n = static_cast<int>(g.rows()) / 2;
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += g(2 * j, 2 * j + 1);
    return sum / n;
}

Trajectory make_trajectory(const std::vector<double>& time, const std::vector<RealMatrix>& gammas,
                           const std::vector<RealMatrix>& reference, long long steps, const Tolerances& tol) {
    Trajectory t;
    t.time = time;
    const int n = static_cast<int>(gammas.front().rows()) / 2;
    t.site_polarization.resize(static_cast<Eigen::Index>(gammas.size()), n);
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        const RealMatrix& g = gammas[i];
        for (int j = 0; j < n; ++j) t.site_polarization(static_cast<Eigen::Index>(i), j) = g(2 * j, 2 * j + 1);
        t.mean_polarization.push_back(mean_polarization(g));
        t.distance_to_reference.push_back((g - reference[i]).norm());
        t.frobenius_norm.push_back(g.norm());
        t.max_cm_eigenvalue = std::max(t.max_cm_eigenvalue, validate_cm(g, tol).max_eigenvalue);
    }
    t.final_gamma = gammas.back();
    t.steps = steps;
    t.stepping_used = Stepping::Exact;
    return t;
}

double sample_std(const std::vector<double>& x) {
    if (x.size() < 2) return 0.0;
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

// Golden-section minimum of f over log c in [log lo, log hi].
template <class F>
double golden_log_minimum(F f, double lo, double hi) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = std::log(lo), b = std::log(hi);
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(std::exp(x1)), f2 = f(std::exp(x2));
    while (b - a > 1e-9) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(std::exp(x1));
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(std::exp(x2));
        }
    }
    return std::exp(0.5 * (a + b));
}

}  // namespace

double noise_autocovariance(const NoiseSpec& spec, double lag) {
    const double t = spec.correlation_time;
    return spec.variance / std::sqrt(2.0 * std::numbers::pi) * std::exp(-lag * lag / (2.0 * t * t));
}

RealMatrix sample_noise(const NoiseSpec& spec, int sites, int points, double dt, std::uint64_t stream) {
    const double t = spec.correlation_time;
    if (!(t > 0.0)) throw InvalidArgument("sample_noise: correlation time must be positive");
    if (!(spec.variance >= 0.0)) throw InvalidArgument("sample_noise: variance must be non-negative");
    if (sites < 1 || points < 1) throw InvalidArgument("sample_noise: need at least one site and one point");
    if (!(dt > 0.0) || dt > 0.2 * t * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "sample_noise: dt = " << dt << " does not resolve the kernel; need dt <= T/5 = " << 0.2 * t;
        throw InvalidArgument(msg.str());
    }
    RealMatrix paths = RealMatrix::Zero(points, sites);
    if (spec.variance == 0.0) return paths;

    const int half = static_cast<int>(std::ceil(kKernelCut * t / dt));
    std::vector<double> kernel(static_cast<std::size_t>(2 * half + 1));
    double norm2 = 0.0;
    for (int j = -half; j <= half; ++j) {
        const double x = j * dt / t;
        kernel[static_cast<std::size_t>(j + half)] = std::exp(-x * x);
        norm2 += std::exp(-2.0 * x * x);
    }
    // Discrete self-convolution of exp(-x^2) is exp(-x^2/2) up to exponentially small aliasing.
    const double scale = std::sqrt(noise_autocovariance(spec, 0.0) / norm2);
    for (double& k : kernel) k *= scale;

    auto engine = stream_engine(spec.seed, stream);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int columns = spec.independent_sites ? sites : 1;
    std::vector<double> white(static_cast<std::size_t>(points + 2 * half));
    for (int c = 0; c < columns; ++c) {
        for (double& w : white) w = normal(engine);
        for (int k = 0; k < points; ++k) {
            double acc = 0.0;
            const double* w = white.data() + k;
            for (std::size_t j = 0; j < kernel.size(); ++j) acc += kernel[j] * w[j];
            paths(k, c) = acc;
        }
    }
    if (!spec.independent_sites) {
        for (int c = 1; c < sites; ++c) paths.col(c) = paths.col(0);
    }
    return paths;
}

double spectral_width(const AntisymmetricMatrix& h) {
    if (h.dimension() == 0) return 0.0;
    const Eigen::JacobiSVD<RealMatrix> svd(h.matrix());
    return 2.0 * svd.singularValues()(0);
}

double xy_spectral_width(double field, double coupling) {
    return std::max(4.0 * std::abs(field), 8.0 * std::abs(coupling));
}

RealMatrix colored_noise_generator(const AntisymmetricMatrix& h, const NoiseSpec& spec) {
    const double t = spec.correlation_time;
    if (!(t > 0.0)) throw InvalidArgument("colored_noise_generator: correlation time must be positive");
    const int n = h.modes();
    const RealMatrix a = commutator_sector(h.matrix());
    if (spec.variance == 0.0) return a;

    // a is real antisymmetric: i a is Hermitian, a = -i U diag(lambda) U^dag.
    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(Complex(0.0, 1.0) * a.cast<Complex>());
    const ComplexMatrix& u = eig.eigenvectors();
    const RealVector& lambda = eig.eigenvalues();
    const Eigen::Index m = a.rows();

    // K(w) = int_0^inf C(tau) exp(-i w tau) dtau. The real part is closed form;
    // the reactive part int C sin(w tau) uses Simpson's rule on [0, 8T].
    const int panels = 400;
    const double h_tau = 8.0 * t / panels;
    auto reactive = [&](double w) {
        double acc = 0.0;
        for (int k = 0; k <= panels; ++k) {
            const double tau = k * h_tau;
            const double weight = (k == 0 || k == panels) ? 1.0 : (k % 2 ? 4.0 : 2.0);
            acc += weight * noise_autocovariance(spec, tau) * std::sin(w * tau);
        }
        return acc * h_tau / 3.0;
    };
    ComplexMatrix kernel(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            const double w = lambda(i) - lambda(j);
            kernel(i, j) = Complex(0.5 * spec.variance * t * std::exp(-0.5 * w * w * t * t), -reactive(w));
        }
    }

    RealMatrix g = a;
    for (int site = 0; site < n; ++site) {
        RealMatrix v = RealMatrix::Zero(2 * n, 2 * n);
        v(2 * site, 2 * site + 1) = -2.0;
        v(2 * site + 1, 2 * site) = 2.0;
        const RealMatrix vs = commutator_sector(v);
        // e^{a tau} V e^{-a tau} = U [ (U^dag V U)_ij e^{-i(lambda_i - lambda_j) tau} ] U^dag.
        const ComplexMatrix rotated = (u.adjoint() * vs.cast<Complex>() * u).cwiseProduct(kernel);
        g += (vs.cast<Complex>() * u * rotated * u.adjoint()).real();
    }
    return g;
}

StochasticResult averaged_evolution(const AntisymmetricMatrix& h, const NoiseSpec& spec,
                                    const CovarianceMatrix& gamma0, const StochasticOptions& options) {
    const int n_modes = h.modes();
    if (gamma0.modes() != n_modes) throw InvalidArgument("averaged_evolution: state and Hamiltonian sizes differ");
    if (options.trajectories < kMinTrajectories) {
        std::ostringstream msg;
        msg << "averaged_evolution: " << options.trajectories << " trajectories cannot support bootstrap error bars; need at least "
            << kMinTrajectories;
        throw InvalidArgument(msg.str());
    }
    if (!spec.independent_sites) {
        throw InvalidArgument("averaged_evolution: a shared field does not produce site dephasing; use independent sites");
    }
    if (!(options.t_end > 0.0)) throw InvalidArgument("averaged_evolution: t_end must be positive");
    if (!validate_cm(gamma0, options.tol).valid) {
        throw InvalidArgument("averaged_evolution: initial matrix is not a valid covariance matrix");
    }
    const double t_corr = spec.correlation_time;
    const double dt = options.dt > 0.0 ? options.dt : 0.2 * t_corr;
    const long long per_sample = std::max(1LL, std::llround(options.sample_interval / dt));
    const long long samples = std::llround(options.t_end / dt) / per_sample;
    if (samples < 2) throw InvalidArgument("averaged_evolution: t_end must cover at least two samples");
    const long long steps = samples * per_sample;
    if (steps + 1 > std::numeric_limits<int>::max()) throw InvalidArgument("averaged_evolution: too many steps");
    const double interval = static_cast<double>(per_sample) * dt;
    const auto n_samples = static_cast<std::size_t>(samples + 1);

    StochasticComparison cmp;
    cmp.trajectories = options.trajectories;
    cmp.constant = options.constant;
    cmp.g_squared = options.constant * spec.variance * t_corr;
    const double omega = options.omega > 0.0 ? options.omega : spectral_width(h);
    cmp.markov_parameter = t_corr * omega;
    cmp.markov_warning = cmp.markov_parameter > kMarkovWarning;
    if (cmp.markov_warning && options.warn) {
        std::cerr << "warning: correlation time T = " << t_corr << " gives T * omega = " << cmp.markov_parameter
                  << " > " << kMarkovWarning << "; the Markov limit is not reached\n";
    }

    // Trajectories are grouped into chunks fixed by the count alone; chunk sums
    // are reduced pairwise in index order, so the average is independent of the
    // worker count and scheduling.
    const int n_traj = options.trajectories;
    const int chunk = std::max(32, (n_traj + 63) / 64);
    const int n_chunks = (n_traj + chunk - 1) / chunk;
    const Eigen::Index dim = 2 * n_modes;
    const RealMatrix propagator = (h.matrix() * dt).exp();
    const RealMatrix propagator_t = propagator.transpose();
    const RealMatrix gram0 = gamma0.matrix().transpose() * gamma0.matrix();

    std::vector<std::vector<RealMatrix>> chunk_sums(static_cast<std::size_t>(n_chunks));
    std::vector<double> chunk_purity(static_cast<std::size_t>(n_chunks), 0.0);
    // Observables are all independent entries Gamma_ab, a < b, at every sample:
    // obs[(traj * n_samples + sample) * pairs + e].
    std::vector<std::pair<int, int>> entries;
    for (int a = 0; a < 2 * n_modes; ++a) {
        for (int b = a + 1; b < 2 * n_modes; ++b) entries.emplace_back(a, b);
    }
    const std::size_t pairs = entries.size();
    const std::size_t width = n_samples * pairs;
    if (static_cast<double>(width) * n_traj > kMaxStoredValues) {
        throw InvalidArgument("averaged_evolution: per-trajectory statistics exceed the memory budget; "
                              "reduce trajectories, samples or modes");
    }
    std::vector<double> obs(static_cast<std::size_t>(n_traj) * width);

    auto run_chunk = [&](std::size_t c) {
        std::vector<RealMatrix>& sums = chunk_sums[c];
        sums.assign(n_samples, RealMatrix::Zero(dim, dim));
        RealMatrix g(dim, dim), tmp(dim, dim);
        std::vector<double> angle(static_cast<std::size_t>(n_modes));
        double purity = 0.0;
        const int begin = static_cast<int>(c) * chunk;
        const int end = std::min(n_traj, begin + chunk);
        for (int traj = begin; traj < end; ++traj) {
            const RealMatrix noise = sample_noise(spec, n_modes, static_cast<int>(steps + 1), dt,
                                                  static_cast<std::uint64_t>(traj));
            // Strang splitting: half-step field rotations around the exact free flow.
            // A half step of dB ((0,-2),(2,0)) rotates a site block by dB dt.
            auto rotate = [&](long long k, double factor) {
                for (int a = 0; a < n_modes; ++a) angle[static_cast<std::size_t>(a)] = factor * noise(k, a) * dt;
                rotate_sites(g, angle.data(), n_modes);
            };
            auto record = [&](std::size_t i) {
                sums[i] += g;
                double* out = obs.data() + static_cast<std::size_t>(traj) * width + i * pairs;
                for (std::size_t e = 0; e < pairs; ++e) out[e] = g(entries[e].first, entries[e].second);
                purity = std::max(purity, (g.transpose() * g - gram0).cwiseAbs().maxCoeff());
            };
            g = gamma0.matrix();
            record(0);
            rotate(0, 1.0);
            for (long long k = 1; k <= steps; ++k) {
                tmp.noalias() = propagator * g;
                g.noalias() = tmp * propagator_t;
                if (k % per_sample == 0) {
                    rotate(k, 1.0);
                    record(static_cast<std::size_t>(k / per_sample));
                    if (k < steps) rotate(k, 1.0);
                } else {
                    rotate(k, 2.0);
                }
            }
        }
        chunk_purity[c] = purity;
    };
    parallel_for(static_cast<std::size_t>(n_chunks), run_chunk, options.workers);

    for (std::size_t width = 1; width < chunk_sums.size(); width *= 2) {
        for (std::size_t i = 0; i + width < chunk_sums.size(); i += 2 * width) {
            for (std::size_t s = 0; s < n_samples; ++s) chunk_sums[i][s] += chunk_sums[i + width][s];
            chunk_sums[i + width].clear();
        }
    }
    std::vector<RealMatrix> averaged = std::move(chunk_sums.front());
    for (RealMatrix& m : averaged) m /= static_cast<double>(n_traj);
    cmp.max_purity_defect = *std::max_element(chunk_purity.begin(), chunk_purity.end());

    std::vector<double> time(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) time[i] = static_cast<double>(i) * interval;
    const std::vector<RealMatrix> reference = reference_run(h, gamma0, cmp.g_squared, interval, samples);

    StochasticResult result;
    result.average = make_trajectory(time, averaged, reference, steps, options.tol);
    result.lindblad = make_trajectory(time, reference, reference, samples, options.tol);
    const std::vector<RealMatrix> colored = sector_run(colored_noise_generator(h, spec), gamma0, interval, samples);
    result.colored = make_trajectory(time, colored, colored, samples, options.tol);
    cmp.average_max_eigenvalue = result.average.max_cm_eigenvalue;

    auto flatten = [&](const std::vector<RealMatrix>& gammas) {
        std::vector<double> out(width);
        for (std::size_t i = 0; i < n_samples; ++i) {
            for (std::size_t e = 0; e < pairs; ++e) out[i * pairs + e] = gammas[i](entries[e].first, entries[e].second);
        }
        return out;
    };
    std::vector<std::size_t> polarization_entries;
    for (std::size_t e = 0; e < pairs; ++e) {
        if (entries[e].first % 2 == 0 && entries[e].second == entries[e].first + 1) polarization_entries.push_back(e);
    }
    const std::vector<double> avg_signal = flatten(averaged);
    const std::vector<double> ref_signal = flatten(reference);
    const std::vector<double> colored_signal = flatten(colored);

    // Least-squares constant and the local sensitivity of the reference signal to it.
    auto signal_for = [&](double c) {
        return flatten(reference_run(h, gamma0, c * spec.variance * t_corr, interval, samples));
    };
    std::vector<double> fitted_signal(width, 0.0), sensitivity(width, 0.0);
    double sens2 = 0.0;
    if (spec.variance > 0.0) {
        auto sse = [&](double c) {
            const std::vector<double> s = signal_for(c);
            double acc = 0.0;
            for (std::size_t k = 0; k < width; ++k) acc += (avg_signal[k] - s[k]) * (avg_signal[k] - s[k]);
            return acc;
        };
        cmp.fitted_constant = golden_log_minimum(sse, 1e-2, 1e2);
        fitted_signal = signal_for(cmp.fitted_constant);
        const double step = 1e-4 * cmp.fitted_constant;
        const std::vector<double> up = signal_for(cmp.fitted_constant + step);
        const std::vector<double> down = signal_for(cmp.fitted_constant - step);
        for (std::size_t k = 0; k < width; ++k) {
            sensitivity[k] = (up[k] - down[k]) / (2.0 * step);
            sens2 += sensitivity[k] * sensitivity[k];
        }
    }
    if (!(sens2 > 0.0)) {
        cmp.fitted_constant = std::numeric_limits<double>::quiet_NaN();
        cmp.fitted_constant_sigma = std::numeric_limits<double>::quiet_NaN();
        cmp.constant_z = std::numeric_limits<double>::quiet_NaN();
    }

    // Bootstrap over trajectories; the replica constant is the linearised least-squares update.
    const int n_boot = std::max(2, options.bootstrap);
    auto engine = stream_engine(spec.seed, kBootstrapTag);
    std::uniform_int_distribution<std::size_t> pick(0, static_cast<std::size_t>(n_traj) - 1);
    std::vector<std::vector<double>> boot_signal(width, std::vector<double>(static_cast<std::size_t>(n_boot)));
    std::vector<std::vector<double>> boot_mean(n_samples, std::vector<double>(static_cast<std::size_t>(n_boot)));
    std::vector<double> boot_constant(static_cast<std::size_t>(n_boot));
    std::vector<double> replica(width);
    for (std::size_t b = 0; b < static_cast<std::size_t>(n_boot); ++b) {
        std::fill(replica.begin(), replica.end(), 0.0);
        for (int r = 0; r < n_traj; ++r) {
            const double* row = obs.data() + pick(engine) * width;
            for (std::size_t k = 0; k < width; ++k) replica[k] += row[k];
        }
        double projection = 0.0;
        for (std::size_t k = 0; k < width; ++k) {
            replica[k] /= n_traj;
            boot_signal[k][b] = replica[k];
            projection += (replica[k] - fitted_signal[k]) * sensitivity[k];
        }
        for (std::size_t i = 0; i < n_samples; ++i) {
            double sum = 0.0;
            for (std::size_t e : polarization_entries) sum += replica[i * pairs + e];
            boot_mean[i][b] = sum / n_modes;
        }
        boot_constant[b] = sens2 > 0.0 ? cmp.fitted_constant + projection / sens2 : 0.0;
    }

    result.mean_polarization_sigma.resize(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) result.mean_polarization_sigma[i] = sample_std(boot_mean[i]);
    double ss = 0.0, ss_colored = 0.0, var = 0.0;
    for (std::size_t k = 0; k < width; ++k) {
        const double sigma = sample_std(boot_signal[k]);
        const double dev = avg_signal[k] - ref_signal[k];
        const double dev_colored = avg_signal[k] - colored_signal[k];
        ss += dev * dev;
        ss_colored += dev_colored * dev_colored;
        var += sigma * sigma;
        cmp.max_deviation = std::max(cmp.max_deviation, std::abs(dev));
        if (sigma > 0.0) {
            cmp.max_z = std::max(cmp.max_z, std::abs(dev) / sigma);
            cmp.colored_max_z = std::max(cmp.colored_max_z, std::abs(dev_colored) / sigma);
        }
    }
    const auto w = static_cast<double>(width);
    cmp.rms_deviation = std::sqrt(ss / w);
    cmp.statistical_rms = std::sqrt(var / w);
    cmp.excess_rms = std::sqrt(std::max(0.0, (ss - var) / w));
    cmp.colored_rms = std::sqrt(ss_colored / w);
    cmp.colored_excess_rms = std::sqrt(std::max(0.0, (ss_colored - var) / w));
    if (sens2 > 0.0) {
        cmp.fitted_constant_sigma = sample_std(boot_constant);
        cmp.constant_z = cmp.fitted_constant_sigma > 0.0
                             ? (cmp.fitted_constant - options.constant) / cmp.fitted_constant_sigma
                             : std::numeric_limits<double>::quiet_NaN();
    }

    // Deviation scaling over disjoint batches of equal size.
    std::vector<int> sizes = options.scaling_sizes;
    if (sizes.empty() && n_traj / 100 >= 10) sizes = {n_traj / 100, n_traj / 10, n_traj};
    for (int m : sizes) {
        if (m < 1 || m > n_traj) throw InvalidArgument("averaged_evolution: scaling size outside [1, trajectories]");
        ScalingPoint point;
        point.trajectories = m;
        point.batches = n_traj / m;
        double total = 0.0, total_colored = 0.0;
        std::vector<double> mean(width);
        for (int b = 0; b < point.batches; ++b) {
            std::fill(mean.begin(), mean.end(), 0.0);
            for (int r = b * m; r < (b + 1) * m; ++r) {
                const double* p = obs.data() + static_cast<std::size_t>(r) * width;
                for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += p[k];
            }
            double acc = 0.0, acc_colored = 0.0;
            for (std::size_t k = pairs; k < width; ++k) {
                const double dev = mean[k] / m - ref_signal[k];
                const double dev_colored = mean[k] / m - colored_signal[k];
                acc += dev * dev;
                acc_colored += dev_colored * dev_colored;
            }
            total += acc / static_cast<double>(width - pairs);
            total_colored += acc_colored / static_cast<double>(width - pairs);
        }
        point.rms_deviation = std::sqrt(total / point.batches);
        point.colored_rms_deviation = std::sqrt(total_colored / point.batches);
        cmp.scaling.push_back(point);
    }
    cmp.scaling_exponent = log_log_slope(cmp.scaling, &ScalingPoint::rms_deviation);
    cmp.colored_scaling_exponent = log_log_slope(cmp.scaling, &ScalingPoint::colored_rms_deviation);

    result.comparison = cmp;
    return result;
}

nlohmann::json StochasticComparison::to_json() const {
    nlohmann::json scaling_json = nlohmann::json::array();
    for (const auto& p : scaling) {
        scaling_json.push_back({{"trajectories", p.trajectories}, {"batches", p.batches}, {"rms_deviation", p.rms_deviation},
                                {"colored_rms_deviation", p.colored_rms_deviation}});
    }
    auto finite_or_null = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
    return nlohmann::json{{"trajectories", trajectories},
                          {"g_squared", g_squared},
                          {"constant", constant},
                          {"markov_parameter", markov_parameter},
                          {"markov_warning", markov_warning},
                          {"max_deviation", max_deviation},
                          {"max_z", max_z},
                          {"rms_deviation", rms_deviation},
                          {"statistical_rms", statistical_rms},
                          {"excess_rms", excess_rms},
                          {"fitted_constant", finite_or_null(fitted_constant)},
                          {"fitted_constant_sigma", finite_or_null(fitted_constant_sigma)},
                          {"constant_z", finite_or_null(constant_z)},
                          {"max_purity_defect", max_purity_defect},
                          {"average_max_eigenvalue", average_max_eigenvalue},
                          {"scaling", scaling_json},
                          {"colored_rms", colored_rms},
                          {"colored_excess_rms", colored_excess_rms},
                          {"colored_max_z", colored_max_z},
                          {"scaling_exponent", finite_or_null(scaling_exponent)},
                          {"colored_scaling_exponent", finite_or_null(colored_scaling_exponent)}};
}

void StochasticResult::write_csv(std::ostream& out) const {
    std::ostringstream buf;
    buf.imbue(std::locale::classic());
    buf << std::setprecision(17) << "t";
    for (int j = 0; j < average.sites(); ++j) buf << ",site_" << j;
    buf << ",mean_mag,mean_mag_sigma,lindblad_mean_mag,colored_mean_mag,dist_lindblad\n";
    for (std::size_t i = 0; i < average.time.size(); ++i) {
        buf << average.time[i];
        for (int j = 0; j < average.sites(); ++j) buf << ',' << average.site_polarization(static_cast<Eigen::Index>(i), j);
        buf << ',' << average.mean_polarization[i] << ',' << mean_polarization_sigma[i] << ','
            << lindblad.mean_polarization[i] << ',' << colored.mean_polarization[i] << ','
            << average.distance_to_reference[i] << '\n';
    }
    out << buf.str();
}

}  // namespace quasifree
