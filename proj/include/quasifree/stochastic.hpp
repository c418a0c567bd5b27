#pragma once

// Classical fluctuating local fields and their ensemble-averaged dynamics.
//
// Each site alpha carries a zero-mean stationary Gaussian field dB_alpha(t)
// with autocovariance (v / sqrt(2 pi)) exp(-tau^2 / (2 T^2)), v the variance
// parameter and T the correlation time. The field couples as dB sigma^z_alpha,
// i.e. it adds dB * ((0, -2), (2, 0)) to the site block of H. Every single
// trajectory is coherent and keeps the covariance matrix pure; only the
// average is mixed. For T -> 0 the average follows site dephasing g sigma^z
// with g^2 = c v T for a constant c that the comparison below measures.

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "quasifree/evolution.hpp"

namespace quasifree {

struct NoiseSpec {
    double variance = 0.0;          // v
    double correlation_time = 0.01; // T
    /// false: one common field drives every site.
    bool independent_sites = true;
    std::uint64_t seed = 1;
};

/// (v / sqrt(2 pi)) exp(-lag^2 / (2 T^2)).
double noise_autocovariance(const NoiseSpec& spec, double lag);

/// Paths on the uniform grid t_k = k dt, k = 0..points-1; rows are grid
/// points, columns sites. White noise convolved with a Gaussian kernel cut
/// at 5T, normalised so the lag-zero variance is exact. The stream depends
/// only on (spec.seed, stream). Throws InvalidArgument if dt > T/5.
RealMatrix sample_noise(const NoiseSpec& spec, int sites, int points, double dt, std::uint64_t stream = 0);

/// Largest single-particle transition frequency 2 ||H||_2.
double spectral_width(const AntisymmetricMatrix& h);
/// Transition-frequency bound of the XY chain, max(4B, 8J).
double xy_spectral_width(double field, double coupling);
/// Stationary second-order (time-local cumulant) generator of the averaged
/// dynamics on the antisymmetric sector:
///   Hcal + sum_alpha int_0^inf C(tau) Vcal_alpha e^{Hcal tau} Vcal_alpha e^{-Hcal tau} dtau,
/// with Vcal_alpha the commutator with the site-alpha field block and C the
/// noise autocovariance. For T -> 0 it reduces to site dephasing with
/// g^2 = v T; at finite T it keeps the kernel's frequency dependence,
/// including the reactive part that shifts oscillation frequencies.
RealMatrix colored_noise_generator(const AntisymmetricMatrix& h, const NoiseSpec& spec);

/// Markov parameters T * omega above this value trigger a warning.
inline constexpr double kMarkovWarning = 0.1;

struct StochasticOptions {
    double t_end = 50.0;
    /// 0 selects T / 5.
    double dt = 0.0;
    double sample_interval = 0.5;
    int trajectories = 1000;
    int bootstrap = 200;
    /// c in g^2 = c v T for the reference dephasing channel.
    double constant = 1.0;
    /// 0 selects spectral_width(H).
    double omega = 0.0;
    /// Trajectory counts for the deviation-scaling fit; empty selects
    /// {n/100, n/10, n} when n/100 >= 10.
    std::vector<int> scaling_sizes;
    int workers = 0;
    bool warn = true;
    Tolerances tol = default_tolerances();
};

struct ScalingPoint {
    int trajectories = 0;
    int batches = 0;
    /// RMS over samples and independent CM entries of the batch average minus
    /// the reference, averaged in quadrature over disjoint batches.
    double rms_deviation = 0.0;
    /// The same against the colored-noise reference.
    double colored_rms_deviation = 0.0;
};

struct StochasticComparison {
    int trajectories = 0;
    double g_squared = 0.0;
    double constant = 0.0;
    double markov_parameter = 0.0;
    bool markov_warning = false;

    /// Comparisons use every independent entry Gamma_ab (a < b) at every sample.
    /// Deviations are averaged minus Lindblad; max_z divides each by its bootstrap error.
    double max_deviation = 0.0;
    double max_z = 0.0;
    double rms_deviation = 0.0;
    /// RMS of the bootstrap errors, and the part of rms_deviation they do not
    /// explain, sqrt(max(0, rms^2 - statistical^2)): an estimate of the bias.
    double statistical_rms = 0.0;
    double excess_rms = 0.0;

    /// Least-squares c over all entries, its bootstrap error and
    /// (fitted - constant) / error. NaN when the signal does not depend on c.
    double fitted_constant = 0.0;
    double fitted_constant_sigma = 0.0;
    double constant_z = 0.0;

    /// max over trajectories and samples of |Gamma^T Gamma - Gamma0^T Gamma0|.
    double max_purity_defect = 0.0;
    /// Largest eigenvalue of Gamma^T Gamma over the averaged samples.
    double average_max_eigenvalue = 0.0;

    /// The same against the colored-noise generator, which keeps the
    /// finite-T corrections the Lindblad limit drops.
    double colored_rms = 0.0;
    double colored_excess_rms = 0.0;
    double colored_max_z = 0.0;

    std::vector<ScalingPoint> scaling;
    /// Log-log slopes of the two rms deviations against trajectories; NaN without scaling data.
    double scaling_exponent = 0.0;
    double colored_scaling_exponent = 0.0;

    nlohmann::json to_json() const;
};

struct StochasticResult {
    Trajectory average;
    Trajectory lindblad;
    Trajectory colored;
    /// Bootstrap error of average.mean_polarization at every sample.
    std::vector<double> mean_polarization_sigma;
    StochasticComparison comparison;

    /// Columns t, site_0..site_{N-1}, mean_mag, mean_mag_sigma, lindblad_mean_mag,
    /// colored_mean_mag, dist_lindblad.
    void write_csv(std::ostream& out) const;
};

/// Ensemble average over `trajectories` noisy coherent evolutions from gamma0
/// compared with dephasing_z at g^2 = constant * v * T. Results do not depend
/// on the worker count. Throws InvalidArgument for fewer than 20 trajectories,
/// shared-field noise, or per-trajectory statistics above 10^8 stored values.
StochasticResult averaged_evolution(const AntisymmetricMatrix& h, const NoiseSpec& spec,
                                    const CovarianceMatrix& gamma0, const StochasticOptions& options);

}  // namespace quasifree
