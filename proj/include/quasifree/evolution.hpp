#pragma once

#include <optional>
#include <string>
#include <vector>

#include "quasifree/spectral.hpp"

namespace quasifree {

/// How the fixed-step fourth-order Runge-Kutta map is applied.
///   Direct      one step at a time on the 2N x 2N matrix, with per-step checks;
///   Propagator  the (linear) RK4 one-step map is assembled once on the
///               antisymmetric sector and raised to the power steps-per-sample;
///   Exact       the exact flow exp(S dt) between samples, no RK4 truncation;
///   Automatic   Direct for short runs, Propagator otherwise.
enum class Stepping { Automatic, Direct, Propagator, Exact };

struct EvolutionOptions {
    double t_end = 10.0;
    double dt = 0.01;
    /// Spacing of recorded samples; rounded to a whole number of steps. 0 records every step.
    double sample_interval = 0.0;
    Stepping stepping = Stepping::Automatic;
    /// Reference for the distance column. Defaults to the unique linear-channel
    /// steady state, or Gamma = 0 for quadratic channels.
    std::optional<RealMatrix> reference;
    Tolerances tol = default_tolerances();
};

/// Observables along a run. site_polarization(i, j) = Gamma_{jj,01} at time[i].
struct Trajectory {
    std::vector<double> time;
    RealMatrix site_polarization;
    std::vector<double> mean_polarization;
    std::vector<double> distance_to_reference;
    std::vector<double> frobenius_norm;
    RealMatrix final_gamma;

    double max_cm_eigenvalue = 0.0;        // largest eigenvalue of Gamma^T Gamma seen at a sample
    double max_antisymmetry_defect = 0.0;  // before re-antisymmetrization (direct stepping)
    double max_norm_increase = 0.0;        // largest per-step growth of ||Gamma||_F (direct stepping)
    long long steps = 0;
    Stepping stepping_used = Stepping::Direct;

    int sites() const { return static_cast<int>(site_polarization.cols()); }
    /// Columns t, site_0, ..., site_{N-1}, mean_mag, dist_ss.
    void write_csv(std::ostream& out) const;
};

/// Largest stable step for the given superoperator: 0.1 / max(||H||_2, dissipative rate scale).
double max_stable_step(const Superoperator& s);

Trajectory evolve(const CovarianceMatrix& gamma0, const Superoperator& s, const EvolutionOptions& options);

/// One classical RK4 step of dGamma/dt = S Gamma - V.
RealMatrix rk4_step(const Superoperator& s, const RealMatrix& gamma, double dt);

struct DecayFitOptions {
    double tail_fraction = 0.2;
    int min_points = 50;
    double floor = 1e-10;
};

struct DecayFit {
    double rate = 0.0;
    double intercept = 0.0;   // log amplitude at t = 0
    double r_squared = 0.0;
    double window_begin = 0.0;
    double window_end = 0.0;
    int points = 0;
    /// The tail oscillates; the fit used the local maxima of |signal - asymptote|.
    bool envelope = false;
};

/// Least-squares slope of log|signal - asymptote| over the tail window.
DecayFit fit_decay_rate(const std::vector<double>& time, const std::vector<double>& signal, double asymptote,
                        const DecayFitOptions& options = {});

}  // namespace quasifree
