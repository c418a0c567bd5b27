#include <doctest.h>

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "helpers.hpp"
#include "quasifree/channels.hpp"
#include "quasifree/errors.hpp"
#include "quasifree/spectral.hpp"
#include "quasifree/stochastic.hpp"

using namespace quasifree;

TEST_SUITE("stochastic") {
    TEST_CASE("autocovariance") {
        const NoiseSpec s{2.0, 0.1, true, 1};
        CHECK(noise_autocovariance(s, 0.0) == doctest::Approx(2.0 / std::sqrt(2 * std::numbers::pi)));
        CHECK(noise_autocovariance(s, 0.1) == doctest::Approx(noise_autocovariance(s, 0.0) * std::exp(-0.5)));
        CHECK(noise_autocovariance(s, -0.2) == noise_autocovariance(s, 0.2));
    }

    TEST_CASE("sampled noise statistics within three sigma") {
        // Samples 12T apart are independent (kernel support 5T on each side).
        const NoiseSpec spec{3.0, 0.05, true, 42};
        const double dt = spec.correlation_time / 5;
        const int lag = 5;  // one correlation time
        const int streams = 4000;
        const int picks[] = {0, 60, 120};
        double sum = 0, sum2 = 0, cross = 0, lagged = 0;
        long count = 0;
        for (int s = 0; s < streams; ++s) {
            const RealMatrix x = sample_noise(spec, 2, 130, dt, static_cast<std::uint64_t>(s));
            for (int p : picks) {
                sum += x(p, 0);
                sum2 += x(p, 0) * x(p, 0);
                cross += x(p, 0) * x(p, 1);
                lagged += x(p, 0) * x(p + lag, 0);
                ++count;
            }
        }
        const double n = static_cast<double>(count);
        CHECK(count >= 10000);
        const double var = noise_autocovariance(spec, 0.0);
        const double cov_t = noise_autocovariance(spec, spec.correlation_time);
        CHECK(std::abs(sum / n) < 3 * std::sqrt(var / n));
        CHECK(std::abs(sum2 / n - var) < 3 * var * std::sqrt(2 / n));
        CHECK(std::abs(cross / n) < 3 * var / std::sqrt(n));
        CHECK(std::abs(lagged / n - cov_t) < 3 * std::sqrt((var * var + cov_t * cov_t) / n));
    }

    TEST_CASE("streams are reproducible and distinct") {
        const NoiseSpec spec{1.0, 0.01, true, 9};
        const RealMatrix a = sample_noise(spec, 3, 50, 0.002, 4);
        CHECK((sample_noise(spec, 3, 50, 0.002, 4) - a).norm() == 0.0);
        CHECK((sample_noise(spec, 3, 50, 0.002, 5) - a).norm() > 0.0);
        CHECK_THROWS_AS(sample_noise(spec, 3, 50, 0.0021, 4), InvalidArgument);
    }

    TEST_CASE("zero field variance gives the unitary evolution") {
        const AntisymmetricMatrix h = xy_chain({3, 1.0, 0.5, 0.8});
        const CovarianceMatrix g0 = CovarianceMatrix::fock({1, 0, 0});
        NoiseSpec spec{0.0, 0.01, true, 3};
        StochasticOptions o;
        o.t_end = 2.0;
        o.sample_interval = 0.5;
        o.trajectories = 20;
        o.bootstrap = 10;
        o.warn = false;
        const StochasticResult r = averaged_evolution(h, spec, g0, o);
        // dGamma/dt = [H, Gamma] integrates to e^{Ht} Gamma e^{-Ht}.
        const RealMatrix u = (h.matrix() * 2.0).exp();
        const RealMatrix exact = u * g0.matrix() * u.transpose();
        const RealMatrix last = r.average.final_gamma;
        CHECK((last - exact).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(r.comparison.max_purity_defect < 1e-10);
    }

    TEST_CASE("trajectories stay pure and results do not depend on the worker count") {
        const AntisymmetricMatrix h = xy_chain({2, 1.0, 1.0, 1.0});
        const CovarianceMatrix g0 = CovarianceMatrix::fock({1, 0});
        NoiseSpec spec{5.0, 0.01, true, 17};
        StochasticOptions o;
        o.t_end = 3.0;
        o.sample_interval = 0.5;
        o.trajectories = 200;
        o.bootstrap = 20;
        o.warn = false;
        o.workers = 1;
        const StochasticResult a = averaged_evolution(h, spec, g0, o);
        o.workers = 4;
        const StochasticResult b = averaged_evolution(h, spec, g0, o);
        CHECK(a.comparison.max_purity_defect < 1e-10);
        CHECK((a.average.final_gamma - b.average.final_gamma).norm() == 0.0);
        CHECK(a.comparison.to_json().dump() == b.comparison.to_json().dump());
        CHECK(a.average.max_cm_eigenvalue <= 1.0 + 1e-12);
    }

    TEST_CASE("input validation") {
        const AntisymmetricMatrix h = xy_chain({2, 1.0, 1.0, 1.0});
        const CovarianceMatrix g0 = CovarianceMatrix::fock({1, 0});
        StochasticOptions o;
        o.t_end = 1.0;
        o.trajectories = 10;
        o.warn = false;
        CHECK_THROWS_AS(averaged_evolution(h, NoiseSpec{1.0, 0.01, true, 1}, g0, o), InvalidArgument);
        o.trajectories = 50;
        CHECK_THROWS_AS(averaged_evolution(h, NoiseSpec{1.0, 0.01, false, 1}, g0, o), InvalidArgument);
        o.dt = 0.01;
        CHECK_THROWS_AS(averaged_evolution(h, NoiseSpec{1.0, 0.01, true, 1}, g0, o), InvalidArgument);
    }

    TEST_CASE("colored generator reduces to dephasing for short correlation times") {
        const AntisymmetricMatrix h = xy_chain({2, 1.0, 1.0, 1.0});
        const double g2 = 0.05;
        double previous = 1e300;
        for (double t : {0.02, 0.005}) {
            const NoiseSpec spec{g2 / t, t, true, 1};
            const RealMatrix colored = colored_noise_generator(h, spec);
            const RealMatrix unitary = colored_noise_generator(h, NoiseSpec{0.0, t, true, 1});
            const RealMatrix lindblad =
                sector_matrix(assemble(h, Channel(dephasing_z(2, {std::sqrt(g2), 1.0, 0.0}))), Sector::Antisymmetric);
            const double rel = (colored - lindblad).norm() / (lindblad - unitary).norm();
            CAPTURE(t);
            CHECK(rel < 0.6 * 8.0 * t + 1e-6);  // relative correction of order omega T
            CHECK(rel < previous);
            previous = rel;
        }
    }
}
