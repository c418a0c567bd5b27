#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "quasifree/analytics.hpp"
#include "quasifree/channels.hpp"
#include "quasifree/errors.hpp"
#include "quasifree/spectral.hpp"

using namespace quasifree;

namespace {

// Distinct |Re lambda| values above the zero threshold, ascending, merged within rel.
std::vector<double> rate_ladder(const LiouvillianSpectrum& sp, double rel = 1e-6) {
    std::vector<double> r;
    for (const Complex& z : sp.eigenvalues) {
        if (std::abs(z.real()) > sp.zero_threshold) r.push_back(std::abs(z.real()));
    }
    std::sort(r.begin(), r.end());
    std::vector<double> out;
    for (double x : r) {
        if (out.empty() || x > out.back() * (1.0 + rel)) out.push_back(x);
    }
    return out;
}

}  // namespace

TEST_SUITE("analytics") {
    TEST_CASE("per-mode triples are unit vectors") {
        const PerturbationData d = perturbation_data(to_momentum(from_blocks(testing::random_ti_spec(9, 21))));
        CHECK(d.normalization_defect() < 1e-14);
        const PerturbationData x = perturbation_data(to_momentum(xy_chain({40, 1.0, 0.3, 2.7})));
        CHECK(x.normalization_defect() < 1e-14);
        for (int m = 0; m < x.size(); ++m) CHECK(std::abs(x.a(m)) < 1e-14);  // k = l = 0
    }

    TEST_CASE("weak-coupling sum matches the dense spectral gap") {
        for (double b : {0.6, 1.5, 3.0}) {
            CAPTURE(b);
            const AntisymmetricMatrix h = xy_chain({8, 1.0, 0.5, b});
            const double g = 0.01;
            const double sum = adr_weak_coupling_sum(to_momentum(h), g);
            const double dense = spectrum(assemble(h, Channel(dephasing_z(8, {g, 1.0, 0.0})))).adr;
            CHECK(dense == doctest::Approx(sum).epsilon(1e-3));
        }
    }

    TEST_CASE("closed forms against large-N momentum sums") {
        const int n = 3000;
        for (double gamma : {0.3, 0.5, 1.0}) {
            for (double b : {0.5, 1.7, 2.5, 4.0}) {
                CAPTURE(gamma);
                CAPTURE(b);
                const MomentumBlocks blocks = to_momentum(xy_chain({n, 1.0, gamma, b}));
                CHECK(adr_weak_coupling_sum(blocks, 1.0) == doctest::Approx(xy_adr_closed_form(gamma, b, 1.0, 1.0)).epsilon(1e-4));
                CHECK(particle_number_sum(blocks, 1.0, 0.2) ==
                      doctest::Approx(xy_polarization_closed_form(gamma, b, 1.0, 1.0, 0.2)).epsilon(1e-4));
            }
        }
    }

    TEST_CASE("closed-form values") {
        CHECK(xy_adr_closed_form(0.5, 1.0, 1.0, 0.1) == doctest::Approx(4 * 0.01 * 0.5 / 1.5));
        CHECK(xy_polarization_closed_form(1.0, 1.9, 1.0, 1.0, 0.0) == 0.5);
        CHECK(xy_polarization_closed_form(1.0, 2.0, 1.0, 1.0, 0.0) == 0.5);
        // gamma = 0 conserves magnetization: no decay of the uniform mode.
        CHECK(xy_adr_closed_form(0.0, 3.0, 1.0, 0.1) == 0.0);
        CHECK_THROWS_AS(xy_adr_closed_form(1.5, 1.0, 1.0, 0.1), InvalidArgument);
        CHECK_THROWS_AS(xy_polarization_closed_form(0.5, 1.0, 1.0, 0.0, 0.0), InvalidArgument);
    }

    TEST_CASE("two lowest rates against the dense spectrum") {
        const int n = 8;
        const double g = 0.005;
        for (double b : {0.8, 1.4}) {
            for (auto [mu, nu] : {std::pair{1.0, 1.0}, std::pair{1.0, 0.6}, std::pair{0.5, 1.0}}) {
                CAPTURE(b);
                CAPTURE(mu);
                CAPTURE(nu);
                const AntisymmetricMatrix h = xy_chain({n, 1.0, 1.0, b});
                const RatePair r = two_lowest_rates(to_momentum(h), g, mu, nu);
                const Superoperator s = assemble(h, make_channel(Preset::DephasingXXMixSwapped, n, {g, mu, nu}));
                const std::vector<double> ladder = rate_ladder(spectrum(s));
                REQUIRE(ladder.size() >= 2);
                CHECK(r.minus == doctest::Approx(ladder[0]).epsilon(2e-3));
                CHECK(r.plus == doctest::Approx(ladder[1]).epsilon(2e-3));
            }
        }
    }

    TEST_CASE("equal weights: constant slowest rate and the epsilon sums") {
        const double g = 0.1;
        for (double b : {0.3, 1.0, 1.6}) {
            const RatePair r = two_lowest_rates(to_momentum(xy_chain({400, 1.0, 1.0, b})), g, 1.0, 1.0);
            CHECK(r.minus == doctest::Approx(4 * g * g).epsilon(1e-9));
            CHECK(r.plus == doctest::Approx(2 * g * g * (3 + b * b / 4)).epsilon(1e-9));
            CHECK(r.eps == doctest::Approx(-b / 4).epsilon(1e-9));
        }
        const RatePair far = two_lowest_rates(to_momentum(xy_chain({400, 1.0, 1.0, 4.0})), g, 1.0, 1.0);
        CHECK(far.eps == doctest::Approx(-1.0 / 4.0).epsilon(1e-9));
    }

    TEST_CASE("perturbation matrix structure") {
        const PerturbationMatrix p = perturbation_matrix(to_momentum(xy_chain({10, 1.0, 0.6, 1.1})));
        CHECK(p.reconstruction_defect < 1e-12);
        CHECK((p.p - p.p.transpose()).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(p.delta_p == doctest::Approx(p.data.c.squaredNorm()));
        CHECK(std::abs(p.overlap_ca) < 1e-12);  // a = 0 for the XY chain
    }

    TEST_CASE("poles") {
        for (auto [b, gamma] : {std::pair{1.0, 0.5}, std::pair{3.0, 0.5}, std::pair{0.5, 1.0}, std::pair{1.0, 0.0}}) {
            const PoleSet ps = poles(b, 1.0, gamma);
            // z+- are the roots of J(1+gamma) z^2 - B z + J(1-gamma).
            for (const Pole* p : {&ps.plus, &ps.minus}) {
                const Complex z = p->z;
                CHECK(std::abs((1 + gamma) * z * z - b * z + (1 - gamma)) < 1e-12);
                CHECK(p->inside == (std::abs(z) < 1.0 - 1e-12));
            }
            CHECK(ps.zero.inside);
        }
        CHECK(poles(2.0, 1.0, 1.0).any_critical());
        CHECK_FALSE(poles(2.5, 1.0, 1.0).any_critical());
    }

    TEST_CASE("pairing matrix") {
        CHECK(pairing_matrix(CovarianceMatrix::fock({1, 0, 1, 1})).cwiseAbs().maxCoeff() < 1e-15);
        const CovarianceMatrix g(testing::random_antisymmetric(4, 3));
        const ComplexMatrix q = pairing_matrix(g);
        CHECK((q + q.transpose()).cwiseAbs().maxCoeff() < 1e-14);
    }
}
