#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"
#include "quasifree/channels.hpp"
#include "quasifree/ed_oracle.hpp"
#include "quasifree/errors.hpp"
#include "quasifree/spectral.hpp"

using namespace quasifree;

namespace {

const Preset kPresets[] = {Preset::LossGain, Preset::Paired, Preset::DephasingZ, Preset::XXCoupling,
                           Preset::DephasingXXMix, Preset::DephasingXXMixSwapped};

// Generator applied to Gamma, read off the density-matrix Liouvillian:
// dGamma/dt = cm(L rho).
RealMatrix cm_rate_from_rho(const AntisymmetricMatrix& h, const Channel& ch, const ComplexMatrix& rho) {
    const int n = h.modes();
    const int d = 1 << n;
    const ComplexMatrix l = ed::liouvillian_dense(h, ch);
    const ComplexVector v = Eigen::Map<const ComplexVector>(rho.data(), d * d);
    const ComplexVector dv = l * v;
    const ComplexMatrix drho = Eigen::Map<const ComplexMatrix>(dv.data(), d, d);
    return ed::cm_from_rho(drho, ed::build_majoranas(n)).matrix();
}

}  // namespace

TEST_SUITE("spectral") {
    TEST_CASE("generator agrees with the density-matrix Liouvillian") {
        for (int n : {2, 3}) {
            const AntisymmetricMatrix h(testing::random_antisymmetric(n, 11u + static_cast<unsigned>(n)));
            const ComplexMatrix rho = ed::random_density(n, 5);
            const auto c = ed::build_majoranas(n);
            const RealMatrix gamma = ed::cm_from_rho(rho, c).matrix();
            for (Preset p : kPresets) {
                CAPTURE(preset_name(p));
                const Channel ch = make_channel(p, n, {0.8, 1.1, 0.6});
                const Superoperator s = assemble(h, ch);
                const RealMatrix expected = cm_rate_from_rho(h, ch, rho);
                CHECK((s.apply(gamma) - expected).cwiseAbs().maxCoeff() < 1e-12);
            }
        }
    }

    TEST_CASE("spectra are stable and the sector is part of the full space") {
        const AntisymmetricMatrix h = xy_chain({4, 1.0, 0.5, 1.5});
        for (Preset p : kPresets) {
            CAPTURE(preset_name(p));
            const Superoperator s = assemble(h, make_channel(p, 4, {0.5, 1.0, 0.4}));
            const LiouvillianSpectrum anti = spectrum(s);
            const LiouvillianSpectrum full = spectrum(s, {Sector::Full, default_tolerances()});
            CHECK(anti.eigenvalues.size() == 28);
            CHECK(full.eigenvalues.size() == 64);
            CHECK(anti.max_real_part <= anti.zero_threshold);
            CHECK(full.max_real_part <= full.zero_threshold);
            CHECK(testing::subset_distance(anti.eigenvalues, full.eigenvalues) < 1e-9);
        }
    }

    TEST_CASE("eigenvalue classification") {
        Tolerances tol;
        const std::vector<Complex> ev{{0.0, 0.0}, {-1e-13, 0.0}, {-0.5, 1.0}, {-0.5, -1.0}, {-2.0, 0.0}};
        const LiouvillianSpectrum sp = classify_spectrum(ev, tol);
        CHECK(sp.zero_cluster == 2);
        CHECK(sp.adr == doctest::Approx(0.5));
        CHECK(sp.adr_cluster == 2);
        CHECK(sp.max_real_part == doctest::Approx(0.0));
    }

    TEST_CASE("linear steady state against the density-matrix kernel") {
        const int n = 3;
        const AntisymmetricMatrix h = xy_chain({n, 1.0, 0.5, 2.0});
        for (Preset p : {Preset::LossGain, Preset::Paired}) {
            CAPTURE(preset_name(p));
            const Channel ch = make_channel(p, n, {0.7, 1.0, 0.45});
            const SteadyStateResult r = steady_state_linear(assemble(h, ch));
            CHECK(r.residual < 1e-10);
            CHECK(r.diagnostics.valid);

            const ComplexMatrix l = ed::liouvillian_dense(h, ch);
            Eigen::FullPivLU<ComplexMatrix> lu(l);
            const ComplexMatrix ker = lu.kernel();
            REQUIRE(ker.cols() == 1);
            ComplexMatrix rho = Eigen::Map<const ComplexMatrix>(ker.col(0).data(), 8, 8);
            rho /= rho.trace();
            const RealMatrix ref = ed::cm_from_rho(rho, ed::build_majoranas(n)).matrix();
            CHECK((ref - r.gamma.matrix()).cwiseAbs().maxCoeff() < 1e-10);
        }
    }

    TEST_CASE("unitary generator has no unique steady state") {
        const Superoperator s = assemble(xy_chain({3, 1.0, 0.5, 1.0}), Channel(LinearChannel::none(3)));
        CHECK_THROWS_AS(steady_state_linear(s), SingularSuperoperatorError);
    }

    TEST_CASE("momentum-resolved loss and gain against the dense generator") {
        const AntisymmetricMatrix h = xy_chain({6, 1.0, 0.4, 1.3});
        const ChannelStrengths s{0.3, 1.0, 0.5};
        const Superoperator sup = assemble(h, Channel(loss_gain(6, s)));
        const MomentumLinearResult m = momentum_spectrum_linear(to_momentum(h), s);
        const SteadyStateResult dense = steady_state_linear(sup);
        CHECK((m.real_space().matrix() - dense.gamma.matrix()).cwiseAbs().maxCoeff() < 1e-11);

        const LiouvillianSpectrum full = spectrum(sup, {Sector::Full, default_tolerances()});
        const std::vector<Complex> mom = momentum_full_spectrum_linear(to_momentum(h), s);
        REQUIRE(mom.size() == full.eigenvalues.size());
        CHECK(testing::subset_distance(mom, full.eigenvalues) < 1e-9);
        CHECK(m.adr == doctest::Approx(spectrum(sup).adr).epsilon(1e-9));
    }

    TEST_CASE("weak-coupling steady block and its correction") {
        const AntisymmetricMatrix h = xy_chain({8, 1.0, 0.6, 1.2});
        const MomentumBlocks blocks = to_momentum(h);
        const double mu = 1.0, nu = 0.3;
        double prev = 0.0;
        for (double g : {0.02, 0.01}) {
            const MomentumLinearResult exact = momentum_spectrum_linear(blocks, {g, mu, nu});
            double lead = 0.0, rest = 0.0;
            for (int n = 0; n < blocks.size(); ++n) {
                const ComplexBlock2 w = weak_coupling_steady_block(blocks[n], mu, nu);
                const ComplexBlock2 corr = steady_block_correction(blocks[n], {g, mu, nu});
                const ComplexBlock2 e = exact.steady_blocks[static_cast<std::size_t>(n)];
                lead = std::max(lead, (e - w).cwiseAbs().maxCoeff());
                rest = std::max(rest, (e - w - corr).cwiseAbs().maxCoeff());
            }
            CHECK(lead < 1e-2);
            CHECK(rest < 0.05 * lead);  // the correction carries the leading g^2 part
            if (prev > 0.0) CHECK(prev / rest > 12.0);  // remainder shrinks as g^4
            prev = rest;
        }
    }

    TEST_CASE("sector maps") {
        const RealMatrix g = testing::random_antisymmetric(3, 7);
        CHECK((from_sector(to_sector(g), 3) - g).cwiseAbs().maxCoeff() < 1e-15);
        const SparseMatrix basis = antisymmetric_basis(3);
        const RealMatrix b = RealMatrix(basis);
        CHECK((b.transpose() * b - RealMatrix::Identity(15, 15)).cwiseAbs().maxCoeff() < 1e-14);
    }
}
