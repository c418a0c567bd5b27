#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"
#include "quasifree/channels.hpp"
#include "quasifree/ed_oracle.hpp"
#include "quasifree/errors.hpp"

using namespace quasifree;

TEST_SUITE("majorana") {
    TEST_CASE("flat index round trip") {
        for (int a = 0; a < 20; ++a) {
            const MajoranaIndex m = MajoranaIndex::from_flat(a);
            CHECK(m.flat() == a);
            CHECK(m.site == a / 2);
            CHECK(m.flavor == a % 2);
        }
    }

    TEST_CASE("antisymmetric projection and checked construction") {
        RealMatrix raw = testing::random_antisymmetric(3, 1);
        raw(0, 1) += 0.3;
        const AntisymmetricMatrix p(raw);
        CHECK((p.matrix() + p.matrix().transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(p.matrix().isApprox(0.5 * (raw - raw.transpose())));

        CHECK_THROWS_AS(antisymmetrize(raw), InvalidArgument);
        CHECK_THROWS_AS(antisymmetrize(RealMatrix::Zero(3, 3)), InvalidArgument);
        CHECK_THROWS_AS(antisymmetrize(RealMatrix::Zero(4, 2)), InvalidArgument);
        const RealMatrix good = testing::random_antisymmetric(3, 2);
        CHECK(antisymmetrize(good).matrix() == good);
    }

    TEST_CASE("Fock states and the occupation convention") {
        const CovarianceMatrix f = CovarianceMatrix::fock({1, 0, 1});
        CHECK(f.polarization(0) == doctest::Approx(-1.0));
        CHECK(f.polarization(1) == doctest::Approx(1.0));
        CHECK(f.occupation(0) == doctest::Approx(1.0));
        CHECK(f.occupation(1) == doctest::Approx(0.0));
        const CmDiagnostics d = validate_cm(f);
        CHECK(d.valid);
        CHECK(d.pure);

        // The same numbers from the density-matrix side: <n> = tr(rho a^dag a).
        const auto c = ed::build_majoranas(3);
        const ComplexMatrix a1 = ed::linear_operator(annihilator(3, 0), c);
        ComplexMatrix rho = ComplexMatrix::Zero(8, 8);
        // Project onto n_0 = 1, n_1 = 0, n_2 = 1 with occupation projectors.
        ComplexMatrix proj = ComplexMatrix::Identity(8, 8);
        const int occ[3] = {1, 0, 1};
        for (int j = 0; j < 3; ++j) {
            const ComplexMatrix a = ed::linear_operator(annihilator(3, j), c);
            const ComplexMatrix n = a.adjoint() * a;
            proj = proj * (occ[j] ? n : ComplexMatrix(ComplexMatrix::Identity(8, 8) - n));
        }
        rho = proj / proj.trace();
        const CovarianceMatrix from_rho = ed::cm_from_rho(rho, c);
        CHECK((from_rho.matrix() - f.matrix()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((rho * a1.adjoint() * a1).trace().real() == doctest::Approx(1.0));
    }

    TEST_CASE("maximally mixed state and bound violations") {
        const CovarianceMatrix z = CovarianceMatrix::maximally_mixed(4);
        CHECK(z.matrix().isZero());
        CHECK(validate_cm(z).valid);
        CHECK_FALSE(validate_cm(z).pure);
        const RealMatrix big = 1.5 * CovarianceMatrix::fock({0, 1}).matrix();
        const CmDiagnostics d = validate_cm(big);
        CHECK_FALSE(d.valid);
        CHECK(d.max_eigenvalue == doctest::Approx(2.25));
    }

    TEST_CASE("Fourier unitary and round trip") {
        const ComplexMatrix u = fourier_matrix(7);
        CHECK((u * u.adjoint() - ComplexMatrix::Identity(14, 14)).cwiseAbs().maxCoeff() < 1e-13);

        const AntisymmetricMatrix h = from_blocks(testing::random_ti_spec(7, 3));
        CHECK(translation_defect(h) < 1e-14);
        const MomentumBlocks m = to_momentum(h);
        CHECK(m.size() == 7);
        CHECK(m.symmetry_defect() < 1e-12);
        CHECK((from_momentum(m).matrix() - h.matrix()).cwiseAbs().maxCoeff() < 1e-12);

        // Block diagonalization by the dense unitary.
        const ComplexMatrix ht = u * h.matrix().cast<Complex>() * u.adjoint();
        for (int n = 0; n < 7; ++n) {
            CHECK((ht.block<2, 2>(2 * n, 2 * n) - m[n].matrix()).cwiseAbs().maxCoeff() < 1e-12);
            for (int k = 0; k < 7; ++k) {
                if (k != n) CHECK(ht.block<2, 2>(2 * n, 2 * k).cwiseAbs().maxCoeff() < 1e-12);
            }
        }
    }

    TEST_CASE("non translation-invariant input is rejected") {
        RealMatrix raw = xy_chain({4, 1.0, 0.3, 0.7}).matrix();
        raw(0, 3) += 0.1;
        raw(3, 0) -= 0.1;
        CHECK_THROWS_AS(to_momentum(AntisymmetricMatrix(raw)), InvalidArgument);
    }

    TEST_CASE("excitation energies are the spectrum of iH") {
        const AntisymmetricMatrix h = from_blocks(testing::random_ti_spec(6, 9));
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(Complex(0, 1) * h.matrix().cast<Complex>());
        std::vector<double> dense(es.eigenvalues().data(), es.eigenvalues().data() + 12);
        std::vector<double> modes;
        for (const auto& e : excitation_energies(to_momentum(h))) {
            modes.push_back(e.plus);
            modes.push_back(e.minus);
        }
        // iH has eigenvalues +-eps; compare magnitudes.
        for (double& x : dense) x = std::abs(x);
        std::sort(dense.begin(), dense.end());
        std::sort(modes.begin(), modes.end());
        for (std::size_t i = 0; i < dense.size(); ++i) CHECK(modes[i] == doctest::Approx(dense[i]).epsilon(1e-10));
    }

    TEST_CASE("ground state matches exact diagonalization") {
        for (const XYParams p : {XYParams{3, 1.0, 0.5, 1.0}, XYParams{3, 1.0, 1.0, 4.0}, XYParams{4, 0.7, 0.2, 0.3}}) {
            const AntisymmetricMatrix h = xy_chain(p);
            const CovarianceMatrix g = ground_state_cm(to_momentum(h));
            CHECK(validate_cm(g).pure);

            const auto c = ed::build_majoranas(p.sites);
            const ComplexMatrix hf = ed::quadratic_operator(h.matrix(), c);
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hf);
            CHECK(energy_expectation(h, g) / 4.0 == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-10));
            const CovarianceMatrix ref = ed::cm_from_rho(ed::ground_state_density(hf), c);
            CHECK((ref.matrix() - g.matrix()).cwiseAbs().maxCoeff() < 1e-9);
        }
    }

    TEST_CASE("gapless mode is reported") {
        // gamma = 1, B = 2J closes the gap at theta = 0.
        CHECK_THROWS_AS(ground_state_cm(to_momentum(xy_chain({6, 1.0, 1.0, 2.0}))), DegenerateModeError);
    }
}
