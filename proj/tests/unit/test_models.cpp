#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"
#include "quasifree/errors.hpp"

using namespace quasifree;

TEST_SUITE("models") {
    TEST_CASE("XY site blocks") {
        const TIBlockSpec s = xy_blocks({5, 1.5, 0.4, 0.8});
        Block2 h0, h1;
        h0 << 0.0, -1.6, 1.6, 0.0;
        h1 << 0.0, 2 * 1.5 * 0.6, -2 * 1.5 * 1.4, 0.0;
        CHECK(s.blocks.at(0).isApprox(h0));
        CHECK(s.blocks.at(1).isApprox(h1));
        CHECK(s.blocks.at(-1).isApprox(-h1.transpose()));
        CHECK(xy_chain({5, 1.5, 0.4, 0.8}).matrix() == from_blocks(s).matrix());
    }

    TEST_CASE("per-mode parameters of the XY chain") {
        const double J = 0.9, gamma = 0.35, B = 1.3;
        const int n = 9;
        const MomentumBlocks m = to_momentum(xy_chain({n, J, gamma, B}));
        for (int k = 0; k < n; ++k) {
            const double th = 2 * std::numbers::pi * k / n;
            const Complex expected = -2 * B + 2 * J * ((1 + gamma) * std::polar(1.0, th) + (1 - gamma) * std::polar(1.0, -th));
            CHECK(std::abs(m[k].h - expected) < 1e-12);
            CHECK(std::abs(m[k].k) < 1e-12);
            CHECK(std::abs(m[k].l) < 1e-12);
        }
    }

    TEST_CASE("single-particle spectrum from dense diagonalization") {
        const double J = 1.0, gamma = 0.6, B = 1.7;
        const int n = 12;
        const AntisymmetricMatrix h = xy_chain({n, J, gamma, B});
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(Complex(0, 1) * h.matrix().cast<Complex>());
        std::vector<double> dense(es.eigenvalues().data(), es.eigenvalues().data() + 2 * n);
        std::vector<double> formula;
        for (int k = 0; k < n; ++k) {
            const double th = 2 * std::numbers::pi * k / n;
            const double e = std::hypot(4 * J * std::cos(th) - 2 * B, 4 * J * gamma * std::sin(th));
            formula.push_back(e);
            formula.push_back(-e);
        }
        std::sort(formula.begin(), formula.end());
        for (int i = 0; i < 2 * n; ++i) CHECK(dense[static_cast<std::size_t>(i)] == doctest::Approx(formula[static_cast<std::size_t>(i)]).epsilon(1e-10));
    }

    TEST_CASE("two-site ring loses its anisotropy dependence") {
        const RealMatrix a = xy_chain({2, 1.0, 0.0, 0.5}).matrix();
        const RealMatrix b = xy_chain({2, 1.0, 1.0, 0.5}).matrix();
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-14);
    }

    TEST_CASE("inconsistent blocks are rejected") {
        TIBlockSpec s = testing::random_ti_spec(5, 4);
        s.blocks[-1](0, 0) += 0.5;
        CHECK_THROWS_AS(from_blocks(s), InvalidArgument);

        TIBlockSpec onsite;
        onsite.sites = 3;
        Block2 sym;
        sym << 0.0, 1.0, 1.0, 0.0;
        onsite.blocks[0] = sym;
        CHECK_THROWS_AS(from_blocks(onsite), InvalidArgument);
    }

    TEST_CASE("every offset needs its partner") {
        TIBlockSpec half = testing::random_ti_spec(6, 8);
        half.blocks.erase(-1);
        CHECK_THROWS_AS(from_blocks(half), InvalidArgument);
    }

    TEST_CASE("momentum blocks from site blocks match the dense route") {
        for (int n : {5, 6}) {
            const TIBlockSpec spec = testing::random_ti_spec(n, 30 + n);
            const MomentumBlocks direct = to_momentum(spec);
            const MomentumBlocks dense = to_momentum(from_blocks(spec));
            for (int m = 0; m < n; ++m) CHECK((direct[m].matrix() - dense[m].matrix()).cwiseAbs().maxCoeff() < 1e-13);
        }
        TIBlockSpec half = testing::random_ti_spec(6, 8);
        half.blocks.erase(-1);
        CHECK_THROWS_AS(to_momentum(half), InvalidArgument);
    }
}
