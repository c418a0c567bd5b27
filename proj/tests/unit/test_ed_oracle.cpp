#include <doctest.h>

#include "helpers.hpp"
#include "quasifree/channels.hpp"
#include "quasifree/ed_oracle.hpp"
#include "quasifree/errors.hpp"

using namespace quasifree;

TEST_SUITE("ed_oracle") {
    TEST_CASE("Majoranas satisfy the anticommutation relations") {
        for (int n = 1; n <= 3; ++n) {
            const auto c = ed::build_majoranas(n);
            CHECK(c.size() == static_cast<std::size_t>(2 * n));
            CHECK(ed::car_defect(c) < 1e-15);
        }
        CHECK_THROWS_AS(ed::build_majoranas(5), InvalidArgument);
    }

    TEST_CASE("quadratic operators are parity even and Hermitian") {
        const auto c = ed::build_majoranas(3);
        const ComplexMatrix p = ed::parity_operator(3);
        const ComplexMatrix h = ed::quadratic_operator(testing::random_antisymmetric(3, 2), c);
        CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((h * p - p * h).cwiseAbs().maxCoeff() < 1e-13);
        CHECK(std::abs(h.trace()) < 1e-13);
    }

    TEST_CASE("Liouvillian preserves the trace") {
        const AntisymmetricMatrix h = xy_chain({3, 1.0, 0.5, 1.0});
        for (Preset p : {Preset::LossGain, Preset::Paired, Preset::DephasingZ, Preset::DephasingXXMix}) {
            const ComplexMatrix l = ed::liouvillian_dense(h, make_channel(p, 3, {0.5, 1.0, 0.5}));
            const ComplexMatrix id = ComplexMatrix::Identity(8, 8);
            const ComplexVector vid = Eigen::Map<const ComplexVector>(id.data(), 64);
            CHECK((vid.adjoint() * l).cwiseAbs().maxCoeff() < 1e-13);
        }
    }

    TEST_CASE("random states are valid densities") {
        const ComplexMatrix rho = ed::random_density(3, 4);
        const ed::DensityDiagnostics d = ed::validate_density(rho);
        CHECK(d.valid);
        CHECK(d.min_eigenvalue > 0.0);
        CHECK(d.trace_defect < 1e-14);
        CHECK((ed::random_density(3, 4) - rho).norm() == 0.0);
    }

    TEST_CASE("oracle report") {
        const AntisymmetricMatrix h = xy_chain({2, 1.0, 0.5, 1.0});
        ed::OracleOptions o;
        o.t_end = 5.0;
        o.samples = 11;
        const ed::OracleReport ok = ed::oracle_compare(h, make_channel(Preset::Paired, 2, {0.5, 1.0, 0.3}), o);
        CHECK(ok.passed);
        CHECK(ok.linear);
        CHECK(ok.trajectory_deviation < 1e-10);
        CHECK(ok.mismatches.empty());
        CHECK(ok.to_json()["passed"] == true);

        o.tolerance = 1e-300;
        const ed::OracleReport strict = ed::oracle_compare(h, make_channel(Preset::DephasingZ, 2, {0.5, 1.0, 0.0}), o);
        CHECK_FALSE(strict.passed);
        CHECK_FALSE(strict.mismatches.empty());
    }
}
