#pragma once

#include <algorithm>
#include <complex>
#include <random>
#include <vector>

#include "quasifree/majorana.hpp"
#include "quasifree/models.hpp"

namespace testing {

using namespace quasifree;

inline RealMatrix random_antisymmetric(int modes, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    RealMatrix m(2 * modes, 2 * modes);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m(i, j) = n(rng);
    return 0.5 * (m - m.transpose());
}

// Random translation-invariant block spec with offsets -1, 0, 1.
inline TIBlockSpec random_ti_spec(int sites, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    TIBlockSpec spec;
    spec.sites = sites;
    Block2 h0;
    const double x = n(rng);
    h0 << 0.0, x, -x, 0.0;
    Block2 h1;
    h1 << n(rng), n(rng), n(rng), n(rng);
    spec.blocks[0] = h0;
    spec.blocks[1] = h1;
    spec.blocks[-1] = -h1.transpose();
    return spec;
}

// Greedy matching distance: max over `sub` of the distance to the nearest
// unused element of `super`.
inline double subset_distance(std::vector<std::complex<double>> sub, std::vector<std::complex<double>> super) {
    double worst = 0.0;
    std::vector<bool> used(super.size(), false);
    for (const auto& z : sub) {
        double best = 1e300;
        std::size_t idx = 0;
        for (std::size_t i = 0; i < super.size(); ++i) {
            if (used[i]) continue;
            const double d = std::abs(z - super[i]);
            if (d < best) {
                best = d;
                idx = i;
            }
        }
        if (idx < used.size()) used[idx] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace testing
