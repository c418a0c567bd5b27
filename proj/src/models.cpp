#include "quasifree/models.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "quasifree/errors.hpp"

namespace quasifree {

TIBlockSpec xy_blocks(const XYParams& p) {
    if (p.sites < 2) throw InvalidArgument("xy_chain: need at least two sites");
    if (!std::isfinite(p.coupling) || !std::isfinite(p.field) || !std::isfinite(p.anisotropy)) {
        throw InvalidArgument("xy_chain: non-finite parameter");
    }
    const double j = p.coupling;
    const double g = p.anisotropy;
    const double b = p.field;
    TIBlockSpec spec;
    spec.sites = p.sites;
    Block2 h0, h1, hm1;
    h0 << 0.0, -2.0 * b, 2.0 * b, 0.0;
    h1 << 0.0, 2.0 * j * (1.0 - g), -2.0 * j * (1.0 + g), 0.0;
    hm1 << 0.0, 2.0 * j * (1.0 + g), -2.0 * j * (1.0 - g), 0.0;
    spec.blocks[0] = h0;
    spec.blocks[1] = h1;
    spec.blocks[-1] = hm1;
    return spec;
}

AntisymmetricMatrix xy_chain(const XYParams& params) { return from_blocks(xy_blocks(params)); }

namespace {

void check_blocks(const TIBlockSpec& spec, const Tolerances& tol) {
    const int n = spec.sites;
    if (n < 1) throw InvalidArgument("from_blocks: need at least one site");
    for (const auto& [s, blk] : spec.blocks) {
        if (!blk.allFinite()) throw InvalidArgument("from_blocks: non-finite block");
        if (std::abs(s) >= n) {
            throw InvalidArgument("from_blocks: block offset exceeds the chain length");
        }
        const auto partner = spec.blocks.find(-s);
        if (partner != spec.blocks.end()) {
            const double defect = (partner->second + blk.transpose()).cwiseAbs().maxCoeff();
            if (defect > tol.structural * std::max(1.0, blk.cwiseAbs().maxCoeff())) {
                std::ostringstream msg;
                msg << "from_blocks: H_{" << -s << "} != -H_{" << s << "}^T (defect " << defect << ")";
                throw InvalidArgument(msg.str());
            }
        } else if (s != 0 && (2 * s) % n != 0) {
            std::ostringstream msg;
            msg << "from_blocks: block H_{" << s << "} given without its partner H_{" << -s << "}";
            throw InvalidArgument(msg.str());
        }
    }
}

}  // namespace

AntisymmetricMatrix from_blocks(const TIBlockSpec& spec, const Tolerances& tol) {
    check_blocks(spec, tol);
    const int n = spec.sites;
    // Offsets s and -s coincide mod N when 2s = 0 mod N; H_{j+s,j} then collects
    // both bonds. Each listed block contributes once per (j, j+s) pair.
    RealMatrix h = RealMatrix::Zero(2 * n, 2 * n);
    for (const auto& [s, blk] : spec.blocks) {
        for (int k = 0; k < n; ++k) {
            const int j = ((k + s) % n + n) % n;
            h.block<2, 2>(2 * j, 2 * k) += blk;
        }
    }
    const double asym = (h + h.transpose()).cwiseAbs().maxCoeff();
    if (asym > tol.structural * std::max(1.0, h.cwiseAbs().maxCoeff())) {
        throw InvalidArgument("from_blocks: blocks do not assemble to an antisymmetric matrix");
    }
    return AntisymmetricMatrix(h);
}

MomentumBlocks to_momentum(const TIBlockSpec& spec, const Tolerances& tol) {
    check_blocks(spec, tol);
    const int n = spec.sites;
    std::vector<ModeBlock> modes(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        ComplexBlock2 acc = ComplexBlock2::Zero();
        for (const auto& [s, blk] : spec.blocks) {
            acc += blk.cast<Complex>() * std::polar(1.0, -2.0 * std::numbers::pi * s * m / n);
        }
        ModeBlock& mb = modes[static_cast<std::size_t>(m)];
        mb.k = acc(0, 0).imag();
        mb.l = acc(1, 1).imag();
        mb.h = acc(0, 1);
    }
    return MomentumBlocks(std::move(modes));
}

}  // namespace quasifree
