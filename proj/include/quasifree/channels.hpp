#pragma once

// Lindblad channels whose covariance-matrix dynamics closes:
//   linear:    L = sum_a l_a c_a with complex coefficients l,
//   quadratic: L = (i/4) sum_ab L_ab c_a c_b with L real antisymmetric.
// Every operator is stored as g * (mu * P + nu * Q) so that (g, mu, nu)
// sweeps reuse the same raw parts.

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "quasifree/majorana.hpp"

namespace quasifree {

struct ChannelStrengths {
    double g = 1.0;
    double mu = 1.0;
    double nu = 0.0;
};

struct LinearTerm {
    ComplexVector mu_part;
    ComplexVector nu_part;
};

class LinearChannel {
public:
    LinearChannel(int modes, std::vector<LinearTerm> terms, ChannelStrengths strengths);
    /// No Lindblad operators at all: unitary dynamics.
    static LinearChannel none(int modes);

    int modes() const noexcept { return modes_; }
    std::size_t size() const noexcept { return terms_.size(); }
    const ChannelStrengths& strengths() const noexcept { return strengths_; }
    LinearChannel with_strengths(ChannelStrengths s) const;

    /// Coefficient vectors |L^alpha> with the strengths applied.
    std::vector<ComplexVector> vectors() const;

private:
    int modes_;
    std::vector<LinearTerm> terms_;
    ChannelStrengths strengths_;
};

struct QuadraticTerm {
    RealMatrix mu_part;
    RealMatrix nu_part;
};

class QuadraticChannel {
public:
    QuadraticChannel(int modes, std::vector<QuadraticTerm> terms, ChannelStrengths strengths);

    int modes() const noexcept { return modes_; }
    std::size_t size() const noexcept { return terms_.size(); }
    const ChannelStrengths& strengths() const noexcept { return strengths_; }
    QuadraticChannel with_strengths(ChannelStrengths s) const;

    /// Antisymmetric matrices L^alpha with the strengths applied.
    std::vector<AntisymmetricMatrix> matrices() const;
    /// Concatenation of two channel sets acting on the same chain.
    QuadraticChannel merged(const QuadraticChannel& other) const;

private:
    int modes_;
    std::vector<QuadraticTerm> terms_;
    ChannelStrengths strengths_;
};

using Channel = std::variant<LinearChannel, QuadraticChannel>;

int channel_modes(const Channel& channel);
ChannelStrengths channel_strengths(const Channel& channel);
Channel with_strengths(const Channel& channel, ChannelStrengths s);

/// Majorana coefficients of a_j = (c_{j,0} - i c_{j,1}) / 2 and of a_j^dag.
ComplexVector annihilator(int modes, int site);
ComplexVector creator(int modes, int site);

/// L_-^alpha = g mu a_alpha and L_+^alpha = g nu a_alpha^dag on every site.
LinearChannel loss_gain(int modes, ChannelStrengths s);
/// L^alpha = g (mu a_alpha + nu a_{alpha+1}^dag).
LinearChannel paired(int modes, ChannelStrengths s);
/// L^alpha = g mu (i/2)[c_{alpha,1}, c_{alpha,0}], i.e. g mu sigma^z_alpha.
QuadraticChannel dephasing_z(int modes, ChannelStrengths s);
/// Majorana pair carried by a nearest-neighbour bond operator.
///   Forward:  (i/2)[c_{alpha+1,0}, c_{alpha,1}]  = X_alpha X_{alpha+1} in the bulk;
///   Swapped:  (i/2)[c_{alpha,0}, c_{alpha+1,1}]  = Y_alpha Y_{alpha+1} in the bulk.
/// The XY blocks place the (1+gamma) coupling on the Y Y bond in this frame, so
/// Swapped is the bond aligned with the dominant Ising coupling.
enum class BondOrdering { Forward, Swapped };

/// L^alpha = g nu times the bond operator between alpha and alpha+1.
QuadraticChannel xx_coupling(int modes, ChannelStrengths s, BondOrdering ordering = BondOrdering::Forward);
/// dephasing_z together with xx_coupling.
QuadraticChannel dephasing_xx_mix(int modes, ChannelStrengths s, BondOrdering ordering = BondOrdering::Forward);

enum class Preset {
    LossGain,
    Paired,
    DephasingZ,
    XXCoupling,
    DephasingXXMix,
    XXCouplingSwapped,
    DephasingXXMixSwapped,
    None
};

Preset parse_preset(std::string_view name);
std::string_view preset_name(Preset p);
Channel make_channel(Preset p, int modes, ChannelStrengths s);

}  // namespace quasifree
