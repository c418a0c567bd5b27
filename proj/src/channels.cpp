#include "quasifree/channels.hpp"

#include <cmath>
#include <string>

#include "quasifree/errors.hpp"

namespace quasifree {

namespace {

void check_strengths(const ChannelStrengths& s) {
    if (!(s.g >= 0.0) || !std::isfinite(s.g)) throw InvalidArgument("channel strength g must be >= 0");
    if (!std::isfinite(s.mu) || !std::isfinite(s.nu)) throw InvalidArgument("non-finite mu or nu");
}

int next_site(int site, int modes) { return (site + 1) % modes; }

RealMatrix single_pair(int modes, int a, int b, double value) {
    RealMatrix m = RealMatrix::Zero(2 * modes, 2 * modes);
    m(a, b) += value;
    m(b, a) -= value;
    return m;
}

}  // namespace

LinearChannel::LinearChannel(int modes, std::vector<LinearTerm> terms, ChannelStrengths strengths)
    : modes_(modes), terms_(std::move(terms)), strengths_(strengths) {
    if (modes < 1) throw InvalidArgument("linear channel: need at least one mode");
    check_strengths(strengths_);
    for (const auto& t : terms_) {
        if (t.mu_part.size() != 2 * modes || t.nu_part.size() != 2 * modes) {
            throw InvalidArgument("linear channel: coefficient vector has wrong length");
        }
        if (!t.mu_part.allFinite() || !t.nu_part.allFinite()) {
            throw InvalidArgument("linear channel: non-finite coefficients");
        }
    }
}

LinearChannel LinearChannel::none(int modes) { return LinearChannel(modes, {}, ChannelStrengths{0.0, 0.0, 0.0}); }

LinearChannel LinearChannel::with_strengths(ChannelStrengths s) const {
    return LinearChannel(modes_, terms_, s);
}

std::vector<ComplexVector> LinearChannel::vectors() const {
    std::vector<ComplexVector> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        out.push_back(strengths_.g * (strengths_.mu * t.mu_part + strengths_.nu * t.nu_part));
    }
    return out;
}

QuadraticChannel::QuadraticChannel(int modes, std::vector<QuadraticTerm> terms, ChannelStrengths strengths)
    : modes_(modes), terms_(std::move(terms)), strengths_(strengths) {
    if (modes < 1) throw InvalidArgument("quadratic channel: need at least one mode");
    check_strengths(strengths_);
    for (auto& t : terms_) {
        if (t.mu_part.rows() != 2 * modes || t.nu_part.rows() != 2 * modes ||
            t.mu_part.cols() != 2 * modes || t.nu_part.cols() != 2 * modes) {
            throw InvalidArgument("quadratic channel: matrix has wrong dimension");
        }
        // Hermitian quadratic operators need exactly antisymmetric real matrices.
        t.mu_part = antisymmetrize(t.mu_part).matrix();
        t.nu_part = antisymmetrize(t.nu_part).matrix();
    }
}

QuadraticChannel QuadraticChannel::with_strengths(ChannelStrengths s) const {
    return QuadraticChannel(modes_, terms_, s);
}

std::vector<AntisymmetricMatrix> QuadraticChannel::matrices() const {
    std::vector<AntisymmetricMatrix> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        out.emplace_back(strengths_.g * (strengths_.mu * t.mu_part + strengths_.nu * t.nu_part));
    }
    return out;
}

QuadraticChannel QuadraticChannel::merged(const QuadraticChannel& other) const {
    if (other.modes_ != modes_) throw InvalidArgument("merged: channels act on different chains");
    std::vector<QuadraticTerm> terms = terms_;
    terms.insert(terms.end(), other.terms_.begin(), other.terms_.end());
    return QuadraticChannel(modes_, std::move(terms), strengths_);
}

int channel_modes(const Channel& channel) {
    return std::visit([](const auto& c) { return c.modes(); }, channel);
}

ChannelStrengths channel_strengths(const Channel& channel) {
    return std::visit([](const auto& c) { return c.strengths(); }, channel);
}

Channel with_strengths(const Channel& channel, ChannelStrengths s) {
    return std::visit([&](const auto& c) -> Channel { return c.with_strengths(s); }, channel);
}

ComplexVector annihilator(int modes, int site) {
    ComplexVector v = ComplexVector::Zero(2 * modes);
    v(2 * site) = Complex(0.5, 0.0);
    v(2 * site + 1) = Complex(0.0, -0.5);
    return v;
}

ComplexVector creator(int modes, int site) {
    ComplexVector v = ComplexVector::Zero(2 * modes);
    v(2 * site) = Complex(0.5, 0.0);
    v(2 * site + 1) = Complex(0.0, 0.5);
    return v;
}

LinearChannel loss_gain(int modes, ChannelStrengths s) {
    if (modes < 1) throw InvalidArgument("loss_gain: need at least one site");
    const ComplexVector zero = ComplexVector::Zero(2 * modes);
    std::vector<LinearTerm> terms;
    for (int a = 0; a < modes; ++a) {
        terms.push_back({annihilator(modes, a), zero});
        terms.push_back({zero, creator(modes, a)});
    }
    return LinearChannel(modes, std::move(terms), s);
}

LinearChannel paired(int modes, ChannelStrengths s) {
    if (modes < 2) throw InvalidArgument("paired: need at least two sites");
    std::vector<LinearTerm> terms;
    for (int a = 0; a < modes; ++a) {
        terms.push_back({annihilator(modes, a), creator(modes, next_site(a, modes))});
    }
    return LinearChannel(modes, std::move(terms), s);
}

QuadraticChannel dephasing_z(int modes, ChannelStrengths s) {
    if (modes < 1) throw InvalidArgument("dephasing_z: need at least one site");
    const RealMatrix zero = RealMatrix::Zero(2 * modes, 2 * modes);
    std::vector<QuadraticTerm> terms;
    for (int a = 0; a < modes; ++a) {
        terms.push_back({single_pair(modes, 2 * a + 1, 2 * a, 2.0), zero});
    }
    return QuadraticChannel(modes, std::move(terms), s);
}

QuadraticChannel xx_coupling(int modes, ChannelStrengths s, BondOrdering ordering) {
    if (modes < 2) throw InvalidArgument("xx_coupling: need at least two sites");
    const RealMatrix zero = RealMatrix::Zero(2 * modes, 2 * modes);
    std::vector<QuadraticTerm> terms;
    for (int a = 0; a < modes; ++a) {
        const int b = next_site(a, modes);
        const RealMatrix bond = ordering == BondOrdering::Forward ? single_pair(modes, 2 * b, 2 * a + 1, 2.0)
                                                                  : single_pair(modes, 2 * a, 2 * b + 1, 2.0);
        terms.push_back({zero, bond});
    }
    return QuadraticChannel(modes, std::move(terms), s);
}

QuadraticChannel dephasing_xx_mix(int modes, ChannelStrengths s, BondOrdering ordering) {
    return dephasing_z(modes, s).merged(xx_coupling(modes, s, ordering));
}

Preset parse_preset(std::string_view name) {
    if (name == "loss-gain") return Preset::LossGain;
    if (name == "paired") return Preset::Paired;
    if (name == "dephasing-z") return Preset::DephasingZ;
    if (name == "xx-coupling") return Preset::XXCoupling;
    if (name == "dephasing-xx-mix") return Preset::DephasingXXMix;
    if (name == "xx-coupling-swapped") return Preset::XXCouplingSwapped;
    if (name == "dephasing-xx-mix-swapped") return Preset::DephasingXXMixSwapped;
    if (name == "none") return Preset::None;
    throw InvalidArgument("unknown channel preset '" + std::string(name) + "'");
}

std::string_view preset_name(Preset p) {
    switch (p) {
        case Preset::LossGain: return "loss-gain";
        case Preset::Paired: return "paired";
        case Preset::DephasingZ: return "dephasing-z";
        case Preset::XXCoupling: return "xx-coupling";
        case Preset::DephasingXXMix: return "dephasing-xx-mix";
        case Preset::XXCouplingSwapped: return "xx-coupling-swapped";
        case Preset::DephasingXXMixSwapped: return "dephasing-xx-mix-swapped";
        case Preset::None: return "none";
    }
    return "none";
}

Channel make_channel(Preset p, int modes, ChannelStrengths s) {
    switch (p) {
        case Preset::LossGain: return loss_gain(modes, s);
        case Preset::Paired: return paired(modes, s);
        case Preset::DephasingZ: return dephasing_z(modes, s);
        case Preset::XXCoupling: return xx_coupling(modes, s);
        case Preset::DephasingXXMix: return dephasing_xx_mix(modes, s);
        case Preset::XXCouplingSwapped: return xx_coupling(modes, s, BondOrdering::Swapped);
        case Preset::DephasingXXMixSwapped: return dephasing_xx_mix(modes, s, BondOrdering::Swapped);
        case Preset::None: return LinearChannel::none(modes);
    }
    throw InvalidArgument("make_channel: unknown preset");
}

}  // namespace quasifree
