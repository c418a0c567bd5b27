#include "quasifree/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "quasifree/errors.hpp"

namespace quasifree {

namespace {

void check_xy_domain(double gamma, double field, double coupling) {
    if (!(gamma >= -1.0 && gamma <= 1.0)) throw InvalidArgument("XY closed form: gamma must lie in [-1, 1]");
    if (!(field >= 0.0)) throw InvalidArgument("XY closed form: B must be >= 0");
    if (!(coupling > 0.0)) throw InvalidArgument("XY closed form: J must be > 0");
}

// x = (2J/B)^2 (1 - gamma^2) and s = sqrt(1 - x) on the B >= 2J branch; s >= |gamma| there.
double branch_root(double gamma, double field, double coupling) {
    const double ratio = 2.0 * coupling / field;
    const double x = ratio * ratio * (1.0 - gamma * gamma);
    return std::sqrt(std::max(0.0, 1.0 - x));
}

}  // namespace

double PerturbationData::normalization_defect() const {
    double worst = 0.0;
    for (int m = 0; m < size(); ++m) {
        worst = std::max(worst, std::abs(a(m) * a(m) + b(m) * b(m) + c(m) * c(m) - 1.0));
    }
    return worst;
}

PerturbationData perturbation_data(const MomentumBlocks& blocks, const Tolerances& tol) {
    const int n = blocks.size();
    if (n < 1) throw InvalidArgument("perturbation_data: no modes");
    PerturbationData d;
    d.alpha.resize(n);
    d.beta.resize(n);
    d.a.resize(n);
    d.b.resize(n);
    d.c.resize(n);
    for (int m = 0; m < n; ++m) {
        const ModeBlock& mode = blocks[m];
        const double beta = mode.beta();
        if (beta < tol.critical_beta) {
            std::ostringstream msg;
            msg << "mode " << m << " is critical (beta = " << beta << ")";
            throw DegenerateModeError(m, msg.str());
        }
        d.alpha(m) = 0.5 * std::abs(mode.k + mode.l);
        d.beta(m) = beta;
        d.a(m) = 0.5 * (mode.k - mode.l) / beta;
        d.b(m) = mode.h.imag() / beta;
        d.c(m) = mode.h.real() / beta;
    }
    return d;
}

double adr_weak_coupling_sum(const MomentumBlocks& blocks, double g, const Tolerances& tol) {
    const PerturbationData d = perturbation_data(blocks, tol);
    // [4 Im h^2 + (k-l)^2] / [4|h|^2 + (k-l)^2] = a_m^2 + b_m^2 = 1 - c_m^2.
    double sum = 0.0;
    for (int m = 0; m < d.size(); ++m) sum += d.a(m) * d.a(m) + d.b(m) * d.b(m);
    return 4.0 * g * g * sum / d.size();
}

RatePair two_lowest_rates(const MomentumBlocks& blocks, double g, double mu, double nu, const Tolerances& tol) {
    const PerturbationData d = perturbation_data(blocks, tol);
    const int n = d.size();
    double sz = 0.0, sx = 0.0, sm = 0.0;
    for (int m = 0; m < n; ++m) {
        const ModeBlock& mode = blocks[m];
        const double theta = blocks.wavenumber(m);
        const double re_h = mode.h.real();
        const double re_ht = (mode.h * std::polar(1.0, -theta)).real();
        const double b2 = d.beta(m) * d.beta(m);
        sz += re_h * re_h / b2;
        sx += re_ht * re_ht / b2;
        sm += re_h * re_ht / b2;
    }
    RatePair r;
    r.eps_z = mu * mu * sz / n;
    r.eps_x = nu * nu * sx / n;
    r.eps = mu * nu * sm / n;
    const double centre = mu * mu + nu * nu - 0.5 * (r.eps_z + r.eps_x);
    const double half = 0.5 * (r.eps_z - r.eps_x);
    const double root = std::sqrt(half * half + r.eps * r.eps);
    r.plus = 4.0 * g * g * (centre + root);
    r.minus = 4.0 * g * g * (centre - root);
    return r;
}

PerturbationMatrix perturbation_matrix(const MomentumBlocks& blocks, const Tolerances& tol) {
    PerturbationMatrix out;
    out.data = perturbation_data(blocks, tol);
    const int n = out.data.size();
    out.p.resize(n, n);
    for (int m = 0; m < n; ++m) {
        const ModeBlock& bm = blocks[m];
        for (int k = 0; k < n; ++k) {
            const ModeBlock& bk = blocks[k];
            const Complex num = 2.0 * bm.h * std::conj(bk.h) + 2.0 * std::conj(bm.h) * bk.h -
                                (bm.k - bm.l) * (bk.k - bk.l);
            out.p(m, k) = num.real() / (4.0 * out.data.beta(m) * out.data.beta(k));
        }
    }
    const auto& d = out.data;
    const RealMatrix recon = d.c * d.c.transpose() + d.b * d.b.transpose() - d.a * d.a.transpose();
    out.reconstruction_defect = (out.p - recon).cwiseAbs().maxCoeff();
    out.delta_p = d.c.squaredNorm();
    out.overlap_ca = d.c.dot(d.a);
    out.overlap_cb = d.c.dot(d.b);
    return out;
}

double xy_adr_closed_form(double gamma, double field, double coupling, double g) {
    check_xy_domain(gamma, field, coupling);
    const double ag = std::abs(gamma);
    if (field <= 2.0 * coupling) return 4.0 * g * g * ag / (1.0 + ag);
    // gamma^2/(1-gamma^2) ((1-x)^{-1/2} - 1) rewritten without the removable
    // singularity at |gamma| = 1: gamma^2 (2J/B)^2 / (s (1 + s)).
    const double ratio = 2.0 * coupling / field;
    const double s = branch_root(gamma, field, coupling);
    return 4.0 * g * g * gamma * gamma * ratio * ratio / (s * (1.0 + s));
}

double xy_polarization_closed_form(double gamma, double field, double coupling, double mu, double nu) {
    check_xy_domain(gamma, field, coupling);
    const double norm = mu * mu + nu * nu;
    if (norm == 0.0) throw InvalidArgument("xy_polarization_closed_form: mu and nu both vanish");
    const double r = (mu * mu - nu * nu) / norm;
    const double ag = std::abs(gamma);
    if (field <= 2.0 * coupling) return r / (1.0 + ag);
    // (1 - gamma^2/s)/(1 - gamma^2) = (1 + gamma^2 - (2J/B)^2) / (s (s + gamma^2)).
    const double ratio = 2.0 * coupling / field;
    const double s = branch_root(gamma, field, coupling);
    return r * (1.0 + gamma * gamma - ratio * ratio) / (s * (s + gamma * gamma));
}

double particle_number_sum(const MomentumBlocks& blocks, double mu, double nu, const Tolerances& tol) {
    const double norm = mu * mu + nu * nu;
    if (norm == 0.0) throw InvalidArgument("particle_number_sum: mu and nu both vanish");
    const PerturbationData d = perturbation_data(blocks, tol);
    return (mu * mu - nu * nu) / norm * d.c.squaredNorm() / d.size();
}

PoleSet poles(double field, double coupling, double gamma) {
    if (!(coupling > 0.0)) throw InvalidArgument("poles: J must be > 0");
    if (gamma == -1.0) throw InvalidArgument("poles: gamma = -1 makes the leading coefficient vanish");
    const Complex disc = std::sqrt(Complex(field * field - 4.0 * coupling * coupling * (1.0 - gamma * gamma), 0.0));
    const double denom = 2.0 * coupling * (1.0 + gamma);
    auto classify = [](Complex z) {
        Pole p;
        p.z = z;
        const double r = std::abs(z);
        p.critical = std::abs(r - 1.0) <= 1e-12;
        p.inside = r < 1.0 && !p.critical;
        return p;
    };
    PoleSet set;
    set.zero = classify(Complex(0.0, 0.0));
    set.plus = classify((field + disc) / denom);
    set.minus = classify((field - disc) / denom);
    return set;
}

ComplexMatrix pairing_matrix(const CovarianceMatrix& gamma) {
    const int n = gamma.modes();
    const RealMatrix& g = gamma.matrix();
    const Complex i(0.0, 1.0);
    ComplexMatrix q(n, n);
    for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
            q(k, l) = 0.25 * (g(2 * k, 2 * l) - i * g(2 * k, 2 * l + 1) - i * g(2 * k + 1, 2 * l) -
                              g(2 * k + 1, 2 * l + 1));
        }
    }
    return q;
}

}  // namespace quasifree
