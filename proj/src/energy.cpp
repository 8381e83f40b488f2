#include "choquard/energy.hpp"

#include "choquard/errors.hpp"

#include <cmath>
#include <sstream>

namespace choquard {

EnergyBreakdown EnergyBreakdown::dilated(double tau) const {
    if (!(tau > 0.0))
        throw TauNonpositive("dilated breakdown requires tau > 0");
    EnergyBreakdown out = *this;
    out.dirichlet = std::pow(tau, dim - 2) * dirichlet;
    out.mass = std::pow(tau, dim) * mass;
    out.interaction = std::pow(tau, dim + alpha) * interaction;
    return out;
}

std::string EnergyBreakdown::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"A\":" << dirichlet << ",\"B\":" << mass << ",\"C\":" << interaction
       << ",\"N\":" << dim << ",\"alpha\":" << alpha << ",\"energy\":" << energy()
       << ",\"pohozaev\":" << pohozaev() << ",\"reduced\":" << reduced() << "}";
    return os.str();
}

Field apply_antiderivative(const Field& u, const Nonlinearity& nl) {
    Field out = u;
    for (double& v : out.values())
        v = nl.F(v);
    return out;
}

EnergyBreakdown breakdown(const Field& u, const RieszKernel& k, const Nonlinearity& nl) {
    if (!(u.grid() == k.grid()))
        throw GridMismatch("breakdown: field grid does not match kernel grid");
    EnergyBreakdown e;
    e.dim = u.grid().dim;
    e.alpha = k.alpha();
    e.dirichlet = dirichlet_energy(u);
    const double l2 = lp_norm(u, 2.0);
    e.mass = l2 * l2;
    e.interaction = k.quadratic_form(apply_antiderivative(u, nl));
    return e;
}

Field gradient_action(const Field& u, const RieszKernel& k, const Nonlinearity& nl) {
    if (!(u.grid() == k.grid()))
        throw GridMismatch("gradient_action: field grid does not match kernel grid");
    const Grid& g = u.grid();
    Field out = u; // starts as the +u term
    std::vector<double> d1, d2;
    for (int axis = 0; axis < g.dim; ++axis) {
        detail::axis_derivative4(g, u.values(), axis, d1);
        detail::axis_derivative4(g, d1, axis, d2);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] -= d2[i]; // adjoint of the stencil is its negative
    }
    const Field conv = k.convolve(apply_antiderivative(u, nl));
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] -= conv[i] * nl.f(u[i]);
    return out;
}

double path_energy(const EnergyBreakdown& e, double tau) {
    if (!(tau > 0.0))
        throw TauNonpositive("path_energy requires tau > 0");
    return e.dilated(tau).energy();
}

double path_energy_derivative(const EnergyBreakdown& e, double tau) {
    if (!(tau > 0.0))
        throw TauNonpositive("path_energy_derivative requires tau > 0");
    return e.dilated(tau).pohozaev() / tau;
}

double optimal_dilation(const EnergyBreakdown& e) {
    if (!(e.interaction > 0.0) || !(e.dirichlet > 0.0))
        throw NoInteriorMax("optimal_dilation requires A > 0 and C > 0");
    const double N = e.dim, al = e.alpha;
    const double A = e.dirichlet, B = e.mass, C = e.interaction;
    // root of (N+alpha) C tau^(alpha+2) - N B tau^2 - (N-2) A, increasing
    // through zero on tau > 0
    auto phi = [&](double t) {
        return (N + al) * C * std::pow(t, al + 2.0) - N * B * t * t - (N - 2.0) * A;
    };
    auto dphi = [&](double t) {
        return (N + al) * (al + 2.0) * C * std::pow(t, al + 1.0) - 2.0 * N * B * t;
    };
    double lo = 1.0, hi = 1.0;
    if (phi(1.0) < 0.0) {
        while (phi(hi) < 0.0) {
            hi *= 2.0;
            if (hi > 1e14)
                throw NoInteriorMax("optimal_dilation: no interior maximizer found");
        }
    } else {
        while (phi(lo) > 0.0) {
            lo *= 0.5;
            if (lo < 1e-14)
                throw NoInteriorMax("optimal_dilation: no interior maximizer found");
        }
    }
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (phi(mid) > 0.0 ? hi : lo) = mid;
    }
    double tau = 0.5 * (lo + hi);
    for (int it = 0; it < 12; ++it) {
        const double step = phi(tau) / dphi(tau);
        const double next = tau - step;
        if (!(next > lo && next < hi))
            break;
        tau = next;
        if (std::abs(step) <= 1e-14 * tau)
            break;
    }
    return tau;
}

AugmentedEnergy augmented_energy(double sigma, const Field& v, const RieszKernel& k,
                                 const Nonlinearity& nl) {
    if (!std::isfinite(sigma))
        throw ConfigInvalid("augmented_energy requires finite sigma");
    const EnergyBreakdown e = breakdown(v, k, nl);
    const double tau = std::exp(sigma);
    const EnergyBreakdown d = e.dilated(tau);
    return {d.energy(), d.pohozaev()};
}

} // namespace choquard
