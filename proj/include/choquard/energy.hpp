#pragma once

#include "choquard/field.hpp"
#include "choquard/nonlinearity.hpp"
#include "choquard/riesz.hpp"

#include <string>

namespace choquard {

/// The triple (A, B, C) = (Dirichlet, mass, nonlocal interaction) together
/// with the problem parameters, plus the derived functionals.
struct EnergyBreakdown {
    double dirichlet = 0.0;    // A = integral |grad u|^2
    double mass = 0.0;         // B = integral |u|^2
    double interaction = 0.0;  // C = integral (I_alpha * F(u)) F(u)
    int dim = 3;
    double alpha = 2.0;

    double energy() const { return 0.5 * (dirichlet + mass) - 0.5 * interaction; }

    double pohozaev() const {
        return 0.5 * (dim - 2) * dirichlet + 0.5 * dim * mass -
               0.5 * (dim + alpha) * interaction;
    }

    double reduced() const {
        return ((alpha + 2.0) * dirichlet + alpha * mass) / (2.0 * (dim + alpha));
    }

    /// Closed-form breakdown of x -> u(x/tau):
    /// (tau^(N-2) A, tau^N B, tau^(N+alpha) C).
    EnergyBreakdown dilated(double tau) const;

    std::string to_json() const;
};

EnergyBreakdown breakdown(const Field& u, const RieszKernel& k, const Nonlinearity& nl);

/// Elementwise F(u).
Field apply_antiderivative(const Field& u, const Nonlinearity& nl);

/// Discrete L2 gradient of the action: -Lap u + u - (I_alpha * F(u)) f(u),
/// with the Laplacian built from the same fourth-order stencil as
/// dirichlet_energy (so the directional-derivative identity is exact).
Field gradient_action(const Field& u, const RieszKernel& k, const Nonlinearity& nl);

/// Energy along the dilation path, evaluated in closed form from the triple.
double path_energy(const EnergyBreakdown& e, double tau);

/// d/dtau of path_energy; equals dilated-pohozaev / tau, so at tau = 1 it is
/// exactly e.pohozaev().
double path_energy_derivative(const EnergyBreakdown& e, double tau);

/// The unique tau > 0 maximizing path_energy (equivalently the zero of the
/// dilated Pohozaev functional). Requires C > 0 and A > 0.
double optimal_dilation(const EnergyBreakdown& e);

struct AugmentedEnergy {
    double value = 0.0;
    double d_sigma = 0.0;
};

/// Energy of the dilation map sigma -> u(e^(-sigma) x) and its
/// sigma-derivative (the Pohozaev functional of the dilated field), both in
/// closed form from the breakdown of v.
AugmentedEnergy augmented_energy(double sigma, const Field& v, const RieszKernel& k,
                                 const Nonlinearity& nl);

} // namespace choquard
