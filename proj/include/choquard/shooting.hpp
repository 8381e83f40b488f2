#pragma once

#include <vector>

namespace choquard {

struct RadialSample {
    double r = 0.0;
    double u = 0.0;
    double v = 0.0;
};

struct ShootingResult {
    double action = 0.0;
    double u0 = 0.0;            // central amplitude
    double v0 = 0.0;            // central potential
    double dirichlet = 0.0;     // A from the radial profile
    double mass = 0.0;          // B
    double interaction = 0.0;   // C
    std::vector<RadialSample> profile;

    double pohozaev() const {
        return 0.5 * dirichlet + 1.5 * mass - 2.5 * interaction;
    }
};

/// Independent reference solver for N = 3, alpha = 2 and F(s) = |s|^p / p:
/// two-parameter shooting on (u(0), v(0)) for the radial system
///   u'' + (2/r) u' - u + v f(u) = 0,
///   v'' + (2/r) v' = -F(u),
/// with decaying tails for both u and v. Shares no code with the grid or
/// transform paths. Requires p in (5/3, 5).
ShootingResult shooting_oracle(double p, double tol = 1e-3);

} // namespace choquard
