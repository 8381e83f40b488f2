#pragma once

#include "choquard/energy.hpp"
#include "choquard/field.hpp"
#include "choquard/nonlinearity.hpp"
#include "choquard/riesz.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace choquard {

enum class SolveStatus { Converged, NoGroundstate, MaxIterations };

const char* to_string(SolveStatus s);

struct SolverDiagnostics {
    double concentration = 0.0;  // concentration_function of the final field
    double boundary_mass = 0.0;  // squared-mass fraction on the outer shell
};

struct IterationStats {
    int iteration = 0;
    char phase = 'A'; // 'A' descent / projection, 'B' critical-point polish
    double objective = 0.0;
    double pohozaev_residual = 0.0;
    double gradient_residual = 0.0;
    double step = 0.0;
    double tau = 1.0;
};

struct SolverConfig {
    int dim = 3;
    int n = 64;
    double half_width = 15.0;
    double alpha = 2.0;
    std::string nonlinearity = "power:p=2";
    double tol_pohozaev = 5e-3;
    double tol_gradient = 1e-3;
    int max_iterations = 400;
    double initial_step = 1.0;
    double backtrack_factor = 0.5;
    double armijo_constant = 0.25;
    int max_backtracks = 45;
    bool symmetric_mode = false;
    int rearrange_interval = 10;
    int recentre_interval = 25;
    double dilation_deadband = 2e-4;
    double trust_fraction = 0.2;
    std::uint64_t seed = 0;
    std::string kernel_cache_dir; // empty: no on-disk kernel cache
    std::function<void(const IterationStats&)> observer; // test/debug hook

    void validate() const;
    Grid make_grid() const { return Grid(dim, n, half_width); }
};

struct SolveReport {
    Field solution;
    EnergyBreakdown breakdown;
    double mountain_pass_level = 0.0;
    double pohozaev_residual = 0.0;
    double gradient_residual = 0.0;
    int iterations = 0;
    SolveStatus status = SolveStatus::MaxIterations;
    std::string stop_reason;
    SolverDiagnostics diagnostics;

    std::string to_json() const;
};

/// Dilates u to the maximizer of its dilation path (the Pohozaev-manifold
/// projection along the ray). Propagates NoInteriorMax when C <= 0 or A = 0.
Field project_to_pohozaev(const Field& u, const RieszKernel& k, const Nonlinearity& nl);

/// Groundstate solve from the default projected-Gaussian seed.
SolveReport solve(const SolverConfig& cfg);

/// Groundstate solve from a caller-supplied initial field.
SolveReport solve(const SolverConfig& cfg, const Field& init);

struct PathSample {
    double tau = 0.0;
    double energy = 0.0;
};

/// Tabulates the closed-form path energy of the dilation path through u on
/// [0, tau_end], where tau_end is past the sign change so the endpoint energy
/// is negative. Requires samples >= 16 and e.C > 0.
std::vector<PathSample> lift_to_path(const Field& u, const EnergyBreakdown& e,
                                     int samples);

} // namespace choquard
