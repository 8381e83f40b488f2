#pragma once

#include "choquard/field.hpp"

#include <string>
#include <vector>

namespace choquard {

/// Axis-aligned half-space whose boundary plane sits at a half-integer node
/// offset, so the induced reflection maps grid nodes to grid nodes with no
/// fixed points. offset_index is the plane position in node units
/// (m + 0.5 for integer m).
struct HalfSpace {
    int axis = 0;
    double offset_index = 0.0;
    enum class Orientation { keep_low, keep_high };
    Orientation orientation = Orientation::keep_low;
};

/// Nodewise max/min rearrangement of u across the half-space boundary.
Field polarize(const Field& u, const HalfSpace& half);

/// Field composed with the reflection across the half-space boundary.
Field reflect(const Field& u, const HalfSpace& half);

/// Radially nonincreasing equimeasurable rearrangement about the origin node
/// (values sorted descending onto nodes ordered by distance, ties broken by
/// index). Operates on |u|; when used_abs is non-null it records whether any
/// negative value was present.
Field schwarz_rearrange(const Field& u, bool* used_abs = nullptr);

/// Direct O(M^2) evaluation of the nonlocal interaction
/// sum_{x,y} u(x) K(x-y) v(y) h^(2N) with the sampled Riesz kernel (the
/// diagonal uses the same self-interaction weight as the spectral kernel).
/// Guarded to grids with at most 32768 nodes.
double brute_double_sum(const Field& u, const Field& v, double alpha);

enum class EqualityCase { equal_u, equal_reflected, strict };

struct PolarizationCheck {
    double lhs = 0.0; // interaction of u
    double rhs = 0.0; // interaction of the polarization
    EqualityCase equality = EqualityCase::strict;
};

/// Brute-force check of the polarization inequality for nonnegative u:
/// interaction(u) <= interaction(u^H), classifying the equality case by
/// exact nodewise comparison.
PolarizationCheck polarization_inequality_check(const Field& u, const HalfSpace& half,
                                                double alpha);

struct SymmetryReport {
    bool sign_pass = false;
    bool radial_pass = false;
    bool monotone_pass = false;
    HalfSpace worst_halfspace;
    double worst_defect = 0.0; // relative L2 polarization defect
    double sign_defect = 0.0;
    double monotone_defect = 0.0;

    bool all_passed() const { return sign_pass && radial_pass && monotone_pass; }
    std::string to_json() const;
};

/// Sign, polarization-radiality and ray-monotonicity diagnostics for a
/// recentred candidate groundstate.
SymmetryReport symmetry_diagnostic(const Field& u, double tol);

/// The half-space family the diagnostic scans: all axes, half-integer planes
/// within n/4 nodes of the center.
std::vector<HalfSpace> default_halfspace_family(const Grid& grid);

} // namespace choquard
