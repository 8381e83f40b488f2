#pragma once

#include "choquard/errors.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace choquard {

/// Uniform Cartesian discretization of the cube [-L, L)^N.
/// Nodes sit at x_i = -L + i*h per axis with h = 2L/n, so the origin is the
/// node with index n/2 on every axis (n is even).
struct Grid {
    int dim = 3;
    int n = 0;
    double half_width = 0.0;
    double spacing = 0.0;

    Grid(int dim_, int n_, double half_width_);

    std::size_t node_count() const { return node_count_; }
    double cell_volume() const { return cell_volume_; }
    double coord(int i) const { return -half_width + spacing * i; }
    int origin_index() const { return n / 2; }

    bool operator==(const Grid& other) const {
        return dim == other.dim && n == other.n && half_width == other.half_width;
    }

  private:
    std::size_t node_count_ = 0;
    double cell_volume_ = 0.0;
};

/// Real scalar field sampled on a Grid; row-major with axis 0 slowest.
class Field {
  public:
    Field(Grid grid, std::vector<double> values);
    static Field zeros(const Grid& grid);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    /// Throws if any value is non-finite.
    void check_finite() const;

  private:
    Grid grid_;
    std::vector<double> values_;
};

/// Builds a field by evaluating f at every node; f receives the coordinate
/// vector (length dim) of the node.
Field make_field(const Grid& grid, const std::function<double(const std::vector<double>&)>& f);

/// Midpoint quadrature: cell_volume * sum of values.
double integrate(const Field& u);

/// Quadrature of the pointwise product: the h^N-weighted inner product.
double integrate_product(const Field& a, const Field& b);

/// Discrete Dirichlet integral of u with fourth-order central differences and
/// periodic wrap. Nonnegative; vanishes on constants.
double dirichlet_energy(const Field& u);

/// (integral of |u|^p)^(1/p) under the same quadrature as integrate.
double lp_norm(const Field& u, double p);

/// v(x) = u(x/tau) by multilinear interpolation; points mapping outside the
/// cube give 0. tau == 1 returns a bitwise copy.
Field dilate(const Field& u, double tau);

/// Cyclic translation putting the barycenter of u^2 at the origin node
/// (nearest-node rounding).
Field recentre(const Field& u);

/// Largest local integral of |u|^p over grid-centered cubes of side 2*radius,
/// windows wrapping periodically. Requires p in (2, 2N/(N-2)).
double concentration_function(const Field& u, double p, double radius);

/// Sum of the per-axis squared forward differences times cell volume; the
/// nearest-neighbour Dirichlet form used by the polarization inequalities.
double edgewise_dirichlet_energy(const Field& u);

/// Multilinear interpolation of u at an arbitrary point (0 outside the cube).
double interpolate_at(const Field& u, const std::vector<double>& x);

/// Multilinear resampling of u onto another grid of the same dimension
/// (points outside u's cube give 0). Used to warm-start refined solves.
Field resample(const Field& u, const Grid& target);

/// Fraction of the squared mass sitting on the outermost node shell.
double boundary_mass_fraction(const Field& u);

namespace detail {
/// Applies the periodic fourth-order first-derivative stencil along `axis`,
/// writing into out (which may not alias u).
void axis_derivative4(const Grid& g, const std::vector<double>& u, int axis,
                      std::vector<double>& out);
} // namespace detail

} // namespace choquard
