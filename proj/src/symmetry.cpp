#include "choquard/symmetry.hpp"

#include "choquard/errors.hpp"
#include "choquard/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace choquard {

namespace {

/// Plane index m for a lattice-compatible half-space: the boundary sits
/// between nodes m and m+1 on the axis.
int plane_index(const Field& u, const HalfSpace& half) {
    const Grid& g = u.grid();
    if (half.axis < 0 || half.axis >= g.dim)
        throw IncompatibleHalfSpace("half-space axis out of range");
    const double doubled = 2.0 * half.offset_index;
    const double rounded = std::round(doubled);
    if (std::abs(doubled - rounded) > 1e-9 || std::lround(rounded) % 2 == 0)
        throw IncompatibleHalfSpace(
            "half-space offset must sit at a half-integer node position");
    const long m = (std::lround(rounded) - 1) / 2;
    return int(((m % g.n) + g.n) % g.n);
}

/// Walks all nodes, handing the callback the flat index, its axis index and
/// the flat index of the reflected node.
template <typename Fn>
void for_each_mirror_pair(const Grid& g, int axis, int m, Fn&& fn) {
    const int n = g.n, dim = g.dim;
    std::size_t inner = 1;
    for (int d = axis + 1; d < dim; ++d)
        inner *= std::size_t(n);
    const std::size_t outer = g.node_count() / (inner * std::size_t(n));
    for (std::size_t o = 0; o < outer; ++o) {
        const std::size_t base = o * std::size_t(n) * inner;
        for (int i = 0; i < n; ++i) {
            const int j = ((2 * m + 1 - i) % n + n) % n;
            const std::size_t row = base + std::size_t(i) * inner;
            const std::size_t mirror = base + std::size_t(j) * inner;
            for (std::size_t k = 0; k < inner; ++k)
                fn(row + k, i, mirror + k);
        }
    }
}

/// True when axis index i lies on the kept side of the (torus) half-space.
bool on_kept_side(int i, int m, int n, HalfSpace::Orientation orientation) {
    const int dist_low = ((m - i) % n + n) % n; // 0 at i=m, counting downward
    const bool low = dist_low < n / 2;
    return orientation == HalfSpace::Orientation::keep_low ? low : !low;
}

} // namespace

Field polarize(const Field& u, const HalfSpace& half) {
    const Grid& g = u.grid();
    const int m = plane_index(u, half);
    Field out = Field::zeros(g);
    for_each_mirror_pair(g, half.axis, m, [&](std::size_t flat, int i, std::size_t mirror) {
        const double a = u[flat], b = u[mirror];
        out[flat] = on_kept_side(i, m, g.n, half.orientation) ? std::max(a, b)
                                                              : std::min(a, b);
    });
    return out;
}

Field reflect(const Field& u, const HalfSpace& half) {
    const Grid& g = u.grid();
    const int m = plane_index(u, half);
    Field out = Field::zeros(g);
    for_each_mirror_pair(g, half.axis, m,
                         [&](std::size_t flat, int, std::size_t mirror) {
                             out[flat] = u[mirror];
                         });
    return out;
}

Field schwarz_rearrange(const Field& u, bool* used_abs) {
    const Grid& g = u.grid();
    const int n = g.n, dim = g.dim;
    std::vector<double> values(u.values());
    bool any_negative = false;
    for (double& v : values) {
        if (v < 0.0) {
            any_negative = true;
            v = -v;
        }
    }
    if (used_abs)
        *used_abs = any_negative;
    // rank nodes by squared distance from the origin node, ties by index
    std::vector<std::size_t> order(g.node_count());
    std::iota(order.begin(), order.end(), std::size_t(0));
    std::vector<long> dist2(g.node_count());
    {
        std::vector<int> idx(dim, 0);
        for (std::size_t flat = 0; flat < dist2.size(); ++flat) {
            long d2 = 0;
            for (int d = 0; d < dim; ++d) {
                const long off = idx[d] - n / 2;
                d2 += off * off;
            }
            dist2[flat] = d2;
            for (int d = dim - 1; d >= 0; --d) {
                if (++idx[d] < n)
                    break;
                idx[d] = 0;
            }
        }
    }
    std::sort(order.begin(), order.end(), [&dist2](std::size_t a, std::size_t b) {
        return dist2[a] != dist2[b] ? dist2[a] < dist2[b] : a < b;
    });
    std::sort(values.begin(), values.end(), std::greater<double>());
    Field out = Field::zeros(g);
    for (std::size_t r = 0; r < order.size(); ++r)
        out[order[r]] = values[r];
    return out;
}

double brute_double_sum(const Field& u, const Field& v, double alpha) {
    const Grid& g = u.grid();
    if (!(v.grid() == g))
        throw GridMismatch("brute_double_sum: mismatched grids");
    if (g.node_count() > 32768)
        throw GridTooLarge("brute_double_sum limited to 32768 nodes");
    if (!(alpha > 0.0 && alpha < g.dim))
        throw AlphaOutOfRange("brute_double_sum requires 0 < alpha < dim");
    const int n = g.n, dim = g.dim;
    const double h = g.spacing;
    const double norm = riesz_normalization(dim, alpha);
    const double expo = (alpha - dim) / 2.0;
    // kernel over the offset lattice [-(n-1), n-1]^dim
    const int span = 2 * n - 1;
    std::size_t table_size = 1;
    for (int d = 0; d < dim; ++d)
        table_size *= std::size_t(span);
    std::vector<double> table(table_size);
    {
        std::vector<int> off(dim, -(n - 1));
        for (std::size_t t = 0; t < table_size; ++t) {
            double r2 = 0.0;
            for (int d = 0; d < dim; ++d)
                r2 += double(off[d]) * off[d];
            r2 *= h * h;
            table[t] = r2 > 0.0 ? norm * std::pow(r2, expo)
                                : self_interaction_weight(dim, alpha, h);
            for (int d = dim - 1; d >= 0; --d) {
                if (++off[d] <= n - 1)
                    break;
                off[d] = -(n - 1);
            }
        }
    }
    const std::size_t count = g.node_count();
    std::vector<int> ix(dim, 0), iy(dim);
    double acc = 0.0;
    for (std::size_t a = 0; a < count; ++a) {
        if (u[a] != 0.0) {
            std::fill(iy.begin(), iy.end(), 0);
            for (std::size_t b = 0; b < count; ++b) {
                if (v[b] != 0.0) {
                    std::size_t t = 0;
                    for (int d = 0; d < dim; ++d)
                        t = t * std::size_t(span) +
                            std::size_t(ix[d] - iy[d] + (n - 1));
                    acc += u[a] * table[t] * v[b];
                }
                for (int d = dim - 1; d >= 0; --d) {
                    if (++iy[d] < n)
                        break;
                    iy[d] = 0;
                }
            }
        }
        for (int d = dim - 1; d >= 0; --d) {
            if (++ix[d] < n)
                break;
            ix[d] = 0;
        }
    }
    return acc * g.cell_volume() * g.cell_volume();
}

PolarizationCheck polarization_inequality_check(const Field& u, const HalfSpace& half,
                                                double alpha) {
    for (double v : u.values())
        if (v < 0.0)
            throw ConfigInvalid("polarization_inequality_check requires u >= 0");
    PolarizationCheck out;
    const Field pol = polarize(u, half);
    out.lhs = brute_double_sum(u, u, alpha);
    out.rhs = brute_double_sum(pol, pol, alpha);
    const Field refl = reflect(u, half);
    bool equal_u = true, equal_refl = true;
    for (std::size_t i = 0; i < u.size(); ++i) {
        equal_u = equal_u && pol[i] == u[i];
        equal_refl = equal_refl && pol[i] == refl[i];
        if (!equal_u && !equal_refl)
            break;
    }
    out.equality = equal_u ? EqualityCase::equal_u
                           : (equal_refl ? EqualityCase::equal_reflected
                                         : EqualityCase::strict);
    return out;
}

std::vector<HalfSpace> default_halfspace_family(const Grid& grid) {
    std::vector<HalfSpace> family;
    const int center = grid.n / 2 - 1; // plane at -h/2 sits between these nodes
    const int reach = grid.n / 4;
    for (int axis = 0; axis < grid.dim; ++axis)
        for (int k = -reach; k <= reach; ++k) {
            const int m = center + k;
            if (m < 0 || m >= grid.n)
                continue;
            family.push_back({axis, m + 0.5, HalfSpace::Orientation::keep_low});
        }
    return family;
}

std::string SymmetryReport::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"sign\":\"" << (sign_pass ? "pass" : "fail") << "\""
       << ",\"radial\":\"" << (radial_pass ? "pass" : "fail") << "\""
       << ",\"monotone\":\"" << (monotone_pass ? "pass" : "fail") << "\""
       << ",\"worst_halfspace\":{\"axis\":" << worst_halfspace.axis
       << ",\"offset_index\":" << worst_halfspace.offset_index
       << ",\"defect\":" << worst_defect << "}"
       << ",\"sign_defect\":" << sign_defect
       << ",\"monotone_defect\":" << monotone_defect << "}";
    return os.str();
}

SymmetryReport symmetry_diagnostic(const Field& u, double tol) {
    const Grid& g = u.grid();
    SymmetryReport rep;

    double umin = u[0], umax = u[0];
    for (double v : u.values()) {
        umin = std::min(umin, v);
        umax = std::max(umax, v);
    }
    const double scale = std::max(std::abs(umin), std::abs(umax));
    rep.sign_defect = scale > 0.0 ? std::max(0.0, -(umin * umax)) / (scale * scale) : 0.0;
    rep.sign_pass = umin * umax >= -tol * scale * scale;

    const double unorm = lp_norm(u, 2.0);
    rep.radial_pass = true;
    for (const HalfSpace& half : default_halfspace_family(g)) {
        const Field pol = polarize(u, half);
        const Field refl = reflect(u, half);
        double d_same = 0.0, d_refl = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double a = pol[i] - u[i];
            const double b = pol[i] - refl[i];
            d_same += a * a;
            d_refl += b * b;
        }
        const double cell = g.cell_volume();
        const double defect =
            std::sqrt(std::min(d_same, d_refl) * cell) / std::max(unorm, 1e-300);
        if (defect > rep.worst_defect) {
            rep.worst_defect = defect;
            rep.worst_halfspace = half;
        }
        if (defect > tol)
            rep.radial_pass = false;
    }

    // ray monotonicity from the origin node: axis rays and main diagonals
    rep.monotone_pass = true;
    const int n = g.n, dim = g.dim, o = g.origin_index();
    auto flat_of = [&](const std::vector<int>& idx) {
        std::size_t f = 0;
        for (int d = 0; d < dim; ++d)
            f = f * std::size_t(n) + std::size_t(idx[d]);
        return f;
    };
    std::vector<std::vector<int>> directions;
    for (int d = 0; d < dim; ++d)
        for (int s : {1, -1}) {
            std::vector<int> dir(dim, 0);
            dir[d] = s;
            directions.push_back(dir);
        }
    for (int mask = 0; mask < (1 << dim); ++mask) {
        std::vector<int> dir(dim);
        for (int d = 0; d < dim; ++d)
            dir[d] = (mask >> d) & 1 ? 1 : -1;
        directions.push_back(dir);
    }
    const double slack = tol * scale;
    for (const auto& dir : directions) {
        std::vector<int> idx(dim, o);
        double prev = u[flat_of(idx)];
        for (int step = 1; step < n / 2 - 1; ++step) {
            bool ok = true;
            for (int d = 0; d < dim; ++d) {
                idx[d] += dir[d];
                if (idx[d] < 0 || idx[d] >= n)
                    ok = false;
            }
            if (!ok)
                break;
            const double cur = u[flat_of(idx)];
            const double rise = cur - prev;
            if (rise > slack) {
                rep.monotone_pass = false;
                rep.monotone_defect = std::max(rep.monotone_defect,
                                               scale > 0.0 ? rise / scale : rise);
            }
            prev = cur;
        }
    }
    return rep;
}

} // namespace choquard
