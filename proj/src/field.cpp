#include "choquard/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>

namespace choquard {

namespace {

std::size_t checked_node_count(int dim, int n) {
    std::size_t count = 1;
    for (int d = 0; d < dim; ++d) {
        if (count > (std::size_t(1) << 31) / std::size_t(n))
            throw ConfigInvalid("grid too large: n^dim exceeds node limit");
        count *= std::size_t(n);
    }
    return count;
}

} // namespace

Grid::Grid(int dim_, int n_, double half_width_)
    : dim(dim_), n(n_), half_width(half_width_) {
    if (dim < 3)
        throw ConfigInvalid("grid dim must be >= 3");
    if (n < 8 || n % 2 != 0)
        throw ConfigInvalid("grid n must be even and >= 8");
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw ConfigInvalid("grid half_width must be positive");
    spacing = 2.0 * half_width / n;
    node_count_ = checked_node_count(dim, n);
    cell_volume_ = std::pow(spacing, dim);
}

Field::Field(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.node_count())
        throw ConfigInvalid("field value count does not match grid");
}

Field Field::zeros(const Grid& grid) {
    return Field(grid, std::vector<double>(grid.node_count(), 0.0));
}

void Field::check_finite() const {
    for (double v : values_)
        if (!std::isfinite(v))
            throw ConfigInvalid("field contains non-finite values");
}

Field make_field(const Grid& grid,
                 const std::function<double(const std::vector<double>&)>& f) {
    Field out = Field::zeros(grid);
    const int dim = grid.dim, n = grid.n;
    std::vector<int> idx(dim, 0);
    std::vector<double> x(dim);
    for (std::size_t flat = 0; flat < grid.node_count(); ++flat) {
        for (int d = 0; d < dim; ++d)
            x[d] = grid.coord(idx[d]);
        out[flat] = f(x);
        for (int d = dim - 1; d >= 0; --d) {
            if (++idx[d] < n)
                break;
            idx[d] = 0;
        }
    }
    return out;
}

double integrate(const Field& u) {
    double s = 0.0;
    for (double v : u.values())
        s += v;
    return u.grid().cell_volume() * s;
}

double integrate_product(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid()))
        throw GridMismatch("integrate_product: mismatched grids");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s * a.grid().cell_volume();
}

namespace detail {

void axis_derivative4(const Grid& g, const std::vector<double>& u, int axis,
                      std::vector<double>& out) {
    const int n = g.n;
    const double scale = 1.0 / (12.0 * g.spacing);
    std::size_t inner = 1;
    for (int d = axis + 1; d < g.dim; ++d)
        inner *= std::size_t(n);
    std::size_t outer = g.node_count() / (inner * std::size_t(n));
    out.resize(u.size());
    for (std::size_t o = 0; o < outer; ++o) {
        const std::size_t base = o * std::size_t(n) * inner;
        for (int i = 0; i < n; ++i) {
            const int ip1 = (i + 1) % n, ip2 = (i + 2) % n;
            const int im1 = (i + n - 1) % n, im2 = (i + n - 2) % n;
            const double* up1 = u.data() + base + std::size_t(ip1) * inner;
            const double* up2 = u.data() + base + std::size_t(ip2) * inner;
            const double* um1 = u.data() + base + std::size_t(im1) * inner;
            const double* um2 = u.data() + base + std::size_t(im2) * inner;
            double* dst = out.data() + base + std::size_t(i) * inner;
            for (std::size_t k = 0; k < inner; ++k)
                dst[k] = scale * (-up2[k] + 8.0 * up1[k] - 8.0 * um1[k] + um2[k]);
        }
    }
}

} // namespace detail

double dirichlet_energy(const Field& u) {
    const Grid& g = u.grid();
    std::vector<double> d;
    double acc = 0.0;
    for (int axis = 0; axis < g.dim; ++axis) {
        detail::axis_derivative4(g, u.values(), axis, d);
        for (double v : d)
            acc += v * v;
    }
    return acc * g.cell_volume();
}

double edgewise_dirichlet_energy(const Field& u) {
    const Grid& g = u.grid();
    const int n = g.n;
    const double inv_h = 1.0 / g.spacing;
    double acc = 0.0;
    for (int axis = 0; axis < g.dim; ++axis) {
        std::size_t inner = 1;
        for (int d = axis + 1; d < g.dim; ++d)
            inner *= std::size_t(n);
        std::size_t outer = g.node_count() / (inner * std::size_t(n));
        const double* v = u.values().data();
        for (std::size_t o = 0; o < outer; ++o) {
            const std::size_t base = o * std::size_t(n) * inner;
            for (int i = 0; i < n; ++i) {
                const double* cur = v + base + std::size_t(i) * inner;
                const double* nxt = v + base + std::size_t((i + 1) % n) * inner;
                for (std::size_t k = 0; k < inner; ++k) {
                    const double dv = (nxt[k] - cur[k]) * inv_h;
                    acc += dv * dv;
                }
            }
        }
    }
    return acc * g.cell_volume();
}

double lp_norm(const Field& u, double p) {
    if (!(p >= 1.0))
        throw ConfigInvalid("lp_norm requires p >= 1");
    double s = 0.0;
    if (p == 2.0) {
        for (double v : u.values())
            s += v * v;
    } else if (p == 1.0) {
        for (double v : u.values())
            s += std::abs(v);
    } else {
        for (double v : u.values())
            s += std::pow(std::abs(v), p);
    }
    return std::pow(u.grid().cell_volume() * s, 1.0 / p);
}

double interpolate_at(const Field& u, const std::vector<double>& x) {
    const Grid& g = u.grid();
    const int dim = g.dim, n = g.n;
    const double h = g.spacing, L = g.half_width;
    std::vector<int> base(dim);
    std::vector<double> frac(dim);
    for (int d = 0; d < dim; ++d) {
        const double c = (x[d] + L) / h;
        const double fl = std::floor(c);
        base[d] = int(fl);
        frac[d] = c - fl;
    }
    double acc = 0.0;
    const int corners = 1 << dim;
    for (int m = 0; m < corners; ++m) {
        double w = 1.0;
        std::size_t flat = 0;
        bool inside = true;
        for (int d = 0; d < dim; ++d) {
            const int bit = (m >> d) & 1;
            const int idx = base[d] + bit;
            w *= bit ? frac[d] : 1.0 - frac[d];
            if (idx < 0 || idx >= n) {
                inside = false;
                break;
            }
            flat = flat * std::size_t(n) + std::size_t(idx);
        }
        if (inside && w != 0.0)
            acc += w * u[flat];
    }
    return acc;
}

Field dilate(const Field& u, double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw TauNonpositive("dilate requires tau > 0");
    if (tau == 1.0)
        return u;
    const Grid& g = u.grid();
    const int dim = g.dim, n = g.n;
    Field out = Field::zeros(g);
    std::vector<int> idx(dim, 0);
    std::vector<double> x(dim);
    for (std::size_t flat = 0; flat < g.node_count(); ++flat) {
        for (int d = 0; d < dim; ++d)
            x[d] = g.coord(idx[d]) / tau;
        out[flat] = interpolate_at(u, x);
        for (int d = dim - 1; d >= 0; --d) {
            if (++idx[d] < n)
                break;
            idx[d] = 0;
        }
    }
    return out;
}

Field resample(const Field& u, const Grid& target) {
    if (target.dim != u.grid().dim)
        throw GridMismatch("resample: dimension mismatch");
    const int dim = target.dim, n = target.n;
    Field out = Field::zeros(target);
    std::vector<int> idx(dim, 0);
    std::vector<double> x(dim);
    for (std::size_t flat = 0; flat < target.node_count(); ++flat) {
        for (int d = 0; d < dim; ++d)
            x[d] = target.coord(idx[d]);
        out[flat] = interpolate_at(u, x);
        for (int d = dim - 1; d >= 0; --d) {
            if (++idx[d] < n)
                break;
            idx[d] = 0;
        }
    }
    return out;
}

Field recentre(const Field& u) {
    const Grid& g = u.grid();
    const int dim = g.dim, n = g.n;
    double total = 0.0;
    std::vector<double> first_moment(dim, 0.0);
    std::vector<int> idx(dim, 0);
    for (std::size_t flat = 0; flat < g.node_count(); ++flat) {
        const double w = u[flat] * u[flat];
        total += w;
        for (int d = 0; d < dim; ++d)
            first_moment[d] += w * g.coord(idx[d]);
        for (int d = dim - 1; d >= 0; --d) {
            if (++idx[d] < n)
                break;
            idx[d] = 0;
        }
    }
    if (total <= 0.0)
        throw ZeroField("recentre requires a nonzero field");
    std::vector<int> shift(dim);
    bool any = false;
    for (int d = 0; d < dim; ++d) {
        shift[d] = int(std::lround(first_moment[d] / total / g.spacing));
        shift[d] = ((shift[d] % n) + n) % n;
        any = any || shift[d] != 0;
    }
    if (!any)
        return u;
    Field out = Field::zeros(g);
    std::fill(idx.begin(), idx.end(), 0);
    for (std::size_t flat = 0; flat < g.node_count(); ++flat) {
        std::size_t src = 0;
        for (int d = 0; d < dim; ++d)
            src = src * std::size_t(n) + std::size_t((idx[d] + shift[d]) % n);
        out[flat] = u[src];
        for (int d = dim - 1; d >= 0; --d) {
            if (++idx[d] < n)
                break;
            idx[d] = 0;
        }
    }
    return out;
}

double concentration_function(const Field& u, double p, double radius) {
    const Grid& g = u.grid();
    const double p_hi = 2.0 * g.dim / double(g.dim - 2);
    if (!(p > 2.0 && p < p_hi))
        throw ConfigInvalid("concentration_function requires p in (2, 2N/(N-2))");
    if (!(radius > 0.0))
        throw ConfigInvalid("concentration_function requires radius > 0");
    const int n = g.n;
    const int w = int(std::floor(radius / g.spacing + 1e-12));
    std::vector<double> work(g.node_count());
    for (std::size_t i = 0; i < work.size(); ++i)
        work[i] = std::pow(std::abs(u[i]), p);
    // cyclic box sum of width 2w+1 applied axis by axis
    std::vector<double> tmp(work.size());
    for (int axis = 0; axis < g.dim; ++axis) {
        std::size_t inner = 1;
        for (int d = axis + 1; d < g.dim; ++d)
            inner *= std::size_t(n);
        std::size_t outer = g.node_count() / (inner * std::size_t(n));
        for (std::size_t o = 0; o < outer; ++o) {
            const std::size_t base = o * std::size_t(n) * inner;
            for (std::size_t k = 0; k < inner; ++k) {
                double s = 0.0;
                for (int m = -w; m <= w; ++m)
                    s += work[base + std::size_t(((m % n) + n) % n) * inner + k];
                for (int i = 0; i < n; ++i) {
                    tmp[base + std::size_t(i) * inner + k] = s;
                    const int drop = ((i - w) % n + n) % n;
                    const int add = ((i + w + 1) % n + n) % n;
                    s += work[base + std::size_t(add) * inner + k] -
                         work[base + std::size_t(drop) * inner + k];
                }
            }
        }
        work.swap(tmp);
    }
    double best = 0.0;
    for (double v : work)
        best = std::max(best, v);
    return best * g.cell_volume();
}

double boundary_mass_fraction(const Field& u) {
    const Grid& g = u.grid();
    const int dim = g.dim, n = g.n;
    double shell = 0.0, total = 0.0;
    std::vector<int> idx(dim, 0);
    for (std::size_t flat = 0; flat < g.node_count(); ++flat) {
        const double w = u[flat] * u[flat];
        total += w;
        for (int d = 0; d < dim; ++d) {
            if (idx[d] == 0 || idx[d] == n - 1) {
                shell += w;
                break;
            }
        }
        for (int d = dim - 1; d >= 0; --d) {
            if (++idx[d] < n)
                break;
            idx[d] = 0;
        }
    }
    if (total <= 0.0)
        return 0.0;
    return shell / total;
}

} // namespace choquard
