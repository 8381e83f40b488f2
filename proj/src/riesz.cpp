#include "choquard/riesz.hpp"

#include "choquard/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <sstream>

#include "choquard/io.hpp"

namespace choquard {

double riesz_normalization(int dim, double alpha) {
    if (!(alpha > 0.0 && alpha < dim))
        throw AlphaOutOfRange("riesz normalization requires 0 < alpha < dim");
    return std::tgamma((dim - alpha) / 2.0) /
           (std::tgamma(alpha / 2.0) * std::pow(M_PI, dim / 2.0) *
            std::pow(2.0, alpha));
}

double epstein_zeta_renormalized(int dim, double s, double lambda) {
    if (!(s > 0.0 && s < dim))
        throw AlphaOutOfRange("epstein zeta requires 0 < s < dim");
    if (!(lambda > 0.0))
        throw ConfigInvalid("epstein zeta requires lambda > 0");
    const double t = dim - s;
    // Ewald / Mellin split at `lambda`; lattice sums truncated where the
    // incomplete-gamma tails are below 1e-18.
    const int radius = 6;
    double real_sum = 0.0, fourier_sum = 0.0;
    std::vector<int> idx(dim, -radius);
    while (true) {
        long r2 = 0;
        for (int d = 0; d < dim; ++d)
            r2 += long(idx[d]) * idx[d];
        if (r2 != 0) {
            const double pj = M_PI * double(r2);
            real_sum += boost::math::tgamma(s / 2.0, pj * lambda) *
                        std::pow(pj, -s / 2.0);
            fourier_sum += boost::math::tgamma(t / 2.0, pj / lambda) *
                           std::pow(pj / lambda, -t / 2.0);
        }
        int d = dim - 1;
        while (d >= 0 && idx[d] == radius)
            idx[d--] = -radius;
        if (d < 0)
            break;
        ++idx[d];
    }
    const double bracket = -(2.0 / s) * std::pow(lambda, s / 2.0) -
                           (2.0 / t) * std::pow(lambda, (s - dim) / 2.0) +
                           real_sum +
                           std::pow(lambda, (s - dim) / 2.0) * fourier_sum;
    return bracket * std::pow(M_PI, s / 2.0) / std::tgamma(s / 2.0);
}

double self_interaction_weight(int dim, double alpha, double h) {
    return -riesz_normalization(dim, alpha) *
           epstein_zeta_renormalized(dim, dim - alpha) *
           std::pow(h, alpha - dim);
}

struct RieszKernel::Plans {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
    double* real_buf = nullptr;
    fftw_complex* cplx_buf = nullptr;
    std::size_t real_size = 0;
    std::size_t cplx_size = 0;

    ~Plans() {
        if (forward)
            fftw_destroy_plan(forward);
        if (inverse)
            fftw_destroy_plan(inverse);
        if (real_buf)
            fftw_free(real_buf);
        if (cplx_buf)
            fftw_free(cplx_buf);
    }
};

namespace {

std::size_t ipow(std::size_t b, int e) {
    std::size_t r = 1;
    while (e-- > 0)
        r *= b;
    return r;
}

} // namespace

std::vector<double> RieszKernel::sample_kernel() const {
    const int dim = grid_.dim, n = grid_.n, m = padded_n_;
    const double h = grid_.spacing;
    const double norm = riesz_normalization(dim, alpha_);
    const double expo = (alpha_ - dim) / 2.0;
    std::vector<double> kernel(ipow(std::size_t(m), dim));
    std::vector<int> idx(dim, 0);
    std::vector<double> disp2(m);
    for (int i = 0; i < m; ++i) {
        const double d = (i < n ? i : i - m) * h;
        disp2[i] = d * d;
    }
    for (std::size_t flat = 0; flat < kernel.size(); ++flat) {
        double r2 = 0.0;
        for (int d = 0; d < dim; ++d)
            r2 += disp2[idx[d]];
        kernel[flat] = r2 > 0.0 ? norm * std::pow(r2, expo) : singular_weight_;
        for (int d = dim - 1; d >= 0; --d) {
            if (++idx[d] < m)
                break;
            idx[d] = 0;
        }
    }
    return kernel;
}

RieszKernel::RieszKernel(const Grid& grid, double alpha)
    : RieszKernel(grid, alpha, {}) {}

RieszKernel::RieszKernel(const Grid& grid, double alpha, std::vector<double> sampled)
    : grid_(grid), alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < grid.dim))
        throw AlphaOutOfRange("build_kernel requires 0 < alpha < dim");
    padded_n_ = 2 * grid.n;
    singular_weight_ = self_interaction_weight(grid.dim, alpha, grid.spacing);
    if (sampled.empty())
        sampled = sample_kernel();

    const int dim = grid.dim, m = padded_n_;
    std::vector<int> dims(dim, m);
    const std::size_t real_size = ipow(std::size_t(m), dim);
    const std::size_t cplx_size = real_size / std::size_t(m) * (std::size_t(m) / 2 + 1);
    if (sampled.size() != real_size)
        throw ConfigInvalid("sampled kernel has wrong size");

    plans_ = std::make_unique<Plans>();
    plans_->real_size = real_size;
    plans_->cplx_size = cplx_size;
    plans_->real_buf = fftw_alloc_real(real_size);
    plans_->cplx_buf = fftw_alloc_complex(cplx_size);
    if (!plans_->real_buf || !plans_->cplx_buf)
        throw Error("fftw allocation failed");
    plans_->forward = fftw_plan_dft_r2c(dim, dims.data(), plans_->real_buf,
                                        plans_->cplx_buf, FFTW_ESTIMATE);
    plans_->inverse = fftw_plan_dft_c2r(dim, dims.data(), plans_->cplx_buf,
                                        plans_->real_buf, FFTW_ESTIMATE);
    if (!plans_->forward || !plans_->inverse)
        throw Error("fftw planning failed");

    std::memcpy(plans_->real_buf, sampled.data(), real_size * sizeof(double));
    fftw_execute(plans_->forward);
    multiplier_.resize(cplx_size);
    for (std::size_t k = 0; k < cplx_size; ++k) {
        // exact even symmetry of the sampled kernel makes the transform real
        multiplier_[k] = plans_->cplx_buf[k][0];
        if (!std::isfinite(multiplier_[k]))
            throw Error("non-finite kernel multiplier");
    }
}

RieszKernel::~RieszKernel() = default;
RieszKernel::RieszKernel(RieszKernel&&) noexcept = default;
RieszKernel& RieszKernel::operator=(RieszKernel&&) noexcept = default;

namespace {

/// Copies field values into the zero block of a padded real buffer.
void scatter_into_padded(const Grid& g, const std::vector<double>& values,
                         int m, double* padded, std::size_t padded_size) {
    std::fill(padded, padded + padded_size, 0.0);
    const int dim = g.dim, n = g.n;
    std::vector<int> idx(dim, 0);
    for (std::size_t flat = 0; flat < values.size(); ++flat) {
        std::size_t dst = 0;
        for (int d = 0; d < dim; ++d)
            dst = dst * std::size_t(m) + std::size_t(idx[d]);
        padded[dst] = values[flat];
        for (int d = dim - 1; d >= 0; --d) {
            if (++idx[d] < n)
                break;
            idx[d] = 0;
        }
    }
}

void gather_from_padded(const Grid& g, int m, const double* padded,
                        std::vector<double>& values) {
    const int dim = g.dim, n = g.n;
    std::vector<int> idx(dim, 0);
    for (std::size_t flat = 0; flat < values.size(); ++flat) {
        std::size_t src = 0;
        for (int d = 0; d < dim; ++d)
            src = src * std::size_t(m) + std::size_t(idx[d]);
        values[flat] = padded[src];
        for (int d = dim - 1; d >= 0; --d) {
            if (++idx[d] < n)
                break;
            idx[d] = 0;
        }
    }
}

} // namespace

Field RieszKernel::convolve(const Field& g) const {
    if (!(g.grid() == grid_))
        throw GridMismatch("convolve: field grid does not match kernel grid");
    const int m = padded_n_;
    const std::size_t real_size = plans_->real_size;
    const std::size_t cplx_size = plans_->cplx_size;

    double* rbuf = fftw_alloc_real(real_size);
    fftw_complex* cbuf = fftw_alloc_complex(cplx_size);
    if (!rbuf || !cbuf) {
        fftw_free(rbuf);
        fftw_free(cbuf);
        throw Error("fftw allocation failed");
    }
    scatter_into_padded(grid_, g.values(), m, rbuf, real_size);
    fftw_execute_dft_r2c(plans_->forward, rbuf, cbuf);
    for (std::size_t k = 0; k < cplx_size; ++k) {
        cbuf[k][0] *= multiplier_[k];
        cbuf[k][1] *= multiplier_[k];
    }
    fftw_execute_dft_c2r(plans_->inverse, cbuf, rbuf);
    const double scale = grid_.cell_volume() / double(real_size);
    Field out = Field::zeros(grid_);
    gather_from_padded(grid_, m, rbuf, out.values());
    for (double& v : out.values())
        v *= scale;
    fftw_free(rbuf);
    fftw_free(cbuf);
    return out;
}

double RieszKernel::quadratic_form(const Field& g) const {
    const Field conv = convolve(g);
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        s += conv[i] * g[i];
    return s * grid_.cell_volume();
}

double RieszKernel::quadratic_form_spectral(const Field& g) const {
    if (!(g.grid() == grid_))
        throw GridMismatch("quadratic_form: field grid does not match kernel grid");
    const int m = padded_n_;
    const std::size_t real_size = plans_->real_size;
    const std::size_t cplx_size = plans_->cplx_size;
    double* rbuf = fftw_alloc_real(real_size);
    fftw_complex* cbuf = fftw_alloc_complex(cplx_size);
    if (!rbuf || !cbuf) {
        fftw_free(rbuf);
        fftw_free(cbuf);
        throw Error("fftw allocation failed");
    }
    scatter_into_padded(grid_, g.values(), m, rbuf, real_size);
    fftw_execute_dft_r2c(plans_->forward, rbuf, cbuf);
    const std::size_t last = std::size_t(m) / 2 + 1;
    double acc = 0.0;
    for (std::size_t k = 0; k < cplx_size; ++k) {
        const std::size_t klast = k % last;
        const double w = (klast == 0 || klast == last - 1) ? 1.0 : 2.0;
        acc += w * multiplier_[k] *
               (cbuf[k][0] * cbuf[k][0] + cbuf[k][1] * cbuf[k][1]);
    }
    fftw_free(rbuf);
    fftw_free(cbuf);
    const double h_dim = grid_.cell_volume();
    return acc * h_dim * h_dim / double(real_size);
}

void RieszKernel::save(const std::filesystem::path& path) const {
    Grid padded(grid_.dim, padded_n_, 2.0 * grid_.half_width);
    Field sampled(padded, sample_kernel());
    write_field(sampled, path);
}

RieszKernel RieszKernel::load(const Grid& grid, double alpha,
                              const std::filesystem::path& path) {
    Field sampled = read_field(path);
    if (sampled.grid().dim != grid.dim || sampled.grid().n != 2 * grid.n ||
        sampled.grid().half_width != 2.0 * grid.half_width)
        throw GridMismatch("cached kernel does not match requested grid");
    return RieszKernel(grid, alpha, sampled.values());
}

std::filesystem::path RieszKernel::cache_path(const std::filesystem::path& dir,
                                              const Grid& grid, double alpha) {
    std::ostringstream name;
    name.precision(17);
    name << "riesz_d" << grid.dim << "_n" << grid.n << "_L" << grid.half_width
         << "_a" << alpha << ".chqf";
    return dir / name.str();
}

} // namespace choquard
