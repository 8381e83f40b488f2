#pragma once

#include "choquard/field.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

namespace choquard {

/// Normalization constant of the Riesz kernel,
/// Gamma((N-a)/2) / (Gamma(a/2) pi^(N/2) 2^a).
double riesz_normalization(int dim, double alpha);

/// Renormalized Epstein zeta of the unit lattice Z^dim at exponent s,
///   Z(s) = sum'_{j} |j|^-s  -  integral |x|^-s dx
/// in the analytic-continuation sense, evaluated by Ewald summation with
/// splitting parameter `lambda` (the value is lambda-independent).
double epstein_zeta_renormalized(int dim, double s, double lambda = 1.0);

/// Effective kernel weight for the singular cell: the value that makes the
/// node-sampled lattice sum of the kernel reproduce the local integral of
/// I_alpha against slowly varying densities. Equals
/// -riesz_normalization * Z(dim-alpha) * h^(alpha-dim).
double self_interaction_weight(int dim, double alpha, double h);

/// Riesz potential operator I_alpha * (.) realized as a free-space
/// convolution on a zero-padded grid with a precomputed spectral multiplier.
class RieszKernel {
  public:
    RieszKernel(const Grid& grid, double alpha);
    ~RieszKernel();
    RieszKernel(RieszKernel&&) noexcept;
    RieszKernel& operator=(RieszKernel&&) noexcept;
    RieszKernel(const RieszKernel&) = delete;
    RieszKernel& operator=(const RieszKernel&) = delete;

    const Grid& grid() const { return grid_; }
    double alpha() const { return alpha_; }
    int padded_n() const { return padded_n_; }
    double singular_weight() const { return singular_weight_; }
    const std::vector<double>& spectral_multiplier() const { return multiplier_; }

    /// Free-space discrete convolution I_alpha * g (zero padded, alias free).
    Field convolve(const Field& g) const;

    /// integrate(convolve(g) * g).
    double quadratic_form(const Field& g) const;

    /// Same value as quadratic_form up to roundoff, via Parseval on the
    /// padded grid; costs a single forward transform.
    double quadratic_form_spectral(const Field& g) const;

    /// Writes the sampled real-space kernel (a field on the padded grid) so
    /// the multiplier can be rebuilt bit-identically with one transform.
    void save(const std::filesystem::path& path) const;
    static RieszKernel load(const Grid& grid, double alpha,
                            const std::filesystem::path& path);

    /// Cache file name for (dim, n, L, alpha).
    static std::filesystem::path cache_path(const std::filesystem::path& dir,
                                            const Grid& grid, double alpha);

  private:
    struct Plans;
    RieszKernel(const Grid& grid, double alpha, std::vector<double> sampled);

    std::vector<double> sample_kernel() const;

    Grid grid_;
    double alpha_;
    int padded_n_ = 0;
    double singular_weight_ = 0.0;
    std::vector<double> multiplier_; // real r2c-layout multiplier
    std::unique_ptr<Plans> plans_;
};

} // namespace choquard
