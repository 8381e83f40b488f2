#include "choquard/solver.hpp"

#include "choquard/errors.hpp"
#include "choquard/symmetry.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <sstream>

namespace choquard {

const char* to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::Converged:
        return "Converged";
    case SolveStatus::NoGroundstate:
        return "NoGroundstate";
    case SolveStatus::MaxIterations:
        return "MaxIterations";
    }
    return "unknown";
}

void SolverConfig::validate() const {
    if (dim < 3)
        throw ConfigInvalid("solver: dim must be >= 3");
    if (!(alpha > 0.0 && alpha < dim))
        throw ConfigInvalid("solver: alpha must satisfy 0 < alpha < dim");
    if (n < 8 || n % 2 != 0)
        throw ConfigInvalid("solver: n must be even and >= 8");
    if (!(half_width > 0.0))
        throw ConfigInvalid("solver: half_width must be positive");
    if (!(tol_pohozaev > 0.0) || !(tol_gradient > 0.0))
        throw ConfigInvalid("solver: tolerances must be positive");
    if (max_iterations < 1)
        throw ConfigInvalid("solver: max_iterations must be >= 1");
    if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
        throw ConfigInvalid("solver: backtrack_factor must be in (0, 1)");
    if (!(initial_step > 0.0))
        throw ConfigInvalid("solver: initial_step must be positive");
    if (max_backtracks < 1 || rearrange_interval < 1 || recentre_interval < 1)
        throw ConfigInvalid("solver: intervals must be >= 1");
}

std::string SolveReport::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"status\":\"" << to_string(status) << "\""
       << ",\"A\":" << breakdown.dirichlet << ",\"B\":" << breakdown.mass
       << ",\"C\":" << breakdown.interaction << ",\"energy\":" << breakdown.energy()
       << ",\"pohozaev\":" << breakdown.pohozaev()
       << ",\"reduced\":" << breakdown.reduced()
       << ",\"pohozaev_residual\":" << pohozaev_residual
       << ",\"gradient_residual\":" << gradient_residual
       << ",\"iterations\":" << iterations
       << ",\"b_estimate\":" << mountain_pass_level
       << ",\"stop_reason\":\"" << stop_reason << "\""
       << ",\"diagnostics\":{\"concentration\":" << diagnostics.concentration
       << ",\"boundary_mass\":" << diagnostics.boundary_mass << "}}";
    return os.str();
}

namespace {

/// FFT workspace on the unpadded periodic grid; applies the inverse of the
/// linear part (-Lap + 1) as a diagonal operator in frequency space.
class Preconditioner {
  public:
    explicit Preconditioner(const Grid& g) : grid_(g) {
        const int dim = g.dim, n = g.n;
        std::vector<int> dims(dim, n);
        real_size_ = g.node_count();
        cplx_size_ = real_size_ / std::size_t(n) * (std::size_t(n) / 2 + 1);
        rbuf_ = fftw_alloc_real(real_size_);
        cbuf_ = fftw_alloc_complex(cplx_size_);
        fwd_ = fftw_plan_dft_r2c(dim, dims.data(), rbuf_, cbuf_, FFTW_ESTIMATE);
        inv_ = fftw_plan_dft_c2r(dim, dims.data(), cbuf_, rbuf_, FFTW_ESTIMATE);
        if (!rbuf_ || !cbuf_ || !fwd_ || !inv_)
            throw Error("fftw setup failed in solver preconditioner");
        // per-axis symbol of the fourth-order first-derivative stencil
        std::vector<double> sym(n);
        for (int k = 0; k < n; ++k) {
            const double th = 2.0 * M_PI * k / n;
            const double d = (8.0 * std::sin(th) - std::sin(2.0 * th)) /
                             (6.0 * g.spacing);
            sym[std::size_t(k)] = d * d;
        }
        denom_.resize(cplx_size_);
        std::vector<int> idx(dim, 0);
        const int last = n / 2 + 1;
        for (std::size_t k = 0; k < cplx_size_; ++k) {
            double s = 1.0;
            for (int d = 0; d < dim; ++d)
                s += sym[std::size_t(idx[d])];
            denom_[k] = s;
            int d = dim - 1;
            while (true) {
                const int limit = (d == dim - 1) ? last : n;
                if (++idx[d] < limit)
                    break;
                idx[d] = 0;
                if (--d < 0)
                    break;
            }
        }
    }

    ~Preconditioner() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(inv_);
        fftw_free(rbuf_);
        fftw_free(cbuf_);
    }

    Field apply(const Field& g) const {
        std::copy(g.values().begin(), g.values().end(), rbuf_);
        fftw_execute(fwd_);
        for (std::size_t k = 0; k < cplx_size_; ++k) {
            cbuf_[k][0] /= denom_[k];
            cbuf_[k][1] /= denom_[k];
        }
        fftw_execute(inv_);
        Field out = Field::zeros(grid_);
        const double scale = 1.0 / double(real_size_);
        for (std::size_t i = 0; i < real_size_; ++i)
            out[i] = rbuf_[i] * scale;
        return out;
    }

  private:
    Grid grid_;
    std::size_t real_size_ = 0, cplx_size_ = 0;
    double* rbuf_ = nullptr;
    fftw_complex* cbuf_ = nullptr;
    fftw_plan fwd_ = nullptr;
    fftw_plan inv_ = nullptr;
    std::vector<double> denom_;
};

struct Workspace {
    const SolverConfig& cfg;
    const RieszKernel& kernel;
    const Nonlinearity& nl;
    Preconditioner precond;
    double cell;

    Workspace(const SolverConfig& c, const RieszKernel& k, const Nonlinearity& nl_)
        : cfg(c), kernel(k), nl(nl_), precond(k.grid()), cell(k.grid().cell_volume()) {}

    double inner(const Field& a, const Field& b) const {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            s += a[i] * b[i];
        return s * cell;
    }

    double norm(const Field& a) const { return std::sqrt(inner(a, a)); }

    EnergyBreakdown fast_breakdown(const Field& u) const {
        EnergyBreakdown e;
        e.dim = cfg.dim;
        e.alpha = cfg.alpha;
        e.dirichlet = dirichlet_energy(u);
        double b = 0.0;
        for (double v : u.values())
            b += v * v;
        e.mass = b * cell;
        e.interaction = kernel.quadratic_form_spectral(apply_antiderivative(u, nl));
        return e;
    }

    Field gradient(const Field& u) const { return gradient_action(u, kernel, nl); }

    /// Ray-maximum of the closed-form path energy, or nullopt when the ray
    /// has no interior maximum (C <= 0 or A = 0).
    std::optional<std::pair<double, double>> projected_energy(const EnergyBreakdown& e) const {
        if (!(e.interaction > 0.0) || !(e.dirichlet > 0.0))
            return std::nullopt;
        const double tau = optimal_dilation(e);
        return std::make_pair(path_energy(e, tau), tau);
    }

    /// -x . grad(u) with the energy stencil: tangent of the dilation family.
    Field dilation_direction(const Field& u) const {
        const Grid& g = u.grid();
        Field out = Field::zeros(g);
        std::vector<double> d;
        for (int axis = 0; axis < g.dim; ++axis) {
            detail::axis_derivative4(g, u.values(), axis, d);
            std::size_t inner_sz = 1;
            for (int dd = axis + 1; dd < g.dim; ++dd)
                inner_sz *= std::size_t(g.n);
            const std::size_t outer = g.node_count() / (inner_sz * std::size_t(g.n));
            for (std::size_t o = 0; o < outer; ++o)
                for (int i = 0; i < g.n; ++i) {
                    const double x = g.coord(i);
                    double* dst = out.values().data() +
                                  (o * std::size_t(g.n) + std::size_t(i)) * inner_sz;
                    const double* src = d.data() +
                                        (o * std::size_t(g.n) + std::size_t(i)) * inner_sz;
                    for (std::size_t kk = 0; kk < inner_sz; ++kk)
                        dst[kk] -= x * src[kk];
                }
        }
        return out;
    }
};

Field default_gaussian_seed(const Grid& grid, const Workspace& ws) {
    const double width0 = 1.5, amp = 2.0;
    auto gaussian = [&](double w) {
        return make_field(grid, [&](const std::vector<double>& x) {
            double r2 = 0.0;
            for (double c : x)
                r2 += c * c;
            return amp * std::exp(-r2 / (2.0 * w * w));
        });
    };
    Field u = gaussian(width0);
    const EnergyBreakdown e = ws.fast_breakdown(u);
    const auto proj = ws.projected_energy(e);
    if (!proj)
        return u;
    // dilating a gaussian only rescales its width, so project analytically
    const double w = std::clamp(proj->second * width0, 0.25, grid.half_width / 3.0);
    return gaussian(w);
}

struct LoopState {
    Field u;
    int iterations = 0;
    std::string failure; // detector name when a NoGroundstate trigger fired
    bool stalled = false;
};

/// Phase A: preconditioned descent on the ray-maximum energy with
/// re-projection onto the Pohozaev manifold after each accepted step.
void descend_projected(Workspace& ws, LoopState& st) {
    const SolverConfig& cfg = ws.cfg;
    double step_prev = cfg.initial_step;
    double prev_objective = 0.0;
    bool have_prev = false;
    int plateau = 0;
    int projection_failures = 0;
    double best_resG = 1e300;
    int resG_stale = 0;

    for (; st.iterations < cfg.max_iterations; ++st.iterations) {
        const EnergyBreakdown e = ws.fast_breakdown(st.u);
        if (e.mass < 1e-8) {
            st.failure = "vanishing";
            return;
        }
        const double bm = boundary_mass_fraction(st.u);
        if (bm > 1e-4) {
            st.failure = "boundary_escape";
            return;
        }
        double umax2 = 0.0;
        for (double v : st.u.values())
            umax2 = std::max(umax2, v * v);
        if (umax2 * ws.cell / e.mass > 0.9) {
            st.failure = "concentration_collapse";
            return;
        }
        const auto proj = ws.projected_energy(e);
        if (!proj) {
            if (++projection_failures >= 50) {
                st.failure = "projection_failed";
                return;
            }
            // fall through with a plain descent step on the raw energy
        } else {
            projection_failures = 0;
        }
        const Field g = ws.gradient(st.u);
        const double resP = std::abs(e.pohozaev()) / (e.dirichlet + e.mass);
        const double resG = ws.norm(g) / std::sqrt(e.mass);
        const double objective = proj ? proj->first : e.energy();
        if (cfg.observer)
            cfg.observer({st.iterations, 'A', objective, resP, resG, step_prev,
                          proj ? proj->second : 0.0});
        if (resP <= cfg.tol_pohozaev && resG <= cfg.tol_gradient)
            return;
        if (have_prev &&
            std::abs(prev_objective - objective) <
                1e-9 * std::max(1.0, std::abs(objective)))
            ++plateau;
        else
            plateau = 0;
        prev_objective = objective;
        have_prev = true;
        // hand over to the critical-point polish once the projected descent
        // stops making progress near the critical point; far from it a stall
        // is a stall
        if (resG < 0.95 * best_resG) {
            best_resG = resG;
            resG_stale = 0;
        } else {
            ++resG_stale;
        }
        const bool near_critical = resG <= std::max(0.03, 10.0 * cfg.tol_gradient);
        if (plateau >= 3 || (resP <= cfg.tol_pohozaev && resG_stale >= 6)) {
            if (near_critical) {
                st.stalled = true;
                return;
            }
            plateau = 0;
            resG_stale = 0;
            best_resG = resG;
        }

        Field d = ws.precond.apply(g);
        const double dg = ws.inner(d, g);
        const double dn = ws.norm(d);
        const double un = std::sqrt(e.mass);
        double dsup = 0.0, usup = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            dsup = std::max(dsup, std::abs(d[i]));
            usup = std::max(usup, std::abs(st.u[i]));
        }
        double s = std::min(cfg.initial_step, 2.0 * step_prev);
        if (s * dn > cfg.trust_fraction * un)
            s = cfg.trust_fraction * un / dn;
        // amplitude overshoot guard: the peak may not jump by more than 25%
        if (dsup > 0.0 && s * dsup > 0.25 * usup)
            s = 0.25 * usup / dsup;
        bool accepted = false;
        for (int bt = 0; bt < cfg.max_backtracks; ++bt) {
            Field w = st.u;
            for (std::size_t i = 0; i < w.size(); ++i)
                w[i] -= s * d[i];
            const EnergyBreakdown ew = ws.fast_breakdown(w);
            const auto pw = ws.projected_energy(ew);
            const double projected_mass =
                pw ? std::pow(pw->second, cfg.dim) * ew.mass : 0.0;
            const bool mass_continuous =
                projected_mass >= 0.5 * e.mass && projected_mass <= 2.0 * e.mass;
            if (pw && mass_continuous &&
                pw->first <= objective - cfg.armijo_constant * s * dg) {
                const double tau = pw->second;
                st.u = std::abs(tau - 1.0) > cfg.dilation_deadband ? dilate(w, tau)
                                                                   : std::move(w);
                accepted = true;
                step_prev = s;
                break;
            }
            s *= cfg.backtrack_factor;
        }
        if (!accepted) {
            st.stalled = true;
            return;
        }
        if ((st.iterations + 1) % cfg.recentre_interval == 0)
            st.u = recentre(st.u);
        if (cfg.symmetric_mode && ws.nl.is_odd_f &&
            (st.iterations + 1) % cfg.rearrange_interval == 0) {
            Field sym = schwarz_rearrange(st.u);
            const auto ps = ws.projected_energy(ws.fast_breakdown(sym));
            const auto pc = ws.projected_energy(ws.fast_breakdown(st.u));
            if (ps && pc && ps->first <= pc->first)
                st.u = std::move(sym);
        }
    }
}

/// Phase B: Newton on the span of the amplitude and dilation directions (the
/// unstable block of the mountain-pass Hessian) plus preconditioned descent
/// on the orthogonal complement, driving the full gradient to zero.
void polish_critical_point(Workspace& ws, LoopState& st) {
    const SolverConfig& cfg = ws.cfg;
    Field g = ws.gradient(st.u);
    const int max_outer = 60;
    for (int outer = 0; outer < max_outer; ++outer, ++st.iterations) {
        const EnergyBreakdown e = ws.fast_breakdown(st.u);
        if (e.mass < 1e-8) {
            st.failure = "vanishing";
            return;
        }
        if (boundary_mass_fraction(st.u) > 1e-4) {
            st.failure = "boundary_escape";
            return;
        }
        const double resP = std::abs(e.pohozaev()) / (e.dirichlet + e.mass);
        const double resG = ws.norm(g) / std::sqrt(e.mass);
        if (cfg.observer)
            cfg.observer({st.iterations, 'B', e.energy(), resP, resG, 0.0, 1.0});
        if (resP <= cfg.tol_pohozaev && resG <= cfg.tol_gradient)
            return;

        const double unorm = std::sqrt(e.mass);
        Field e1 = st.u;
        for (double& v : e1.values())
            v /= unorm;
        Field e2 = ws.dilation_direction(st.u);
        {
            const double c = ws.inner(e2, e1);
            for (std::size_t i = 0; i < e2.size(); ++i)
                e2[i] -= c * e1[i];
            const double n2 = ws.norm(e2);
            if (n2 < 1e-14) {
                st.stalled = true;
                return;
            }
            for (double& v : e2.values())
                v /= n2;
        }

        // 2x2 in-plane Hessian block by directional differencing
        const double eps = 1e-5 * unorm;
        auto perturbed_gradient = [&](const Field& dir) {
            Field w = st.u;
            for (std::size_t i = 0; i < w.size(); ++i)
                w[i] += eps * dir[i];
            Field gw = ws.gradient(w);
            for (std::size_t i = 0; i < gw.size(); ++i)
                gw[i] = (gw[i] - g[i]) / eps;
            return gw;
        };
        const Field h1 = perturbed_gradient(e1);
        const Field h2 = perturbed_gradient(e2);
        const double m11 = ws.inner(h1, e1), m12 = ws.inner(h2, e1);
        const double m21 = ws.inner(h1, e2), m22 = ws.inner(h2, e2);
        const double r1 = ws.inner(g, e1), r2 = ws.inner(g, e2);
        const double det = m11 * m22 - m12 * m21;
        double c1 = 0.0, c2 = 0.0;
        if (std::abs(det) > 1e-14 * (std::abs(m11 * m22) + std::abs(m12 * m21) + 1e-30)) {
            c1 = (-r1 * m22 + r2 * m12) / det;
            c2 = (-m11 * r2 + m21 * r1) / det;
        }
        const double cap = 0.05 * unorm;
        const double cn = std::hypot(c1, c2);
        if (cn > cap) {
            c1 *= cap / cn;
            c2 *= cap / cn;
        }
        bool moved = false;
        if (cn > 0.0) {
            const double plane0 = r1 * r1 + r2 * r2;
            double t = 1.0;
            for (int bt = 0; bt < 12; ++bt) {
                Field w = st.u;
                for (std::size_t i = 0; i < w.size(); ++i)
                    w[i] += t * (c1 * e1[i] + c2 * e2[i]);
                Field gw = ws.gradient(w);
                const double p1 = ws.inner(gw, e1), p2 = ws.inner(gw, e2);
                if (p1 * p1 + p2 * p2 < plane0) {
                    st.u = std::move(w);
                    g = std::move(gw);
                    moved = true;
                    break;
                }
                t *= 0.5;
            }
        }

        for (int sub = 0; sub < 2; ++sub) {
            Field gp = g;
            const double a1 = ws.inner(g, e1), a2 = ws.inner(g, e2);
            for (std::size_t i = 0; i < gp.size(); ++i)
                gp[i] -= a1 * e1[i] + a2 * e2[i];
            const double gp0 = ws.inner(gp, gp);
            if (gp0 < 1e-28)
                break;
            Field d = ws.precond.apply(gp);
            const double b1 = ws.inner(d, e1), b2 = ws.inner(d, e2);
            for (std::size_t i = 0; i < d.size(); ++i)
                d[i] -= b1 * e1[i] + b2 * e2[i];
            double s = 1.0;
            bool accepted = false;
            for (int bt = 0; bt < 25; ++bt) {
                Field w = st.u;
                for (std::size_t i = 0; i < w.size(); ++i)
                    w[i] -= s * d[i];
                Field gw = ws.gradient(w);
                Field gwp = gw;
                const double q1 = ws.inner(gw, e1), q2 = ws.inner(gw, e2);
                for (std::size_t i = 0; i < gwp.size(); ++i)
                    gwp[i] -= q1 * e1[i] + q2 * e2[i];
                if (ws.inner(gwp, gwp) < gp0) {
                    st.u = std::move(w);
                    g = std::move(gw);
                    accepted = true;
                    moved = true;
                    break;
                }
                s *= 0.5;
            }
            if (!accepted)
                break;
        }
        if (!moved) {
            st.stalled = true;
            return;
        }
    }
}

SolveReport finish(Workspace& ws, LoopState& st) {
    SolveReport rep{std::move(st.u), {}, 0, 0, 0, st.iterations,
                    SolveStatus::MaxIterations, "", {}};
    rep.breakdown = breakdown(rep.solution, ws.kernel, ws.nl);
    const Field g = ws.gradient(rep.solution);
    rep.pohozaev_residual = std::abs(rep.breakdown.pohozaev()) /
                            (rep.breakdown.dirichlet + rep.breakdown.mass);
    rep.gradient_residual = ws.norm(g) / std::max(std::sqrt(rep.breakdown.mass), 1e-300);
    rep.mountain_pass_level = rep.breakdown.energy();
    rep.diagnostics.boundary_mass = boundary_mass_fraction(rep.solution);
    const double p_mid = 0.5 * (2.0 + 2.0 * ws.cfg.dim / double(ws.cfg.dim - 2));
    rep.diagnostics.concentration =
        concentration_function(rep.solution, p_mid, 1.0);
    if (!st.failure.empty()) {
        rep.status = SolveStatus::NoGroundstate;
        rep.stop_reason = st.failure;
    } else if (rep.pohozaev_residual <= ws.cfg.tol_pohozaev &&
               rep.gradient_residual <= ws.cfg.tol_gradient) {
        rep.status = SolveStatus::Converged;
        rep.stop_reason = "residual_tolerances_met";
        double umax = 0.0, shell = 0.0;
        const Grid& grid = rep.solution.grid();
        std::vector<int> idx(grid.dim, 0);
        for (std::size_t flat = 0; flat < rep.solution.size(); ++flat) {
            const double a = std::abs(rep.solution[flat]);
            umax = std::max(umax, a);
            for (int d = 0; d < grid.dim; ++d)
                if (idx[d] == 0 || idx[d] == grid.n - 1) {
                    shell = std::max(shell, a);
                    break;
                }
            for (int d = grid.dim - 1; d >= 0; --d) {
                if (++idx[d] < grid.n)
                    break;
                idx[d] = 0;
            }
        }
        if (umax > 0.0 && shell > 1e-8 * umax)
            std::fprintf(stderr,
                         "choquard: warning: boundary decay %.2e relative "
                         "(above 1e-8); consider a larger half-width\n",
                         shell / umax);
    } else {
        rep.status = SolveStatus::MaxIterations;
        rep.stop_reason = st.stalled ? "stalled_above_tolerance" : "max_iterations";
    }
    return rep;
}

SolveReport run_solve(Workspace& ws, Field init) {
    const SolverConfig& cfg = ws.cfg;
    LoopState st{std::move(init), 0, "", false};
    descend_projected(ws, st);
    if (st.failure.empty()) {
        const EnergyBreakdown e = ws.fast_breakdown(st.u);
        const Field g = ws.gradient(st.u);
        const double resP = std::abs(e.pohozaev()) / (e.dirichlet + e.mass);
        const double resG = ws.norm(g) / std::sqrt(e.mass);
        const bool near_critical = resG <= std::max(0.03, 10.0 * cfg.tol_gradient);
        if ((resP > cfg.tol_pohozaev || resG > cfg.tol_gradient) && near_critical) {
            st.stalled = false;
            polish_critical_point(ws, st);
        }
    }
    return finish(ws, st);
}

} // namespace

Field project_to_pohozaev(const Field& u, const RieszKernel& k, const Nonlinearity& nl) {
    const EnergyBreakdown e = breakdown(u, k, nl);
    const double tau = optimal_dilation(e); // throws NoInteriorMax when C <= 0
    return dilate(u, tau);
}

namespace {

RieszKernel make_kernel(const SolverConfig& cfg, const Grid& grid) {
    if (!cfg.kernel_cache_dir.empty()) {
        const auto path = RieszKernel::cache_path(cfg.kernel_cache_dir, grid, cfg.alpha);
        if (std::filesystem::exists(path)) {
            try {
                return RieszKernel::load(grid, cfg.alpha, path);
            } catch (const Error&) {
                // stale or corrupt cache entry; rebuild below
            }
        }
        RieszKernel k(grid, cfg.alpha);
        k.save(path);
        return k;
    }
    return RieszKernel(grid, cfg.alpha);
}

} // namespace

SolveReport solve(const SolverConfig& cfg) {
    cfg.validate();
    const Grid grid = cfg.make_grid();
    const RieszKernel kernel = make_kernel(cfg, grid);
    const Nonlinearity nl = parse_nonlinearity(cfg.nonlinearity);
    if (!growth_envelope_finite(nl))
        throw NonlinearityRejected("nonlinearity fails the growth screening");
    Workspace ws(cfg, kernel, nl);
    Field seed = default_gaussian_seed(grid, ws);
    return run_solve(ws, std::move(seed));
}

SolveReport solve(const SolverConfig& cfg, const Field& init) {
    cfg.validate();
    if (!(init.grid() == cfg.make_grid()))
        throw GridMismatch("solve: init field grid does not match config");
    init.check_finite();
    const RieszKernel kernel = make_kernel(cfg, init.grid());
    const Nonlinearity nl = parse_nonlinearity(cfg.nonlinearity);
    if (!growth_envelope_finite(nl))
        throw NonlinearityRejected("nonlinearity fails the growth screening");
    Workspace ws(cfg, kernel, nl);
    // start on the manifold like the default seed does
    EnergyBreakdown e = ws.fast_breakdown(init);
    Field start = init;
    if (e.interaction > 0.0 && e.dirichlet > 0.0) {
        const double tau = optimal_dilation(e);
        if (std::abs(tau - 1.0) > cfg.dilation_deadband)
            start = dilate(init, tau);
    }
    return run_solve(ws, std::move(start));
}

std::vector<PathSample> lift_to_path(const Field& u, const EnergyBreakdown& e,
                                     int samples) {
    (void)u; // the path is u(./tau); its energies come from the triple
    if (samples < 16)
        throw ConfigInvalid("lift_to_path requires samples >= 16");
    const double tau_star = optimal_dilation(e); // NoInteriorMax when C <= 0
    double tau_end = std::max(2.0 * tau_star, 2.0);
    int guard = 0;
    while (path_energy(e, tau_end) >= 0.0) {
        tau_end *= 2.0;
        if (++guard > 200)
            throw NoInteriorMax("lift_to_path: path energy never becomes negative");
    }
    std::vector<PathSample> out(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        const double tau = tau_end * i / double(samples - 1);
        out[std::size_t(i)] = {tau, i == 0 ? 0.0 : path_energy(e, tau)};
    }
    return out;
}

} // namespace choquard
