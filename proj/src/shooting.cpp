#include "choquard/shooting.hpp"

#include "choquard/errors.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace choquard {

namespace {

constexpr double kRadiusMax = 30.0;
constexpr double kStartRadius = 1e-3;

struct State {
    double u, du, v, dv;
};

struct Shot {
    bool crossed = false;     // u went negative
    double tail_c0 = 0.0;     // v + r v' where |u| is smallest
    double tail_r = 0.0;
    double min_abs_u = 0.0;
};

class RadialSystem {
  public:
    RadialSystem(double p, double h) : p_(p), h_(h) {}

    double F(double s) const { return std::pow(std::abs(s), p_) / p_; }
    double f(double s) const {
        return s == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(s), p_ - 1.0), s);
    }

    State derivative(double r, const State& y) const {
        return {y.du, -2.0 / r * y.du + y.u - y.v * f(y.u), y.dv,
                -2.0 / r * y.dv - F(y.u)};
    }

    State taylor_start(double a, double b) const {
        const double cu = (a - b * f(a)) / 6.0;
        const double cv = -F(a) / 6.0;
        const double r = kStartRadius;
        return {a + cu * r * r, 2.0 * cu * r, b + cv * r * r, 2.0 * cv * r};
    }

    /// RK4 march with crossing/blow-up classification; optionally records the
    /// trajectory (with u') truncated at the point of smallest |u|.
    Shot integrate(double a, double b, std::vector<RadialSample>* profile = nullptr,
                   std::vector<double>* slopes = nullptr) const {
        State y = taylor_start(a, b);
        double r = kStartRadius;
        const double blow = 3.0 * std::abs(a) + 1.0;
        Shot shot;
        shot.min_abs_u = std::abs(y.u);
        shot.tail_c0 = y.v + r * y.dv;
        shot.tail_r = r;
        std::size_t best_index = 1;
        if (profile) {
            profile->clear();
            profile->push_back({0.0, a, b});
            profile->push_back({r, y.u, y.v});
            if (slopes) {
                slopes->clear();
                slopes->push_back(0.0);
                slopes->push_back(y.du);
            }
        }
        while (r < kRadiusMax) {
            const State k1 = derivative(r, y);
            const State y2{y.u + 0.5 * h_ * k1.u, y.du + 0.5 * h_ * k1.du,
                           y.v + 0.5 * h_ * k1.v, y.dv + 0.5 * h_ * k1.dv};
            const State k2 = derivative(r + 0.5 * h_, y2);
            const State y3{y.u + 0.5 * h_ * k2.u, y.du + 0.5 * h_ * k2.du,
                           y.v + 0.5 * h_ * k2.v, y.dv + 0.5 * h_ * k2.dv};
            const State k3 = derivative(r + 0.5 * h_, y3);
            const State y4{y.u + h_ * k3.u, y.du + h_ * k3.du, y.v + h_ * k3.v,
                           y.dv + h_ * k3.dv};
            const State k4 = derivative(r + h_, y4);
            y.u += h_ / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
            y.du += h_ / 6.0 * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
            y.v += h_ / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
            y.dv += h_ / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
            r += h_;
            if (profile) {
                profile->push_back({r, y.u, y.v});
                if (slopes)
                    slopes->push_back(y.du);
            }
            if (std::abs(y.u) < shot.min_abs_u) {
                shot.min_abs_u = std::abs(y.u);
                shot.tail_c0 = y.v + r * y.dv;
                shot.tail_r = r;
                best_index = profile ? profile->size() : 0;
            }
            if (y.u < 0.0) {
                shot.crossed = true;
                break;
            }
            if (y.u > blow)
                break;
        }
        if (profile) {
            profile->resize(std::max<std::size_t>(best_index, 2));
            if (slopes)
                slopes->resize(profile->size());
        }
        return shot;
    }

  private:
    double p_, h_;
};

/// Threshold amplitude: the last transition (in a) from crossing trajectories
/// to positive ones. Below it u dives through zero, above it u turns back up.
std::optional<std::pair<double, double>> critical_amplitude(const RadialSystem& sys,
                                                            double b, double a_lo,
                                                            double a_hi, int scan_points,
                                                            int bisect_iters) {
    std::vector<double> grid(static_cast<std::size_t>(scan_points));
    const double la = std::log(a_lo), lb = std::log(a_hi);
    for (int i = 0; i < scan_points; ++i)
        grid[std::size_t(i)] = std::exp(la + (lb - la) * i / double(scan_points - 1));
    std::vector<bool> crossed(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        crossed[i] = sys.integrate(grid[i], b).crossed;
    int edge = -1;
    for (int i = int(grid.size()) - 2; i >= 0; --i) {
        if (crossed[std::size_t(i)] && !crossed[std::size_t(i) + 1]) {
            edge = i;
            break;
        }
    }
    if (edge < 0)
        return std::nullopt;
    double lo = grid[std::size_t(edge)], hi = grid[std::size_t(edge) + 1];
    for (int it = 0; it < bisect_iters; ++it) {
        const double mid = 0.5 * (lo + hi);
        (sys.integrate(mid, b).crossed ? lo : hi) = mid;
    }
    return std::make_pair(lo, hi);
}

} // namespace

ShootingResult shooting_oracle(double p, double tol) {
    if (!(p > 5.0 / 3.0 && p < 5.0))
        throw ConfigInvalid("shooting_oracle requires p in (5/3, 5)");
    if (!(tol > 0.0))
        throw ConfigInvalid("shooting_oracle requires tol > 0");
    const double h_final = std::clamp(tol, 2e-4, 1e-3);
    const RadialSystem sys(p, std::max(h_final, 1.25e-3));

    // outer bracket on b = v(0) via the sign of the v-tail constant
    auto tail_at = [&](double b, double a_lo, double a_hi,
                       int scan) -> std::optional<std::pair<double, double>> {
        const auto edge = critical_amplitude(sys, b, a_lo, a_hi, scan, 44);
        if (!edge)
            return std::nullopt;
        const double a = 0.5 * (edge->first + edge->second);
        const Shot shot = sys.integrate(a, b);
        return std::make_pair(shot.tail_c0, a);
    };

    double b_lo = 0.0, b_hi = 0.0, c_lo = 0.0;
    double a_seed = 0.0;
    {
        std::optional<std::pair<double, double>> prev;
        double prev_b = 0.0;
        for (int i = 0; i < 40; ++i) {
            const double b = 1.05 * std::pow(8.0 / 1.05, i / 39.0);
            const auto tail = tail_at(b, 5e-2, 4e2, 72);
            if (!tail)
                continue;
            if (prev && std::signbit(prev->first) != std::signbit(tail->first)) {
                b_lo = prev_b;
                b_hi = b;
                c_lo = prev->first;
                a_seed = tail->second;
                break;
            }
            prev = tail;
            prev_b = b;
        }
        if (b_hi == 0.0)
            throw ShootingFailed("no sign change of the potential tail in v(0)");
    }
    double a_star = a_seed;
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (b_lo + b_hi);
        const auto tail = tail_at(mid, std::max(5e-2, a_star / 3.0), a_star * 3.0, 32);
        if (!tail)
            throw ShootingFailed("lost the amplitude bracket during refinement");
        a_star = tail->second;
        if (std::signbit(tail->first) == std::signbit(c_lo))
            b_lo = mid;
        else
            b_hi = mid;
    }
    const double b_star = 0.5 * (b_lo + b_hi);
    // final pass at full resolution
    const RadialSystem fine(p, h_final);
    const auto edge = critical_amplitude(fine, b_star, std::max(5e-2, a_star / 2.0),
                                         a_star * 2.0, 32, 52);
    if (!edge)
        throw ShootingFailed("lost the amplitude bracket at the final solve");
    a_star = 0.5 * (edge->first + edge->second);

    ShootingResult res;
    res.u0 = a_star;
    res.v0 = b_star;
    std::vector<double> slopes;
    fine.integrate(a_star, b_star, &res.profile, &slopes);

    // action integrals by trapezoid over the recorded profile
    double A = 0.0, B = 0.0, C = 0.0;
    for (std::size_t i = 0; i + 1 < res.profile.size(); ++i) {
        const auto& s0 = res.profile[i];
        const auto& s1 = res.profile[i + 1];
        const double w0 = 4.0 * M_PI * s0.r * s0.r;
        const double w1 = 4.0 * M_PI * s1.r * s1.r;
        const double dr = s1.r - s0.r;
        A += 0.5 * dr * (slopes[i] * slopes[i] * w0 + slopes[i + 1] * slopes[i + 1] * w1);
        B += 0.5 * dr * (s0.u * s0.u * w0 + s1.u * s1.u * w1);
        C += 0.5 * dr * (s0.v * fine.F(s0.u) * w0 + s1.v * fine.F(s1.u) * w1);
    }
    res.dirichlet = A;
    res.mass = B;
    res.interaction = C;
    res.action = 0.5 * (A + B) - 0.5 * C;
    return res;
}

} // namespace choquard
