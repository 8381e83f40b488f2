#include "choquard/energy.hpp"
#include "choquard/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace choquard;

namespace {

constexpr double kPi = 3.14159265358979323846;

Field gaussian(const Grid& g, double inv_two_w2, double amp = 1.0) {
    return make_field(g, [&](const std::vector<double>& x) {
        double r2 = 0.0;
        for (double c : x)
            r2 += c * c;
        return amp * std::exp(-r2 * inv_two_w2);
    });
}

EnergyBreakdown triple(double a, double b, double c, int dim = 3, double alpha = 2.0) {
    EnergyBreakdown e;
    e.dirichlet = a;
    e.mass = b;
    e.interaction = c;
    e.dim = dim;
    e.alpha = alpha;
    return e;
}

} // namespace

TEST_CASE("breakdown of the zero field") {
    const Grid g(3, 16, 3.0);
    const RieszKernel k(g, 2.0);
    const Nonlinearity nl = power_nonlinearity(2.0);
    const EnergyBreakdown e = breakdown(Field::zeros(g), k, nl);
    CHECK(e.dirichlet == 0.0);
    CHECK(e.mass == 0.0);
    CHECK(e.interaction == 0.0);
    CHECK(e.energy() == 0.0);
}

TEST_CASE("gaussian interaction closed form") {
    // u = exp(-|x|^2/2), F(u) = u^2/2: C = pi sqrt(pi/2) / 8
    const Grid g(3, 128, 10.0);
    const RieszKernel k(g, 2.0);
    const Nonlinearity nl = power_nonlinearity(2.0);
    const EnergyBreakdown e = breakdown(gaussian(g, 0.5), k, nl);
    const double exact = kPi * std::sqrt(kPi / 2.0) / 8.0;
    CHECK(e.interaction == doctest::Approx(exact).epsilon(1e-2));
}

TEST_CASE("smoothed bump has positive interaction") {
    const Grid g(3, 32, 4.0);
    const RieszKernel k(g, 2.0);
    const Nonlinearity nl = power_nonlinearity(2.0);
    const Field bump = make_field(g, [](const std::vector<double>& x) {
        const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        return r2 < 1.0 ? 1.5 * std::exp(1.0 - 1.0 / (1.0 - r2)) : 0.0;
    });
    CHECK(breakdown(bump, k, nl).interaction > 0.0);
}

TEST_CASE("pohozaev and reduced identities") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(0.05, 4.0);
    for (int trial = 0; trial < 500; ++trial) {
        const int dim = 3 + trial % 3;
        const double alpha = dist(rng) * 0.6;
        const EnergyBreakdown e =
            triple(dist(rng), dist(rng), dist(rng), dim, alpha);
        // d/dtau path energy at tau=1 equals the Pohozaev value, exactly
        CHECK(path_energy_derivative(e, 1.0) == e.pohozaev());
        // energy - pohozaev/(N+alpha) equals the reduced formula to roundoff
        const double scale =
            std::abs(e.energy()) + std::abs(e.pohozaev()) + std::abs(e.reduced());
        CHECK(std::abs(e.energy() - e.pohozaev() / (dim + alpha) - e.reduced()) <=
              1e-14 * std::max(scale, 1.0));
    }
}

TEST_CASE("path energy closed forms") {
    const EnergyBreakdown e = triple(1.0, 1.0, 1.0);
    CHECK(path_energy(e, 1.0) == 0.5);
    CHECK_THROWS_AS(path_energy(e, 0.0), TauNonpositive);
    CHECK_THROWS_AS(path_energy(e, -1.0), TauNonpositive);

    SUBCASE("positive, increasing when C = 0") {
        const EnergyBreakdown free = triple(1.0, 1.0, 0.0);
        double prev = 0.0;
        for (double tau : {0.5, 1.0, 2.0, 4.0}) {
            const double val = path_energy(free, tau);
            CHECK(val > prev);
            prev = val;
        }
    }
}

TEST_CASE("optimal dilation") {
    SUBCASE("unit triple root of the quartic") {
        const double expected = std::sqrt((3.0 + std::sqrt(29.0)) / 10.0);
        const double tau = optimal_dilation(triple(1.0, 1.0, 1.0));
        CHECK(tau == doctest::Approx(expected).epsilon(1e-12));
        CHECK(path_energy(triple(1.0, 1.0, 1.0), tau) ==
              doctest::Approx(0.5198490052223094).epsilon(1e-12));
    }
    SUBCASE("tau = 1 at a Pohozaev-critical triple") {
        // choose C so that pohozaev() = 0: C = (A + 3B)/5 at N=3, alpha=2
        const EnergyBreakdown e = triple(2.0, 1.0, 1.0);
        CHECK(e.pohozaev() == 0.0);
        CHECK(optimal_dilation(e) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("no interior maximum without interaction") {
        CHECK_THROWS_AS(optimal_dilation(triple(1.0, 1.0, 0.0)), NoInteriorMax);
        CHECK_THROWS_AS(optimal_dilation(triple(1.0, 1.0, -1.0)), NoInteriorMax);
        CHECK_THROWS_AS(optimal_dilation(triple(0.0, 1.0, 1.0)), NoInteriorMax);
    }
}

TEST_CASE("augmented energy identities") {
    const Grid g(3, 24, 6.0);
    const RieszKernel k(g, 2.0);
    const Nonlinearity nl = power_nonlinearity(2.0);
    const Field v = gaussian(g, 0.7, 1.4);
    const EnergyBreakdown e = breakdown(v, k, nl);

    SUBCASE("sigma = 0 reproduces the energy and pohozaev exactly") {
        const auto aug = augmented_energy(0.0, v, k, nl);
        CHECK(aug.value == e.energy());
        CHECK(aug.d_sigma == e.pohozaev());
    }
    SUBCASE("sigma-derivative vanishes at log of the optimal dilation") {
        const double tau = optimal_dilation(e);
        const auto aug = augmented_energy(std::log(tau), v, k, nl);
        CHECK(std::abs(aug.d_sigma) <= 1e-10 * (e.dirichlet + e.mass));
    }
    SUBCASE("matches the dilated closed form at general sigma") {
        const double sigma = 0.37;
        const auto aug = augmented_energy(sigma, v, k, nl);
        CHECK(aug.value ==
              doctest::Approx(path_energy(e, std::exp(sigma))).epsilon(1e-15));
    }
}

TEST_CASE("gradient matches central finite differences of the energy") {
    const Grid g(3, 20, 6.0);
    const RieszKernel k(g, 2.0);
    for (const Nonlinearity& nl :
         {power_nonlinearity(2.0), power_nonlinearity(2.6),
          combined_power_nonlinearity(1.9, 2.4)}) {
        const Field u = gaussian(g, 0.6, 1.2);
        const Field grad = gradient_action(u, k, nl);
        std::mt19937_64 rng(23);
        std::normal_distribution<double> dist(0.0, 1.0);
        const double eps = 1e-4;
        double worst = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            const double cx = 0.8 * dist(rng), cy = 0.8 * dist(rng), cz = 0.8 * dist(rng);
            const Field phi = make_field(g, [&](const std::vector<double>& x) {
                const double dx = x[0] - cx, dy = x[1] - cy, dz = x[2] - cz;
                return std::exp(-(dx * dx + dy * dy + dz * dz));
            });
            Field up = u, um = u;
            for (std::size_t i = 0; i < u.size(); ++i) {
                up[i] += eps * phi[i];
                um[i] -= eps * phi[i];
            }
            const double fd = (breakdown(up, k, nl).energy() -
                               breakdown(um, k, nl).energy()) /
                              (2.0 * eps);
            const double ip = integrate_product(grad, phi);
            worst = std::max(worst, std::abs(fd - ip) / std::abs(ip));
        }
        CHECK(worst < 1e-5);
    }
}

TEST_CASE("gradient of the zero field vanishes") {
    const Grid g(3, 16, 3.0);
    const RieszKernel k(g, 2.0);
    const Nonlinearity nl = power_nonlinearity(2.0);
    const Field grad = gradient_action(Field::zeros(g), k, nl);
    for (double v : grad.values())
        CHECK(v == 0.0);
}

TEST_CASE("breakdown of a dilated field tracks the closed-form scaling") {
    const Grid g(3, 64, 12.0);
    const RieszKernel k(g, 2.0);
    const Nonlinearity nl = power_nonlinearity(2.0);
    const Field u = gaussian(g, 0.5, 1.3);
    const EnergyBreakdown e = breakdown(u, k, nl);
    const double tau = 1.35;
    const EnergyBreakdown ed = breakdown(dilate(u, tau), k, nl);
    const EnergyBreakdown closed = e.dilated(tau);
    CHECK(ed.dirichlet == doctest::Approx(closed.dirichlet).epsilon(1e-2));
    CHECK(ed.mass == doctest::Approx(closed.mass).epsilon(1e-2));
    CHECK(ed.interaction == doctest::Approx(closed.interaction).epsilon(1e-2));
}

TEST_CASE("interaction stays nonnegative") {
    const Grid g(3, 16, 3.0);
    const RieszKernel k(g, 2.0);
    const Nonlinearity nl = power_nonlinearity(2.3);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        Field u = Field::zeros(g);
        for (double& v : u.values())
            v = dist(rng);
        CHECK(breakdown(u, k, nl).interaction >= 0.0);
    }
}

TEST_CASE("breakdown json carries the schema keys") {
    const EnergyBreakdown e = triple(1.0, 2.0, 3.0);
    const std::string j = e.to_json();
    for (const char* key :
         {"\"A\":", "\"B\":", "\"C\":", "\"N\":", "\"alpha\":", "\"energy\":",
          "\"pohozaev\":", "\"reduced\":"})
        CHECK(j.find(key) != std::string::npos);
}
