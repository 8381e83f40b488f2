#include "choquard/nonlinearity.hpp"

#include "choquard/errors.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace choquard {

Nonlinearity power_nonlinearity(double p) {
    if (!(p > 1.0))
        throw ConfigInvalid("power nonlinearity requires p > 1");
    Nonlinearity nl;
    nl.F = [p](double s) { return std::pow(std::abs(s), p) / p; };
    nl.f = [p](double s) {
        return s == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(s), p - 1.0), s);
    };
    nl.growth_constant = 1.0;
    nl.witness_s0 = 1.0;
    nl.is_odd_f = true;
    nl.sign_on_positive = Nonlinearity::SignOnPositive::nonneg;
    std::ostringstream os;
    os << "power:p=" << p;
    nl.spec = os.str();
    return nl;
}

Nonlinearity combined_power_nonlinearity(double p, double q) {
    if (!(p > 1.0) || !(q >= p))
        throw ConfigInvalid("combined powers require 1 < p <= q");
    Nonlinearity nl;
    nl.F = [p, q](double s) {
        const double a = std::abs(s);
        return std::pow(a, p) / p + std::pow(a, q) / q;
    };
    nl.f = [p, q](double s) {
        if (s == 0.0)
            return 0.0;
        const double a = std::abs(s);
        return std::copysign(std::pow(a, p - 1.0) + std::pow(a, q - 1.0), s);
    };
    nl.growth_constant = 2.0;
    nl.witness_s0 = 1.0;
    nl.is_odd_f = true;
    nl.sign_on_positive = Nonlinearity::SignOnPositive::nonneg;
    std::ostringstream os;
    os << "powers:p=" << p << ",q=" << q;
    nl.spec = os.str();
    return nl;
}

Nonlinearity parse_nonlinearity(const std::string& spec) {
    auto parse_value = [&spec](const std::string& token) {
        std::size_t pos = spec.find(token);
        if (pos == std::string::npos)
            throw ConfigInvalid("bad nonlinearity spec: " + spec);
        pos += token.size();
        std::size_t end = spec.find(',', pos);
        const std::string text = spec.substr(pos, end == std::string::npos
                                                       ? std::string::npos
                                                       : end - pos);
        try {
            std::size_t used = 0;
            const double v = std::stod(text, &used);
            if (used != text.size())
                throw std::invalid_argument(text);
            return v;
        } catch (const std::exception&) {
            throw ConfigInvalid("bad numeric value in nonlinearity spec: " + spec);
        }
    };
    if (spec.rfind("power:", 0) == 0)
        return power_nonlinearity(parse_value("p="));
    if (spec.rfind("powers:", 0) == 0)
        return combined_power_nonlinearity(parse_value("p="), parse_value("q="));
    throw ConfigInvalid("unknown nonlinearity spec: " + spec);
}

namespace {

/// Composite Gauss-Legendre quadrature of f over [0, s].
double integral_of_f(const Nonlinearity& nl, double s, int panels = 64) {
    static const double nodes[8] = {
        -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
        -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
        0.7966664774136267,  0.9602898564975363};
    static const double weights[8] = {
        0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
        0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
        0.2223810344533745, 0.1012285362903763};
    double acc = 0.0;
    const double width = s / panels;
    for (int k = 0; k < panels; ++k) {
        const double a = k * width, mid = a + width / 2.0;
        for (int j = 0; j < 8; ++j)
            acc += weights[j] * nl.f(mid + nodes[j] * width / 2.0);
    }
    return acc * width / 2.0;
}

std::vector<double> log_samples(double lo, double hi, int count) {
    std::vector<double> s(count);
    const double la = std::log(lo), lb = std::log(hi);
    for (int i = 0; i < count; ++i)
        s[i] = std::exp(la + (lb - la) * i / double(count - 1));
    return s;
}

} // namespace

ValidationReport validate_assumptions(const Nonlinearity& nl, int dim, double alpha,
                                      int sample_count) {
    if (sample_count < 100)
        throw ConfigInvalid("validate_assumptions requires sample_count >= 100");
    if (dim < 3 || !(alpha > 0.0 && alpha < dim))
        throw ConfigInvalid("validate_assumptions requires dim >= 3, 0 < alpha < dim");
    ValidationReport rep;
    rep.low_exponent = double(dim + alpha) / dim;
    rep.high_exponent = double(dim + alpha) / (dim - 2);

    const auto samples = log_samples(1e-8, 1e8, sample_count);

    // growth envelope with the stored constant, both signs
    rep.growth.passed = true;
    double c_est = 0.0;
    for (double s : samples) {
        for (double sign : {1.0, -1.0}) {
            const double x = sign * s;
            const double lhs = std::abs(x * nl.f(x));
            const double env = std::pow(s, rep.low_exponent) +
                               std::pow(s, rep.high_exponent);
            if (!std::isfinite(lhs)) {
                rep.growth.passed = false;
                rep.growth.witness = x;
                rep.growth.detail = "f(s) not finite";
                break;
            }
            c_est = std::max(c_est, lhs / env);
            if (lhs > nl.growth_constant * env * (1.0 + 1e-9) &&
                rep.growth.passed) {
                rep.growth.passed = false;
                rep.growth.witness = x;
            }
        }
    }
    rep.estimated_growth_constant = c_est;
    if (!rep.growth.passed && rep.growth.detail.empty()) {
        std::ostringstream os;
        os << "envelope exceeded; smallest admissible constant " << c_est;
        rep.growth.detail = os.str();
    }

    // subcriticality: the ratio must trend monotonically to zero over the
    // outermost decade sampled on each side
    auto decade_trend = [&](bool near_zero) {
        AssumptionCheck chk;
        const double lo = near_zero ? 1e-8 : 1e7;
        const double hi = near_zero ? 1e-7 : 1e8;
        const auto pts = log_samples(lo, hi, 33);
        const double expo = near_zero ? rep.low_exponent : rep.high_exponent;
        std::vector<double> ratio(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i)
            ratio[i] = std::abs(nl.F(pts[i])) / std::pow(pts[i], expo);
        // index order in the direction of the limit
        bool monotone = true;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const double toward = near_zero ? ratio[i] : ratio[i + 1];
            const double away = near_zero ? ratio[i + 1] : ratio[i];
            if (!(toward <= away * (1.0 + 1e-12))) {
                monotone = false;
                chk.witness = near_zero ? pts[i] : pts[i + 1];
                break;
            }
        }
        const double factor = near_zero ? ratio.front() / ratio.back()
                                        : ratio.back() / ratio.front();
        chk.passed = monotone && factor <= 0.99;
        if (!chk.passed) {
            std::ostringstream os;
            os << (monotone ? "ratio not decaying (decade factor " : "ratio not monotone (")
               << factor << ")";
            chk.detail = os.str();
        }
        return chk;
    };
    rep.decay_at_zero = decade_trend(true);
    rep.decay_at_infinity = decade_trend(false);

    // nontriviality witness
    rep.nontrivial.witness = nl.witness_s0;
    rep.nontrivial.passed = nl.witness_s0 != 0.0 && nl.F(nl.witness_s0) != 0.0 &&
                            std::isfinite(nl.F(nl.witness_s0));
    if (!rep.nontrivial.passed)
        rep.nontrivial.detail = "F(s0) vanishes or is not finite";

    // F is the antiderivative of f
    rep.antiderivative.passed = true;
    for (double s : {0.5, -0.5, 1.0, -1.0, 3.3, -3.3, 10.0, -10.0}) {
        const double quad = integral_of_f(nl, s);
        const double exact = nl.F(s);
        const double err = std::abs(quad - exact) /
                           std::max(std::abs(exact), 1e-30);
        if (err > 1e-6) {
            rep.antiderivative.passed = false;
            rep.antiderivative.witness = s;
            std::ostringstream os;
            os << "quadrature mismatch " << err;
            rep.antiderivative.detail = os.str();
            break;
        }
    }
    return rep;
}

bool growth_envelope_finite(const Nonlinearity& nl) {
    if (nl.witness_s0 == 0.0)
        return false;
    const double Fw = nl.F(nl.witness_s0);
    if (!std::isfinite(Fw) || Fw == 0.0)
        return false;
    for (double s : log_samples(1e-8, 1e8, 120)) {
        for (double sign : {1.0, -1.0}) {
            if (!std::isfinite(nl.f(sign * s)) || !std::isfinite(nl.F(sign * s)))
                return false;
        }
    }
    return std::isfinite(nl.f(0.0)) && nl.F(0.0) == 0.0;
}

} // namespace choquard
