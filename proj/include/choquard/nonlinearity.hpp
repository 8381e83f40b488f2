#pragma once

#include <functional>
#include <string>

namespace choquard {

/// A nonlinearity pair (F, f) with F' = f and F(0) = 0, plus the metadata the
/// solver and the validators need.
struct Nonlinearity {
    std::function<double(double)> F;
    std::function<double(double)> f;
    double growth_constant = 1.0;
    double witness_s0 = 1.0;
    bool is_odd_f = true;
    enum class SignOnPositive { nonneg, nonpos, mixed };
    SignOnPositive sign_on_positive = SignOnPositive::nonneg;
    std::string spec = "custom";
};

/// F(s) = |s|^p / p, f(s) = |s|^(p-2) s. Requires p > 1.
Nonlinearity power_nonlinearity(double p);

/// F(s) = |s|^p/p + |s|^q/q with 1 < p <= q.
Nonlinearity combined_power_nonlinearity(double p, double q);

/// Parses "power:p=<real>" or "powers:p=<real>,q=<real>".
Nonlinearity parse_nonlinearity(const std::string& spec);

struct AssumptionCheck {
    bool passed = false;
    double witness = 0.0;
    std::string detail;
};

/// Numerical screening of the growth, subcriticality and nontriviality
/// assumptions for the problem (dim, alpha), on a log-spaced sample grid.
struct ValidationReport {
    double low_exponent = 0.0;   // (N+alpha)/N
    double high_exponent = 0.0;  // (N+alpha)/(N-2)
    double estimated_growth_constant = 0.0;
    AssumptionCheck growth;            // |s f(s)| <= C (|s|^low + |s|^high)
    AssumptionCheck decay_at_zero;     // F(s)/|s|^low  -> 0 as s -> 0
    AssumptionCheck decay_at_infinity; // F(s)/|s|^high -> 0 as |s| -> inf
    AssumptionCheck nontrivial;        // F(s0) != 0
    AssumptionCheck antiderivative;    // F(s) matches quadrature of f

    bool all_passed() const {
        return growth.passed && decay_at_zero.passed && decay_at_infinity.passed &&
               nontrivial.passed && antiderivative.passed;
    }
};

ValidationReport validate_assumptions(const Nonlinearity& nl, int dim, double alpha,
                                      int sample_count);

/// Minimal solver admission gate: f and F evaluate finite across the sample
/// range and the nontriviality witness holds. Deliberately weaker than the
/// full report so that out-of-window powers still reach the solver's
/// vanishing/blow-up diagnostics.
bool growth_envelope_finite(const Nonlinearity& nl);

} // namespace choquard
