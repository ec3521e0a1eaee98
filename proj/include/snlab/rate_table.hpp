#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "snlab/params.hpp"

namespace snlab {

// Predicted asymptotic exponents of a width sequence n^{n_power} (log n)^{log_power}.
// n_power carries the sign (decay is negative). open=true marks parameter
// regions the theory leaves undecided; exponents are NaN there.
struct RateExponent {
    double n_power = 0.0;
    double log_power = 0.0;
    std::string case_id;
    bool open = false;
    bool guard_band = false;  // double-path comparison landed inside the 1e-12 band

    double alpha() const { return -n_power; }
};

// Exact rational arithmetic for threshold comparisons. Decimal CLI inputs
// like "0.2" parse exactly; anything else falls back to the double path.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d);

    static std::optional<Rational> parse(std::string_view text);
    static Rational from_int(long long n) { return Rational(n, 1); }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    std::strong_ordering operator<=>(const Rational& o) const;
    bool operator==(const Rational& o) const { return (*this <=> o) == std::strong_ordering::equal; }
};

struct RationalParams {
    Rational p1;
    Rational p2;
    Rational t;
    std::uint32_t d = 2;
};

enum class LimitTarget { Linf, L1 };

// Theorem oracle for the Weyl exponent alpha; five-case split, boundary
// smoothness values return open.
RateExponent predict_weyl(const ParamSpace& params);
RateExponent predict_weyl(const RationalParams& params);

// Bernstein exponent beta, four-case split.
RateExponent predict_bernstein(const ParamSpace& params);
RateExponent predict_bernstein(const RationalParams& params);

// Limiting targets L_inf and L_1 (exponent pairs need not coincide here).
RateExponent predict_limiting(double p, double t, std::uint32_t d, LimitTarget target);
RateExponent predict_limiting(const Rational& p, const Rational& t, std::uint32_t d, LimitTarget target);

// Entropy exponent: always t.
RateExponent predict_entropy(const ParamSpace& params);

// The rate whose values are eventually smaller (faster decay wins; smaller
// log power breaks ties). Propagates open-ness.
RateExponent rate_value_min(const RateExponent& a, const RateExponent& b);

// --- empirical rate fitting --------------------------------------------------

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double residual = 0.0;  // RMS of residuals
    std::size_t used = 0;   // samples after windowing
};

// Least-squares slope of log(value) against log(n / (log n)^{d-1}). The
// smallest quartile of n is discarded by default to damp preasymptotic bias.
FitResult fit_rate(const std::vector<std::pair<double, double>>& samples, std::uint32_t d,
                   double discard_fraction = 0.25);

struct TwoTermFit {
    double n_power = 0.0;
    double log_power = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
    std::size_t used = 0;
};

// Joint fit of both powers: log v ~ a log n + b log log n + c.
TwoTermFit fit_rate_two_term(const std::vector<std::pair<double, double>>& samples,
                             double discard_fraction = 0.25);

}  // namespace snlab
