#include "snlab/rate_table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <type_traits>

namespace snlab {

// --- Rational ----------------------------------------------------------------

namespace {

long long checked_ll(__int128 v, const char* what) {
    if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min()) {
        throw std::overflow_error(std::string("snlab: rational overflow in ") + what);
    }
    return static_cast<long long>(v);
}

}  // namespace

Rational::Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("snlab: rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(std::llabs(num), den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

std::optional<Rational> Rational::parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::size_t pos = 0;
    bool neg = false;
    if (text[pos] == '+' || text[pos] == '-') {
        neg = text[pos] == '-';
        ++pos;
    }
    long long num = 0;
    long long den = 1;
    bool any_digit = false;
    bool seen_dot = false;
    for (; pos < text.size(); ++pos) {
        const char c = text[pos];
        if (c == '.') {
            if (seen_dot) return std::nullopt;
            seen_dot = true;
            continue;
        }
        if (c < '0' || c > '9') return std::nullopt;
        if (num > (std::numeric_limits<long long>::max() - 9) / 10) return std::nullopt;
        num = num * 10 + (c - '0');
        if (seen_dot) {
            if (den > std::numeric_limits<long long>::max() / 10) return std::nullopt;
            den *= 10;
        }
        any_digit = true;
    }
    if (!any_digit) return std::nullopt;
    return Rational(neg ? -num : num, den);
}

Rational Rational::operator+(const Rational& o) const {
    const __int128 n = static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den;
    const __int128 d = static_cast<__int128>(den) * o.den;
    return Rational(checked_ll(n, "+"), checked_ll(d, "+"));
}

Rational Rational::operator-(const Rational& o) const {
    const __int128 n = static_cast<__int128>(num) * o.den - static_cast<__int128>(o.num) * den;
    const __int128 d = static_cast<__int128>(den) * o.den;
    return Rational(checked_ll(n, "-"), checked_ll(d, "-"));
}

Rational Rational::operator*(const Rational& o) const {
    const __int128 n = static_cast<__int128>(num) * o.num;
    const __int128 d = static_cast<__int128>(den) * o.den;
    return Rational(checked_ll(n, "*"), checked_ll(d, "*"));
}

Rational Rational::operator/(const Rational& o) const {
    if (o.num == 0) throw std::invalid_argument("snlab: rational division by zero");
    const __int128 n = static_cast<__int128>(num) * o.den;
    const __int128 d = static_cast<__int128>(den) * o.num;
    return Rational(checked_ll(n, "/"), checked_ll(d, "/"));
}

std::strong_ordering Rational::operator<=>(const Rational& o) const {
    const __int128 lhs = static_cast<__int128>(num) * o.den;
    const __int128 rhs = static_cast<__int128>(o.num) * den;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

// --- case classification -------------------------------------------------------

namespace {

// Shared classifier over double (1e-12 guard band on comparisons) and
// Rational (exact). Exponent values are always assembled in double.
template <class Num>
struct NumOps {
    bool guard = false;

    int cmp(const Num& a, const Num& b) {
        if constexpr (std::is_same_v<Num, double>) {
            if (std::abs(a - b) <= 1e-12) {
                if (a != b) guard = true;
                return 0;
            }
            return a < b ? -1 : 1;
        } else {
            const auto o = a <=> b;
            return o == std::strong_ordering::less ? -1 : (o == std::strong_ordering::greater ? 1 : 0);
        }
    }

    static Num lit(long long n, long long d) {
        if constexpr (std::is_same_v<Num, double>) {
            return static_cast<double>(n) / static_cast<double>(d);
        } else {
            return Rational(n, d);
        }
    }

    static Num inv(const Num& x) {
        if constexpr (std::is_same_v<Num, double>) {
            return 1.0 / x;
        } else {
            return Rational(x.den, x.num);
        }
    }

    static double dbl(const Num& x) {
        if constexpr (std::is_same_v<Num, double>) {
            return x;
        } else {
            return x.to_double();
        }
    }
};

template <class Num>
void require_compact(NumOps<Num>& ops, const Num& p1, const Num& p2, const Num& t) {
    Num gap = ops.inv(p1) - ops.inv(p2);
    if (ops.cmp(gap, ops.lit(0, 1)) < 0) gap = ops.lit(0, 1);
    if (ops.cmp(t, gap) <= 0) {
        throw std::invalid_argument("snlab: parameters violate the compactness condition");
    }
}

RateExponent closed_rate(double alpha, std::uint32_t d, std::string case_id, bool guard) {
    RateExponent r;
    r.n_power = -alpha;
    r.log_power = (d - 1) * alpha;
    r.case_id = std::move(case_id);
    r.guard_band = guard;
    return r;
}

RateExponent open_rate(std::string case_id, bool guard) {
    RateExponent r;
    r.n_power = std::numeric_limits<double>::quiet_NaN();
    r.log_power = std::numeric_limits<double>::quiet_NaN();
    r.case_id = std::move(case_id);
    r.open = true;
    r.guard_band = guard;
    return r;
}

// Threshold separating the moderate and low smoothness regimes for p2 < p1:
// (1/p2 - 1/p1) / (p1/2 - 1) when p2 >= 2, degenerating to 1/p1 when p2 <= 2.
template <class Num>
Num low_threshold(NumOps<Num>& ops, const Num& p1, const Num& p2, int c22) {
    if (c22 <= 0) return ops.inv(p1);
    const Num half_p1 = p1 * ops.lit(1, 2);
    return (ops.inv(p2) - ops.inv(p1)) / (half_p1 - ops.lit(1, 1));
}

template <class Num>
RateExponent weyl_impl(const Num& p1, const Num& p2, const Num& t, std::uint32_t d) {
    NumOps<Num> ops;
    require_compact(ops, p1, p2, t);
    const double dp1 = ops.dbl(p1), dp2 = ops.dbl(p2), dt = ops.dbl(t);
    const Num two = ops.lit(2, 1);

    const int c12 = ops.cmp(p1, two);
    const int c22 = ops.cmp(p2, two);
    const int cpp = ops.cmp(p1, p2);

    if (c12 <= 0 && c22 <= 0) return closed_rate(dt, d, "W1", ops.guard);
    if (c12 <= 0) return closed_rate(dt - 0.5 + 1.0 / dp2, d, "W2", ops.guard);
    // p1 > 2 from here on
    if (cpp <= 0) return closed_rate(dt - 1.0 / dp1 + 1.0 / dp2, d, "W4", ops.guard);
    const Num thresh = low_threshold(ops, p1, p2, c22);
    const int ct = ops.cmp(t, thresh);
    if (ct == 0) return open_rate("W_OPEN", ops.guard);
    if (ct > 0) {
        if (c22 <= 0) return closed_rate(dt - 1.0 / dp1 + 0.5, d, "W3", ops.guard);
        return closed_rate(dt - 1.0 / dp1 + 1.0 / dp2, d, "W4", ops.guard);
    }
    return closed_rate(dt * dp1 / 2.0, d, "W5", ops.guard);
}

template <class Num>
RateExponent bernstein_impl(const Num& p1, const Num& p2, const Num& t, std::uint32_t d) {
    NumOps<Num> ops;
    require_compact(ops, p1, p2, t);
    const double dp1 = ops.dbl(p1), dp2 = ops.dbl(p2), dt = ops.dbl(t);
    const Num two = ops.lit(2, 1);

    const int c12 = ops.cmp(p1, two);
    const int c22 = ops.cmp(p2, two);
    const int cpp = ops.cmp(p1, p2);

    if (cpp <= 0 || c12 <= 0) return closed_rate(dt, d, "B1", ops.guard);
    // p1 > 2 and p2 < p1 from here on
    const Num thresh = low_threshold(ops, p1, p2, c22);
    const int ct = ops.cmp(t, thresh);
    if (ct == 0) return open_rate("B_OPEN", ops.guard);
    if (ct > 0) {
        if (c22 <= 0) return closed_rate(dt - 1.0 / dp1 + 0.5, d, "B2", ops.guard);
        return closed_rate(dt - 1.0 / dp1 + 1.0 / dp2, d, "B3", ops.guard);
    }
    return closed_rate(dt * dp1 / 2.0, d, "B4", ops.guard);
}

RateExponent pair_rate(double n_power, double log_power, std::string case_id, bool guard) {
    RateExponent r;
    r.n_power = n_power;
    r.log_power = log_power;
    r.case_id = std::move(case_id);
    r.guard_band = guard;
    return r;
}

template <class Num>
RateExponent limiting_impl(const Num& p, const Num& t, std::uint32_t d, LimitTarget target) {
    NumOps<Num> ops;
    const double dp = ops.dbl(p), dt = ops.dbl(t);
    if (!(dp > 1.0) || !std::isfinite(dp)) {
        throw std::invalid_argument("snlab: p must lie in (1, inf)");
    }
    const Num two = ops.lit(2, 1);
    const int cp2 = ops.cmp(p, two);

    if (target == LimitTarget::Linf) {
        if (cp2 <= 0) {
            if (ops.cmp(t, ops.inv(p)) <= 0) {
                throw std::invalid_argument("snlab: smoothness out of range for the L_inf target");
            }
            return pair_rate(-(dt - 0.5), (d - 1) * dt, "LINF1", ops.guard);
        }
        const Num upper = ops.inv(p) + ops.lit(1, 2);
        if (ops.cmp(t, upper) > 0) {
            return pair_rate(-(dt - 1.0 / dp), (d - 1) * (dt - 1.0 / dp + 0.5), "LINF2", ops.guard);
        }
        if (ops.cmp(t, ops.inv(p)) > 0) return open_rate("LINF_OPEN", ops.guard);
        throw std::invalid_argument("snlab: smoothness out of range for the L_inf target");
    }

    // L_1 target
    if (cp2 <= 0) {
        if (ops.cmp(t, ops.lit(0, 1)) <= 0) {
            throw std::invalid_argument("snlab: smoothness out of range for the L_1 target");
        }
        return pair_rate(-dt, (d - 1) * dt, "L1_1", ops.guard);
    }
    const int ct = ops.cmp(t, ops.inv(p));
    if (ct > 0) {
        return pair_rate(-(dt - 1.0 / dp + 0.5), (d - 1) * (dt - 1.0 / dp + 0.5), "L1_2", ops.guard);
    }
    if (ct == 0) return open_rate("L1_OPEN", ops.guard);
    if (ops.cmp(t, ops.lit(0, 1)) <= 0) {
        throw std::invalid_argument("snlab: smoothness out of range for the L_1 target");
    }
    return pair_rate(-dt * dp / 2.0, (d - 1) * dt * dp / 2.0, "L1_3", ops.guard);
}

}  // namespace

RateExponent predict_weyl(const ParamSpace& params) {
    params.validate();
    return weyl_impl<double>(params.p1, params.p2, params.t, params.d);
}

RateExponent predict_weyl(const RationalParams& params) {
    return weyl_impl<Rational>(params.p1, params.p2, params.t, params.d);
}

RateExponent predict_bernstein(const ParamSpace& params) {
    params.validate();
    return bernstein_impl<double>(params.p1, params.p2, params.t, params.d);
}

RateExponent predict_bernstein(const RationalParams& params) {
    return bernstein_impl<Rational>(params.p1, params.p2, params.t, params.d);
}

RateExponent predict_limiting(double p, double t, std::uint32_t d, LimitTarget target) {
    return limiting_impl<double>(p, t, d, target);
}

RateExponent predict_limiting(const Rational& p, const Rational& t, std::uint32_t d, LimitTarget target) {
    return limiting_impl<Rational>(p, t, d, target);
}

RateExponent predict_entropy(const ParamSpace& params) {
    params.require_compact();
    return closed_rate(params.t, params.d, "E", false);
}

RateExponent rate_value_min(const RateExponent& a, const RateExponent& b) {
    if (a.open || b.open) return open_rate("MIN_OPEN", a.guard_band || b.guard_band);
    if (a.n_power != b.n_power) return a.n_power < b.n_power ? a : b;
    if (a.log_power != b.log_power) return a.log_power < b.log_power ? a : b;
    return a;
}

// --- fitting -------------------------------------------------------------------

namespace {

std::vector<std::pair<double, double>> windowed(const std::vector<std::pair<double, double>>& samples,
                                                double discard_fraction) {
    if (samples.size() < 4) throw std::invalid_argument("snlab: fit needs at least 4 samples");
    if (!(discard_fraction >= 0.0) || discard_fraction >= 1.0) {
        throw std::invalid_argument("snlab: discard fraction must lie in [0, 1)");
    }
    auto sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [n, v] : sorted) {
        if (!(n >= 2.0)) throw std::invalid_argument("snlab: fit requires n >= 2");
        if (!(v > 0.0)) throw std::invalid_argument("snlab: fit requires positive values");
    }
    std::size_t drop = static_cast<std::size_t>(sorted.size() * discard_fraction);
    if (sorted.size() - drop < 4) drop = sorted.size() - 4;
    sorted.erase(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(drop));
    if (sorted.front().first == sorted.back().first) {
        throw std::invalid_argument("snlab: degenerate fit, all sample sizes equal");
    }
    return sorted;
}

}  // namespace

FitResult fit_rate(const std::vector<std::pair<double, double>>& samples, std::uint32_t d,
                   double discard_fraction) {
    const auto pts = windowed(samples, discard_fraction);
    const std::size_t k = pts.size();

    std::vector<double> u(k), y(k);
    for (std::size_t i = 0; i < k; ++i) {
        u[i] = std::log(pts[i].first) - (d - 1) * std::log(std::log(pts[i].first));
        y[i] = std::log(pts[i].second);
    }
    const double um = std::accumulate(u.begin(), u.end(), 0.0) / k;
    const double ym = std::accumulate(y.begin(), y.end(), 0.0) / k;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sxx += (u[i] - um) * (u[i] - um);
        sxy += (u[i] - um) * (y[i] - ym);
    }
    if (sxx == 0.0) throw std::invalid_argument("snlab: degenerate fit, zero abscissa spread");

    FitResult res;
    res.slope = sxy / sxx;
    res.intercept = ym - res.slope * um;
    double ss = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double r = y[i] - (res.intercept + res.slope * u[i]);
        ss += r * r;
    }
    res.residual = std::sqrt(ss / k);
    const double var = k > 2 ? ss / (k - 2) / sxx : 0.0;
    res.stderr_slope = std::sqrt(var);
    res.ci_low = res.slope - 1.96 * res.stderr_slope;
    res.ci_high = res.slope + 1.96 * res.stderr_slope;
    res.used = k;
    return res;
}

TwoTermFit fit_rate_two_term(const std::vector<std::pair<double, double>>& samples,
                             double discard_fraction) {
    const auto pts = windowed(samples, discard_fraction);
    const std::size_t k = pts.size();

    // normal equations for y ~ a*log n + b*log log n + c
    double A[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    double rhs[3] = {0, 0, 0};
    for (const auto& [n, v] : pts) {
        const double x0 = std::log(n);
        const double x1 = std::log(std::log(n));
        const double x[3] = {x0, x1, 1.0};
        const double y = std::log(v);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) A[i][j] += x[i] * x[j];
            rhs[i] += x[i] * y;
        }
    }
    // Gaussian elimination with partial pivoting
    int perm[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(A[perm[r]][col]) > std::abs(A[perm[piv]][col])) piv = r;
        }
        std::swap(perm[col], perm[piv]);
        const double diag = A[perm[col]][col];
        if (std::abs(diag) < 1e-12) {
            throw std::invalid_argument("snlab: degenerate two-term fit");
        }
        for (int r = col + 1; r < 3; ++r) {
            const double f = A[perm[r]][col] / diag;
            for (int c = col; c < 3; ++c) A[perm[r]][c] -= f * A[perm[col]][c];
            rhs[perm[r]] -= f * rhs[perm[col]];
        }
    }
    double beta[3];
    for (int row = 2; row >= 0; --row) {
        double acc = rhs[perm[row]];
        for (int c = row + 1; c < 3; ++c) acc -= A[perm[row]][c] * beta[c];
        beta[row] = acc / A[perm[row]][row];
    }

    TwoTermFit res;
    res.n_power = beta[0];
    res.log_power = beta[1];
    res.intercept = beta[2];
    double ss = 0.0;
    for (const auto& [n, v] : pts) {
        const double pred = beta[0] * std::log(n) + beta[1] * std::log(std::log(n)) + beta[2];
        const double r = std::log(v) - pred;
        ss += r * r;
    }
    res.residual = std::sqrt(ss / k);
    res.used = k;
    return res;
}

}  // namespace snlab
