#pragma once

#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace snlab {

// Compensated (Neumaier) accumulator. Keeps long sums of nonnegative cell
// contributions accurate to a few ulp instead of O(N) ulp.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// splitmix64: cheap, well-mixed stream used to derive independent sub-seeds
// from a user seed so concurrent/per-block draws stay reproducible.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t checked_mul_u64(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
        throw std::overflow_error("snlab: 64-bit overflow in index arithmetic");
    }
    return a * b;
}

inline std::uint64_t checked_add_u64(std::uint64_t a, std::uint64_t b) {
    if (b > std::numeric_limits<std::uint64_t>::max() - a) {
        throw std::overflow_error("snlab: 64-bit overflow in index arithmetic");
    }
    return a + b;
}

// 2^e as uint64, e <= 63.
inline std::uint64_t two_pow_u64(std::uint32_t e) {
    if (e > 63) throw std::overflow_error("snlab: 2^e exceeds 64 bits");
    return std::uint64_t{1} << e;
}

// Fixed-format double for reproducible text output (%.17g round-trips).
inline std::string fmt_double(double x, int precision = 17) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
    return buf;
}

inline bool is_inf_exponent(double p) {
    return p == std::numeric_limits<double>::infinity();
}

// 1/p with the convention 1/inf = 0.
inline double inv_exp(double p) { return is_inf_exponent(p) ? 0.0 : 1.0 / p; }

inline double positive_part(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace snlab
