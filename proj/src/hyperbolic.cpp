#include "snlab/hyperbolic.hpp"

#include <cmath>
#include <stdexcept>

#include "snlab/budget.hpp"
#include "snlab/util.hpp"

namespace snlab {

std::uint32_t HyperbolicIndex::level() const {
    std::uint32_t s = 0;
    for (auto v : nu) s += v;
    return s;
}

bool HyperbolicIndex::valid() const {
    if (nu.empty() || nu.size() != m.size()) return false;
    for (std::size_t l = 0; l < nu.size(); ++l) {
        if (nu[l] > 63) return false;
        if (m[l] >= two_pow_u64(nu[l])) return false;
    }
    return true;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i);
        r /= i;
        if (r > std::numeric_limits<std::uint64_t>::max()) {
            throw std::overflow_error("snlab: binomial overflows 64 bits");
        }
    }
    return static_cast<std::uint64_t>(r);
}

std::uint64_t compositions_count(std::uint32_t mu, std::uint32_t d) {
    if (d < 1) throw std::invalid_argument("snlab: dimension must be >= 1");
    return binomial(std::uint64_t{mu} + d - 1, std::uint64_t{d} - 1);
}

std::uint64_t block_dim(std::uint32_t mu, std::uint32_t d) {
    const std::uint64_t dim = checked_mul_u64(compositions_count(mu, d), two_pow_u64(mu));
    if (dim > index_budget()) {
        throw std::overflow_error("snlab: block dimension exceeds the configured index budget");
    }
    return dim;
}

BlockSpec block_spec(std::uint32_t mu, std::uint32_t d) {
    return BlockSpec{mu, d, block_dim(mu, d)};
}

std::uint64_t cumulative_dim(std::uint32_t J, std::uint32_t d) {
    std::uint64_t total = 0;
    for (std::uint32_t mu = 0; mu <= J; ++mu) {
        total = checked_add_u64(total, block_dim(mu, d));
        if (total > index_budget()) {
            throw std::overflow_error("snlab: cumulative dimension exceeds the configured index budget");
        }
    }
    return total;
}

std::vector<std::vector<std::uint32_t>> enumerate_compositions(std::uint32_t mu, std::uint32_t d) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> cur(d, 0);
    // Depth-first over coordinates; remaining mass forced into the last slot
    // keeps the output lexicographically ascending.
    const auto recurse = [&](auto&& self, std::uint32_t pos, std::uint32_t remaining) -> void {
        if (pos + 1 == d) {
            cur[pos] = remaining;
            out.push_back(cur);
            return;
        }
        for (std::uint32_t v = 0; v <= remaining; ++v) {
            cur[pos] = v;
            self(self, pos + 1, remaining - v);
        }
    };
    recurse(recurse, 0, mu);
    return out;
}

std::vector<std::vector<std::uint64_t>> enumerate_positions(const std::vector<std::uint32_t>& nu) {
    const std::size_t d = nu.size();
    std::uint64_t count = 1;
    for (auto v : nu) count = checked_mul_u64(count, two_pow_u64(v));

    std::vector<std::vector<std::uint64_t>> out;
    out.reserve(count);
    std::vector<std::uint64_t> m(d, 0);
    for (std::uint64_t i = 0; i < count; ++i) {
        out.push_back(m);
        // odometer, last coordinate fastest
        for (std::size_t l = d; l-- > 0;) {
            if (++m[l] < two_pow_u64(nu[l])) break;
            m[l] = 0;
        }
    }
    return out;
}

std::vector<HyperbolicIndex> enumerate_level(std::uint32_t mu, std::uint32_t d) {
    const std::uint64_t dim = block_dim(mu, d);  // budget guard
    std::vector<HyperbolicIndex> out;
    out.reserve(dim);
    for (const auto& nu : enumerate_compositions(mu, d)) {
        for (auto& m : enumerate_positions(nu)) {
            out.emplace_back(nu, std::move(m));
        }
    }
    return out;
}

Box index_box(const HyperbolicIndex& ix) {
    Box box;
    box.lo.resize(ix.nu.size());
    box.hi.resize(ix.nu.size());
    for (std::size_t l = 0; l < ix.nu.size(); ++l) {
        const double h = std::ldexp(1.0, -static_cast<int>(ix.nu[l]));
        box.lo[l] = static_cast<double>(ix.m[l]) * h;
        box.hi[l] = static_cast<double>(ix.m[l] + 1) * h;
    }
    return box;
}

bool box_contains(const Box& box, const std::vector<double>& x) {
    for (std::size_t l = 0; l < box.lo.size(); ++l) {
        if (!(box.lo[l] < x[l] && x[l] < box.hi[l])) return false;
    }
    return true;
}

}  // namespace snlab
