#pragma once

#include <compare>
#include <cstdint>
#include <vector>

namespace snlab {

// One coefficient slot (nu, m) of the dyadic mixed grid on the unit cube:
// level vector nu per coordinate, position vector m with 0 <= m[l] < 2^nu[l].
// The associated box is prod_l ( m[l] 2^-nu[l], (m[l]+1) 2^-nu[l] ).
struct HyperbolicIndex {
    std::vector<std::uint32_t> nu;
    std::vector<std::uint64_t> m;

    HyperbolicIndex() = default;
    HyperbolicIndex(std::vector<std::uint32_t> levels, std::vector<std::uint64_t> positions)
        : nu(std::move(levels)), m(std::move(positions)) {}

    auto operator<=>(const HyperbolicIndex&) const = default;

    std::uint32_t dim() const { return static_cast<std::uint32_t>(nu.size()); }
    std::uint32_t level() const;  // |nu|_1
    bool valid() const;           // invariant check incl. m[l] < 2^nu[l]
};

// Level-mu block of the hyperbolic cross in dimension d and its exact size.
struct BlockSpec {
    std::uint32_t mu = 0;
    std::uint32_t d = 1;
    std::uint64_t dim = 0;  // C(mu+d-1, d-1) * 2^mu
};

// Overflow-checked binomial coefficient.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// Number of level vectors nu in N_0^d with |nu|_1 = mu.
std::uint64_t compositions_count(std::uint32_t mu, std::uint32_t d);

// All nu with |nu|_1 = mu, lexicographically ascending.
std::vector<std::vector<std::uint32_t>> enumerate_compositions(std::uint32_t mu, std::uint32_t d);

// Exact block dimension D_mu. Throws std::overflow_error past the budget.
std::uint64_t block_dim(std::uint32_t mu, std::uint32_t d);

BlockSpec block_spec(std::uint32_t mu, std::uint32_t d);

// Exact partial sum of D_mu over mu <= J; strictly increasing in J.
std::uint64_t cumulative_dim(std::uint32_t J, std::uint32_t d);

// All (nu, m) with |nu|_1 = mu in deterministic lexicographic order
// (nu major, m minor). Length equals block_dim(mu, d).
std::vector<HyperbolicIndex> enumerate_level(std::uint32_t mu, std::uint32_t d);

// All positions m for a fixed level vector nu, lexicographic.
std::vector<std::vector<std::uint64_t>> enumerate_positions(const std::vector<std::uint32_t>& nu);

// Geometry of the open box carried by an index.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;
};

Box index_box(const HyperbolicIndex& ix);
bool box_contains(const Box& box, const std::vector<double>& x);

}  // namespace snlab
