#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "snlab/util.hpp"

namespace snlab {

// Problem parameters of the embedding between the dyadic sequence-space
// models: source integrability p1, target p2, smoothness t, dimension d.
struct ParamSpace {
    double p1 = 2.0;
    double p2 = 2.0;
    double t = 1.0;
    std::uint32_t d = 2;

    double compact_gap() const { return t - positive_part(1.0 / p1 - 1.0 / p2); }
    bool compact() const { return compact_gap() > 0.0; }

    void validate() const {
        if (!(p1 > 1.0) || is_inf_exponent(p1) || !(p2 > 1.0) || is_inf_exponent(p2)) {
            throw std::invalid_argument("snlab: exponents must lie in (1, inf)");
        }
        if (!std::isfinite(t)) throw std::invalid_argument("snlab: smoothness t must be finite");
        if (d < 1) throw std::invalid_argument("snlab: dimension must be >= 1");
    }

    void require_compact() const {
        validate();
        if (!compact()) {
            throw std::invalid_argument("snlab: parameters violate the compactness condition");
        }
    }
};

}  // namespace snlab
