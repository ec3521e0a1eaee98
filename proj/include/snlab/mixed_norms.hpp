#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "snlab/budget.hpp"
#include "snlab/hyperbolic.hpp"
#include "snlab/util.hpp"

namespace snlab {

enum class NormScale { f, b };

// Quasi-norm selector for the dyadic sequence spaces: outer integrability p,
// smoothness weight t, inner index q (default 2, infinity allowed).
struct NormSpec {
    NormScale scale = NormScale::f;
    double t = 0.0;
    double p = 2.0;
    double q = 2.0;

    void validate() const {
        if (!(p > 0.0) || is_inf_exponent(p)) {
            throw std::invalid_argument("snlab: norm exponent p must lie in (0, inf)");
        }
        if (!(q > 0.0)) {
            throw std::invalid_argument("snlab: inner index q must be positive or infinite");
        }
        if (!std::isfinite(t)) throw std::invalid_argument("snlab: smoothness t must be finite");
    }
};

inline NormSpec f_spec(double t, double p, double q = 2.0) { return NormSpec{NormScale::f, t, p, q}; }
inline NormSpec b_spec(double t, double p, double q = 2.0) { return NormSpec{NormScale::b, t, p, q}; }

namespace detail {
inline double abs_value(double v) { return std::abs(v); }
inline double abs_value(const std::complex<double>& v) { return std::abs(v); }
}  // namespace detail

// Finitely supported coefficient array over hyperbolic indices. Values are
// immutable after construction apart from set(); absent keys are zero.
template <class Scalar = double>
class BasicSequenceElement {
public:
    using map_type = std::map<HyperbolicIndex, Scalar>;

    explicit BasicSequenceElement(std::uint32_t d) : d_(d) {
        if (d < 1) throw std::invalid_argument("snlab: dimension must be >= 1");
    }

    std::uint32_t dim() const { return d_; }
    std::uint32_t max_level() const { return max_level_; }
    const map_type& coeffs() const { return coeffs_; }
    bool empty() const { return coeffs_.empty(); }
    std::size_t size() const { return coeffs_.size(); }

    void set(const HyperbolicIndex& ix, Scalar value) {
        if (ix.dim() != d_ || !ix.valid()) {
            throw std::invalid_argument("snlab: invalid hyperbolic index for this element");
        }
        if (value == Scalar{}) {
            coeffs_.erase(ix);
            recompute_max_level();
            return;
        }
        coeffs_[ix] = value;
        max_level_ = std::max(max_level_, ix.level());
    }

    Scalar at(const HyperbolicIndex& ix) const {
        auto it = coeffs_.find(ix);
        return it == coeffs_.end() ? Scalar{} : it->second;
    }

private:
    void recompute_max_level() {
        max_level_ = 0;
        for (const auto& [ix, v] : coeffs_) max_level_ = std::max(max_level_, ix.level());
    }

    std::uint32_t d_;
    std::uint32_t max_level_ = 0;
    map_type coeffs_;
};

using SequenceElement = BasicSequenceElement<double>;
using ComplexSequenceElement = BasicSequenceElement<std::complex<double>>;

// --- f-scale norm -----------------------------------------------------------
//
// The inner aggregate sum_{nu,m} |2^{|nu|_1 t} lambda chi_{nu,m}(x)|^q is
// piecewise constant on the tensor grid whose l-th resolution is the largest
// nu[l] present, so the L_p integral is evaluated cell by cell without any
// sampling error.
template <class Scalar>
double f_norm(const BasicSequenceElement<Scalar>& elem, const NormSpec& spec) {
    spec.validate();
    if (elem.empty()) return 0.0;

    const std::uint32_t d = elem.dim();
    std::vector<std::uint32_t> res(d, 0);  // per-coordinate grid level
    for (const auto& [ix, v] : elem.coeffs()) {
        for (std::uint32_t l = 0; l < d; ++l) res[l] = std::max(res[l], ix.nu[l]);
    }

    std::uint64_t cells = 1;
    std::uint32_t res_total = 0;
    for (auto r : res) {
        cells = checked_mul_u64(cells, two_pow_u64(r));
        res_total += r;
        if (cells > index_budget()) {
            throw std::overflow_error("snlab: integration grid exceeds the configured budget");
        }
    }

    // strides, last coordinate fastest
    std::vector<std::uint64_t> stride(d, 1);
    for (std::uint32_t l = d; l-- > 1;) {
        stride[l - 1] = stride[l] * two_pow_u64(res[l]);
    }

    const bool sup_inner = is_inf_exponent(spec.q);
    std::vector<double> acc(cells, 0.0);

    std::vector<std::uint64_t> lo(d), len(d), cursor(d);
    for (const auto& [ix, value] : elem.coeffs()) {
        const double w = std::exp2(static_cast<double>(ix.level()) * spec.t) * detail::abs_value(value);
        if (w == 0.0) continue;
        const double wq = sup_inner ? w : std::pow(w, spec.q);

        std::uint64_t base = 0;
        std::uint64_t rows = 1;
        for (std::uint32_t l = 0; l < d; ++l) {
            const std::uint32_t shift = res[l] - ix.nu[l];
            lo[l] = ix.m[l] << shift;
            len[l] = two_pow_u64(shift);
            cursor[l] = 0;
            base += lo[l] * stride[l];
            if (l + 1 < d) rows *= len[l];
        }
        // walk the covered sub-box, one contiguous row at a time
        for (std::uint64_t r = 0; r < rows; ++r) {
            std::uint64_t idx = base;
            for (std::uint32_t l = 0; l + 1 < d; ++l) idx += cursor[l] * stride[l];
            double* row = acc.data() + idx;
            if (sup_inner) {
                for (std::uint64_t k = 0; k < len[d - 1]; ++k) row[k] = std::max(row[k], wq);
            } else {
                for (std::uint64_t k = 0; k < len[d - 1]; ++k) row[k] += wq;
            }
            for (std::uint32_t l = d - 1; l-- > 0;) {
                if (++cursor[l] < len[l]) break;
                cursor[l] = 0;
            }
        }
    }

    const double cell_volume = std::exp2(-static_cast<double>(res_total));
    const double pq = sup_inner ? spec.p : spec.p / spec.q;
    CompensatedSum total;
    for (double a : acc) {
        if (a == 0.0) continue;
        total.add(pq == 1.0 ? a : std::pow(a, pq));
    }
    return std::pow(cell_volume * total.value(), 1.0 / spec.p);
}

// --- b-scale norm -----------------------------------------------------------
//
// ell_q over level vectors nu of 2^{|nu|_1 (t - 1/p)} (ell_p over positions),
// with the supremum modification for q = infinity.
template <class Scalar>
double b_norm(const BasicSequenceElement<Scalar>& elem, const NormSpec& spec) {
    spec.validate();
    if (elem.empty()) return 0.0;

    std::map<std::vector<std::uint32_t>, double> per_nu;  // sum |lambda|^p per nu
    for (const auto& [ix, value] : elem.coeffs()) {
        const double a = detail::abs_value(value);
        if (a == 0.0) continue;
        per_nu[ix.nu] += std::pow(a, spec.p);
    }

    const bool sup_outer = is_inf_exponent(spec.q);
    CompensatedSum total;
    double sup = 0.0;
    for (const auto& [nu, sp] : per_nu) {
        std::uint32_t level = 0;
        for (auto v : nu) level += v;
        const double weight = std::exp2(static_cast<double>(level) * (spec.t - 1.0 / spec.p));
        const double term = weight * std::pow(sp, 1.0 / spec.p);
        if (sup_outer) {
            sup = std::max(sup, term);
        } else {
            total.add(std::pow(term, spec.q));
        }
    }
    return sup_outer ? sup : std::pow(total.value(), 1.0 / spec.q);
}

template <class Scalar>
double sequence_norm(const BasicSequenceElement<Scalar>& elem, const NormSpec& spec) {
    return spec.scale == NormScale::f ? f_norm(elem, spec) : b_norm(elem, spec);
}

// Restriction to a single level: keeps exactly the keys with |nu|_1 = mu.
template <class Scalar>
BasicSequenceElement<Scalar> block_restrict(const BasicSequenceElement<Scalar>& elem, std::uint32_t mu) {
    BasicSequenceElement<Scalar> out(elem.dim());
    for (const auto& [ix, v] : elem.coeffs()) {
        if (ix.level() == mu) out.set(ix, v);
    }
    return out;
}

template <class Scalar>
BasicSequenceElement<Scalar> scaled(const BasicSequenceElement<Scalar>& elem, Scalar c) {
    BasicSequenceElement<Scalar> out(elem.dim());
    if (c == Scalar{}) return out;
    for (const auto& [ix, v] : elem.coeffs()) out.set(ix, c * v);
    return out;
}

template <class Scalar>
BasicSequenceElement<Scalar> added(const BasicSequenceElement<Scalar>& a, const BasicSequenceElement<Scalar>& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("snlab: dimension mismatch");
    BasicSequenceElement<Scalar> out(a.dim());
    for (const auto& [ix, v] : a.coeffs()) out.set(ix, v);
    for (const auto& [ix, v] : b.coeffs()) {
        const Scalar s = out.at(ix) + v;
        out.set(ix, s);
    }
    return out;
}

// Line-based text format: header "d max_level", then one line per key:
// nu_1 .. nu_d m_1 .. m_d value.
void write_element(std::ostream& os, const SequenceElement& elem);
SequenceElement read_element(std::istream& is);

}  // namespace snlab
