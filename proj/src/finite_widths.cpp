#include "snlab/finite_widths.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "snlab/util.hpp"

namespace snlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lp_norm(const Eigen::VectorXd& x, double p) {
    if (is_inf_exponent(p)) return x.cwiseAbs().maxCoeff();
    if (p == 2.0) return x.norm();
    if (p == 1.0) return x.cwiseAbs().sum();
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]), p);
    return std::pow(s, 1.0 / p);
}

std::string fmt_exponent(double p) { return is_inf_exponent(p) ? "inf" : fmt_double(p); }

double parse_exponent(const std::string& tok) {
    if (tok == "inf") return kInf;
    return std::stod(tok);
}

std::vector<std::size_t> largest_weight_coords(const FiniteEmbedding& op, std::size_t k) {
    std::vector<std::size_t> idx(op.m);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return op.weight(a) > op.weight(b); });
    idx.resize(k);
    return idx;
}

}  // namespace

std::string to_string(WidthKind kind) {
    switch (kind) {
        case WidthKind::approximation: return "approximation";
        case WidthKind::weyl: return "weyl";
        case WidthKind::gelfand: return "gelfand";
        case WidthKind::kolmogorov: return "kolmogorov";
        case WidthKind::bernstein: return "bernstein";
        case WidthKind::entropy: return "entropy";
    }
    return "unknown";
}

std::string to_string(BoundDirection dir) {
    return dir == BoundDirection::upper ? "upper" : "lower";
}

namespace {

WidthKind parse_kind(const std::string& s) {
    for (auto k : {WidthKind::approximation, WidthKind::weyl, WidthKind::gelfand,
                   WidthKind::kolmogorov, WidthKind::bernstein, WidthKind::entropy}) {
        if (to_string(k) == s) return k;
    }
    throw std::runtime_error("snlab: unknown width kind " + s);
}

}  // namespace

void FiniteEmbedding::validate() const {
    if (m < 1) throw std::invalid_argument("snlab: embedding dimension must be >= 1");
    if (!(p1 >= 1.0) || !(p2 >= 1.0)) {
        throw std::invalid_argument("snlab: exponents must lie in [1, inf]");
    }
    if (!weights.empty()) {
        if (weights.size() != m) throw std::invalid_argument("snlab: weight count must match m");
        for (double w : weights) {
            if (!(w > 0.0) || !std::isfinite(w)) {
                throw std::invalid_argument("snlab: weights must be strictly positive");
            }
        }
    }
}

double operator_norm(const FiniteEmbedding& op) {
    op.validate();
    const double ip1 = inv_exp(op.p1), ip2 = inv_exp(op.p2);
    if (ip1 >= ip2) {  // p1 <= p2: norm attained at a single coordinate
        double best = 0.0;
        for (std::size_t i = 0; i < op.m; ++i) best = std::max(best, op.weight(i));
        return best;
    }
    const double r = 1.0 / (ip2 - ip1);
    double s = 0.0;
    for (std::size_t i = 0; i < op.m; ++i) s += std::pow(op.weight(i), r);
    return std::pow(s, 1.0 / r);
}

double coordinate_infimum(const FiniteEmbedding& op, const std::vector<std::size_t>& coords) {
    op.validate();
    if (coords.empty()) throw std::invalid_argument("snlab: empty coordinate set");
    for (auto i : coords) {
        if (i >= op.m) throw std::invalid_argument("snlab: coordinate out of range");
    }
    const double ip1 = inv_exp(op.p1), ip2 = inv_exp(op.p2);
    if (ip1 > ip2) {
        // p1 < p2: interior extremizer by the power-mean inequality
        const double rho = 1.0 / (ip1 - ip2);
        double s = 0.0;
        for (auto i : coords) s += std::pow(op.weight(i), -rho);
        return std::pow(s, -1.0 / rho);
    }
    // p1 >= p2: vertex extremizer
    double best = kInf;
    for (auto i : coords) best = std::min(best, op.weight(i));
    return best;
}

std::vector<double> hilbert_exact_widths(const FiniteEmbedding& op) {
    op.validate();
    if (!op.is_hilbert()) {
        throw std::invalid_argument("snlab: exact widths require p1 = p2 = 2");
    }
    std::vector<double> w(op.m);
    for (std::size_t i = 0; i < op.m; ++i) w[i] = op.weight(i);
    std::sort(w.begin(), w.end(), std::greater<>());
    return w;
}

WidthBound bernstein_coordinate_witness(const FiniteEmbedding& op, std::size_t n) {
    op.validate();
    if (n < 1 || n > op.m) throw std::invalid_argument("snlab: subspace dimension out of range");
    auto coords = largest_weight_coords(op, n);
    std::sort(coords.begin(), coords.end());

    WidthBound bound;
    bound.kind = WidthKind::bernstein;
    bound.n = n;
    bound.value = coordinate_infimum(op, coords);
    bound.direction = BoundDirection::lower;
    bound.certified = true;
    Witness w;
    w.type = Witness::Type::coordinate_subspace;
    w.op = op;
    w.coords = std::move(coords);
    bound.witness = std::move(w);
    return bound;
}

WidthBound truncation_upper_bound(const FiniteEmbedding& op, std::size_t n) {
    op.validate();
    if (n < 1 || n > op.m + 1) throw std::invalid_argument("snlab: rank index out of range");
    auto kept = largest_weight_coords(op, n - 1);
    std::sort(kept.begin(), kept.end());

    WidthBound bound;
    bound.kind = WidthKind::approximation;
    bound.n = n;
    bound.direction = BoundDirection::upper;
    bound.certified = true;

    if (n == op.m + 1) {
        bound.value = 0.0;
    } else {
        std::vector<bool> is_kept(op.m, false);
        for (auto i : kept) is_kept[i] = true;
        FiniteEmbedding residual;
        residual.p1 = op.p1;
        residual.p2 = op.p2;
        residual.weights.clear();
        for (std::size_t i = 0; i < op.m; ++i) {
            if (!is_kept[i]) residual.weights.push_back(op.weight(i));
        }
        residual.m = residual.weights.size();
        bound.value = operator_norm(residual);
    }

    Witness w;
    w.type = Witness::Type::truncation;
    w.op = op;
    w.coords = std::move(kept);
    bound.witness = std::move(w);
    return bound;
}

double duality_bernstein(const FiniteEmbedding& op, std::size_t n) {
    op.validate();
    if (!op.is_hilbert()) {
        throw std::invalid_argument("snlab: exact duality route requires the Hilbert case");
    }
    if (n < 1 || n > op.m) throw std::invalid_argument("snlab: index out of range");
    // c_k(T^{-1}) is the k-th largest inverse weight; b_n(T) = 1 / c_{m-n+1}(T^{-1}).
    std::vector<double> inv(op.m);
    for (std::size_t i = 0; i < op.m; ++i) inv[i] = 1.0 / op.weight(i);
    std::sort(inv.begin(), inv.end(), std::greater<>());
    return 1.0 / inv[op.m - n];
}

std::pair<WidthBound, WidthBound> duality_bernstein_bracket(const FiniteEmbedding& op, std::size_t n,
                                                            double c_lower, double c_upper) {
    op.validate();
    if (n < 1 || n > op.m) throw std::invalid_argument("snlab: index out of range");
    if (!(c_lower > 0.0) || !(c_upper >= c_lower)) {
        throw std::invalid_argument("snlab: invalid Gelfand bracket");
    }
    WidthBound lo{WidthKind::bernstein, n, 1.0 / c_upper, BoundDirection::lower, false, std::nullopt};
    WidthBound hi{WidthKind::bernstein, n, 1.0 / c_lower, BoundDirection::upper, false, std::nullopt};
    return {lo, hi};
}

double summing_norm_pi2(const FiniteEmbedding& op) {
    op.validate();
    if (!op.is_identity() || op.p2 != 2.0 || !(op.p1 >= 2.0)) {
        throw std::invalid_argument("snlab: pi_2 formula needs the identity with p1 >= 2, p2 = 2");
    }
    return std::sqrt(static_cast<double>(op.m));
}

WidthBound weyl_from_summing(double pi_value, double r, std::size_t n) {
    if (!(r >= 2.0)) throw std::invalid_argument("snlab: summing exponent r must be >= 2");
    if (n < 1) throw std::invalid_argument("snlab: index out of range");
    if (!(pi_value >= 0.0)) throw std::invalid_argument("snlab: negative summing norm");

    WidthBound bound;
    bound.kind = WidthKind::weyl;
    bound.n = n;
    bound.value = std::pow(static_cast<double>(n), -1.0 / r) * pi_value;
    bound.direction = BoundDirection::upper;
    bound.certified = true;
    Witness w;
    w.type = Witness::Type::summing;
    w.pi_value = pi_value;
    w.r = r;
    bound.witness = std::move(w);
    return bound;
}

FiniteRate finite_rate_table(WidthKind kind, double p1, double p2) {
    if (!(p1 >= 1.0) || !(p2 >= 1.0)) {
        throw std::invalid_argument("snlab: exponents must lie in [1, inf]");
    }
    const double ip1 = inv_exp(p1), ip2 = inv_exp(p2);
    if (kind == WidthKind::weyl) {
        if (p1 <= p2) {
            if (p1 >= 2.0) return {0.0, FiniteRate::Var::n, "WTH1"};
            if (p2 <= 2.0) return {ip2 - ip1, FiniteRate::Var::n, "WTH2"};
            return {0.5 - ip1, FiniteRate::Var::n, "WTH3"};
        }
        if (p1 <= 2.0) return {ip2 - ip1, FiniteRate::Var::m, "WTH4"};
        if (p2 >= 2.0) return {0.0, FiniteRate::Var::n, "WII"};
        throw std::invalid_argument("snlab: uncovered case, no two-sided Weyl rate for p2 < 2 < p1");
    }
    if (kind == WidthKind::bernstein) {
        if (p2 >= 2.0 && p2 <= p1) return {0.0, FiniteRate::Var::n, "BTH1"};
        if (p2 <= 2.0 && p1 >= 2.0) return {ip2 - 0.5, FiniteRate::Var::n, "BTH2"};
        return {ip2 - ip1, FiniteRate::Var::n, "BTH3"};
    }
    throw std::invalid_argument("snlab: finite rate table covers Weyl and Bernstein numbers only");
}

// --- entropy coverings --------------------------------------------------------

namespace {

double covering_radius(const FiniteEmbedding& op, const std::vector<std::uint64_t>& counts) {
    Eigen::VectorXd err(static_cast<Eigen::Index>(op.m));
    for (std::size_t i = 0; i < op.m; ++i) {
        err[static_cast<Eigen::Index>(i)] = op.weight(i) / static_cast<double>(counts[i]);
    }
    return lp_norm(err, op.p2);
}

}  // namespace

WidthBound entropy_covering_upper(const FiniteEmbedding& op, std::size_t n) {
    op.validate();
    if (op.m > 4) {
        throw std::invalid_argument("snlab: explicit coverings are restricted to m <= 4");
    }
    if (n < 1 || n > 40) throw std::invalid_argument("snlab: covering index out of range");

    // The image of the unit ball lies in prod [-w_i, w_i]; center grids of
    // N_i points per axis cover it within w_i / N_i per coordinate. Greedily
    // refine the axis that shrinks the radius most while prod N_i <= 2^{n-1}.
    const std::uint64_t budget = std::min<std::uint64_t>(two_pow_u64(static_cast<std::uint32_t>(n - 1)),
                                                         std::uint64_t{1} << 22);
    std::vector<std::uint64_t> counts(op.m, 1);
    std::uint64_t used = 1;
    while (true) {
        double best_radius = kInf;
        std::size_t best_axis = op.m;
        for (std::size_t i = 0; i < op.m; ++i) {
            const std::uint64_t next = used / counts[i] * (counts[i] + 1);
            if (next > budget) continue;
            auto trial = counts;
            ++trial[i];
            const double r = covering_radius(op, trial);
            if (r < best_radius) {
                best_radius = r;
                best_axis = i;
            }
        }
        if (best_axis == op.m) break;
        used = used / counts[best_axis] * (counts[best_axis] + 1);
        ++counts[best_axis];
    }

    WidthBound bound;
    bound.kind = WidthKind::entropy;
    bound.n = n;
    bound.value = covering_radius(op, counts);
    bound.direction = BoundDirection::upper;
    bound.certified = true;
    Witness w;
    w.type = Witness::Type::lattice_covering;
    w.op = op;
    w.counts = std::move(counts);
    bound.witness = std::move(w);
    return bound;
}

// --- subspace ratio estimation --------------------------------------------------

double embedding_ratio(const FiniteEmbedding& op, const Eigen::VectorXd& x) {
    op.validate();
    if (x.size() != static_cast<Eigen::Index>(op.m)) {
        throw std::invalid_argument("snlab: vector dimension mismatch");
    }
    Eigen::VectorXd wx = x;
    for (std::size_t i = 0; i < op.m; ++i) wx[static_cast<Eigen::Index>(i)] *= op.weight(i);
    const double denom = lp_norm(x, op.p1);
    if (denom == 0.0) throw std::invalid_argument("snlab: zero vector in ratio");
    return lp_norm(wx, op.p2) / denom;
}

Eigen::MatrixXd random_orthonormal_frame(std::size_t m, std::size_t n, std::uint64_t seed) {
    if (n > m) throw std::invalid_argument("snlab: frame dimension exceeds ambient dimension");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd g(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
        for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = gauss(rng);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(g.rows(), g.cols());
    return q;
}

namespace {

// d/dz of ||z||_p as a vector; a smooth large-p surrogate stands in for the
// sup norm (objective values stay exact, only search directions use it).
Eigen::VectorXd norm_gradient(const Eigen::VectorXd& z, double p) {
    const double ps = is_inf_exponent(p) ? 64.0 : p;
    const double nz = lp_norm(z, ps);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(z.size());
    if (nz == 0.0) return g;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double a = std::abs(z[i]);
        if (a == 0.0) continue;
        g[i] = (z[i] > 0 ? 1.0 : -1.0) * std::pow(a / nz, ps - 1.0);
    }
    return g;
}

struct RatioObjective {
    const FiniteEmbedding& op;
    const Eigen::MatrixXd& basis;

    double value(const Eigen::VectorXd& c) const { return embedding_ratio(op, basis * c); }

    Eigen::VectorXd gradient(const Eigen::VectorXd& c) const {
        const Eigen::VectorXd y = basis * c;
        Eigen::VectorXd wy = y;
        for (std::size_t i = 0; i < op.m; ++i) wy[static_cast<Eigen::Index>(i)] *= op.weight(i);
        const double g = lp_norm(wy, op.p2);
        const double h = lp_norm(y, op.p1);
        Eigen::VectorXd dg = norm_gradient(wy, op.p2);
        for (std::size_t i = 0; i < op.m; ++i) dg[static_cast<Eigen::Index>(i)] *= op.weight(i);
        const Eigen::VectorXd dgc = basis.transpose() * dg;
        const Eigen::VectorXd dhc = basis.transpose() * norm_gradient(y, op.p1);
        return (dgc * h - g * dhc) / (h * h);
    }
};

double local_minimize(const RatioObjective& obj, Eigen::VectorXd c, std::mt19937_64& rng) {
    c.normalize();
    double f = obj.value(c);
    for (int iter = 0; iter < 240; ++iter) {
        Eigen::VectorXd g = obj.gradient(c);
        g -= g.dot(c) * c;  // tangent projection
        const double gn = g.norm();
        if (gn < 1e-13) break;
        double step = 0.4;
        bool moved = false;
        while (step > 1e-7) {
            Eigen::VectorXd cand = (c - step * g / gn).normalized();
            const double fc = obj.value(cand);
            if (fc < f - 1e-14) {
                c = cand;
                f = fc;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }
    // derivative-free polish; robust at p = 1 / p = inf kinks
    std::normal_distribution<double> gauss(0.0, 1.0);
    double scale = 0.05;
    for (int k = 0; k < 80; ++k) {
        Eigen::VectorXd xi(c.size());
        for (Eigen::Index i = 0; i < xi.size(); ++i) xi[i] = gauss(rng);
        Eigen::VectorXd cand = (c + scale * xi).normalized();
        const double fc = obj.value(cand);
        if (fc < f) {
            c = cand;
            f = fc;
        } else {
            scale *= 0.93;
        }
    }
    return f;
}

}  // namespace

double min_ratio_estimate(const FiniteEmbedding& op, const Eigen::MatrixXd& basis, std::size_t starts,
                          std::uint64_t seed) {
    op.validate();
    const Eigen::Index n = basis.cols();
    if (basis.rows() != static_cast<Eigen::Index>(op.m) || n < 1) {
        throw std::invalid_argument("snlab: basis shape mismatch");
    }
    RatioObjective obj{op, basis};
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    double best = kInf;
    for (std::size_t s = 0; s < std::max<std::size_t>(starts, 1); ++s) {
        Eigen::VectorXd c(n);
        if (s == 0) {
            c.setOnes();
        } else {
            for (Eigen::Index i = 0; i < n; ++i) c[i] = gauss(rng);
        }
        best = std::min(best, local_minimize(obj, c, rng));
    }
    return best;
}

namespace {

double lipschitz_bound(const FiniteEmbedding& op) {
    const double m = static_cast<double>(op.m);
    double wmax = 0.0;
    for (std::size_t i = 0; i < op.m; ++i) wmax = std::max(wmax, op.weight(i));
    const double ip1 = inv_exp(op.p1), ip2 = inv_exp(op.p2);
    const double gamma = ip1 >= 0.5 ? 1.0 : std::pow(m, ip1 - 0.5);  // ||y||_{p1} >= gamma on ||c||_2 = 1
    const double lg = wmax * (ip2 >= 0.5 ? std::pow(m, ip2 - 0.5) : 1.0);
    const double lh = ip1 >= 0.5 ? std::pow(m, ip1 - 0.5) : 1.0;
    return lg / gamma * (1.0 + lh / gamma);
}

// Minimum of the ratio over a parameter net of covering radius `mesh`,
// minus the Lipschitz slack: a sound lower bound for the subspace infimum.
double net_lower_bound(const FiniteEmbedding& op, const Eigen::MatrixXd& basis, double mesh) {
    const Eigen::Index n = basis.cols();
    RatioObjective obj{op, basis};
    const double lip = lipschitz_bound(op);

    double net_min = kInf;
    if (n == 1) {
        Eigen::VectorXd c(1);
        c[0] = 1.0;
        return obj.value(c);
    }
    if (n == 2) {
        const double pi = std::acos(-1.0);
        const std::uint64_t steps = static_cast<std::uint64_t>(std::ceil(pi / (2.0 * mesh)));
        for (std::uint64_t j = 0; j < steps; ++j) {
            const double theta = (static_cast<double>(j) + 0.5) * pi / static_cast<double>(steps);
            Eigen::VectorXd c(2);
            c << std::cos(theta), std::sin(theta);
            net_min = std::min(net_min, obj.value(c));
        }
        const double cover = pi / (2.0 * static_cast<double>(steps));
        return net_min - lip * cover;
    }
    if (n == 3) {
        const double pi = std::acos(-1.0);
        const double h = mesh / 2.0;  // per-angle half-spacing target
        const std::uint64_t kt = static_cast<std::uint64_t>(std::ceil(pi / (2.0 * h)));
        const std::uint64_t kp = static_cast<std::uint64_t>(std::ceil(pi / h));
        for (std::uint64_t a = 0; a < kt; ++a) {
            const double theta = (static_cast<double>(a) + 0.5) * pi / static_cast<double>(kt);
            for (std::uint64_t b = 0; b < kp; ++b) {
                const double phi = (static_cast<double>(b) + 0.5) * 2.0 * pi / static_cast<double>(kp);
                Eigen::VectorXd c(3);
                c << std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta);
                net_min = std::min(net_min, obj.value(c));
            }
        }
        const double cover = pi / (2.0 * static_cast<double>(kt)) + pi / static_cast<double>(kp);
        return net_min - lip * cover;
    }
    throw std::invalid_argument("snlab: net certification handles spans of dimension <= 3");
}

}  // namespace

std::optional<NetCertificate> certify_min_ratio(const FiniteEmbedding& op, const Eigen::MatrixXd& basis,
                                                double target_rel_err, std::uint64_t max_evals) {
    op.validate();
    const Eigen::Index n = basis.cols();
    if (n > 3) return std::nullopt;
    if (n == 1) {
        Eigen::VectorXd c(1);
        c[0] = 1.0;
        return NetCertificate{embedding_ratio(op, basis * c), 0.0};
    }

    const double estimate = min_ratio_estimate(op, basis, 4, 1);
    if (!(estimate > 0.0)) return std::nullopt;
    const double lip = lipschitz_bound(op);
    double mesh = target_rel_err * estimate / lip;

    const double pi = std::acos(-1.0);
    if (n == 2) {
        const double needed = pi / (2.0 * mesh);
        if (needed > static_cast<double>(max_evals)) mesh = pi / (2.0 * static_cast<double>(max_evals));
    } else {
        const double needed = 2.0 * pi * pi / (mesh * mesh);
        if (needed > static_cast<double>(max_evals)) {
            mesh = std::sqrt(2.0 * pi * pi / static_cast<double>(max_evals));
        }
    }

    const double value = net_lower_bound(op, basis, mesh);
    if (!(value > 0.0)) return std::nullopt;
    return NetCertificate{value, mesh};
}

WidthBound bernstein_heuristic_witness(const FiniteEmbedding& op, std::size_t n, std::size_t trials,
                                       std::uint64_t seed) {
    op.validate();
    if (n < 1 || n > op.m) throw std::invalid_argument("snlab: subspace dimension out of range");

    WidthBound bound;
    bound.kind = WidthKind::bernstein;
    bound.n = n;
    bound.direction = BoundDirection::lower;

    if (n == 1) {
        // One-dimensional spans see the ratio as a constant, so the best span
        // realizes the operator norm.
        bound.value = operator_norm(op);
        bound.certified = true;
        Witness w;
        w.type = Witness::Type::extremal_vector;
        w.op = op;
        Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(op.m));
        if (inv_exp(op.p1) >= inv_exp(op.p2)) {
            std::size_t arg = 0;
            for (std::size_t i = 0; i < op.m; ++i) {
                if (op.weight(i) > op.weight(arg)) arg = i;
            }
            v[static_cast<Eigen::Index>(arg)] = 1.0;
        } else {
            const double r = 1.0 / (inv_exp(op.p2) - inv_exp(op.p1));
            for (std::size_t i = 0; i < op.m; ++i) {
                v[static_cast<Eigen::Index>(i)] = std::pow(op.weight(i), r / op.p1);
            }
        }
        w.vec = std::move(v);
        bound.witness = std::move(w);
        return bound;
    }

    if (n == op.m) {
        std::vector<std::size_t> all(op.m);
        std::iota(all.begin(), all.end(), std::size_t{0});
        bound.value = coordinate_infimum(op, all);
        bound.certified = true;
        Witness w;
        w.type = Witness::Type::coordinate_subspace;
        w.op = op;
        w.coords = std::move(all);
        bound.witness = std::move(w);
        return bound;
    }

    // Certified baseline from the coordinate span, then try random frames.
    WidthBound best = bernstein_coordinate_witness(op, n);
    Eigen::MatrixXd best_frame;
    for (std::size_t t = 0; t < trials; ++t) {
        Eigen::MatrixXd frame = random_orthonormal_frame(op.m, n, split_seed(seed, 2 * t));
        const double v = min_ratio_estimate(op, frame, 6, split_seed(seed, 2 * t + 1));
        if (v > best.value) {
            best.value = v;
            best.certified = false;
            best_frame = frame;
            Witness w;
            w.type = Witness::Type::basis_matrix;
            w.op = op;
            w.basis = best_frame;
            best.witness = std::move(w);
        }
    }

    if (!best.certified && n <= 3 && op.m <= 16) {
        if (auto cert = certify_min_ratio(op, best_frame)) {
            // Keep whichever certified value is larger.
            const WidthBound coord = bernstein_coordinate_witness(op, n);
            if (cert->value >= coord.value) {
                best.value = cert->value;
                best.certified = true;
                best.witness->net_mesh = cert->mesh;
            } else {
                best = coord;
            }
        }
    }
    best.n = n;
    return best;
}

// --- witness re-evaluation -----------------------------------------------------

double reevaluate(const WidthBound& bound) {
    if (!bound.witness) throw std::invalid_argument("snlab: bound carries no witness");
    const Witness& w = *bound.witness;
    switch (w.type) {
        case Witness::Type::coordinate_subspace:
            return coordinate_infimum(w.op, w.coords);
        case Witness::Type::extremal_vector:
            return embedding_ratio(w.op, w.vec);
        case Witness::Type::truncation: {
            std::vector<bool> is_kept(w.op.m, false);
            for (auto i : w.coords) is_kept[i] = true;
            FiniteEmbedding residual;
            residual.p1 = w.op.p1;
            residual.p2 = w.op.p2;
            for (std::size_t i = 0; i < w.op.m; ++i) {
                if (!is_kept[i]) residual.weights.push_back(w.op.weight(i));
            }
            residual.m = residual.weights.size();
            return residual.m == 0 ? 0.0 : operator_norm(residual);
        }
        case Witness::Type::basis_matrix:
            if (bound.certified) return net_lower_bound(w.op, w.basis, w.net_mesh);
            return min_ratio_estimate(w.op, w.basis, 6, 1);
        case Witness::Type::lattice_covering: {
            std::uint64_t used = 1;
            for (auto c : w.counts) used = checked_mul_u64(used, c);
            if (bound.n < 1 || used > two_pow_u64(static_cast<std::uint32_t>(bound.n - 1))) {
                throw std::runtime_error("snlab: covering witness exceeds its ball budget");
            }
            return covering_radius(w.op, w.counts);
        }
        case Witness::Type::summing:
            return std::pow(static_cast<double>(bound.n), -1.0 / w.r) * w.pi_value;
    }
    throw std::logic_error("snlab: unreachable witness type");
}

// --- serialization ---------------------------------------------------------------

namespace {

const char* witness_type_name(Witness::Type t) {
    switch (t) {
        case Witness::Type::coordinate_subspace: return "coordinate_subspace";
        case Witness::Type::extremal_vector: return "extremal_vector";
        case Witness::Type::basis_matrix: return "basis_matrix";
        case Witness::Type::truncation: return "truncation";
        case Witness::Type::lattice_covering: return "lattice_covering";
        case Witness::Type::summing: return "summing";
    }
    return "unknown";
}

Witness::Type parse_witness_type(const std::string& s) {
    for (auto t : {Witness::Type::coordinate_subspace, Witness::Type::extremal_vector,
                   Witness::Type::basis_matrix, Witness::Type::truncation,
                   Witness::Type::lattice_covering, Witness::Type::summing}) {
        if (witness_type_name(t) == s) return t;
    }
    throw std::runtime_error("snlab: unknown witness type " + s);
}

void write_embedding(std::ostream& os, const FiniteEmbedding& op) {
    os << "embedding " << op.m << ' ' << fmt_exponent(op.p1) << ' ' << fmt_exponent(op.p2);
    if (op.is_identity()) {
        os << " identity";
    } else {
        for (double w : op.weights) os << ' ' << fmt_double(w);
    }
    os << '\n';
}

FiniteEmbedding read_embedding(std::istream& is) {
    std::string tag;
    is >> tag;
    if (tag != "embedding") throw std::runtime_error("snlab: expected embedding block");
    FiniteEmbedding op;
    std::string sp1, sp2;
    is >> op.m >> sp1 >> sp2;
    op.p1 = parse_exponent(sp1);
    op.p2 = parse_exponent(sp2);
    std::string first;
    is >> first;
    if (first != "identity") {
        op.weights.resize(op.m);
        op.weights[0] = std::stod(first);
        for (std::size_t i = 1; i < op.m; ++i) is >> op.weights[i];
    }
    op.validate();
    return op;
}

}  // namespace

std::string serialize(const WidthBound& bound) {
    std::ostringstream os;
    os << "widthbound " << to_string(bound.kind) << ' ' << bound.n << ' ' << fmt_double(bound.value)
       << ' ' << to_string(bound.direction) << ' ' << (bound.certified ? 1 : 0) << '\n';
    if (bound.witness) {
        const Witness& w = *bound.witness;
        os << "witness " << witness_type_name(w.type) << '\n';
        write_embedding(os, w.op);
        switch (w.type) {
            case Witness::Type::coordinate_subspace:
            case Witness::Type::truncation:
                os << "coords " << w.coords.size();
                for (auto i : w.coords) os << ' ' << i;
                os << '\n';
                break;
            case Witness::Type::extremal_vector:
                os << "vector " << w.vec.size();
                for (Eigen::Index i = 0; i < w.vec.size(); ++i) os << ' ' << fmt_double(w.vec[i]);
                os << '\n';
                break;
            case Witness::Type::basis_matrix:
                os << "mesh " << fmt_double(w.net_mesh) << '\n';
                os << "matrix " << w.basis.rows() << ' ' << w.basis.cols() << '\n';
                for (Eigen::Index i = 0; i < w.basis.rows(); ++i) {
                    for (Eigen::Index j = 0; j < w.basis.cols(); ++j) {
                        os << (j ? " " : "") << fmt_double(w.basis(i, j));
                    }
                    os << '\n';
                }
                break;
            case Witness::Type::lattice_covering:
                os << "counts " << w.counts.size();
                for (auto c : w.counts) os << ' ' << c;
                os << '\n';
                break;
            case Witness::Type::summing:
                os << "summing " << fmt_double(w.pi_value) << ' ' << fmt_double(w.r) << '\n';
                break;
        }
    }
    return os.str();
}

WidthBound deserialize_width_bound(const std::string& text) {
    std::istringstream is(text);
    std::string tag, kind, dir;
    WidthBound bound;
    int certified = 0;
    is >> tag;
    if (tag != "widthbound") throw std::runtime_error("snlab: expected widthbound block");
    is >> kind >> bound.n >> bound.value >> dir >> certified;
    bound.kind = parse_kind(kind);
    bound.direction = dir == "upper" ? BoundDirection::upper : BoundDirection::lower;
    bound.certified = certified != 0;

    if (is >> tag) {
        if (tag != "witness") throw std::runtime_error("snlab: expected witness block");
        Witness w;
        std::string type;
        is >> type;
        w.type = parse_witness_type(type);
        w.op = read_embedding(is);
        std::string field;
        is >> field;
        if (field == "coords") {
            std::size_t k = 0;
            is >> k;
            w.coords.resize(k);
            for (auto& i : w.coords) is >> i;
        } else if (field == "vector") {
            Eigen::Index k = 0;
            is >> k;
            w.vec.resize(k);
            for (Eigen::Index i = 0; i < k; ++i) is >> w.vec[i];
        } else if (field == "mesh") {
            is >> w.net_mesh;
            std::string mt;
            Eigen::Index rows = 0, cols = 0;
            is >> mt >> rows >> cols;
            if (mt != "matrix") throw std::runtime_error("snlab: expected matrix block");
            w.basis.resize(rows, cols);
            for (Eigen::Index i = 0; i < rows; ++i) {
                for (Eigen::Index j = 0; j < cols; ++j) is >> w.basis(i, j);
            }
        } else if (field == "counts") {
            std::size_t k = 0;
            is >> k;
            w.counts.resize(k);
            for (auto& c : w.counts) is >> c;
        } else if (field == "summing") {
            is >> w.pi_value >> w.r;
        } else {
            throw std::runtime_error("snlab: unknown witness payload " + field);
        }
        bound.witness = std::move(w);
    }
    return bound;
}

}  // namespace snlab
