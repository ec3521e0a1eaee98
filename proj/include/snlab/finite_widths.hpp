#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace snlab {

enum class WidthKind { approximation, weyl, gelfand, kolmogorov, bernstein, entropy };
enum class BoundDirection { upper, lower };

std::string to_string(WidthKind kind);
std::string to_string(BoundDirection dir);

// Diagonal operator diag(weights): ell_{p1}^m -> ell_{p2}^m; empty weights
// mean the identity. Exponents may be infinite.
struct FiniteEmbedding {
    std::size_t m = 1;
    double p1 = 2.0;
    double p2 = 2.0;
    std::vector<double> weights;  // empty = identity

    void validate() const;
    bool is_identity() const { return weights.empty(); }
    bool is_hilbert() const { return p1 == 2.0 && p2 == 2.0; }
    double weight(std::size_t i) const { return weights.empty() ? 1.0 : weights[i]; }
};

// Payload sufficient to re-evaluate a certified bound independently of the
// pipeline that produced it.
struct Witness {
    enum class Type {
        coordinate_subspace,  // closed-form infimum on a coordinate span
        extremal_vector,      // ratio attained at a single vector (norm witnesses)
        basis_matrix,         // net-certified infimum over span of columns
        truncation,           // residual norm after dropping the kept coordinates
        lattice_covering,     // entropy covering by axis-aligned center grids
        summing               // n^{-1/r} pi_{r,2} arithmetic
    };

    Type type = Type::coordinate_subspace;
    FiniteEmbedding op;
    std::vector<std::size_t> coords;  // coordinate_subspace: span; truncation: kept set
    Eigen::MatrixXd basis;            // basis_matrix: orthonormal columns
    double net_mesh = 0.0;            // basis_matrix: parameter-space mesh used
    Eigen::VectorXd vec;              // extremal_vector
    std::vector<std::uint64_t> counts;  // lattice_covering: per-axis center counts
    double pi_value = 0.0;              // summing
    double r = 0.0;                     // summing
    double scale = 1.0;                 // level factor applied by bound transfers
};

// A numeric statement about one s-number: kind, index, value, direction and
// whether the number is backed by a certificate.
struct WidthBound {
    WidthKind kind = WidthKind::approximation;
    std::size_t n = 1;
    double value = 0.0;
    BoundDirection direction = BoundDirection::upper;
    bool certified = false;
    std::optional<Witness> witness;
};

// Closed-form operator norm of a diagonal map between ell_p spaces.
double operator_norm(const FiniteEmbedding& op);

// Exact infimum of ||Wx||_{p2} / ||x||_{p1} over the span of the given
// coordinates (power-mean extremizers give the closed form).
double coordinate_infimum(const FiniteEmbedding& op, const std::vector<std::size_t>& coords);

// All s-numbers of a Hilbert-to-Hilbert diagonal operator: the weights sorted
// descending, exact for approximation/weyl/gelfand/kolmogorov/bernstein.
std::vector<double> hilbert_exact_widths(const FiniteEmbedding& op);

// Certified Bernstein lower bound from the span of the n largest-weight
// coordinates (e_1..e_n for identities).
WidthBound bernstein_coordinate_witness(const FiniteEmbedding& op, std::size_t n);

// Randomized Bernstein lower estimate: best of random orthonormal n-frames,
// each scored by multistart minimization of the ratio on the frame's sphere.
// Certified only in closed-form corners (n=1, n=m) or by a sphere net when
// n <= 3 and m <= 16.
WidthBound bernstein_heuristic_witness(const FiniteEmbedding& op, std::size_t n, std::size_t trials,
                                       std::uint64_t seed);

// Certified approximation-number upper bound (valid for Weyl numbers) from
// dropping all but the n-1 largest-weight coordinates.
WidthBound truncation_upper_bound(const FiniteEmbedding& op, std::size_t n);

// Exact Bernstein number of an invertible Hilbert diagonal operator via the
// Gelfand number of its inverse.
double duality_bernstein(const FiniteEmbedding& op, std::size_t n);

// Two-sided bracket when only a certified bracket on c_{m-n+1}(T^{-1}) is
// available: returns {lower, upper} Bernstein bounds.
std::pair<WidthBound, WidthBound> duality_bernstein_bracket(const FiniteEmbedding& op, std::size_t n,
                                                            double c_lower, double c_upper);

// pi_2 of the identity ell_{p1}^m -> ell_2^m, p1 >= 2: exactly sqrt(m).
double summing_norm_pi2(const FiniteEmbedding& op);

// Weyl upper bound n^{-1/r} pi_{r,2}.
WidthBound weyl_from_summing(double pi_value, double r, std::size_t n);

// Predicted finite-dimensional power laws for x_n(id^m) (2n <= m regime) and
// b_n(id^{2n}); errors on parameter corners the lemmas do not cover.
struct FiniteRate {
    enum class Var { n, m };
    double power = 0.0;
    Var var = Var::n;
    std::string case_id;
};

FiniteRate finite_rate_table(WidthKind kind, double p1, double p2);

// Certified entropy upper bound from an explicit axis-aligned lattice
// covering of the image box; tiny instances only (m <= 4).
WidthBound entropy_covering_upper(const FiniteEmbedding& op, std::size_t n);

// Recompute a certified bound's value from its witness alone.
double reevaluate(const WidthBound& bound);

// Text serialization of bounds with witnesses.
std::string serialize(const WidthBound& bound);
WidthBound deserialize_width_bound(const std::string& text);

// Ratio ||W x||_{p2} / ||x||_{p1} at a point.
double embedding_ratio(const FiniteEmbedding& op, const Eigen::VectorXd& x);

// Heuristic minimum of the ratio over span(basis); exposed for the block
// witness assembly and for tests.
double min_ratio_estimate(const FiniteEmbedding& op, const Eigen::MatrixXd& basis, std::size_t starts,
                          std::uint64_t seed);

// Sound lower bound on the subspace infimum by exhausting a sphere net with
// an explicit Lipschitz modulus; dimension of the span must be <= 3.
struct NetCertificate {
    double value = 0.0;
    double mesh = 0.0;
};
std::optional<NetCertificate> certify_min_ratio(const FiniteEmbedding& op, const Eigen::MatrixXd& basis,
                                                double target_rel_err = 0.01,
                                                std::uint64_t max_evals = 6'000'000);

// Haar-distributed orthonormal m x n frame.
Eigen::MatrixXd random_orthonormal_frame(std::size_t m, std::size_t n, std::uint64_t seed);

}  // namespace snlab
