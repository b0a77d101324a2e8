#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "aind/engines.hpp"
#include "aind/measure.hpp"

namespace aind {

enum class MetricName {
    Variation,
    Alpha,
    BetaPartition,
    CovSup,
    Prokhorov,
    BoundedLipschitz,
    CfGap,
    RectangleGap,
    BlProduct,
};

std::string metric_key(MetricName name);  // "variation", "alpha", ...
std::optional<MetricName> parse_metric_key(const std::string& key);

struct RectangleCertificate {
    std::vector<std::size_t> a;  // indices into space1
    std::vector<std::size_t> b;  // indices into space2
};

struct PartitionCertificate {
    std::vector<std::size_t> block1;  // block id per point of space1
    std::vector<std::size_t> block2;
};

struct SignCertificate {
    std::vector<int> f;  // ±1 per point of space1
    std::vector<int> g;
};

/// Coupling of two measures restricted to their supports.
struct CouplingCertificate {
    std::vector<std::size_t> rows;  // support of the first measure
    std::vector<std::size_t> cols;  // support of the second measure
    DenseMatrix<double> plan;
    double epsilon = 0.0;
    bool upper_bound_to_product_set = false;
};

struct LipschitzCertificate {
    std::vector<std::size_t> points;
    std::vector<double> values;
};

struct ProductLipschitzCertificate {
    std::vector<double> f;  // on space1
    std::vector<double> g;  // on space2
};

using Certificate =
    std::variant<std::monostate, RectangleCertificate, PartitionCertificate, SignCertificate,
                 CouplingCertificate, LipschitzCertificate, ProductLipschitzCertificate>;

struct MetricValue {
    MetricName name = MetricName::Variation;
    double value = 0.0;
    bool exact = false;
    std::optional<Rational> exact_value;  // rational form of value, when computed in rationals
    Certificate certificate;
};

// --- exact rational functionals of the dependence matrix --------------------

/// AI-4 functional: Σ|μ(i,j)|.
MetricValue variation_norm(const DependenceMatrix& d);

/// Signed μ(A×B).
Rational rectangle_gap(const JointMeasure& j, std::span<const std::size_t> a,
                       std::span<const std::size_t> b);

/// AI-3 functional: max over A, B of |μ(A×B)|.
///
/// Exact mode enumerates subsets of the smaller side (at most `cutoff`
/// points). For fixed A the best B collects the columns where the aggregated
/// signed vector is positive; because columns of μ sum to zero the negative
/// selection gives the same magnitude. Ties keep the lexicographically
/// smallest A. Heuristic mode runs seeded alternating sign ascent and
/// re-evaluates the found rectangle exactly; the result is a lower bound with
/// exact = false.
MetricValue alpha_coefficient(const JointMeasure& j, SearchMode mode = SearchMode::Exact,
                              std::size_t cutoff = kExactSignCutoff);

inline constexpr std::size_t kPartitionCutoff = 6;

/// max over partition pairs (at most max_parts blocks each) of
/// ½ Σᵢⱼ |μ(Aᵢ×Bⱼ)|. Both sides must have at most `cutoff` points.
MetricValue beta_partition(const JointMeasure& j, std::size_t max_parts,
                           std::size_t cutoff = kPartitionCutoff);

/// ½ Σᵢⱼ |μ(Aᵢ×Bⱼ)| for one partition pair, given as block ids.
Rational partition_gap(const JointMeasure& j, std::span<const std::size_t> block1,
                       std::span<const std::size_t> block2);

/// max over f, g with values ±1 of |Σ f(i)g(j)μ(i,j)|; equals 4·alpha.
MetricValue cov_sup_pm1(const JointMeasure& j, SearchMode mode = SearchMode::Exact);

/// Σ f(i)g(j)μ(i,j).
double cov_gap(const JointMeasure& j, std::span<const double> f, std::span<const double> g);
Rational cov_gap(const JointMeasure& j, std::span<const Rational> f, std::span<const Rational> g);

/// Σ h(i,j)μ(i,j) with h given on the grid space1 × space2.
double integral_gap(const JointMeasure& j, const DenseMatrix<double>& h);
Rational integral_gap(const JointMeasure& j, const DenseMatrix<Rational>& h);

// --- geometric distances ----------------------------------------------------

/// Lévy–Prokhorov distance via Strassen's coupling characterization.
///
/// F(ε) is the max flow through support pairs with dist <= ε; it is constant
/// between consecutive pairwise distances, so the distance is
/// min_k max(d_k, 1 − F(d_k)) over the breakpoints d_0 = 0 < d_1 < ….
/// The minimum is located by bisection on the monotone predicate
/// 1 − F(d_k) <= d_k. The certificate is a complete optimal coupling.
MetricValue prokhorov_distance(const DiscreteMeasure& m1, const DiscreteMeasure& m2);

/// inf{ε : plan(dist > ε) <= ε}; equals the Prokhorov distance for an optimal plan.
double coupling_ky_fan(const FiniteMetricSpace& space, const CouplingCertificate& c);

inline constexpr std::size_t kBlCutoff = 600;

/// sup of Σ h·(m1 − m2) over |h| <= 1, |h(z) − h(w)| <= dist(z, w), solved as
/// an LP over the union of the supports. Pairs with dist >= 2, and pairs whose
/// constraint follows from a shorter path through another support point, are
/// dropped before solving.
MetricValue bl_distance(const DiscreteMeasure& m1, const DiscreteMeasure& m2,
                        std::size_t cutoff = kBlCutoff);

/// Re-evaluates a bounded-Lipschitz certificate: Σ h·(m1 − m2). Throws
/// InputError if h violates |h| <= 1 or the Lipschitz bound by more than tol.
double evaluate_lipschitz_certificate(const DiscreteMeasure& m1, const DiscreteMeasure& m2,
                                      const LipschitzCertificate& c, double tol = 1e-9);

/// π(j, product of marginals) on the product space: an upper bound on the
/// distance from j to the set of product measures.
MetricValue prokhorov_to_product_upper(const JointMeasure& j, ProductMetricKind kind);

MetricValue bl_to_product(const JointMeasure& j, ProductMetricKind kind,
                          std::size_t cutoff = kBlCutoff);

/// Lower bound for sup over f ∈ BL₁(E₁), g ∈ BL₁(E₂) of |∫ f⊗g dμ|, by
/// alternating LP best responses from seeded random starts.
MetricValue bl_product_sup_heuristic(const JointMeasure& j, int restarts = 8);

// --- characteristic functions -----------------------------------------------

/// |φ_joint(t, s) − φ_X(t) φ_Y(s)| by direct summation over atoms. Both spaces
/// need coordinates.
double cf_gap(const JointMeasure& j, std::span<const double> t, std::span<const double> s);

/// Max of cf_gap over the lattice {−3,−2,−1,1,2,3}^dim for t and s.
MetricValue cf_gap_sweep(const JointMeasure& j);

inline constexpr double kCfLattice[] = {-3.0, -2.0, -1.0, 1.0, 2.0, 3.0};

struct GaussianBlock {
    std::vector<double> mean1, mean2;
    DenseMatrix<double> cov11, cov22, cov12;
};

/// Throws InputError unless [[cov11, cov12], [cov12ᵀ, cov22]] is symmetric PSD
/// (eigenvalues >= −1e-10·scale) with consistent shapes.
void check_gaussian_block(const GaussianBlock& g);

/// Closed form |φ_X(t)φ_Y(s)|·|exp(−tᵀ cov12 s) − 1|.
double gaussian_cf_gap(const GaussianBlock& g, std::span<const double> t, std::span<const double> s);

}  // namespace aind
