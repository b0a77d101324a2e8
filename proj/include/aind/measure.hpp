#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aind/matrix.hpp"
#include "aind/rational.hpp"

namespace aind {

enum class ProductMetricKind { Sum, Max };

/// Norm that relates coordinates to distances. Unchecked means the coordinates
/// are an embedding used by characteristic-function operations only.
enum class CoordNorm { Euclidean, L1, Max, Unchecked };

class FiniteMetricSpace;
using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

/// Finite set of labelled points with a metric.
///
/// Three storage forms share one interface: an explicit distance matrix,
/// distances derived from coordinates under a declared norm, and the product
/// of two spaces. The latter two never materialize the N×N matrix, so the
/// 2ⁿ-point spaces of the binary-coding family stay cheap.
class FiniteMetricSpace {
public:
    /// Validating constructor for user-supplied matrices. Checks symmetry,
    /// zero diagonal, positivity off the diagonal, the triangle inequality
    /// (O(N³), skipped when check_triangle is false) and, with coords, the
    /// agreement of dist with the declared norm to 1e-12.
    static SpacePtr from_matrix(std::vector<std::string> labels, DenseMatrix<double> dist,
                                std::optional<DenseMatrix<double>> coords = std::nullopt,
                                CoordNorm norm = CoordNorm::Euclidean,
                                bool check_triangle = true);

    /// Distances are norm(coords[i] - coords[j]). Points must be distinct.
    static SpacePtr from_coords(std::vector<std::string> labels, DenseMatrix<double> coords,
                                CoordNorm norm = CoordNorm::Euclidean);

    /// Points on the real line with |x - y|.
    static SpacePtr line(std::vector<std::string> labels, std::span<const double> xs);

    /// Discrete metric: distance 1 between distinct points.
    static SpacePtr discrete(std::vector<std::string> labels);

    static SpacePtr product(SpacePtr first, SpacePtr second, ProductMetricKind kind);

    std::size_t size() const { return labels_.size(); }
    double dist(std::size_t i, std::size_t j) const;
    const std::string& label(std::size_t i) const { return labels_[i]; }
    const std::vector<std::string>& labels() const { return labels_; }

    bool has_coords() const { return !coords_.empty(); }
    std::size_t dim() const { return coords_.cols(); }
    std::span<const double> coords(std::size_t i) const { return coords_.row(i); }
    const DenseMatrix<double>& coord_matrix() const { return coords_; }
    CoordNorm norm() const { return norm_; }

    /// Full distance matrix; O(N²) memory.
    DenseMatrix<double> distance_matrix() const;

    /// Index of the point with the given label, if any.
    std::optional<std::size_t> find(const std::string& label) const;

    /// Product factors, when this space was built by product().
    const SpacePtr& first_factor() const { return first_; }
    const SpacePtr& second_factor() const { return second_; }

private:
    FiniteMetricSpace() = default;

    std::vector<std::string> labels_;
    DenseMatrix<double> coords_;
    CoordNorm norm_ = CoordNorm::Unchecked;
    DenseMatrix<double> dist_;  // empty unless explicit
    bool coord_metric_ = false;
    SpacePtr first_, second_;
    ProductMetricKind kind_ = ProductMetricKind::Sum;
};

/// Pointer identity or identical labels and distances.
bool same_space(const FiniteMetricSpace& a, const FiniteMetricSpace& b);

SpacePtr product_space(SpacePtr s1, SpacePtr s2, ProductMetricKind kind);

class DiscreteMeasure {
public:
    /// Throws InputError unless weights are nonnegative, sum to exactly one and
    /// match the space's point count.
    DiscreteMeasure(SpacePtr space, std::vector<Rational> weights);

    const SpacePtr& space() const { return space_; }
    std::size_t size() const { return weights_.size(); }
    const Rational& operator[](std::size_t i) const { return weights_[i]; }
    const std::vector<Rational>& weights() const { return weights_; }

    bool operator==(const DiscreteMeasure& other) const;

private:
    SpacePtr space_;
    std::vector<Rational> weights_;
};

class JointMeasure {
public:
    /// rows index space1, columns space2.
    JointMeasure(SpacePtr space1, SpacePtr space2, DenseMatrix<Rational> weights);

    const SpacePtr& space1() const { return space1_; }
    const SpacePtr& space2() const { return space2_; }
    const DenseMatrix<Rational>& weights() const { return weights_; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return weights_(i, j); }
    std::size_t rows() const { return weights_.rows(); }
    std::size_t cols() const { return weights_.cols(); }

    JointMeasure transposed() const;

    bool operator==(const JointMeasure& other) const;

private:
    SpacePtr space1_, space2_;
    DenseMatrix<Rational> weights_;
};

/// Signed measure joint − product of marginals. Rows and columns sum to zero.
class DependenceMatrix {
public:
    DependenceMatrix(SpacePtr space1, SpacePtr space2, DenseMatrix<Rational> entries);

    const SpacePtr& space1() const { return space1_; }
    const SpacePtr& space2() const { return space2_; }
    const DenseMatrix<Rational>& entries() const { return entries_; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }
    std::size_t rows() const { return entries_.rows(); }
    std::size_t cols() const { return entries_.cols(); }

private:
    SpacePtr space1_, space2_;
    DenseMatrix<Rational> entries_;
};

std::pair<DiscreteMeasure, DiscreteMeasure> marginals(const JointMeasure& j);

JointMeasure product_measure(const DiscreteMeasure& m1, const DiscreteMeasure& m2);

DependenceMatrix dependence_matrix(const JointMeasure& j);

/// f[i] is the target index of source point i.
DiscreteMeasure pushforward(const DiscreteMeasure& m, std::span<const std::size_t> f,
                            SpacePtr target);

JointMeasure pushforward_joint(const JointMeasure& j, std::span<const std::size_t> u,
                               SpacePtr target1, std::span<const std::size_t> v,
                               SpacePtr target2);

/// The joint viewed as a single measure on product_space(space1, space2, kind).
DiscreteMeasure flatten(const JointMeasure& j, const SpacePtr& product);

/// Weights of an already-normalized list of doubles, as used for JSON input:
/// accepted when the sum is within 1e-9 of one, then rescaled exactly.
std::vector<Rational> normalize_float_weights(std::span<const double> w);

}  // namespace aind
