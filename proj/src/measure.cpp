#include "aind/measure.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "aind/errors.hpp"

namespace aind {

namespace {

constexpr double kCoordTol = 1e-12;

double norm_of_difference(std::span<const double> a, std::span<const double> b, CoordNorm norm) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = std::fabs(a[k] - b[k]);
        switch (norm) {
            case CoordNorm::L1: acc += d; break;
            case CoordNorm::Max: acc = std::max(acc, d); break;
            default: acc += d * d; break;
        }
    }
    return (norm == CoordNorm::Euclidean || norm == CoordNorm::Unchecked) ? std::sqrt(acc) : acc;
}

// Norm that the concatenated coordinates of a product satisfy, if any.
CoordNorm product_norm(const FiniteMetricSpace& a, const FiniteMetricSpace& b,
                       ProductMetricKind kind) {
    auto compatible = [](const FiniteMetricSpace& s, CoordNorm want) {
        if (s.norm() == CoordNorm::Unchecked) return false;
        return s.dim() == 1 || s.norm() == want;
    };
    const CoordNorm want = kind == ProductMetricKind::Sum ? CoordNorm::L1 : CoordNorm::Max;
    return compatible(a, want) && compatible(b, want) ? want : CoordNorm::Unchecked;
}

void check_labels(const std::vector<std::string>& labels) {
    if (labels.empty()) throw InputError("metric space must have at least one point");
}

void check_weights(const std::vector<Rational>& w, const char* what) {
    Rational total = 0;
    for (const auto& x : w) {
        if (x < 0) throw InputError(std::string(what) + ": negative weight " + to_string(x));
        total += x;
    }
    if (total != 1) throw InputError(std::string(what) + ": weights sum to " + to_string(total));
}

}  // namespace

SpacePtr FiniteMetricSpace::from_matrix(std::vector<std::string> labels, DenseMatrix<double> dist,
                                        std::optional<DenseMatrix<double>> coords, CoordNorm norm,
                                        bool check_triangle) {
    check_labels(labels);
    const std::size_t n = labels.size();
    if (dist.rows() != n || dist.cols() != n)
        throw InputError("distance matrix must be " + std::to_string(n) + "x" + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (dist(i, i) != 0.0) throw InputError("distance matrix has nonzero diagonal");
        for (std::size_t j = 0; j < n; ++j) {
            const double d = dist(i, j);
            if (!std::isfinite(d)) throw InputError("distance matrix has a non-finite entry");
            if (d != dist(j, i)) throw InputError("distance matrix is not symmetric");
            if (i != j && !(d > 0.0))
                throw InputError("distinct points " + labels[i] + ", " + labels[j] +
                                 " have distance zero");
        }
    }
    if (check_triangle) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    const double lhs = dist(i, k), rhs = dist(i, j) + dist(j, k);
                    if (lhs > rhs + 1e-12 * std::max(1.0, rhs))
                        throw InputError("triangle inequality fails at (" + labels[i] + ", " +
                                         labels[j] + ", " + labels[k] + ")");
                }
    }
    auto space = std::shared_ptr<FiniteMetricSpace>(new FiniteMetricSpace());
    if (coords) {
        if (coords->rows() != n) throw InputError("coords must have one row per point");
        if (norm != CoordNorm::Unchecked) {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (std::fabs(norm_of_difference(coords->row(i), coords->row(j), norm) -
                                  dist(i, j)) > kCoordTol)
                        throw InputError("coords disagree with dist at (" + labels[i] + ", " +
                                         labels[j] + ")");
        }
        space->coords_ = std::move(*coords);
        space->norm_ = norm;
    }
    space->labels_ = std::move(labels);
    space->dist_ = std::move(dist);
    return space;
}

SpacePtr FiniteMetricSpace::from_coords(std::vector<std::string> labels, DenseMatrix<double> coords,
                                        CoordNorm norm) {
    check_labels(labels);
    if (norm == CoordNorm::Unchecked)
        throw InputError("a coordinate metric needs a declared norm");
    if (coords.rows() != labels.size() || coords.cols() == 0)
        throw InputError("coords must have one nonempty row per point");
    for (double x : coords.data())
        if (!std::isfinite(x)) throw InputError("non-finite coordinate");
    {
        std::set<std::vector<double>> seen;
        for (std::size_t i = 0; i < coords.rows(); ++i) {
            auto r = coords.row(i);
            if (!seen.emplace(r.begin(), r.end()).second)
                throw InputError("duplicate coordinates for point " + labels[i]);
        }
    }
    auto space = std::shared_ptr<FiniteMetricSpace>(new FiniteMetricSpace());
    space->labels_ = std::move(labels);
    space->coords_ = std::move(coords);
    space->norm_ = norm;
    space->coord_metric_ = true;
    return space;
}

SpacePtr FiniteMetricSpace::line(std::vector<std::string> labels, std::span<const double> xs) {
    DenseMatrix<double> c(xs.size(), 1);
    for (std::size_t i = 0; i < xs.size(); ++i) c(i, 0) = xs[i];
    return from_coords(std::move(labels), std::move(c), CoordNorm::Euclidean);
}

SpacePtr FiniteMetricSpace::discrete(std::vector<std::string> labels) {
    const std::size_t n = labels.size();
    DenseMatrix<double> d(n, n, 1.0);
    for (std::size_t i = 0; i < n; ++i) d(i, i) = 0.0;
    return from_matrix(std::move(labels), std::move(d), std::nullopt, CoordNorm::Unchecked, false);
}

SpacePtr FiniteMetricSpace::product(SpacePtr first, SpacePtr second, ProductMetricKind kind) {
    const std::size_t n1 = first->size(), n2 = second->size();
    auto space = std::shared_ptr<FiniteMetricSpace>(new FiniteMetricSpace());
    space->labels_.reserve(n1 * n2);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j)
            space->labels_.push_back("(" + first->label(i) + "," + second->label(j) + ")");
    if (first->has_coords() && second->has_coords()) {
        const std::size_t d1 = first->dim(), d2 = second->dim();
        DenseMatrix<double> c(n1 * n2, d1 + d2);
        for (std::size_t i = 0; i < n1; ++i)
            for (std::size_t j = 0; j < n2; ++j) {
                auto row = c.row(i * n2 + j);
                std::copy_n(first->coords(i).begin(), d1, row.begin());
                std::copy_n(second->coords(j).begin(), d2, row.begin() + d1);
            }
        space->coords_ = std::move(c);
        space->norm_ = product_norm(*first, *second, kind);
    }
    space->first_ = std::move(first);
    space->second_ = std::move(second);
    space->kind_ = kind;
    return space;
}

double FiniteMetricSpace::dist(std::size_t i, std::size_t j) const {
    if (first_) {
        const std::size_t n2 = second_->size();
        const double a = first_->dist(i / n2, j / n2);
        const double b = second_->dist(i % n2, j % n2);
        return kind_ == ProductMetricKind::Sum ? a + b : std::max(a, b);
    }
    if (coord_metric_) return i == j ? 0.0 : norm_of_difference(coords_.row(i), coords_.row(j), norm_);
    return dist_(i, j);
}

DenseMatrix<double> FiniteMetricSpace::distance_matrix() const {
    const std::size_t n = size();
    DenseMatrix<double> d(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d(i, j) = dist(i, j);
    return d;
}

std::optional<std::size_t> FiniteMetricSpace::find(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
}

bool same_space(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
    if (&a == &b) return true;
    if (a.size() != b.size() || a.labels() != b.labels()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            if (a.dist(i, j) != b.dist(i, j)) return false;
    return true;
}

SpacePtr product_space(SpacePtr s1, SpacePtr s2, ProductMetricKind kind) {
    return FiniteMetricSpace::product(std::move(s1), std::move(s2), kind);
}

DiscreteMeasure::DiscreteMeasure(SpacePtr space, std::vector<Rational> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
    if (!space_) throw InputError("measure without a space");
    if (weights_.size() != space_->size())
        throw InputError("measure has " + std::to_string(weights_.size()) + " weights for " +
                         std::to_string(space_->size()) + " points");
    check_weights(weights_, "measure");
}

bool DiscreteMeasure::operator==(const DiscreteMeasure& other) const {
    return weights_ == other.weights_ && same_space(*space_, *other.space_);
}

JointMeasure::JointMeasure(SpacePtr space1, SpacePtr space2, DenseMatrix<Rational> weights)
    : space1_(std::move(space1)), space2_(std::move(space2)), weights_(std::move(weights)) {
    if (!space1_ || !space2_) throw InputError("joint measure without spaces");
    if (weights_.rows() != space1_->size() || weights_.cols() != space2_->size())
        throw InputError("joint weight matrix shape does not match its spaces");
    check_weights(weights_.data(), "joint measure");
}

JointMeasure JointMeasure::transposed() const {
    return JointMeasure(space2_, space1_, weights_.transposed());
}

bool JointMeasure::operator==(const JointMeasure& other) const {
    return weights_ == other.weights_ && same_space(*space1_, *other.space1_) &&
           same_space(*space2_, *other.space2_);
}

DependenceMatrix::DependenceMatrix(SpacePtr space1, SpacePtr space2, DenseMatrix<Rational> entries)
    : space1_(std::move(space1)), space2_(std::move(space2)), entries_(std::move(entries)) {
    if (entries_.rows() != space1_->size() || entries_.cols() != space2_->size())
        throw InputError("dependence matrix shape does not match its spaces");
    std::vector<Rational> col(entries_.cols());
    for (std::size_t i = 0; i < entries_.rows(); ++i) {
        Rational r = 0;
        for (std::size_t j = 0; j < entries_.cols(); ++j) {
            r += entries_(i, j);
            col[j] += entries_(i, j);
        }
        if (r != 0) throw InputError("dependence matrix row " + std::to_string(i) + " sums to " +
                                     to_string(r));
    }
    for (std::size_t j = 0; j < col.size(); ++j)
        if (col[j] != 0) throw InputError("dependence matrix column " + std::to_string(j) +
                                          " sums to " + to_string(col[j]));
}

std::pair<DiscreteMeasure, DiscreteMeasure> marginals(const JointMeasure& j) {
    std::vector<Rational> rows(j.rows()), cols(j.cols());
    for (std::size_t a = 0; a < j.rows(); ++a)
        for (std::size_t b = 0; b < j.cols(); ++b) {
            rows[a] += j(a, b);
            cols[b] += j(a, b);
        }
    return {DiscreteMeasure(j.space1(), std::move(rows)), DiscreteMeasure(j.space2(), std::move(cols))};
}

JointMeasure product_measure(const DiscreteMeasure& m1, const DiscreteMeasure& m2) {
    DenseMatrix<Rational> w(m1.size(), m2.size());
    for (std::size_t a = 0; a < m1.size(); ++a)
        for (std::size_t b = 0; b < m2.size(); ++b) w(a, b) = m1[a] * m2[b];
    return JointMeasure(m1.space(), m2.space(), std::move(w));
}

DependenceMatrix dependence_matrix(const JointMeasure& j) {
    const auto [p, q] = marginals(j);
    DenseMatrix<Rational> e(j.rows(), j.cols());
    for (std::size_t a = 0; a < j.rows(); ++a)
        for (std::size_t b = 0; b < j.cols(); ++b) e(a, b) = j(a, b) - p[a] * q[b];
    return DependenceMatrix(j.space1(), j.space2(), std::move(e));
}

namespace {

void check_map(std::span<const std::size_t> f, std::size_t source, std::size_t target,
               const char* what) {
    if (f.size() != source)
        throw InputError(std::string(what) + " has " + std::to_string(f.size()) +
                         " entries for " + std::to_string(source) + " points");
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] >= target)
            throw InputError(std::string(what) + " maps point " + std::to_string(i) +
                             " to index " + std::to_string(f[i]) + " outside the target");
}

}  // namespace

DiscreteMeasure pushforward(const DiscreteMeasure& m, std::span<const std::size_t> f,
                            SpacePtr target) {
    check_map(f, m.size(), target->size(), "pushforward map");
    std::vector<Rational> w(target->size());
    for (std::size_t i = 0; i < m.size(); ++i) w[f[i]] += m[i];
    return DiscreteMeasure(std::move(target), std::move(w));
}

JointMeasure pushforward_joint(const JointMeasure& j, std::span<const std::size_t> u,
                               SpacePtr target1, std::span<const std::size_t> v,
                               SpacePtr target2) {
    check_map(u, j.rows(), target1->size(), "first coordinate map");
    check_map(v, j.cols(), target2->size(), "second coordinate map");
    DenseMatrix<Rational> w(target1->size(), target2->size());
    for (std::size_t a = 0; a < j.rows(); ++a)
        for (std::size_t b = 0; b < j.cols(); ++b) w(u[a], v[b]) += j(a, b);
    return JointMeasure(std::move(target1), std::move(target2), std::move(w));
}

DiscreteMeasure flatten(const JointMeasure& j, const SpacePtr& product) {
    if (!product->first_factor() || !same_space(*product->first_factor(), *j.space1()) ||
        !same_space(*product->second_factor(), *j.space2()))
        throw InputError("flatten target is not the product of the joint's spaces");
    return DiscreteMeasure(product, j.weights().data());
}

std::vector<Rational> normalize_float_weights(std::span<const double> w) {
    std::vector<Rational> q;
    q.reserve(w.size());
    Rational total = 0;
    double ftotal = 0.0;
    for (double x : w) {
        if (!std::isfinite(x) || x < 0.0) throw InputError("weights must be finite and nonnegative");
        q.push_back(from_double(x));
        total += q.back();
        ftotal += x;
    }
    if (std::fabs(ftotal - 1.0) > 1e-9)
        throw InputError("float weights sum to " + std::to_string(ftotal) + ", not 1");
    for (auto& x : q) x /= total;
    return q;
}

}  // namespace aind
