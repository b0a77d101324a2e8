#include <algorithm>
#include <cstdint>
#include <functional>

#include "aind/errors.hpp"
#include "aind/metrics.hpp"

namespace aind {

namespace {

// μ scaled to integers over a common denominator. Sums of any subset of
// entries fit in int64 when `fits` is set; otherwise the mpz copy is used.
struct ScaledMatrix {
    DenseMatrix<mpz_class> big;
    DenseMatrix<std::int64_t> small;
    mpz_class denom = 1;
    bool fits = false;
};

ScaledMatrix scale(const DenseMatrix<Rational>& m) {
    ScaledMatrix s;
    for (const auto& q : m.data()) mpz_lcm(s.denom.get_mpz_t(), s.denom.get_mpz_t(), q.get_den_mpz_t());
    s.big = DenseMatrix<mpz_class>(m.rows(), m.cols());
    mpz_class total_abs = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const Rational& q = m(i, j);
            s.big(i, j) = q.get_num() * (s.denom / q.get_den());
            total_abs += ::abs(s.big(i, j));
        }
    // Gray-code updates add 2·entry; keep a factor-of-4 headroom.
    s.fits = mpz_sizeinbase(total_abs.get_mpz_t(), 2) < 60;
    if (s.fits) {
        s.small = DenseMatrix<std::int64_t>(m.rows(), m.cols());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) s.small(i, j) = s.big(i, j).get_si();
    }
    return s;
}

inline Rational to_rational(std::int64_t v) { return Rational(static_cast<long>(v)); }
inline Rational to_rational(const mpz_class& v) { return Rational(v); }

template <typename T>
T positive_part_sum(const std::vector<T>& agg) {
    T p(0);
    for (const auto& x : agg)
        if (x > T(0)) p += x;
    return p;
}

template <typename T>
T negative_part_sum(const std::vector<T>& agg) {
    T p(0);
    for (const auto& x : agg)
        if (x < T(0)) p -= x;
    return p;
}

struct AlphaSearch {
    std::vector<std::size_t> subset;      // enumerated side
    std::vector<std::size_t> complement;  // best selection on the other side
};

// Subsets of the rows of m in Gray-code order; returns the best scaled value.
template <typename T>
T alpha_rows(const DenseMatrix<T>& m, AlphaSearch& out) {
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<T> agg(cols, T(0));
    std::vector<bool> in(rows, false);
    T best(0);
    bool have = false;
    std::vector<std::size_t> best_set;
    bool best_positive = true;

    auto current_set = [&]() {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < rows; ++i)
            if (in[i]) s.push_back(i);
        return s;
    };
    auto consider = [&]() {
        const T pos = positive_part_sum(agg), neg = negative_part_sum(agg);
        const bool positive = !(neg > pos);
        const T v = positive ? pos : neg;
        if (!have || v > best) {
            best = v;
            best_set = current_set();
            best_positive = positive;
            have = true;
        } else if (v == best) {
            auto s = current_set();
            if (s < best_set) {
                best_set = std::move(s);
                best_positive = positive;
            }
        }
    };

    consider();
    const std::uint64_t total = std::uint64_t{1} << rows;
    for (std::uint64_t k = 1; k < total; ++k) {
        const auto flip = static_cast<std::size_t>(__builtin_ctzll(k));
        in[flip] = !in[flip];
        for (std::size_t j = 0; j < cols; ++j) {
            if (in[flip]) agg[j] += m(flip, j);
            else agg[j] -= m(flip, j);
        }
        consider();
    }

    std::vector<T> final_agg(cols, T(0));
    for (std::size_t i : best_set)
        for (std::size_t j = 0; j < cols; ++j) final_agg[j] += m(i, j);
    out.subset = best_set;
    out.complement.clear();
    for (std::size_t j = 0; j < cols; ++j)
        if (best_positive ? final_agg[j] > T(0) : final_agg[j] < T(0)) out.complement.push_back(j);
    return best;
}

MetricValue make_exact(MetricName name, Rational v, Certificate cert) {
    MetricValue mv;
    mv.name = name;
    mv.value = v.get_d();
    mv.exact = true;
    mv.exact_value = std::move(v);
    mv.certificate = std::move(cert);
    return mv;
}

}  // namespace

std::string metric_key(MetricName name) {
    switch (name) {
        case MetricName::Variation: return "variation";
        case MetricName::Alpha: return "alpha";
        case MetricName::BetaPartition: return "beta";
        case MetricName::CovSup: return "cov_sup";
        case MetricName::Prokhorov: return "prokhorov";
        case MetricName::BoundedLipschitz: return "bl";
        case MetricName::CfGap: return "cf_gap";
        case MetricName::RectangleGap: return "rectangle";
        case MetricName::BlProduct: return "bl_product";
    }
    return "unknown";
}

std::optional<MetricName> parse_metric_key(const std::string& key) {
    for (auto n : {MetricName::Variation, MetricName::Alpha, MetricName::BetaPartition,
                   MetricName::CovSup, MetricName::Prokhorov, MetricName::BoundedLipschitz,
                   MetricName::CfGap, MetricName::RectangleGap, MetricName::BlProduct})
        if (metric_key(n) == key) return n;
    return std::nullopt;
}

MetricValue variation_norm(const DependenceMatrix& d) {
    Rational total = 0;
    for (const auto& q : d.entries().data()) total += abs(q);
    return make_exact(MetricName::Variation, std::move(total), {});
}

Rational rectangle_gap(const JointMeasure& j, std::span<const std::size_t> a,
                       std::span<const std::size_t> b) {
    for (auto i : a)
        if (i >= j.rows()) throw InputError("rectangle row index out of range");
    for (auto k : b)
        if (k >= j.cols()) throw InputError("rectangle column index out of range");
    const auto [p, q] = marginals(j);
    std::vector<bool> in_a(j.rows(), false), in_b(j.cols(), false);
    for (auto i : a) in_a[i] = true;
    for (auto k : b) in_b[k] = true;
    Rational joint = 0, pa = 0, qb = 0;
    for (std::size_t i = 0; i < j.rows(); ++i) {
        if (!in_a[i]) continue;
        pa += p[i];
        for (std::size_t k = 0; k < j.cols(); ++k)
            if (in_b[k]) joint += j(i, k);
    }
    for (std::size_t k = 0; k < j.cols(); ++k)
        if (in_b[k]) qb += q[k];
    return joint - pa * qb;
}

MetricValue alpha_coefficient(const JointMeasure& j, SearchMode mode, std::size_t cutoff) {
    const DependenceMatrix dep = dependence_matrix(j);
    const bool transpose = j.rows() > j.cols();
    const DenseMatrix<Rational> m = transpose ? dep.entries().transposed() : dep.entries();
    const ScaledMatrix s = scale(m);

    AlphaSearch search;
    Rational value;
    if (mode == SearchMode::Exact) {
        if (m.rows() > std::min(cutoff, kExactSignCutoff))
            throw CapabilityError("exact alpha needs the smaller side to have at most " +
                                  std::to_string(std::min(cutoff, kExactSignCutoff)) +
                                  " points, got " + std::to_string(m.rows()));
        if (s.fits) value = to_rational(alpha_rows(s.small, search)) / Rational(s.denom);
        else value = to_rational(alpha_rows(s.big, search)) / Rational(s.denom);
    } else {
        // Sign ascent on the scaled matrix, then the rectangle {f = +1} × {agg > 0}.
        std::vector<int> f;
        if (s.fits) f = hypercube_bilinear_max(s.small, SearchMode::Heuristic).a;
        else f = hypercube_bilinear_max(s.big, SearchMode::Heuristic).a;
        for (std::size_t i = 0; i < f.size(); ++i)
            if (f[i] > 0) search.subset.push_back(i);
        std::vector<Rational> agg(m.cols());
        for (auto i : search.subset)
            for (std::size_t k = 0; k < m.cols(); ++k) agg[k] += m(i, k);
        for (std::size_t k = 0; k < m.cols(); ++k)
            if (agg[k] > 0) search.complement.push_back(k);
        value = 0;
        for (auto k : search.complement) value += agg[k];
    }
    value.canonicalize();

    RectangleCertificate cert;
    cert.a = transpose ? search.complement : search.subset;
    cert.b = transpose ? search.subset : search.complement;
    MetricValue mv = make_exact(MetricName::Alpha, std::move(value), std::move(cert));
    if (mode == SearchMode::Heuristic) mv.exact = false;
    return mv;
}

namespace {

// Restricted-growth strings: block id per element, at most max_parts blocks.
void for_each_partition(std::size_t n, std::size_t max_parts,
                        const std::function<void(const std::vector<std::size_t>&, std::size_t)>& fn) {
    std::vector<std::size_t> rgs(n, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t blocks) {
        if (pos == n) {
            fn(rgs, blocks);
            return;
        }
        for (std::size_t b = 0; b <= blocks && b < max_parts; ++b) {
            rgs[pos] = b;
            rec(pos + 1, std::max(blocks, b + 1));
        }
    };
    if (n == 0) {
        fn(rgs, 0);
        return;
    }
    rec(0, 0);
}

template <typename T>
T beta_search(const DenseMatrix<T>& m, std::size_t max_parts, PartitionCertificate& cert) {
    std::vector<std::vector<std::size_t>> parts2;
    std::vector<std::size_t> counts2;
    for_each_partition(m.cols(), max_parts, [&](const std::vector<std::size_t>& p, std::size_t k) {
        parts2.push_back(p);
        counts2.push_back(k);
    });
    T best(0);
    bool have = false;
    DenseMatrix<T> rowagg;
    for_each_partition(m.rows(), max_parts, [&](const std::vector<std::size_t>& p1, std::size_t k1) {
        rowagg = DenseMatrix<T>(k1, m.cols(), T(0));
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) rowagg(p1[i], j) += m(i, j);
        std::vector<T> cell;
        for (std::size_t q = 0; q < parts2.size(); ++q) {
            const auto& p2 = parts2[q];
            T total(0);
            for (std::size_t a = 0; a < k1; ++a) {
                cell.assign(counts2[q], T(0));
                for (std::size_t j = 0; j < m.cols(); ++j) cell[p2[j]] += rowagg(a, j);
                for (const auto& c : cell) total += detail::abs_value(c);
            }
            if (!have || total > best) {
                best = total;
                cert.block1 = p1;
                cert.block2 = p2;
                have = true;
            }
        }
    });
    return best;
}

}  // namespace

Rational partition_gap(const JointMeasure& j, std::span<const std::size_t> block1,
                       std::span<const std::size_t> block2) {
    if (block1.size() != j.rows() || block2.size() != j.cols())
        throw InputError("partition block ids do not match the joint's spaces");
    const auto dep = dependence_matrix(j);
    const std::size_t k1 = block1.empty() ? 0 : *std::max_element(block1.begin(), block1.end()) + 1;
    const std::size_t k2 = block2.empty() ? 0 : *std::max_element(block2.begin(), block2.end()) + 1;
    DenseMatrix<Rational> cells(k1, k2);
    for (std::size_t i = 0; i < j.rows(); ++i)
        for (std::size_t k = 0; k < j.cols(); ++k) cells(block1[i], block2[k]) += dep(i, k);
    Rational total = 0;
    for (const auto& c : cells.data()) total += abs(c);
    return total / 2;
}

MetricValue beta_partition(const JointMeasure& j, std::size_t max_parts, std::size_t cutoff) {
    if (max_parts == 0) throw InputError("beta_partition needs max_parts >= 1");
    if (j.rows() > cutoff || j.cols() > cutoff)
        throw CapabilityError("partition enumeration needs both sides to have at most " +
                              std::to_string(cutoff) + " points, got " + std::to_string(j.rows()) +
                              "x" + std::to_string(j.cols()));
    const auto s = scale(dependence_matrix(j).entries());
    PartitionCertificate cert;
    Rational value = s.fits ? to_rational(beta_search(s.small, max_parts, cert)) / Rational(s.denom)
                            : to_rational(beta_search(s.big, max_parts, cert)) / Rational(s.denom);
    value /= 2;
    value.canonicalize();
    return make_exact(MetricName::BetaPartition, std::move(value), std::move(cert));
}

MetricValue cov_sup_pm1(const JointMeasure& j, SearchMode mode) {
    const auto s = scale(dependence_matrix(j).entries());
    SignCertificate cert;
    Rational value;
    bool exact = mode == SearchMode::Exact;
    if (s.fits) {
        auto r = hypercube_bilinear_max(s.small, mode);
        value = to_rational(r.value) / Rational(s.denom);
        cert.f = std::move(r.a);
        cert.g = std::move(r.b);
    } else {
        auto r = hypercube_bilinear_max(s.big, mode);
        value = Rational(r.value) / Rational(s.denom);
        cert.f = std::move(r.a);
        cert.g = std::move(r.b);
    }
    value.canonicalize();
    MetricValue mv = make_exact(MetricName::CovSup, std::move(value), std::move(cert));
    mv.exact = exact;
    return mv;
}

Rational cov_gap(const JointMeasure& j, std::span<const Rational> f, std::span<const Rational> g) {
    if (f.size() != j.rows() || g.size() != j.cols())
        throw InputError("cov_gap: f and g must match the joint's spaces");
    const auto dep = dependence_matrix(j);
    Rational total = 0;
    for (std::size_t i = 0; i < j.rows(); ++i) {
        if (f[i] == 0) continue;
        Rational row = 0;
        for (std::size_t k = 0; k < j.cols(); ++k) row += dep(i, k) * g[k];
        total += f[i] * row;
    }
    return total;
}

double cov_gap(const JointMeasure& j, std::span<const double> f, std::span<const double> g) {
    if (f.size() != j.rows() || g.size() != j.cols())
        throw InputError("cov_gap: f and g must match the joint's spaces");
    std::vector<Rational> fq, gq;
    for (double x : f) fq.push_back(from_double(x));
    for (double x : g) gq.push_back(from_double(x));
    return cov_gap(j, fq, gq).get_d();
}

Rational integral_gap(const JointMeasure& j, const DenseMatrix<Rational>& h) {
    if (h.rows() != j.rows() || h.cols() != j.cols())
        throw InputError("integral_gap: h must be indexed like the joint");
    const auto dep = dependence_matrix(j);
    Rational total = 0;
    for (std::size_t i = 0; i < j.rows(); ++i)
        for (std::size_t k = 0; k < j.cols(); ++k)
            if (h(i, k) != 0) total += h(i, k) * dep(i, k);
    return total;
}

double integral_gap(const JointMeasure& j, const DenseMatrix<double>& h) {
    if (h.rows() != j.rows() || h.cols() != j.cols())
        throw InputError("integral_gap: h must be indexed like the joint");
    DenseMatrix<Rational> hq(h.rows(), h.cols());
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t k = 0; k < h.cols(); ++k) hq(i, k) = from_double(h(i, k));
    return integral_gap(j, hq).get_d();
}

}  // namespace aind
