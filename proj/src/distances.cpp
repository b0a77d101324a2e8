#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "aind/errors.hpp"
#include "aind/metrics.hpp"

namespace aind {

namespace {

constexpr double kBreakpointSlack = 1e-12;
constexpr std::size_t kProkhorovPairCutoff = 4'000'000;

std::vector<std::size_t> support(const DiscreteMeasure& m) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i] > 0) s.push_back(i);
    return s;
}

void require_same_space(const DiscreteMeasure& m1, const DiscreteMeasure& m2, const char* what) {
    if (!same_space(*m1.space(), *m2.space()))
        throw InputError(std::string(what) + ": measures live on different spaces");
}

// Bipartite transport network over support pairs with dist <= eps.
class StrassenFlow {
public:
    StrassenFlow(const DiscreteMeasure& m1, const DiscreteMeasure& m2)
        : space_(*m1.space()), rows_(support(m1)), cols_(support(m2)) {
        if (rows_.size() * cols_.size() > kProkhorovPairCutoff)
            throw CapabilityError("Prokhorov computation limited to " +
                                  std::to_string(kProkhorovPairCutoff) + " support pairs, got " +
                                  std::to_string(rows_.size() * cols_.size()));
        for (auto i : rows_) p_.push_back(m1[i].get_d());
        for (auto j : cols_) q_.push_back(m2[j].get_d());
        dist_ = DenseMatrix<double>(rows_.size(), cols_.size());
        for (std::size_t a = 0; a < rows_.size(); ++a)
            for (std::size_t b = 0; b < cols_.size(); ++b) {
                dist_(a, b) = space_.dist(rows_[a], cols_[b]);
                breakpoints_.push_back(dist_(a, b));
            }
        breakpoints_.push_back(0.0);
        std::sort(breakpoints_.begin(), breakpoints_.end());
        breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());
    }

    const std::vector<double>& breakpoints() const { return breakpoints_; }

    // Unmatched mass 1 − F(eps), cached per breakpoint.
    double deficit(std::size_t k) {
        if (auto it = cache_.find(k); it != cache_.end()) return it->second.first;
        auto [value, plan] = solve(breakpoints_[k]);
        const double d = std::max(0.0, 1.0 - value);
        cache_.emplace(k, std::make_pair(d, std::move(plan)));
        return d;
    }

    CouplingCertificate coupling(std::size_t k, double epsilon) {
        deficit(k);
        CouplingCertificate c;
        c.rows = rows_;
        c.cols = cols_;
        c.plan = cache_.at(k).second;
        c.epsilon = epsilon;
        // Spread the unmatched mass as a product of the residual marginals.
        std::vector<double> rr(rows_.size()), cr(cols_.size());
        double total = 0.0;
        for (std::size_t a = 0; a < rows_.size(); ++a) {
            double s = 0.0;
            for (std::size_t b = 0; b < cols_.size(); ++b) s += c.plan(a, b);
            rr[a] = std::max(0.0, p_[a] - s);
            total += rr[a];
        }
        for (std::size_t b = 0; b < cols_.size(); ++b) {
            double s = 0.0;
            for (std::size_t a = 0; a < rows_.size(); ++a) s += c.plan(a, b);
            cr[b] = std::max(0.0, q_[b] - s);
        }
        if (total > 0.0)
            for (std::size_t a = 0; a < rows_.size(); ++a)
                for (std::size_t b = 0; b < cols_.size(); ++b) c.plan(a, b) += rr[a] * cr[b] / total;
        return c;
    }

private:
    std::pair<double, DenseMatrix<double>> solve(double eps) const {
        const std::size_t nr = rows_.size(), nc = cols_.size();
        FlowNetwork net;
        net.node_count = nr + nc + 2;
        net.source = nr + nc;
        net.sink = nr + nc + 1;
        for (std::size_t a = 0; a < nr; ++a) net.edges.push_back({net.source, a, p_[a]});
        for (std::size_t b = 0; b < nc; ++b) net.edges.push_back({nr + b, net.sink, q_[b]});
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t a = 0; a < nr; ++a)
            for (std::size_t b = 0; b < nc; ++b)
                if (dist_(a, b) <= eps) {
                    net.edges.push_back({a, nr + b, std::min(p_[a], q_[b])});
                    pairs.emplace_back(a, b);
                }
        const FlowResult r = max_flow(net);
        DenseMatrix<double> plan(nr, nc, 0.0);
        for (std::size_t k = 0; k < pairs.size(); ++k)
            plan(pairs[k].first, pairs[k].second) = r.edge_flow[nr + nc + k];
        return {r.value, std::move(plan)};
    }

    const FiniteMetricSpace& space_;
    std::vector<std::size_t> rows_, cols_;
    std::vector<double> p_, q_;
    DenseMatrix<double> dist_;
    std::vector<double> breakpoints_;
    std::map<std::size_t, std::pair<double, DenseMatrix<double>>> cache_;
};

}  // namespace

MetricValue prokhorov_distance(const DiscreteMeasure& m1, const DiscreteMeasure& m2) {
    require_same_space(m1, m2, "prokhorov_distance");
    MetricValue mv;
    mv.name = MetricName::Prokhorov;
    StrassenFlow flow(m1, m2);
    const auto& d = flow.breakpoints();

    // First breakpoint where the unmatched mass fits under the radius.
    std::size_t lo = 0, hi = d.size() - 1;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (flow.deficit(mid) <= d[mid] + kBreakpointSlack) hi = mid;
        else lo = mid + 1;
    }
    const std::size_t first = lo;
    double value = d[first];
    std::size_t plan_at = first;
    if (first > 0) {
        const double g = flow.deficit(first - 1);
        if (g < value) {
            value = g;
            plan_at = first - 1;
        }
    }
    value = std::min(value, 1.0);
    mv.value = value;
    mv.exact = false;
    mv.certificate = flow.coupling(plan_at, value);
    return mv;
}

double coupling_ky_fan(const FiniteMetricSpace& space, const CouplingCertificate& c) {
    std::vector<std::pair<double, double>> mass;  // (distance, plan mass)
    for (std::size_t a = 0; a < c.rows.size(); ++a)
        for (std::size_t b = 0; b < c.cols.size(); ++b)
            if (c.plan(a, b) > 0.0) mass.emplace_back(space.dist(c.rows[a], c.cols[b]), c.plan(a, b));
    std::sort(mass.begin(), mass.end());
    double total = 0.0;
    for (const auto& [dd, w] : mass) total += w;
    // Tail mass beyond each candidate radius, scanning distances upward.
    double best = std::min(1.0, total);
    double tail = total;
    double eps = 0.0;
    std::size_t k = 0;
    while (true) {
        while (k < mass.size() && mass[k].first <= eps) tail -= mass[k++].second;
        best = std::min(best, std::max(eps, std::max(0.0, tail)));
        if (k == mass.size()) break;
        eps = mass[k].first;
    }
    return best;
}

namespace {

struct BlProblem {
    std::vector<std::size_t> points;
    std::vector<double> weights;
};

// LP over h on `points` maximizing Σ weights·h with |h| <= 1 and the
// Lipschitz constraints that are not implied by others.
LipschitzCertificate solve_bl_lp(const FiniteMetricSpace& space, const BlProblem& prob) {
    const std::size_t n = prob.points.size();
    DenseMatrix<double> d(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) d(a, b) = space.dist(prob.points[a], prob.points[b]);

    LinearProgram lp;
    lp.objective = prob.weights;
    lp.lower.assign(n, -1.0);
    lp.upper.assign(n, 1.0);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            const double dab = d(a, b);
            if (dab >= 2.0) continue;
            bool implied = false;
            for (std::size_t c = 0; c < n && !implied; ++c)
                if (c != a && c != b && d(a, c) + d(c, b) <= dab) implied = true;
            if (implied) continue;
            LinearConstraint up;
            up.coeffs.assign(n, 0.0);
            up.coeffs[a] = 1.0;
            up.coeffs[b] = -1.0;
            up.bound = dab;
            LinearConstraint down = up;
            down.coeffs[a] = -1.0;
            down.coeffs[b] = 1.0;
            lp.constraints.push_back(std::move(up));
            lp.constraints.push_back(std::move(down));
        }
    const LpResult r = solve_lp(lp);
    if (r.status != LpStatus::Optimal)
        throw SolverError("bounded-Lipschitz LP did not reach optimality");
    return {prob.points, r.solution};
}

}  // namespace

MetricValue bl_distance(const DiscreteMeasure& m1, const DiscreteMeasure& m2, std::size_t cutoff) {
    require_same_space(m1, m2, "bl_distance");
    BlProblem prob;
    for (std::size_t i = 0; i < m1.size(); ++i) {
        const Rational diff = m1[i] - m2[i];
        if (m1[i] > 0 || m2[i] > 0) {
            prob.points.push_back(i);
            prob.weights.push_back(diff.get_d());
        }
    }
    if (prob.points.size() > cutoff)
        throw CapabilityError("bounded-Lipschitz LP limited to " + std::to_string(cutoff) +
                              " support points, got " + std::to_string(prob.points.size()));
    MetricValue mv;
    mv.name = MetricName::BoundedLipschitz;
    LipschitzCertificate cert = solve_bl_lp(*m1.space(), prob);
    double v = 0.0;
    for (std::size_t k = 0; k < prob.points.size(); ++k) v += cert.values[k] * prob.weights[k];
    mv.value = std::max(0.0, v);
    mv.certificate = std::move(cert);
    return mv;
}

double evaluate_lipschitz_certificate(const DiscreteMeasure& m1, const DiscreteMeasure& m2,
                                      const LipschitzCertificate& c, double tol) {
    const auto& space = *m1.space();
    if (c.points.size() != c.values.size()) throw InputError("malformed Lipschitz certificate");
    double v = 0.0;
    for (std::size_t k = 0; k < c.points.size(); ++k) {
        if (std::fabs(c.values[k]) > 1.0 + tol)
            throw InputError("Lipschitz certificate exceeds the unit bound");
        for (std::size_t l = k + 1; l < c.points.size(); ++l)
            if (std::fabs(c.values[k] - c.values[l]) > space.dist(c.points[k], c.points[l]) + tol)
                throw InputError("Lipschitz certificate violates the Lipschitz bound");
        v += c.values[k] * Rational(m1[c.points[k]] - m2[c.points[k]]).get_d();
    }
    return v;
}

MetricValue prokhorov_to_product_upper(const JointMeasure& j, ProductMetricKind kind) {
    const auto space = product_space(j.space1(), j.space2(), kind);
    const auto [p, q] = marginals(j);
    MetricValue mv = prokhorov_distance(flatten(j, space), flatten(product_measure(p, q), space));
    std::get<CouplingCertificate>(mv.certificate).upper_bound_to_product_set = true;
    return mv;
}

MetricValue bl_to_product(const JointMeasure& j, ProductMetricKind kind, std::size_t cutoff) {
    const auto space = product_space(j.space1(), j.space2(), kind);
    const auto [p, q] = marginals(j);
    return bl_distance(flatten(j, space), flatten(product_measure(p, q), space), cutoff);
}

MetricValue bl_product_sup_heuristic(const JointMeasure& j, int restarts) {
    const auto dep = dependence_matrix(j);
    const std::size_t n1 = j.rows(), n2 = j.cols();
    DenseMatrix<double> mu(n1, n2);
    for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t b = 0; b < n2; ++b) mu(a, b) = dep(a, b).get_d();
    if (n1 > kBlCutoff || n2 > kBlCutoff)
        throw CapabilityError("bl_product heuristic limited to " + std::to_string(kBlCutoff) +
                              " points per side");

    BlProblem p1, p2;
    for (std::size_t a = 0; a < n1; ++a) p1.points.push_back(a);
    for (std::size_t b = 0; b < n2; ++b) p2.points.push_back(b);
    auto objective = [&](const std::vector<double>& f, const std::vector<double>& g) {
        double v = 0.0;
        for (std::size_t a = 0; a < n1; ++a)
            for (std::size_t b = 0; b < n2; ++b) v += f[a] * g[b] * mu(a, b);
        return v;
    };

    MetricValue mv;
    mv.name = MetricName::BlProduct;
    ProductLipschitzCertificate best{std::vector<double>(n1, 0.0), std::vector<double>(n2, 0.0)};
    double best_value = 0.0;
    for (int seed = 0; seed < restarts; ++seed) {
        std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        p2.weights.resize(n2);
        for (auto& w : p2.weights) w = unit(rng);
        std::vector<double> g = solve_bl_lp(*j.space2(), p2).values, f;
        double value = -1.0;
        for (int iter = 0; iter < 50; ++iter) {
            p1.weights.assign(n1, 0.0);
            for (std::size_t a = 0; a < n1; ++a)
                for (std::size_t b = 0; b < n2; ++b) p1.weights[a] += mu(a, b) * g[b];
            f = solve_bl_lp(*j.space1(), p1).values;
            p2.weights.assign(n2, 0.0);
            for (std::size_t a = 0; a < n1; ++a)
                for (std::size_t b = 0; b < n2; ++b) p2.weights[b] += mu(a, b) * f[a];
            g = solve_bl_lp(*j.space2(), p2).values;
            const double v = objective(f, g);
            if (v <= value + 1e-12) break;
            value = v;
        }
        if (value > best_value) {
            best_value = value;
            best = {f, g};
        }
    }
    mv.value = best_value;
    mv.exact = false;
    mv.certificate = std::move(best);
    return mv;
}

}  // namespace aind
