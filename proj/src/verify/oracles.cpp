#include "aind/oracles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "aind/errors.hpp"
#include "aind/families.hpp"

namespace aind::oracle {

double min_cut(const FlowNetwork& net) {
    const std::size_t n = net.node_count;
    if (n > 24) throw CapabilityError("min_cut oracle limited to 24 nodes");
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        if (!((mask >> net.source) & 1U) || ((mask >> net.sink) & 1U)) continue;
        double cut = 0.0;
        for (const auto& e : net.edges)
            if (((mask >> e.from) & 1U) && !((mask >> e.to) & 1U)) cut += e.capacity;
        best = std::min(best, cut);
    }
    return best;
}

double max_flow_lp(const FlowNetwork& net) {
    LinearProgram lp;
    const std::size_t m = net.edges.size();
    lp.objective.assign(m, 0.0);
    lp.lower.assign(m, 0.0);
    lp.upper.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const auto& e = net.edges[k];
        lp.upper[k] = e.capacity;
        if (e.from == net.source) lp.objective[k] += 1.0;
        if (e.to == net.source) lp.objective[k] -= 1.0;
    }
    for (std::size_t v = 0; v < net.node_count; ++v) {
        if (v == net.source || v == net.sink) continue;
        LinearConstraint c;
        c.coeffs.assign(m, 0.0);
        for (std::size_t k = 0; k < m; ++k) {
            if (net.edges[k].to == v) c.coeffs[k] += 1.0;
            if (net.edges[k].from == v) c.coeffs[k] -= 1.0;
        }
        c.relation = Relation::Equal;
        lp.constraints.push_back(std::move(c));
    }
    const auto r = solve_lp(lp);
    if (r.status != LpStatus::Optimal) throw SolverError("flow LP not optimal");
    return r.objective;
}

VertexSolution lp_vertices(const LinearProgram& lp, double tol) {
    const std::size_t n = lp.objective.size();
    if (n == 0 || n > 6) throw CapabilityError("vertex enumeration limited to 1..6 variables");
    for (std::size_t k = 0; k < n; ++k)
        if (!std::isfinite(lp.lower[k]) || !std::isfinite(lp.upper[k]))
            throw CapabilityError("vertex enumeration needs finite bounds");

    // Hyperplanes: constraint rows, then x_k = lower_k, then x_k = upper_k.
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (const auto& c : lp.constraints) {
        rows.push_back(c.coeffs);
        rhs.push_back(c.bound);
    }
    for (int side = 0; side < 2; ++side)
        for (std::size_t k = 0; k < n; ++k) {
            std::vector<double> e(n, 0.0);
            e[k] = 1.0;
            rows.push_back(e);
            rhs.push_back(side == 0 ? lp.lower[k] : lp.upper[k]);
        }

    VertexSolution best;
    std::vector<std::size_t> pick(n);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t depth, std::size_t start) {
        if (depth == n) {
            Eigen::MatrixXd a(n, n);
            Eigen::VectorXd b(n);
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t c = 0; c < n; ++c) a(r, c) = rows[pick[r]][c];
                b(r) = rhs[pick[r]];
            }
            Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
            if (lu.rank() < static_cast<Eigen::Index>(n)) return;
            const Eigen::VectorXd x = lu.solve(b);
            std::vector<double> xv(x.data(), x.data() + n);
            if (lp_violation(lp, xv) > tol) return;
            double obj = 0.0;
            for (std::size_t k = 0; k < n; ++k) obj += lp.objective[k] * xv[k];
            if (best.status != LpStatus::Optimal || obj > best.objective) {
                best.status = LpStatus::Optimal;
                best.objective = obj;
                best.x = std::move(xv);
            }
            return;
        }
        for (std::size_t h = start; h + (n - depth) <= rows.size(); ++h) {
            pick[depth] = h;
            rec(depth + 1, h + 1);
        }
    };
    rec(0, 0);
    return best;
}

double hypercube_full(const DenseMatrix<double>& m) {
    const std::size_t r = m.rows(), c = m.cols();
    if (r + c > 22) throw CapabilityError("full hypercube enumeration limited to rows + cols <= 22");
    double best = 0.0;
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << r); ++a)
        for (std::uint64_t b = 0; b < (std::uint64_t{1} << c); ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < c; ++j) {
                    const double sa = ((a >> i) & 1U) ? 1.0 : -1.0;
                    const double sb = ((b >> j) & 1U) ? 1.0 : -1.0;
                    s += sa * sb * m(i, j);
                }
            best = std::max(best, std::fabs(s));
        }
    return best;
}

Rational alpha_all_rectangles(const JointMeasure& j) {
    const std::size_t r = j.rows(), c = j.cols();
    if (r > 12 || c > 12) throw CapabilityError("rectangle enumeration limited to 12x12");
    std::vector<Rational> row_mass(r, Rational(0)), col_mass(c, Rational(0));
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < c; ++b) {
            row_mass[a] += j(a, b);
            col_mass[b] += j(a, b);
        }
    Rational best = 0;
    for (std::uint64_t am = 0; am < (std::uint64_t{1} << r); ++am) {
        std::vector<Rational> in_a(c, Rational(0));
        Rational pa = 0;
        for (std::size_t a = 0; a < r; ++a) {
            if (!((am >> a) & 1U)) continue;
            pa += row_mass[a];
            for (std::size_t b = 0; b < c; ++b) in_a[b] += j(a, b);
        }
        for (std::uint64_t bm = 0; bm < (std::uint64_t{1} << c); ++bm) {
            Rational joint = 0, qb = 0;
            for (std::size_t b = 0; b < c; ++b)
                if ((bm >> b) & 1U) {
                    joint += in_a[b];
                    qb += col_mass[b];
                }
            const Rational gap = abs(Rational(joint - pa * qb));
            if (gap > best) best = gap;
        }
    }
    return best;
}

namespace {

void all_partitions(std::size_t n, std::vector<std::vector<std::size_t>>& out) {
    std::vector<std::vector<std::size_t>> blocks;
    std::function<void(std::size_t)> rec = [&](std::size_t x) {
        if (x == n) {
            std::vector<std::size_t> label(n);
            for (std::size_t b = 0; b < blocks.size(); ++b)
                for (auto e : blocks[b]) label[e] = b;
            out.push_back(std::move(label));
            return;
        }
        // Indexing, not references: the recursion appends to blocks.
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            blocks[b].push_back(x);
            rec(x + 1);
            blocks[b].pop_back();
        }
        blocks.push_back({x});
        rec(x + 1);
        blocks.pop_back();
    };
    rec(0);
}

}  // namespace

Rational beta_all_partitions(const JointMeasure& j) {
    const std::size_t r = j.rows(), c = j.cols();
    if (r > 5 || c > 5) throw CapabilityError("partition oracle limited to 5x5");
    std::vector<std::vector<std::size_t>> p1, p2;
    all_partitions(r, p1);
    all_partitions(c, p2);
    std::vector<Rational> row_mass(r, Rational(0)), col_mass(c, Rational(0));
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < c; ++b) {
            row_mass[a] += j(a, b);
            col_mass[b] += j(a, b);
        }
    Rational best = 0;
    for (const auto& l1 : p1)
        for (const auto& l2 : p2) {
            const std::size_t k1 = *std::max_element(l1.begin(), l1.end()) + 1;
            const std::size_t k2 = *std::max_element(l2.begin(), l2.end()) + 1;
            DenseMatrix<Rational> cell(k1, k2, Rational(0));
            std::vector<Rational> pa(k1, Rational(0)), qb(k2, Rational(0));
            for (std::size_t a = 0; a < r; ++a) pa[l1[a]] += row_mass[a];
            for (std::size_t b = 0; b < c; ++b) qb[l2[b]] += col_mass[b];
            for (std::size_t a = 0; a < r; ++a)
                for (std::size_t b = 0; b < c; ++b) cell(l1[a], l2[b]) += j(a, b);
            Rational total = 0;
            for (std::size_t x = 0; x < k1; ++x)
                for (std::size_t y = 0; y < k2; ++y) total += abs(Rational(cell(x, y) - pa[x] * qb[y]));
            total /= 2;
            if (total > best) best = total;
        }
    return best;
}

double prokhorov_closed_sets(const DiscreteMeasure& m1, const DiscreteMeasure& m2) {
    if (!same_space(*m1.space(), *m2.space())) throw InputError("measures live on different spaces");
    const auto& space = *m1.space();
    std::vector<std::size_t> s1, s2;
    for (std::size_t i = 0; i < m1.size(); ++i) {
        if (m1[i] > 0) s1.push_back(i);
        if (m2[i] > 0) s2.push_back(i);
    }
    if (s1.size() > 16) throw CapabilityError("closed-set oracle limited to 16 support points");
    std::vector<double> eps = {0.0};
    for (auto x : s1)
        for (auto y : s2) eps.push_back(space.dist(x, y));
    std::sort(eps.begin(), eps.end());
    eps.erase(std::unique(eps.begin(), eps.end()), eps.end());

    std::vector<double> w1(s1.size()), w2(s2.size());
    for (std::size_t a = 0; a < s1.size(); ++a) w1[a] = m1[s1[a]].get_d();
    for (std::size_t b = 0; b < s2.size(); ++b) w2[b] = m2[s2[b]].get_d();

    double best = std::numeric_limits<double>::infinity();
    for (double e : eps) {
        std::vector<std::uint32_t> near(s2.size(), 0);  // points of s1 within e of y
        for (std::size_t b = 0; b < s2.size(); ++b)
            for (std::size_t a = 0; a < s1.size(); ++a)
                if (space.dist(s1[a], s2[b]) <= e) near[b] |= std::uint32_t{1} << a;
        double g = 0.0;
        for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << s1.size()); ++mask) {
            double lhs = 0.0, rhs = 0.0;
            for (std::size_t a = 0; a < s1.size(); ++a)
                if ((mask >> a) & 1U) lhs += w1[a];
            for (std::size_t b = 0; b < s2.size(); ++b)
                if (near[b] & mask) rhs += w2[b];
            g = std::max(g, lhs - rhs);
        }
        best = std::min(best, std::max(e, g));
    }
    return best;
}

double bl_transport(const DiscreteMeasure& m1, const DiscreteMeasure& m2) {
    if (!same_space(*m1.space(), *m2.space())) throw InputError("measures live on different spaces");
    const auto& space = *m1.space();
    std::vector<std::size_t> s1, s2;
    for (std::size_t i = 0; i < m1.size(); ++i) {
        if (m1[i] > 0) s1.push_back(i);
        if (m2[i] > 0) s2.push_back(i);
    }
    // Nodes: 0 source, 1..L left, L+1..L+R right, L+R+1 sink.
    const std::size_t L = s1.size(), R = s2.size(), N = L + R + 2, sink = N - 1;
    struct Arc {
        std::size_t to;
        double cap, cost;
    };
    std::vector<Arc> arcs;
    std::vector<std::vector<std::size_t>> out(N);
    auto add = [&](std::size_t u, std::size_t v, double cap, double cost) {
        out[u].push_back(arcs.size());
        arcs.push_back({v, cap, cost});
        out[v].push_back(arcs.size());
        arcs.push_back({u, 0.0, -cost});
    };
    for (std::size_t a = 0; a < L; ++a) add(0, 1 + a, m1[s1[a]].get_d(), 0.0);
    for (std::size_t b = 0; b < R; ++b) add(1 + L + b, sink, m2[s2[b]].get_d(), 0.0);
    for (std::size_t a = 0; a < L; ++a)
        for (std::size_t b = 0; b < R; ++b) add(1 + a, 1 + L + b, 2.0, std::min(space.dist(s1[a], s2[b]), 2.0));

    constexpr double eps = 1e-15;
    double cost = 0.0;
    while (true) {
        std::vector<double> dist(N, std::numeric_limits<double>::infinity());
        std::vector<std::size_t> via(N, SIZE_MAX);
        dist[0] = 0.0;
        for (std::size_t round = 0; round + 1 < N; ++round) {
            bool changed = false;
            for (std::size_t u = 0; u < N; ++u) {
                if (!std::isfinite(dist[u])) continue;
                for (auto k : out[u]) {
                    const auto& e = arcs[k];
                    if (e.cap > eps && dist[u] + e.cost < dist[e.to] - 1e-15) {
                        dist[e.to] = dist[u] + e.cost;
                        via[e.to] = k;
                        changed = true;
                    }
                }
            }
            if (!changed) break;
        }
        if (!std::isfinite(dist[sink])) break;
        double push = std::numeric_limits<double>::infinity();
        for (std::size_t v = sink; v != 0; v = arcs[via[v] ^ 1U].to) push = std::min(push, arcs[via[v]].cap);
        if (push <= eps) break;
        for (std::size_t v = sink; v != 0; v = arcs[via[v] ^ 1U].to) {
            arcs[via[v]].cap -= push;
            arcs[via[v] ^ 1U].cap += push;
        }
        cost += push * dist[sink];
    }
    return cost;
}

DenseMatrix<Rational> naive_power(const DenseMatrix<Rational>& p, unsigned n) {
    const std::size_t s = p.rows();
    DenseMatrix<Rational> acc(s, s, Rational(0));
    for (std::size_t i = 0; i < s; ++i) acc(i, i) = 1;
    for (unsigned step = 0; step < n; ++step) {
        DenseMatrix<Rational> next(s, s, Rational(0));
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = 0; j < s; ++j)
                for (std::size_t k = 0; k < s; ++k) next(i, j) += acc(i, k) * p(k, j);
        acc = std::move(next);
    }
    return acc;
}

// --- random instances -----------------------------------------------------------

namespace {

std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> pick(1, 20);
    std::vector<double> w(n);
    double total = 0.0;
    for (auto& x : w) total += (x = pick(rng));
    for (auto& x : w) x /= total;
    return w;
}

}  // namespace

FlowNetwork random_bipartite_network(std::mt19937_64& rng, std::size_t left, std::size_t right) {
    FlowNetwork net;
    net.node_count = left + right + 2;
    net.source = 0;
    net.sink = net.node_count - 1;
    const auto p = random_simplex(rng, left);
    const auto q = random_simplex(rng, right);
    std::bernoulli_distribution present(0.55);
    for (std::size_t a = 0; a < left; ++a) net.edges.push_back({0, 1 + a, p[a]});
    for (std::size_t a = 0; a < left; ++a)
        for (std::size_t b = 0; b < right; ++b)
            if (present(rng)) net.edges.push_back({1 + a, 1 + left + b, std::min(p[a], q[b])});
    for (std::size_t b = 0; b < right; ++b) net.edges.push_back({1 + left + b, net.sink, q[b]});
    return net;
}

FlowNetwork random_network(std::mt19937_64& rng, std::size_t nodes) {
    FlowNetwork net;
    net.node_count = nodes;
    net.source = 0;
    net.sink = nodes - 1;
    std::bernoulli_distribution present(0.4);
    std::uniform_int_distribution<int> cap(0, 10);
    for (std::size_t u = 0; u < nodes; ++u)
        for (std::size_t v = 0; v < nodes; ++v)
            if (u != v && present(rng)) net.edges.push_back({u, v, cap(rng) / 10.0});
    return net;
}

LinearProgram random_bounded_lp(std::mt19937_64& rng, std::size_t vars, std::size_t constraints) {
    std::uniform_int_distribution<int> coef(-5, 5), low(-5, 0), width(1, 6), slack(0, 4), rel(0, 6);
    LinearProgram lp;
    lp.objective.resize(vars);
    lp.lower.resize(vars);
    lp.upper.resize(vars);
    std::vector<double> x0(vars);
    for (std::size_t k = 0; k < vars; ++k) {
        lp.objective[k] = coef(rng);
        lp.lower[k] = low(rng);
        lp.upper[k] = lp.lower[k] + width(rng);
        std::uniform_real_distribution<double> inside(lp.lower[k], lp.upper[k]);
        x0[k] = std::round(inside(rng) * 4.0) / 4.0;
    }
    for (std::size_t c = 0; c < constraints; ++c) {
        LinearConstraint lc;
        lc.coeffs.resize(vars);
        double ax = 0.0;
        for (std::size_t k = 0; k < vars; ++k) ax += (lc.coeffs[k] = coef(rng)) * x0[k];
        const int r = rel(rng);
        lc.relation = r == 0 ? Relation::Equal : (r <= 3 ? Relation::LessEq : Relation::GreaterEq);
        const double s = slack(rng);
        lc.bound = lc.relation == Relation::Equal ? ax : (lc.relation == Relation::LessEq ? ax + s : ax - s);
        lp.constraints.push_back(std::move(lc));
    }
    return lp;
}

DenseMatrix<double> random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    std::uniform_int_distribution<int> v(-9, 9);
    DenseMatrix<double> m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = v(rng);
    return m;
}

DiscreteMeasure random_measure(std::mt19937_64& rng, const SpacePtr& space) {
    return DiscreteMeasure(space, random_probability(rng, space->size()));
}

std::vector<std::size_t> random_map(std::mt19937_64& rng, std::size_t from, std::size_t to) {
    std::uniform_int_distribution<std::size_t> pick(0, to - 1);
    std::vector<std::size_t> f(from);
    for (auto& x : f) x = pick(rng);
    return f;
}

}  // namespace aind::oracle
