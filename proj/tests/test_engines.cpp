#include <doctest.h>

#include <cmath>
#include <random>

#include "aind/engines.hpp"
#include "aind/oracles.hpp"

using namespace aind;

namespace {

double sign_value(const DenseMatrix<double>& m, const std::vector<int>& a, const std::vector<int>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) s += a[i] * b[j] * m(i, j);
    return std::fabs(s);
}

}  // namespace

TEST_CASE("max flow basics") {
    FlowNetwork one{2, {{0, 1, 0.7}}, 0, 1};
    CHECK(max_flow(one).value == doctest::Approx(0.7));
    FlowNetwork two{4, {{0, 1, 0.3}, {1, 3, 1.0}, {0, 2, 0.4}, {2, 3, 1.0}}, 0, 3};
    CHECK(max_flow(two).value == doctest::Approx(0.7));
    FlowNetwork bad{2, {{0, 1, -1.0}}, 0, 1};
    CHECK_THROWS_AS(max_flow(bad), InputError);
    FlowNetwork loop{2, {{0, 0, 1.0}}, 0, 1};
    CHECK_THROWS_AS(max_flow(loop), InputError);
}

TEST_CASE("max flow is a feasible flow that matches min cut") {
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 60; ++rep) {
        const auto net = oracle::random_network(rng, 3 + rep % 8);
        const auto res = max_flow(net);
        CHECK(res.value == doctest::Approx(oracle::min_cut(net)).epsilon(1e-10));
        std::vector<double> balance(net.node_count, 0.0);
        for (std::size_t e = 0; e < net.edges.size(); ++e) {
            CHECK(res.edge_flow[e] >= -1e-12);
            CHECK(res.edge_flow[e] <= net.edges[e].capacity + 1e-12);
            balance[net.edges[e].from] -= res.edge_flow[e];
            balance[net.edges[e].to] += res.edge_flow[e];
        }
        for (std::size_t v = 0; v < net.node_count; ++v)
            if (v != net.source && v != net.sink) CHECK(std::fabs(balance[v]) <= 1e-12);
        CHECK(balance[net.sink] == doctest::Approx(res.value));
    }
}

TEST_CASE("bipartite flows agree with the LP formulation") {
    std::mt19937_64 rng(22);
    for (int rep = 0; rep < 20; ++rep) {
        const auto net = oracle::random_bipartite_network(rng, 3, 3);
        CHECK(std::fabs(max_flow(net).value - oracle::max_flow_lp(net)) <= 1e-10);
    }
}

TEST_CASE("simplex basics") {
    LinearProgram lp{{1.0}, {{{1.0}, Relation::LessEq, 1.0}}, {-LinearProgram::inf}, {LinearProgram::inf}};
    auto r = solve_lp(lp);
    CHECK(r.status == LpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(1.0));

    // x + y = 3, x − y = 1 pins (2, 1).
    LinearProgram eq{{1.0, 1.0},
                     {{{1.0, 1.0}, Relation::Equal, 3.0}, {{1.0, -1.0}, Relation::Equal, 1.0}},
                     {-10.0, -10.0},
                     {10.0, 10.0}};
    r = solve_lp(eq);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.solution[0] == doctest::Approx(2.0));
    CHECK(r.solution[1] == doctest::Approx(1.0));

    LinearProgram unb{{1.0}, {}, {0.0}, {LinearProgram::inf}};
    CHECK(solve_lp(unb).status == LpStatus::Unbounded);
    LinearProgram inf{{1.0}, {{{1.0}, Relation::GreaterEq, 2.0}}, {0.0}, {1.0}};
    CHECK(solve_lp(inf).status == LpStatus::Infeasible);
}

TEST_CASE("simplex agrees with vertex enumeration") {
    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 150; ++rep) {
        const auto lp = oracle::random_bounded_lp(rng, 1 + rep % 6, 1 + (rep / 6) % 6);
        const auto got = solve_lp(lp);
        const auto want = oracle::lp_vertices(lp);
        REQUIRE(got.status == want.status);
        if (got.status != LpStatus::Optimal) continue;
        CHECK(std::fabs(got.objective - want.objective) <= 1e-8);
        CHECK(lp_violation(lp, got.solution) <= 1e-9);
    }
}

TEST_CASE("hypercube bilinear maximum") {
    DenseMatrix<double> zero(2, 3, 0.0);
    CHECK(hypercube_bilinear_max(zero, SearchMode::Exact).value == 0.0);
    DenseMatrix<double> single(1, 1, 1.0);
    const auto s = hypercube_bilinear_max(single, SearchMode::Exact);
    CHECK(s.value == 1.0);
    CHECK(s.a[0] * s.b[0] == 1);

    std::mt19937_64 rng(24);
    for (int rep = 0; rep < 60; ++rep) {
        const auto m = oracle::random_matrix(rng, 1 + rep % 8, 1 + (rep / 8) % 8);
        const auto ex = hypercube_bilinear_max(m, SearchMode::Exact);
        CHECK(ex.value == oracle::hypercube_full(m));
        CHECK(sign_value(m, ex.a, ex.b) == ex.value);
        const auto he = hypercube_bilinear_max(m, SearchMode::Heuristic);
        CHECK_FALSE(he.exact);
        CHECK(he.value <= ex.value);
        CHECK(sign_value(m, he.a, he.b) == he.value);
    }
    DenseMatrix<double> wide(23, 23, 1.0);
    CHECK_THROWS_AS(hypercube_bilinear_max(wide, SearchMode::Exact), CapabilityError);
    CHECK(hypercube_bilinear_max(wide, SearchMode::Heuristic).value == 23.0 * 23.0);
}

TEST_CASE("heuristic search is deterministic") {
    std::mt19937_64 rng(25);
    const auto m = oracle::random_matrix(rng, 30, 30);
    const auto a = hypercube_bilinear_max(m, SearchMode::Heuristic);
    const auto b = hypercube_bilinear_max(m, SearchMode::Heuristic);
    CHECK(a.value == b.value);
    CHECK(a.a == b.a);
}
