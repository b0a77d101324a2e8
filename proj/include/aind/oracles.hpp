#pragma once

// Brute-force reference computations. Each one takes a route that shares no
// search code with the library routine it checks, and each is only feasible
// on small instances.

#include <optional>
#include <random>
#include <vector>

#include "aind/engines.hpp"
#include "aind/measure.hpp"

namespace aind::oracle {

/// Min s-t cut by enumerating every node subset containing the source.
double min_cut(const FlowNetwork& net);

/// Max flow written as an LP over edge flows and solved with solve_lp.
double max_flow_lp(const FlowNetwork& net);

struct VertexSolution {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;
    std::vector<double> x;
};

/// Best feasible vertex among all intersections of n active constraints or
/// bounds (n <= 6 variables, every bound finite).
VertexSolution lp_vertices(const LinearProgram& lp, double tol = 1e-9);

/// max |aᵀ M b| over all 2^m · 2^k sign pairs.
double hypercube_full(const DenseMatrix<double>& m);

/// max |μ(A×B)| over every subset pair.
Rational alpha_all_rectangles(const JointMeasure& j);

/// sup over partition pairs of ½ Σ |μ(Aᵢ×Bⱼ)| by recursive block assignment.
Rational beta_all_partitions(const JointMeasure& j);

/// Lévy–Prokhorov distance from its closed-set definition: the least ε with
/// m1(A) <= m2(A^ε) + ε for every A within the support of m1.
double prokhorov_closed_sets(const DiscreteMeasure& m1, const DiscreteMeasure& m2);

/// Transport cost with ground cost min(dist, 2), by successive shortest paths.
/// Equals the bounded-Lipschitz distance by Kantorovich–Rubinstein duality.
double bl_transport(const DiscreteMeasure& m1, const DiscreteMeasure& m2);

/// Transitionⁿ by n plain multiplications.
DenseMatrix<Rational> naive_power(const DenseMatrix<Rational>& p, unsigned n);

// --- random instances used by tests and the acceptance suite ----------------

FlowNetwork random_bipartite_network(std::mt19937_64& rng, std::size_t left, std::size_t right);
FlowNetwork random_network(std::mt19937_64& rng, std::size_t nodes);
LinearProgram random_bounded_lp(std::mt19937_64& rng, std::size_t vars, std::size_t constraints);
DenseMatrix<double> random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols);
DiscreteMeasure random_measure(std::mt19937_64& rng, const SpacePtr& space);
std::vector<std::size_t> random_map(std::mt19937_64& rng, std::size_t from, std::size_t to);

}  // namespace aind::oracle
