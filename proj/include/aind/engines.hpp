#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "aind/errors.hpp"
#include "aind/matrix.hpp"

namespace aind {

// ---------------------------------------------------------------------------
// Max flow

struct FlowEdge {
    std::size_t from = 0;
    std::size_t to = 0;
    double capacity = 0.0;
};

struct FlowNetwork {
    std::size_t node_count = 0;
    std::vector<FlowEdge> edges;
    std::size_t source = 0;
    std::size_t sink = 1;
};

struct FlowResult {
    double value = 0.0;
    std::vector<double> edge_flow;  // parallel to FlowNetwork::edges
};

/// Dinic's layered-phase augmenting paths. Throws InputError on an invalid
/// network (negative capacity, self-loop, source == sink, bad node index).
FlowResult max_flow(const FlowNetwork& net);

// ---------------------------------------------------------------------------
// Linear programming

enum class Relation { LessEq, Equal, GreaterEq };

struct LinearConstraint {
    std::vector<double> coeffs;
    Relation relation = Relation::LessEq;
    double bound = 0.0;
};

/// maximize objective·x subject to constraints and lower[i] <= x[i] <= upper[i].
/// Infinite bounds are allowed.
struct LinearProgram {
    std::vector<double> objective;
    std::vector<LinearConstraint> constraints;
    std::vector<double> lower;
    std::vector<double> upper;

    static constexpr double inf = std::numeric_limits<double>::infinity();
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;
    std::vector<double> solution;
    std::size_t pivots = 0;
};

struct LpOptions {
    double tolerance = 1e-9;
    std::size_t bland_after = 2000;  // pivots before switching to Bland's rule
    std::size_t pivot_limit = 0;     // 0: derived from the problem size
};

/// Bounded-variable primal simplex (two phases, dense tableau). Throws
/// SolverError when the pivot limit is hit.
LpResult solve_lp(const LinearProgram& lp, const LpOptions& options = {});

/// Largest violation of any constraint or bound at x.
double lp_violation(const LinearProgram& lp, const std::vector<double>& x);

// ---------------------------------------------------------------------------
// Max of |aᵀ M b| over sign vectors

enum class SearchMode { Exact, Heuristic };

inline constexpr std::size_t kExactSignCutoff = 22;
inline constexpr int kHeuristicRestarts = 32;

template <typename T>
struct BilinearResult {
    T value{};
    std::vector<int> a;  // signs on rows
    std::vector<int> b;  // signs on columns
    bool exact = true;
};

namespace detail {

template <typename T>
T abs_value(const T& x) {
    return x < T(0) ? T(-x) : x;
}

// Best column signs for fixed row signs: b = sign(Mᵀa), value Σ|Mᵀa|.
template <typename T>
T best_column_response(const DenseMatrix<T>& m, const std::vector<int>& a, std::vector<int>& b) {
    std::vector<T> agg(m.cols(), T(0));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (a[i] > 0)
                agg[j] += m(i, j);
            else
                agg[j] -= m(i, j);
        }
    T value(0);
    b.assign(m.cols(), 1);
    for (std::size_t j = 0; j < m.cols(); ++j) {
        if (agg[j] < T(0)) b[j] = -1;
        value += abs_value(agg[j]);
    }
    return value;
}

template <typename T>
BilinearResult<T> exact_rows(const DenseMatrix<T>& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    BilinearResult<T> best;
    best.a.assign(rows, 1);
    best.b.assign(cols, 1);
    if (rows == 0 || cols == 0) return best;

    // Gray-code walk over a with a[0] = +1 fixed; (a, b) and (-a, -b) agree.
    std::vector<int> a(rows, 1);
    std::vector<T> agg(cols, T(0));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) agg[j] += m(i, j);
    auto evaluate = [&](T& out) {
        out = T(0);
        for (const auto& x : agg) out += abs_value(x);
    };
    T current;
    evaluate(current);
    best.value = current;
    best.a = a;
    const std::uint64_t steps = std::uint64_t{1} << (rows - 1);
    for (std::uint64_t k = 1; k < steps; ++k) {
        const auto flip = static_cast<std::size_t>(__builtin_ctzll(k)) + 1;
        for (std::size_t j = 0; j < cols; ++j) {
            if (a[flip] > 0)
                agg[j] -= T(2) * m(flip, j);
            else
                agg[j] += T(2) * m(flip, j);
        }
        a[flip] = -a[flip];
        evaluate(current);
        if (current > best.value) {
            best.value = current;
            best.a = a;
        }
    }
    best_column_response(m, best.a, best.b);
    return best;
}

}  // namespace detail

/// max over a ∈ {−1,1}^rows, b ∈ {−1,1}^cols of |aᵀ M b|.
///
/// Exact mode enumerates the smaller side (for fixed a the optimal b is
/// sign(Mᵀa), so the objective is Σ_j |(Mᵀa)_j|) and requires
/// min(rows, cols) <= 22. Heuristic mode alternates best responses from 32
/// seeded random starts and yields a lower bound flagged exact = false.
template <typename T>
BilinearResult<T> hypercube_bilinear_max(const DenseMatrix<T>& m, SearchMode mode) {
    if (mode == SearchMode::Exact) {
        if (std::min(m.rows(), m.cols()) > kExactSignCutoff)
            throw CapabilityError("exact sign enumeration needs min(rows, cols) <= " +
                                  std::to_string(kExactSignCutoff) + ", got " +
                                  std::to_string(std::min(m.rows(), m.cols())));
        if (m.rows() <= m.cols()) return detail::exact_rows(m);
        auto t = detail::exact_rows(m.transposed());
        std::swap(t.a, t.b);
        return t;
    }

    BilinearResult<T> best;
    best.exact = false;
    best.a.assign(m.rows(), 1);
    best.b.assign(m.cols(), 1);
    if (m.rows() == 0 || m.cols() == 0) return best;
    const DenseMatrix<T> mt = m.transposed();
    bool have = false;
    for (int seed = 0; seed < kHeuristicRestarts; ++seed) {
        std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
        std::vector<int> a(m.rows()), b;
        for (auto& s : a) s = (rng() & 1) ? 1 : -1;
        T value = detail::best_column_response(m, a, b);
        for (int iter = 0; iter < 1000; ++iter) {
            std::vector<int> a2;
            T v2 = detail::best_column_response(mt, b, a2);
            std::vector<int> b2;
            T v3 = detail::best_column_response(m, a2, b2);
            if (!(v3 > value) && !(v2 > value)) break;
            a = std::move(a2);
            b = std::move(b2);
            value = v3;
        }
        if (!have || value > best.value) {
            best.value = value;
            best.a = a;
            best.b = b;
            have = true;
        }
    }
    return best;
}

}  // namespace aind
