#include <algorithm>
#include <cmath>
#include <sstream>

#include "aind/engines.hpp"

namespace aind {

namespace {

constexpr double kPivotTol = 1e-9;

enum class VarState { Basic, Lower, Upper };

// How an original variable maps onto nonnegative tableau columns.
struct VarMap {
    enum Kind { Shift, Negate, Split } kind = Shift;
    std::size_t col = 0;  // Split uses col and col + 1
    double offset = 0.0;
};

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols)
        : t_(rows, cols, 0.0), beta_(rows, 0.0), upper_(cols, LinearProgram::inf),
          state_(cols, VarState::Lower), basis_(rows, 0), excluded_(cols, false) {}

    DenseMatrix<double> t_;
    std::vector<double> beta_;
    std::vector<double> upper_;
    std::vector<VarState> state_;
    std::vector<std::size_t> basis_;
    std::vector<bool> excluded_;
    std::vector<double> reduced_;
    std::size_t pivots_ = 0;

    double value_of(std::size_t col) const {
        return state_[col] == VarState::Upper ? upper_[col] : 0.0;
    }

    void price(const std::vector<double>& cost) {
        reduced_ = cost;
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            const double cb = cost[basis_[i]];
            if (cb == 0.0) continue;
            auto row = t_.row(i);
            for (std::size_t j = 0; j < row.size(); ++j) reduced_[j] -= cb * row[j];
        }
    }

    void pivot(std::size_t r, std::size_t q) {
        auto pr = t_.row(r);
        const double p = pr[q];
        for (double& x : pr) x /= p;
        pr[q] = 1.0;
        for (std::size_t i = 0; i < t_.rows(); ++i) {
            if (i == r) continue;
            auto row = t_.row(i);
            const double f = row[q];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < row.size(); ++j) row[j] -= f * pr[j];
            row[q] = 0.0;
        }
        const double f = reduced_[q];
        if (f != 0.0) {
            for (std::size_t j = 0; j < reduced_.size(); ++j) reduced_[j] -= f * pr[j];
            reduced_[q] = 0.0;
        }
        state_[basis_[r]] = VarState::Lower;
        basis_[r] = q;
        state_[q] = VarState::Basic;
        ++pivots_;
    }

    // Returns false when the phase is unbounded.
    bool optimize(const std::vector<double>& cost, const LpOptions& opt, std::size_t limit) {
        price(cost);
        const std::size_t n = upper_.size(), m = basis_.size();
        while (true) {
            const bool bland = pivots_ >= opt.bland_after;
            std::size_t q = n;
            double best = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (state_[j] == VarState::Basic || excluded_[j]) continue;
                double score = 0.0;
                if (state_[j] == VarState::Lower && reduced_[j] > opt.tolerance && upper_[j] > 0.0)
                    score = reduced_[j];
                else if (state_[j] == VarState::Upper && reduced_[j] < -opt.tolerance)
                    score = -reduced_[j];
                if (score <= 0.0) continue;
                if (bland) {
                    q = j;
                    break;
                }
                if (score > best) {
                    best = score;
                    q = j;
                }
            }
            if (q == n) return true;
            if (pivots_ >= limit) {
                std::ostringstream os;
                os << "simplex pivot limit " << limit << " reached (rows " << m << ", columns " << n
                   << ", bland " << (bland ? "on" : "off") << ")";
                throw SolverError(os.str());
            }

            const double dir = state_[q] == VarState::Lower ? 1.0 : -1.0;
            double theta = upper_[q];
            std::size_t leave = m;
            double leave_alpha = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double alpha = t_(i, q) * dir;
                double limit_i;
                if (alpha > kPivotTol) {
                    limit_i = std::max(0.0, beta_[i]) / alpha;
                } else if (alpha < -kPivotTol && std::isfinite(upper_[basis_[i]])) {
                    limit_i = std::max(0.0, upper_[basis_[i]] - beta_[i]) / -alpha;
                } else {
                    continue;
                }
                bool take = limit_i < theta;
                if (!take && limit_i == theta && leave != m) {
                    take = bland ? basis_[i] < basis_[leave]
                                 : std::fabs(alpha) > std::fabs(leave_alpha);
                }
                if (take) {
                    theta = limit_i;
                    leave = i;
                    leave_alpha = alpha;
                }
            }
            if (!std::isfinite(theta)) return false;

            for (std::size_t i = 0; i < m; ++i) beta_[i] -= t_(i, q) * dir * theta;
            if (leave == m) {
                state_[q] = state_[q] == VarState::Lower ? VarState::Upper : VarState::Lower;
                ++pivots_;
                continue;
            }
            const double entering = dir > 0 ? theta : upper_[q] - theta;
            const std::size_t out = basis_[leave];
            pivot(leave, q);
            state_[out] = leave_alpha > 0 ? VarState::Lower : VarState::Upper;
            beta_[leave] = entering;
        }
    }
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp, const LpOptions& options) {
    const std::size_t nvar = lp.objective.size();
    if (lp.lower.size() != nvar || lp.upper.size() != nvar)
        throw InputError("LP bounds do not match the objective dimension");
    for (const auto& c : lp.constraints)
        if (c.coeffs.size() != nvar) throw InputError("LP constraint has the wrong dimension");

    // Map each original variable onto nonnegative columns.
    std::vector<VarMap> maps(nvar);
    std::vector<double> col_upper;
    for (std::size_t j = 0; j < nvar; ++j) {
        const double lo = lp.lower[j], hi = lp.upper[j];
        if (std::isnan(lo) || std::isnan(hi) || lo > hi)
            throw InputError("LP variable " + std::to_string(j) + " has lower > upper");
        if (std::isfinite(lo)) {
            maps[j] = {VarMap::Shift, col_upper.size(), lo};
            col_upper.push_back(hi - lo);
        } else if (std::isfinite(hi)) {
            maps[j] = {VarMap::Negate, col_upper.size(), hi};
            col_upper.push_back(LinearProgram::inf);
        } else {
            maps[j] = {VarMap::Split, col_upper.size(), 0.0};
            col_upper.push_back(LinearProgram::inf);
            col_upper.push_back(LinearProgram::inf);
        }
    }
    const std::size_t nstruct = col_upper.size();
    const std::size_t m = lp.constraints.size();

    // Rows in the transformed variables, with nonnegative right-hand sides.
    DenseMatrix<double> a(m, nstruct, 0.0);
    std::vector<double> rhs(m);
    std::vector<Relation> rel(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& c = lp.constraints[i];
        double b = c.bound;
        for (std::size_t j = 0; j < nvar; ++j) {
            const double v = c.coeffs[j];
            if (v == 0.0) continue;
            const auto& mp = maps[j];
            switch (mp.kind) {
                case VarMap::Shift: a(i, mp.col) += v; b -= v * mp.offset; break;
                case VarMap::Negate: a(i, mp.col) -= v; b -= v * mp.offset; break;
                case VarMap::Split: a(i, mp.col) += v; a(i, mp.col + 1) -= v; break;
            }
        }
        rel[i] = c.relation;
        if (b < 0) {
            b = -b;
            for (std::size_t j = 0; j < nstruct; ++j) a(i, j) = -a(i, j);
            if (rel[i] == Relation::LessEq) rel[i] = Relation::GreaterEq;
            else if (rel[i] == Relation::GreaterEq) rel[i] = Relation::LessEq;
        }
        rhs[i] = b;
    }

    std::size_t nslack = 0, nart = 0;
    for (auto r : rel) {
        if (r != Relation::Equal) ++nslack;
        if (r != Relation::LessEq) ++nart;
    }
    const std::size_t ncols = nstruct + nslack + nart;
    Tableau tab(m, ncols);
    std::copy(col_upper.begin(), col_upper.end(), tab.upper_.begin());
    std::vector<std::size_t> unit_col(m);  // column that starts as e_i
    std::vector<bool> artificial(ncols, false);
    {
        std::size_t s = nstruct, art = nstruct + nslack;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < nstruct; ++j) tab.t_(i, j) = a(i, j);
            if (rel[i] == Relation::LessEq) {
                tab.t_(i, s) = 1.0;
                unit_col[i] = s++;
            } else {
                if (rel[i] == Relation::GreaterEq) tab.t_(i, s++) = -1.0;
                tab.t_(i, art) = 1.0;
                artificial[art] = true;
                unit_col[i] = art++;
            }
            tab.basis_[i] = unit_col[i];
            tab.state_[unit_col[i]] = VarState::Basic;
            tab.beta_[i] = rhs[i];
        }
    }

    LpOptions opt = options;
    const std::size_t limit = opt.pivot_limit ? opt.pivot_limit : 50 * (m + ncols) + 10000;
    double rhs_scale = 1.0;
    for (double b : rhs) rhs_scale = std::max(rhs_scale, b);

    LpResult result;
    if (nart > 0) {
        std::vector<double> cost(ncols, 0.0);
        for (std::size_t j = 0; j < ncols; ++j)
            if (artificial[j]) cost[j] = -1.0;
        tab.optimize(cost, opt, limit);
        double infeas = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            if (artificial[tab.basis_[i]]) infeas += std::max(0.0, tab.beta_[i]);
        if (infeas > opt.tolerance * rhs_scale) {
            result.status = LpStatus::Infeasible;
            result.pivots = tab.pivots_;
            return result;
        }
        // Drive zero-level artificials out of the basis where possible.
        for (std::size_t i = 0; i < m; ++i) {
            if (!artificial[tab.basis_[i]]) continue;
            std::size_t best = ncols;
            double mag = kPivotTol;
            for (std::size_t j = 0; j < ncols; ++j) {
                if (artificial[j] || tab.state_[j] == VarState::Basic) continue;
                if (std::fabs(tab.t_(i, j)) > mag) {
                    mag = std::fabs(tab.t_(i, j));
                    best = j;
                }
            }
            if (best == ncols) continue;
            const double entering = tab.value_of(best);
            tab.pivot(i, best);
            tab.beta_[i] = entering;
        }
        for (std::size_t j = 0; j < ncols; ++j)
            if (artificial[j]) {
                tab.upper_[j] = 0.0;
                tab.excluded_[j] = true;
                if (tab.state_[j] == VarState::Upper) tab.state_[j] = VarState::Lower;
            }
    }

    std::vector<double> cost(ncols, 0.0);
    for (std::size_t j = 0; j < nvar; ++j) {
        const auto& mp = maps[j];
        const double c = lp.objective[j];
        switch (mp.kind) {
            case VarMap::Shift: cost[mp.col] = c; break;
            case VarMap::Negate: cost[mp.col] = -c; break;
            case VarMap::Split: cost[mp.col] = c; cost[mp.col + 1] = -c; break;
        }
    }
    const bool bounded = tab.optimize(cost, opt, limit);
    result.pivots = tab.pivots_;
    if (!bounded) {
        result.status = LpStatus::Unbounded;
        return result;
    }

    // Recompute basic values from B⁻¹ (the columns that started as the identity).
    std::vector<double> b_eff = rhs;
    for (std::size_t j = 0; j < ncols; ++j) {
        if (tab.state_[j] != VarState::Upper) continue;
        const double u = tab.upper_[j];
        for (std::size_t i = 0; i < m; ++i) {
            double aij;
            if (j < nstruct) aij = a(i, j);
            else aij = 0.0;  // slack/artificial columns never sit at a finite upper bound
            b_eff[i] -= aij * u;
        }
    }
    std::vector<double> y(ncols, 0.0);
    for (std::size_t j = 0; j < ncols; ++j) y[j] = tab.value_of(j);
    for (std::size_t i = 0; i < m; ++i) {
        double v = 0.0;
        for (std::size_t k = 0; k < m; ++k) v += tab.t_(i, unit_col[k]) * b_eff[k];
        y[tab.basis_[i]] = v;
    }
    for (std::size_t j = 0; j < nstruct; ++j) y[j] = std::clamp(y[j], 0.0, tab.upper_[j]);

    result.solution.resize(nvar);
    for (std::size_t j = 0; j < nvar; ++j) {
        const auto& mp = maps[j];
        switch (mp.kind) {
            case VarMap::Shift: result.solution[j] = mp.offset + y[mp.col]; break;
            case VarMap::Negate: result.solution[j] = mp.offset - y[mp.col]; break;
            case VarMap::Split: result.solution[j] = y[mp.col] - y[mp.col + 1]; break;
        }
    }
    result.objective = 0.0;
    for (std::size_t j = 0; j < nvar; ++j) result.objective += lp.objective[j] * result.solution[j];
    result.status = LpStatus::Optimal;
    return result;
}

double lp_violation(const LinearProgram& lp, const std::vector<double>& x) {
    double worst = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        worst = std::max(worst, lp.lower[j] - x[j]);
        worst = std::max(worst, x[j] - lp.upper[j]);
    }
    for (const auto& c : lp.constraints) {
        double v = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) v += c.coeffs[j] * x[j];
        switch (c.relation) {
            case Relation::LessEq: worst = std::max(worst, v - c.bound); break;
            case Relation::GreaterEq: worst = std::max(worst, c.bound - v); break;
            case Relation::Equal: worst = std::max(worst, std::fabs(v - c.bound)); break;
        }
    }
    return worst;
}

}  // namespace aind
