#pragma once

#include <cstddef>
#include <vector>

namespace hvdc::lp {

/// maximize objective'x  subject to  rows x = rhs,  0 <= x <= upper.
/// All upper bounds must be finite; the clearing formulation guarantees
/// this, which also rules out unbounded problems.
struct LpProblem {
    std::vector<double> objective;
    std::vector<double> upper;
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;

    std::size_t num_vars() const { return objective.size(); }
    std::size_t num_rows() const { return rows.size(); }
};

enum class LpStatus { Optimal, Infeasible, IterationLimit };

/// Residual of an equality row that phase 1 could not close.
/// residual > 0: the row demands more net withdrawal than the variables
/// can produce; residual < 0: more net injection.
struct RowResidual {
    std::size_t row = 0;
    double residual = 0.0;
};

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;
    std::vector<double> x;
    /// One dual per equality row (any valid optimal dual vector when the
    /// optimum is degenerate).
    std::vector<double> duals;
    std::vector<RowResidual> infeasible_rows;
};

/// Dense two-phase bounded-variable primal simplex. Dantzig pricing with a
/// Bland's-rule fallback against cycling. Intended for the small clearing
/// problems of this toolkit (tens of rows, hundreds of columns).
LpSolution solve(const LpProblem& problem);

}  // namespace hvdc::lp
