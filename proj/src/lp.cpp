#include "hvdc/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hvdc::lp {

namespace {

constexpr double kZeroTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kRatioTie = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

class BoundedSimplex {
  public:
    explicit BoundedSimplex(const LpProblem& p)
        : n_(p.num_vars()), m_(p.num_rows()), problem_(p) {
        if (p.upper.size() != n_ || p.rhs.size() != m_) {
            throw std::invalid_argument("lp: inconsistent problem dimensions");
        }
        for (const auto& row : p.rows) {
            if (row.size() != n_) {
                throw std::invalid_argument("lp: inconsistent row length");
            }
        }
        for (double u : p.upper) {
            if (!(u >= 0.0) || !std::isfinite(u)) {
                throw std::invalid_argument("lp: upper bounds must be finite and >= 0");
            }
        }

        // Rows are stored sign-flipped so the artificial basis starts
        // feasible; tableau holds B^{-1}[A | I] plus B^{-1}b.
        row_sign_.assign(m_, 1.0);
        tab_.assign(m_, std::vector<double>(n_ + m_ + 1, 0.0));
        for (std::size_t i = 0; i < m_; ++i) {
            const double sign = p.rhs[i] < 0.0 ? -1.0 : 1.0;
            row_sign_[i] = sign;
            for (std::size_t j = 0; j < n_; ++j) {
                tab_[i][j] = sign * p.rows[i][j];
            }
            tab_[i][n_ + i] = 1.0;
            tab_[i][n_ + m_] = sign * p.rhs[i];
        }
        basis_.resize(m_);
        in_basis_.assign(n_ + m_, false);
        for (std::size_t i = 0; i < m_; ++i) {
            basis_[i] = n_ + i;
            in_basis_[n_ + i] = true;
        }
        at_upper_.assign(n_ + m_, false);
        upper_.assign(n_ + m_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) {
            upper_[j] = p.upper[j];
        }
        for (std::size_t i = 0; i < m_; ++i) {
            upper_[n_ + i] = kInf;
        }
    }

    LpSolution run() {
        LpSolution sol;

        // Phase 1: drive the artificials to zero.
        std::vector<double> cost1(n_ + m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            cost1[n_ + i] = -1.0;
        }
        if (!iterate(cost1)) {
            sol.status = LpStatus::IterationLimit;
            return sol;
        }
        {
            const std::vector<double> xb = basic_values();
            double infeas = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                if (basis_[i] >= n_) {
                    infeas += std::max(xb[i], 0.0);
                }
            }
            if (infeas > 1e-7) {
                sol.status = LpStatus::Infeasible;
                for (std::size_t i = 0; i < m_; ++i) {
                    if (basis_[i] >= n_ && xb[i] > 1e-7) {
                        const std::size_t row = basis_[i] - n_;
                        sol.infeasible_rows.push_back({row, row_sign_[row] * xb[i]});
                    }
                }
                return sol;
            }
        }

        // Phase 2: original objective, artificials pinned at zero.
        for (std::size_t i = 0; i < m_; ++i) {
            upper_[n_ + i] = 0.0;
        }
        std::vector<double> cost2(n_ + m_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) {
            cost2[j] = problem_.objective[j];
        }
        if (!iterate(cost2)) {
            sol.status = LpStatus::IterationLimit;
            return sol;
        }

        sol.status = LpStatus::Optimal;
        sol.x.assign(n_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) {
            if (at_upper_[j] && !in_basis_[j]) {
                sol.x[j] = upper_[j];
            }
        }
        const std::vector<double> xb = basic_values();
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) {
                sol.x[basis_[i]] = std::clamp(xb[i], 0.0, upper_[basis_[i]]);
            }
        }
        sol.objective = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            sol.objective += problem_.objective[j] * sol.x[j];
        }
        // y = c_B B^{-1} read off the identity block, mapped back through
        // the sign flips applied at setup.
        sol.duals.assign(m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            double y = 0.0;
            for (std::size_t r = 0; r < m_; ++r) {
                if (basis_[r] < n_) {
                    y += problem_.objective[basis_[r]] * tab_[r][n_ + i];
                }
            }
            sol.duals[i] = row_sign_[i] * y;
        }
        return sol;
    }

  private:
    // x_B = B^{-1}b - sum over nonbasic-at-upper columns of (B^{-1}A_j) u_j.
    std::vector<double> basic_values() const {
        std::vector<double> xb(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            xb[i] = tab_[i][n_ + m_];
        }
        for (std::size_t j = 0; j < n_; ++j) {
            if (!at_upper_[j] || in_basis_[j] || upper_[j] == 0.0) {
                continue;
            }
            for (std::size_t i = 0; i < m_; ++i) {
                xb[i] -= tab_[i][j] * upper_[j];
            }
        }
        return xb;
    }

    // Reduced-cost dot product y'A_j in the flipped row space.
    double dual_dot(const std::vector<double>& y, std::size_t j) const {
        if (j >= n_) {
            return y[j - n_];
        }
        double v = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            v += y[i] * row_sign_[i] * problem_.rows[i][j];
        }
        return v;
    }

    // One simplex phase. Artificial variables never re-enter the basis.
    // Returns false if the iteration cap is hit.
    bool iterate(const std::vector<double>& cost) {
        const std::size_t max_iter = 2000 + 60 * (n_ + m_);
        const std::size_t bland_after = 500;
        std::vector<double> y(m_);
        for (std::size_t iter = 0; iter < max_iter; ++iter) {
            for (std::size_t i = 0; i < m_; ++i) {
                double v = 0.0;
                for (std::size_t r = 0; r < m_; ++r) {
                    v += cost[basis_[r]] * tab_[r][n_ + i];
                }
                y[i] = v;
            }

            const bool bland = iter >= bland_after;
            std::size_t enter = n_ + m_;
            int enter_dir = 0;
            double best_score = kZeroTol;
            for (std::size_t j = 0; j < n_; ++j) {
                if (in_basis_[j] || upper_[j] == 0.0) {
                    continue;
                }
                const double d = cost[j] - dual_dot(y, j);
                int dir = 0;
                double score = 0.0;
                if (!at_upper_[j] && d > kZeroTol) {
                    dir = +1;
                    score = d;
                } else if (at_upper_[j] && d < -kZeroTol) {
                    dir = -1;
                    score = -d;
                }
                if (dir == 0) {
                    continue;
                }
                if (bland) {
                    enter = j;
                    enter_dir = dir;
                    break;
                }
                if (score > best_score) {
                    best_score = score;
                    enter = j;
                    enter_dir = dir;
                }
            }
            if (enter == n_ + m_) {
                return true;  // no improving column: phase optimal
            }

            const std::vector<double> xb = basic_values();
            double t_best = upper_[enter];
            std::size_t leave_row = m_;
            bool leave_to_upper = false;
            for (std::size_t i = 0; i < m_; ++i) {
                const double w = enter_dir * tab_[i][enter];
                double t = kInf;
                bool to_upper = false;
                if (w > kPivotTol) {
                    t = xb[i] / w;
                } else if (w < -kPivotTol) {
                    const double ub = upper_[basis_[i]];
                    if (ub == kInf) {
                        continue;
                    }
                    t = (ub - xb[i]) / (-w);
                    to_upper = true;
                } else {
                    continue;
                }
                t = std::max(t, 0.0);
                const bool better = t < t_best - kRatioTie;
                const bool tie = std::abs(t - t_best) <= kRatioTie && leave_row < m_ &&
                                 basis_[i] < basis_[leave_row];
                if (better || tie) {
                    t_best = t;
                    leave_row = i;
                    leave_to_upper = to_upper;
                }
            }

            if (leave_row == m_) {
                // the entering variable travels to its other bound
                at_upper_[enter] = !at_upper_[enter];
                continue;
            }

            const std::size_t leaving = basis_[leave_row];
            pivot(leave_row, enter);
            basis_[leave_row] = enter;
            in_basis_[enter] = true;
            in_basis_[leaving] = false;
            at_upper_[enter] = false;
            at_upper_[leaving] = leave_to_upper;
        }
        return false;
    }

    void pivot(std::size_t r, std::size_t s) {
        const double inv = 1.0 / tab_[r][s];
        for (double& v : tab_[r]) {
            v *= inv;
        }
        tab_[r][s] = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) {
                continue;
            }
            const double factor = tab_[i][s];
            if (std::abs(factor) < 1e-14) {
                tab_[i][s] = 0.0;
                continue;
            }
            auto& row = tab_[i];
            const auto& prow = tab_[r];
            for (std::size_t jj = 0; jj < row.size(); ++jj) {
                row[jj] -= factor * prow[jj];
            }
            row[s] = 0.0;
        }
    }

    std::size_t n_;
    std::size_t m_;
    const LpProblem& problem_;
    std::vector<std::vector<double>> tab_;
    std::vector<std::size_t> basis_;
    std::vector<bool> in_basis_;
    std::vector<bool> at_upper_;
    std::vector<double> upper_;
    std::vector<double> row_sign_;
};

}  // namespace

LpSolution solve(const LpProblem& problem) {
    BoundedSimplex simplex(problem);
    return simplex.run();
}

}  // namespace hvdc::lp
