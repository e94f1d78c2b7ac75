#include "hvdc/lp.hpp"

#include "hvdc/rng.hpp"

#include "doctest.h"

#include <cmath>

using namespace hvdc;

TEST_CASE("bounded simplex solves a 2x2 textbook problem") {
    // max 3x + 2y s.t. x + y = 4, x <= 3, y <= 5
    lp::LpProblem p;
    p.objective = {3.0, 2.0};
    p.upper = {3.0, 5.0};
    p.rows = {{1.0, 1.0}};
    p.rhs = {4.0};
    const auto sol = lp::solve(p);
    REQUIRE(sol.status == lp::LpStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(11.0));
    CHECK(sol.x[0] == doctest::Approx(3.0));
    CHECK(sol.x[1] == doctest::Approx(1.0));
    // y is the marginal variable: dual of the row equals its cost
    CHECK(sol.duals[0] == doctest::Approx(2.0));
}

TEST_CASE("negative rhs rows are handled") {
    // max -x s.t. x - y = -2, x <= 10, y <= 3  ->  y = x + 2, best x = 0
    lp::LpProblem p;
    p.objective = {-1.0, 0.0};
    p.upper = {10.0, 3.0};
    p.rows = {{1.0, -1.0}};
    p.rhs = {-2.0};
    const auto sol = lp::solve(p);
    REQUIRE(sol.status == lp::LpStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(0.0));
    CHECK(sol.x[0] == doctest::Approx(0.0));
    CHECK(sol.x[1] == doctest::Approx(2.0));
}

TEST_CASE("infeasible system is reported with its row") {
    // x + y = 10 with x <= 2, y <= 3 cannot hold
    lp::LpProblem p;
    p.objective = {1.0, 1.0};
    p.upper = {2.0, 3.0};
    p.rows = {{1.0, 1.0}};
    p.rhs = {10.0};
    const auto sol = lp::solve(p);
    REQUIRE(sol.status == lp::LpStatus::Infeasible);
    REQUIRE(sol.infeasible_rows.size() == 1);
    CHECK(sol.infeasible_rows[0].row == 0);
    CHECK(sol.infeasible_rows[0].residual == doctest::Approx(5.0));
}

TEST_CASE("upper bounds can bind at the optimum") {
    // max x + 4y + 2z s.t. x + y + z = 6, bounds 0..{5,2,4}
    lp::LpProblem p;
    p.objective = {1.0, 4.0, 2.0};
    p.upper = {5.0, 2.0, 4.0};
    p.rows = {{1.0, 1.0, 1.0}};
    p.rhs = {6.0};
    const auto sol = lp::solve(p);
    REQUIRE(sol.status == lp::LpStatus::Optimal);
    CHECK(sol.x[1] == doctest::Approx(2.0));
    CHECK(sol.x[2] == doctest::Approx(4.0));
    CHECK(sol.x[0] == doctest::Approx(0.0));
    CHECK(sol.objective == doctest::Approx(16.0));
}

namespace {

// random feasible equality systems checked against a dense enumeration of
// basis/bound patterns (exact for these tiny sizes)
double enumerate_optimum(const lp::LpProblem& p) {
    const std::size_t n = p.num_vars();
    const std::size_t m = p.num_rows();
    double best = -1e300;
    // enumerate which variables are basic (|basis| = m) and the bound
    // pattern of the rest
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) {
        idx[i] = i;
    }
    std::vector<std::size_t> basis;
    auto solve_basis = [&](const std::vector<std::size_t>& basic,
                           const std::vector<bool>& at_upper) {
        // x_nonbasic fixed; solve A_B x_B = b - A_N x_N via Gaussian elim
        std::vector<std::vector<double>> a(m, std::vector<double>(m));
        std::vector<double> rhs = p.rhs;
        std::vector<bool> is_basic(n, false);
        for (std::size_t i = 0; i < m; ++i) {
            is_basic[basic[i]] = true;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (is_basic[j] || !at_upper[j]) {
                continue;
            }
            for (std::size_t r = 0; r < m; ++r) {
                rhs[r] -= p.rows[r][j] * p.upper[j];
            }
        }
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t i = 0; i < m; ++i) {
                a[r][i] = p.rows[r][basic[i]];
            }
        }
        // gaussian elimination with partial pivoting
        std::vector<double> x(m);
        for (std::size_t col = 0; col < m; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < m; ++r) {
                if (std::abs(a[r][col]) > std::abs(a[piv][col])) {
                    piv = r;
                }
            }
            if (std::abs(a[piv][col]) < 1e-10) {
                return;  // singular basis
            }
            std::swap(a[piv], a[col]);
            std::swap(rhs[piv], rhs[col]);
            for (std::size_t r = 0; r < m; ++r) {
                if (r == col) {
                    continue;
                }
                const double f = a[r][col] / a[col][col];
                for (std::size_t c = col; c < m; ++c) {
                    a[r][c] -= f * a[col][c];
                }
                rhs[r] -= f * rhs[col];
            }
        }
        for (std::size_t i = 0; i < m; ++i) {
            x[i] = rhs[i] / a[i][i];
            if (x[i] < -1e-9 || x[i] > p.upper[basic[i]] + 1e-9) {
                return;  // infeasible vertex
            }
        }
        double obj = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (is_basic[j]) {
                continue;
            }
            if (at_upper[j]) {
                obj += p.objective[j] * p.upper[j];
            }
        }
        for (std::size_t i = 0; i < m; ++i) {
            obj += p.objective[basic[i]] * x[i];
        }
        best = std::max(best, obj);
    };

    // choose m basic columns out of n (n <= 6, m <= 2 in these tests)
    std::vector<std::size_t> basic(m);
    auto rec_bounds = [&](auto&& self, const std::vector<std::size_t>& chosen,
                          std::vector<bool>& at_upper, std::size_t j) -> void {
        if (j == n) {
            solve_basis(chosen, at_upper);
            return;
        }
        bool is_basic = false;
        for (std::size_t b : chosen) {
            if (b == j) {
                is_basic = true;
            }
        }
        if (is_basic) {
            self(self, chosen, at_upper, j + 1);
            return;
        }
        at_upper[j] = false;
        self(self, chosen, at_upper, j + 1);
        at_upper[j] = true;
        self(self, chosen, at_upper, j + 1);
        at_upper[j] = false;
    };
    auto rec_basis = [&](auto&& self, std::size_t start, std::size_t k) -> void {
        if (k == m) {
            std::vector<bool> at_upper(n, false);
            rec_bounds(rec_bounds, basic, at_upper, 0);
            return;
        }
        for (std::size_t j = start; j < n; ++j) {
            basic[k] = j;
            self(self, j + 1, k + 1);
        }
    };
    rec_basis(rec_basis, 0, 0);
    return best;
}

}  // namespace

TEST_CASE("randomized instances match exhaustive vertex enumeration") {
    SplitMix64 rng(987654);
    int solved = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 3 + rng.next_below(4);  // 3..6 vars
        const std::size_t m = 1 + rng.next_below(2);  // 1..2 rows
        lp::LpProblem p;
        p.objective.resize(n);
        p.upper.resize(n);
        p.rows.assign(m, std::vector<double>(n));
        p.rhs.resize(m);
        for (std::size_t j = 0; j < n; ++j) {
            p.objective[j] = rng.next_in(-10.0, 10.0);
            p.upper[j] = rng.next_in(0.0, 8.0);
        }
        // keep full row rank so the enumeration oracle always finds a basis
        auto rank_of = [](std::vector<std::vector<double>> a) {
            std::size_t rank = 0;
            const std::size_t rows = a.size();
            const std::size_t cols = a.empty() ? 0 : a[0].size();
            for (std::size_t col = 0; col < cols && rank < rows; ++col) {
                std::size_t piv = rank;
                for (std::size_t r = rank; r < rows; ++r) {
                    if (std::abs(a[r][col]) > std::abs(a[piv][col])) {
                        piv = r;
                    }
                }
                if (std::abs(a[piv][col]) < 1e-6) {
                    continue;
                }
                std::swap(a[piv], a[rank]);
                for (std::size_t r = 0; r < rows; ++r) {
                    if (r == rank) {
                        continue;
                    }
                    const double f = a[r][col] / a[rank][col];
                    for (std::size_t c = col; c < cols; ++c) {
                        a[r][c] -= f * a[rank][c];
                    }
                }
                ++rank;
            }
            return rank;
        };
        do {
            for (std::size_t r = 0; r < m; ++r) {
                for (std::size_t j = 0; j < n; ++j) {
                    const auto pick = rng.next_below(3);
                    p.rows[r][j] = pick == 0 ? 0.0 : rng.next_in(-2.0, 2.0);
                }
            }
        } while (rank_of(p.rows) < m);
        // build an attainable rhs from a random interior point
        std::vector<double> x0(n);
        for (std::size_t j = 0; j < n; ++j) {
            x0[j] = rng.next_in(0.0, p.upper[j]);
        }
        for (std::size_t r = 0; r < m; ++r) {
            p.rhs[r] = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                p.rhs[r] += p.rows[r][j] * x0[j];
            }
        }
        const auto sol = lp::solve(p);
        REQUIRE(sol.status == lp::LpStatus::Optimal);
        const double exact = enumerate_optimum(p);
        CHECK(sol.objective ==
              doctest::Approx(exact).epsilon(1e-7).scale(std::max(1.0, std::abs(exact))));
        // primal feasibility of the reported point
        for (std::size_t r = 0; r < m; ++r) {
            double lhs = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                lhs += p.rows[r][j] * sol.x[j];
            }
            CHECK(lhs == doctest::Approx(p.rhs[r]).epsilon(1e-7).scale(
                             std::max(1.0, std::abs(p.rhs[r]))));
        }
        // dual feasibility: reduced costs respect the bound pattern
        for (std::size_t j = 0; j < n; ++j) {
            if (p.upper[j] < 1e-5) {
                continue;  // both bounds effectively active, any sign valid
            }
            double d = p.objective[j];
            for (std::size_t r = 0; r < m; ++r) {
                d -= sol.duals[r] * p.rows[r][j];
            }
            if (sol.x[j] > 1e-7 && sol.x[j] < p.upper[j] - 1e-7) {
                CHECK(std::abs(d) < 1e-6);  // interior: zero reduced cost
            } else if (sol.x[j] <= 1e-7) {
                CHECK(d < 1e-6);  // at lower bound: no incentive to rise
            } else {
                CHECK(d > -1e-6);  // at upper bound: no incentive to fall
            }
        }
        ++solved;
    }
    CHECK(solved == 300);
}
