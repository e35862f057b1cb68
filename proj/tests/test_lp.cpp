#include <doctest.h>

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "tesopt/lp.hpp"

using namespace tesopt::lp;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("simple two-variable maximization") {
    LinearProgram lp;
    int x = lp.add_variable(-1.0, 0.0, kInf);
    int y = lp.add_variable(-1.0, 0.0, kInf);
    lp.add_row(RowType::le, 1.0, {{x, 1.0}, {y, 1.0}});
    auto sol = solve_lp(lp);
    CHECK(sol.objective == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(sol.x[static_cast<size_t>(x)] + sol.x[static_cast<size_t>(y)] ==
          doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("upper bounds bind") {
    LinearProgram lp;
    int x = lp.add_variable(-1.0, 0.0, 0.7);
    lp.add_row(RowType::le, 5.0, {{x, 1.0}});
    auto sol = solve_lp(lp);
    CHECK(sol.x[static_cast<size_t>(x)] == doctest::Approx(0.7).epsilon(1e-8));
}

TEST_CASE("equalities and shifted lower bounds") {
    LinearProgram lp;
    int x = lp.add_variable(1.0, 0.5, kInf);
    int y = lp.add_variable(2.0, 0.0, kInf);
    lp.add_row(RowType::eq, 3.0, {{x, 1.0}, {y, 1.0}});
    auto sol = solve_lp(lp);
    // all weight goes to the cheaper variable
    CHECK(sol.objective == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(sol.x[0] == doctest::Approx(3.0).epsilon(1e-7));
}

TEST_CASE("fixed variables are substituted") {
    LinearProgram lp;
    int x = lp.add_variable(5.0, 2.0, 2.0);  // pinned at 2
    int y = lp.add_variable(1.0, 0.0, kInf);
    lp.add_row(RowType::ge, 6.0, {{x, 1.0}, {y, 1.0}});
    auto sol = solve_lp(lp);
    CHECK(sol.x[static_cast<size_t>(x)] == 2.0);
    CHECK(sol.x[static_cast<size_t>(y)] == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(sol.objective == doctest::Approx(14.0).epsilon(1e-8));
}

TEST_CASE("infeasible fixed rows are reported") {
    LinearProgram lp;
    int x = lp.add_variable(1.0, 1.0, 1.0);
    lp.add_row(RowType::le, 0.5, {{x, 1.0}}, RowTag::hp_capacity);
    CHECK_THROWS_AS(solve_lp(lp), SolverError);
}

TEST_CASE("infeasible program raises a solver error") {
    LinearProgram lp;
    int x = lp.add_variable(1.0, 0.0, kInf);
    lp.add_row(RowType::le, -1.0, {{x, 1.0}}, RowTag::demand_balance);
    lp.add_row(RowType::ge, 2.0, {{x, 1.0}}, RowTag::demand_balance);
    CHECK_THROWS_AS(solve_lp(lp), SolverError);
}

TEST_CASE("no-row box problems fall back to bound selection") {
    LinearProgram lp;
    int x = lp.add_variable(-2.0, 0.0, 3.0);
    int y = lp.add_variable(1.0, 0.0, kInf);
    auto sol = solve_lp(lp);
    CHECK(sol.x[static_cast<size_t>(x)] == 3.0);
    CHECK(sol.x[static_cast<size_t>(y)] == 0.0);
    CHECK(sol.objective == doctest::Approx(-6.0));
}

// Fractional-knapsack instances have a greedy closed form: cover the demand
// with the cheapest columns first.
TEST_CASE("randomized knapsack LPs match the greedy solution") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> cost_dist(0.1, 2.0);
    std::uniform_real_distribution<double> cap_dist(0.5, 3.0);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 3 + static_cast<int>(rng() % 8);
        LinearProgram lp;
        std::vector<double> cost(static_cast<size_t>(n)), cap(static_cast<size_t>(n));
        std::vector<std::pair<int, double>> row;
        double total_cap = 0.0;
        for (int j = 0; j < n; ++j) {
            cost[static_cast<size_t>(j)] = cost_dist(rng);
            cap[static_cast<size_t>(j)] = cap_dist(rng);
            total_cap += cap[static_cast<size_t>(j)];
            lp.add_variable(cost[static_cast<size_t>(j)], 0.0, cap[static_cast<size_t>(j)]);
            row.emplace_back(j, 1.0);
        }
        double demand = 0.75 * total_cap;
        lp.add_row(RowType::ge, demand, row);

        std::vector<int> order(static_cast<size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return cost[static_cast<size_t>(a)] < cost[static_cast<size_t>(b)]; });
        double rem = demand, greedy = 0.0;
        for (int j : order) {
            double take = std::min(rem, cap[static_cast<size_t>(j)]);
            greedy += take * cost[static_cast<size_t>(j)];
            rem -= take;
            if (rem <= 0) break;
        }

        auto sol = solve_lp(lp);
        CHECK(sol.objective == doctest::Approx(greedy).epsilon(1e-7));
        CHECK(sol.stats.rel_gap <= 1e-8);
        CHECK(sol.stats.primal_inf <= 1e-8);
    }
}

TEST_CASE("tight tolerances are reachable on well-conditioned problems") {
    LinearProgram lp;
    int x = lp.add_variable(1.0, 0.0, kInf);
    int y = lp.add_variable(3.0, 0.0, kInf);
    lp.add_row(RowType::ge, 2.0, {{x, 1.0}, {y, 1.0}});
    lp.add_row(RowType::le, 1.5, {{x, 1.0}});
    SolveOptions opts;
    opts.tol_gap = 1e-11;
    opts.tol_feas = 1e-11;
    auto sol = solve_lp(lp, opts);
    CHECK(sol.objective == doctest::Approx(1.5 + 3.0 * 0.5).epsilon(1e-10));
}
