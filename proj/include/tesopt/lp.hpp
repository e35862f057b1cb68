#ifndef TESOPT_LP_HPP
#define TESOPT_LP_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tesopt::lp {

enum class RowType { le, ge, eq };

// Constraint classes used in diagnostics and feasibility audits.
enum class RowTag {
    generic,
    demand_balance,
    hp_capacity,
    cop_coupling,
    soc_recursion,
    ragone_discharge,
    ragone_charge,
    cost_cap,
    peak_limit,
};

const char* row_tag_name(RowTag tag);

struct Row {
    RowType type = RowType::le;
    double rhs = 0.0;
    RowTag tag = RowTag::generic;
    std::vector<std::pair<int, double>> terms;  // (column, coefficient)
};

// min c'x subject to rows, lower <= x <= upper (upper may be +inf).
struct LinearProgram {
    std::vector<double> objective;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<Row> rows;

    int add_variable(double cost, double lb, double ub);
    int add_row(RowType type, double rhs, std::vector<std::pair<int, double>> terms,
                RowTag tag = RowTag::generic);

    int num_variables() const { return static_cast<int>(objective.size()); }
    int num_rows() const { return static_cast<int>(rows.size()); }
};

struct SolveStats {
    int iterations = 0;
    double rel_gap = 0.0;
    double primal_inf = 0.0;
    double dual_inf = 0.0;
};

struct LpSolution {
    std::vector<double> x;
    std::vector<double> row_duals;  // one per LP row (zero for dropped rows)
    double objective = 0.0;
    SolveStats stats;
};

struct SolveOptions {
    double tol_gap = 1e-9;    // relative duality gap
    double tol_feas = 1e-8;   // relative primal/dual infeasibility
    int max_iterations = 200;
    // Dual warm start from a structurally identical prior solve (e.g. the
    // previous horizon block); ignored when the row count differs.
    const LpSolution* warm_start = nullptr;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, int iterations)
        : std::runtime_error(what), iterations_(iterations) {}
    int iterations() const { return iterations_; }

private:
    int iterations_ = 0;
};

// Mehrotra predictor-corrector interior-point method. Throws SolverError on
// numerical failure, with the worst-violated constraint class in the message.
LpSolution solve_lp(const LinearProgram& lp, const SolveOptions& options = {});

}  // namespace tesopt::lp

#endif
