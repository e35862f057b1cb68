#include "tesopt/lp.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <memory>
#include <sstream>

namespace tesopt::lp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDroppedPivot = 1e128;  // marks linearly dependent rows

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

const char* kTagNames[] = {
    "generic",       "demand_balance",   "hp_capacity", "cop_coupling",
    "soc_recursion", "ragone_discharge", "ragone_charge", "cost_cap",
    "peak_limit",
};

// Standard form: min c'x  s.t.  Ax = b,  0 <= x,  x_j <= u_j where finite.
// Built from the user LP by shifting lower bounds, eliminating fixed
// variables, and adding one slack column per inequality row.
struct StandardForm {
    SpMat A;
    Vec b, c, u;                 // u_j = +inf when unbounded above
    std::vector<bool> bounded;
    int n_structural = 0;        // surviving user columns (before slacks)
    std::vector<int> col_of_var; // user var -> standard column, -1 if fixed
    std::vector<double> fixed_value;
    std::vector<int> row_of_user_row;  // user row -> standard row, -1 if dropped
};

StandardForm build_standard_form(const LinearProgram& lp) {
    const int nv = lp.num_variables();
    StandardForm sf;
    sf.col_of_var.assign(nv, -1);
    sf.fixed_value.assign(nv, 0.0);

    int n = 0;
    for (int j = 0; j < nv; ++j) {
        double lb = lp.lower[j], ub = lp.upper[j];
        if (!(lb <= ub))
            throw std::invalid_argument("LP variable " + std::to_string(j) +
                                        " has lower bound above upper bound");
        if (ub - lb <= 0.0) {
            sf.fixed_value[j] = lb;
        } else {
            sf.col_of_var[j] = n++;
        }
    }
    sf.n_structural = n;

    std::vector<Eigen::Triplet<double>> trips;
    std::vector<double> b_rows, u_cols(n, kInf), c_cols(n, 0.0);
    for (int j = 0; j < nv; ++j) {
        int col = sf.col_of_var[j];
        if (col < 0) continue;
        c_cols[col] = lp.objective[j];
        if (std::isfinite(lp.upper[j])) u_cols[col] = lp.upper[j] - lp.lower[j];
    }

    sf.row_of_user_row.assign(lp.rows.size(), -1);
    int m = 0;
    int n_slack = 0;
    for (size_t r = 0; r < lp.rows.size(); ++r) {
        const Row& row = lp.rows[r];
        double rhs = row.rhs;
        bool empty = true;
        for (const auto& [j, a] : row.terms) {
            if (j < 0 || j >= nv)
                throw std::invalid_argument("LP row references unknown variable");
            if (sf.col_of_var[j] < 0) {
                rhs -= a * sf.fixed_value[j];
            } else {
                rhs -= a * lp.lower[j];
                empty = false;
            }
        }
        if (empty) {
            double viol = 0.0;
            if (row.type == RowType::le) viol = std::max(0.0, -rhs);
            else if (row.type == RowType::ge) viol = std::max(0.0, rhs);
            else viol = std::abs(rhs);
            if (viol > 1e-9 * (1.0 + std::abs(row.rhs)))
                throw SolverError(std::string("infeasible fixed row of class ") +
                                      row_tag_name(row.tag),
                                  0);
            continue;
        }
        for (const auto& [j, a] : row.terms) {
            int col = sf.col_of_var[j];
            if (col >= 0 && a != 0.0) trips.emplace_back(m, col, a);
        }
        if (row.type != RowType::eq) ++n_slack;
        sf.row_of_user_row[r] = m;
        b_rows.push_back(rhs);
        ++m;
    }

    // slack columns
    int slack_col = n;
    for (size_t r = 0; r < lp.rows.size(); ++r) {
        const Row& row = lp.rows[r];
        int sr = sf.row_of_user_row[r];
        if (sr < 0 || row.type == RowType::eq) continue;
        trips.emplace_back(sr, slack_col, row.type == RowType::le ? 1.0 : -1.0);
        ++slack_col;
    }
    int n_total = n + n_slack;

    sf.A.resize(m, n_total);
    sf.A.setFromTriplets(trips.begin(), trips.end());
    sf.A.makeCompressed();
    sf.b = Eigen::Map<Vec>(b_rows.data(), m);
    sf.c = Vec::Zero(n_total);
    sf.u = Vec::Constant(n_total, kInf);
    for (int j = 0; j < n; ++j) {
        sf.c[j] = c_cols[j];
        sf.u[j] = u_cols[j];
    }
    sf.bounded.assign(n_total, false);
    for (int j = 0; j < n_total; ++j) sf.bounded[j] = std::isfinite(sf.u[j]);
    return sf;
}

// Shared symbolic part of the envelope factorization; depends only on the
// sparsity pattern of A, so sequential block solves with the same structure
// reuse it through a thread-local cache.
struct EnvelopePattern {
    int m = 0, n = 0;
    std::vector<int> first;             // first envelope column per row
    std::vector<size_t> offset;         // row storage offsets
    std::vector<size_t> contrib_offset; // per-slot contribution ranges
    std::vector<int> contrib_col;       // column k per contribution
    std::vector<int> key_outer, key_inner;  // pattern identity for cache hits

    size_t slot(int i, int j) const {
        return offset[static_cast<size_t>(i)] +
               static_cast<size_t>(j - first[static_cast<size_t>(i)]);
    }
    bool matches(const SpMat& A) const {
        if (m != static_cast<int>(A.rows()) || n != static_cast<int>(A.cols())) return false;
        if (key_inner.size() != static_cast<size_t>(A.nonZeros())) return false;
        return std::equal(key_outer.begin(), key_outer.end(), A.outerIndexPtr()) &&
               std::equal(key_inner.begin(), key_inner.end(), A.innerIndexPtr());
    }
};

std::shared_ptr<const EnvelopePattern> analyze_pattern(const SpMat& A) {
    auto pat = std::make_shared<EnvelopePattern>();
    pat->m = static_cast<int>(A.rows());
    pat->n = static_cast<int>(A.cols());
    const int m = pat->m;
    pat->first.assign(static_cast<size_t>(m), 0);
    for (int i = 0; i < m; ++i) pat->first[static_cast<size_t>(i)] = i;
    for (int k = 0; k < A.outerSize(); ++k) {
        int lo = m;
        for (SpMat::InnerIterator it(A, k); it; ++it)
            lo = std::min(lo, static_cast<int>(it.row()));
        if (lo == m) continue;
        for (SpMat::InnerIterator it(A, k); it; ++it) {
            int r = static_cast<int>(it.row());
            pat->first[static_cast<size_t>(r)] = std::min(pat->first[static_cast<size_t>(r)], lo);
        }
    }
    pat->offset.assign(static_cast<size_t>(m) + 1, 0);
    for (int i = 0; i < m; ++i)
        pat->offset[static_cast<size_t>(i) + 1] =
            pat->offset[static_cast<size_t>(i)] +
            static_cast<size_t>(i - pat->first[static_cast<size_t>(i)] + 1);
    size_t total = pat->offset[static_cast<size_t>(m)];
    if (total > (size_t{1} << 28))
        throw SolverError("LP row ordering produces an excessive factor profile", 0);

    // contribution lists: slot (i,j) accumulates sum_k d_k A_ik A_jk
    pat->contrib_offset.assign(total + 1, 0);
    for (int k = 0; k < A.outerSize(); ++k) {
        for (SpMat::InnerIterator ia(A, k); ia; ++ia)
            for (SpMat::InnerIterator ib = ia; ib; ++ib)
                ++pat->contrib_offset[pat->slot(static_cast<int>(ib.row()),
                                                static_cast<int>(ia.row())) +
                                      1];
    }
    for (size_t s = 0; s < total; ++s) pat->contrib_offset[s + 1] += pat->contrib_offset[s];
    pat->contrib_col.assign(pat->contrib_offset[total], 0);
    std::vector<size_t> cursor(pat->contrib_offset.begin(), pat->contrib_offset.end() - 1);
    for (int k = 0; k < A.outerSize(); ++k) {
        for (SpMat::InnerIterator ia(A, k); ia; ++ia)
            for (SpMat::InnerIterator ib = ia; ib; ++ib) {
                size_t s = pat->slot(static_cast<int>(ib.row()), static_cast<int>(ia.row()));
                pat->contrib_col[cursor[s]++] = k;
            }
    }
    pat->key_outer.assign(A.outerIndexPtr(), A.outerIndexPtr() + A.outerSize() + 1);
    pat->key_inner.assign(A.innerIndexPtr(), A.innerIndexPtr() + A.nonZeros());
    return pat;
}

// Envelope (skyline) Cholesky of the normal-equations matrix A diag(d) A'.
// Dispatch LPs order rows by hour, so the profile is a narrow band plus the
// occasional trailing dense row; pivots that collapse under cancellation are
// treated as dependent rows and effectively dropped, which keeps the search
// directions bounded on degenerate problems.
class EnvelopeCholesky {
public:
    void analyze(const SpMat& A) {
        thread_local std::shared_ptr<const EnvelopePattern> cache;
        if (cache && cache->matches(A)) {
            pat_ = cache;
        } else {
            pat_ = analyze_pattern(A);
            cache = pat_;
        }
        m_ = pat_->m;
        // per-contribution coefficient products A_ik * A_jk
        contrib_val_.assign(pat_->contrib_col.size(), 0.0);
        std::vector<size_t> cursor(pat_->contrib_offset.begin(), pat_->contrib_offset.end() - 1);
        for (int k = 0; k < A.outerSize(); ++k) {
            for (SpMat::InnerIterator ia(A, k); ia; ++ia)
                for (SpMat::InnerIterator ib = ia; ib; ++ib) {
                    size_t s = pat_->slot(static_cast<int>(ib.row()),
                                          static_cast<int>(ia.row()));
                    contrib_val_[cursor[s]++] = ia.value() * ib.value();
                }
        }
        values_.assign(pat_->offset[static_cast<size_t>(m_)], 0.0);
    }

    void factor(const Vec& d, double reg) {
        const auto& pat = *pat_;
        for (size_t s = 0; s < values_.size(); ++s) {
            double acc = 0.0;
            for (size_t p = pat.contrib_offset[s]; p < pat.contrib_offset[s + 1]; ++p)
                acc += d[pat.contrib_col[p]] * contrib_val_[p];
            values_[s] = acc;
        }
        for (int i = 0; i < m_; ++i) values_[pat.slot(i, i)] += reg;
        // in-place LDL' restricted to the envelope
        for (int i = 0; i < m_; ++i) {
            const int fi = pat.first[static_cast<size_t>(i)];
            double* row_i = &values_[pat.offset[static_cast<size_t>(i)]];
            for (int j = fi; j < i; ++j) {
                const int fj = pat.first[static_cast<size_t>(j)];
                const double* row_j = &values_[pat.offset[static_cast<size_t>(j)]];
                int lo = std::max(fi, fj);
                double sum = row_i[j - fi];
                for (int k = lo; k < j; ++k)
                    sum -= row_i[k - fi] * row_j[k - fj] * values_[pat.slot(k, k)];
                double dj = values_[pat.slot(j, j)];
                row_i[j - fi] = dj >= kDroppedPivot ? 0.0 : sum / dj;
            }
            double di = row_i[i - fi];
            for (int k = fi; k < i; ++k) {
                double lik = row_i[k - fi];
                di -= lik * lik * values_[pat.slot(k, k)];
            }
            double orig = row_i[i - fi];
            if (!(di > std::max(1e-30, 1e-14 * std::abs(orig))))
                di = kDroppedPivot;
            row_i[i - fi] = di;
        }
    }

    Vec solve(const Vec& rhs) const {
        const auto& pat = *pat_;
        Vec x = rhs;
        for (int i = 0; i < m_; ++i) {
            const int fi = pat.first[static_cast<size_t>(i)];
            const double* row_i = &values_[pat.offset[static_cast<size_t>(i)]];
            double sum = x[i];
            for (int k = fi; k < i; ++k) sum -= row_i[k - fi] * x[k];
            x[i] = sum;
        }
        for (int i = 0; i < m_; ++i) {
            double di = values_[pat.slot(i, i)];
            x[i] = di >= kDroppedPivot ? 0.0 : x[i] / di;
        }
        for (int i = m_ - 1; i >= 0; --i) {
            const int fi = pat.first[static_cast<size_t>(i)];
            const double* row_i = &values_[pat.offset[static_cast<size_t>(i)]];
            const double xi = x[i];
            for (int k = fi; k < i; ++k) x[k] -= row_i[k - fi] * xi;
        }
        return x;
    }

private:
    int m_ = 0;
    std::shared_ptr<const EnvelopePattern> pat_;
    std::vector<double> contrib_val_;
    std::vector<double> values_;
};

struct Iterate {
    Vec x, w, y, z, s;  // w,s meaningful only on bounded columns
};

double max_step(const Vec& v, const Vec& dv, const std::vector<bool>* mask) {
    double alpha = 1.0;
    for (int j = 0; j < v.size(); ++j) {
        if (mask && !(*mask)[j]) continue;
        if (dv[j] < 0.0) alpha = std::min(alpha, -v[j] / dv[j]);
    }
    return alpha;
}

std::string worst_violation_message(const LinearProgram& lp, const std::vector<double>& x) {
    double worst = 0.0;
    RowTag worst_tag = RowTag::generic;
    for (const auto& row : lp.rows) {
        double ax = 0.0;
        for (const auto& [j, a] : row.terms) ax += a * x[static_cast<size_t>(j)];
        double viol = 0.0;
        if (row.type == RowType::le) viol = ax - row.rhs;
        else if (row.type == RowType::ge) viol = row.rhs - ax;
        else viol = std::abs(ax - row.rhs);
        if (viol > worst) {
            worst = viol;
            worst_tag = row.tag;
        }
    }
    std::ostringstream os;
    os << "worst constraint class: " << row_tag_name(worst_tag) << " (violation " << worst << ")";
    return os.str();
}

}  // namespace

const char* row_tag_name(RowTag tag) { return kTagNames[static_cast<int>(tag)]; }

int LinearProgram::add_variable(double cost, double lb, double ub) {
    objective.push_back(cost);
    lower.push_back(lb);
    upper.push_back(ub);
    return static_cast<int>(objective.size()) - 1;
}

int LinearProgram::add_row(RowType type, double rhs, std::vector<std::pair<int, double>> terms,
                           RowTag tag) {
    rows.push_back(Row{type, rhs, tag, std::move(terms)});
    return static_cast<int>(rows.size()) - 1;
}

LpSolution solve_lp(const LinearProgram& lp, const SolveOptions& options) {
    StandardForm sf = build_standard_form(lp);
    const int m = static_cast<int>(sf.A.rows());
    const int n = static_cast<int>(sf.A.cols());

    auto recover = [&](const Vec& xstd) {
        std::vector<double> x(static_cast<size_t>(lp.num_variables()), 0.0);
        for (int j = 0; j < lp.num_variables(); ++j) {
            int col = sf.col_of_var[j];
            x[static_cast<size_t>(j)] =
                col < 0 ? sf.fixed_value[j] : lp.lower[j] + xstd[col];
        }
        return x;
    };
    auto original_objective = [&](const std::vector<double>& x) {
        double v = 0.0;
        for (int j = 0; j < lp.num_variables(); ++j)
            v += lp.objective[j] * x[static_cast<size_t>(j)];
        return v;
    };

    LpSolution sol;
    if (n == 0) {
        sol.x = recover(Vec());
        sol.objective = original_objective(sol.x);
        return sol;
    }
    if (m == 0) {
        // Pure box problem: each column sits at the bound favored by its cost.
        Vec x = Vec::Zero(n);
        for (int j = 0; j < n; ++j) {
            if (sf.c[j] < 0.0) {
                if (!sf.bounded[j]) throw SolverError("LP is unbounded below", 0);
                x[j] = sf.u[j];
            }
        }
        sol.x = recover(x);
        sol.objective = original_objective(sol.x);
        return sol;
    }

    const int n_bounded = static_cast<int>(std::count(sf.bounded.begin(), sf.bounded.end(), true));
    const double comp_count = static_cast<double>(n + n_bounded);

    EnvelopeCholesky chol;
    chol.analyze(sf.A);
    SpMat At = SpMat(sf.A.transpose());

    auto factor = [&](const Vec& d) { chol.factor(d, 1e-12); };

    // Solves A diag(d) A' dy = rhs, refining against exact residuals and
    // keeping the best iterate seen in case refinement diverges.
    auto solve_normal = [&](const Vec& d, const Vec& rhs) {
        Vec dy = chol.solve(rhs);
        Vec best = dy;
        double best_res = kInf;
        for (int round = 0; round < 4; ++round) {
            Vec res = rhs - sf.A * (d.cwiseProduct(At * dy));
            double rnorm = res.lpNorm<Eigen::Infinity>();
            if (rnorm < best_res) {
                best_res = rnorm;
                best = dy;
            }
            if (rnorm <= 1e-12 * (1.0 + rhs.lpNorm<Eigen::Infinity>()) ||
                rnorm > 2.0 * best_res)
                break;
            dy += chol.solve(res);
        }
        return best;
    };

    // ---- starting point ----
    Iterate it;
    {
        Vec ones = Vec::Ones(n);
        factor(ones);
        Vec xt = At * solve_normal(ones, sf.b);

        const LpSolution* warm = options.warm_start;
        bool use_warm = warm && warm->row_duals.size() == lp.rows.size();
        if (use_warm) {
            it.y = Vec::Zero(m);
            for (size_t r = 0; r < lp.rows.size(); ++r) {
                int sr = sf.row_of_user_row[r];
                if (sr >= 0) it.y[sr] = warm->row_duals[r];
            }
        } else {
            it.y = solve_normal(ones, sf.A * sf.c);
        }
        Vec r = sf.c - At * it.y;

        double pad = 1.0;
        for (int j = 0; j < n; ++j) pad = std::max(pad, 0.01 * std::abs(xt[j]));
        it.x = Vec::Zero(n);
        it.w = Vec::Ones(n);
        for (int j = 0; j < n; ++j) {
            if (sf.bounded[j]) {
                double lo = std::min(0.25 * sf.u[j], pad);
                it.x[j] = std::clamp(xt[j], lo, sf.u[j] - lo);
                it.w[j] = sf.u[j] - it.x[j];
            } else {
                it.x[j] = std::max(xt[j], pad);
            }
        }
        double pad_d = use_warm ? 0.05 * (1.0 + sf.c.lpNorm<Eigen::Infinity>())
                                : 1.0 + 0.01 * sf.c.lpNorm<Eigen::Infinity>();
        it.z = Vec::Zero(n);
        it.s = Vec::Zero(n);
        for (int j = 0; j < n; ++j) {
            if (sf.bounded[j]) {
                it.z[j] = std::max(r[j], 0.0) + pad_d;
                it.s[j] = std::max(-r[j], 0.0) + pad_d;
            } else {
                it.z[j] = std::max(r[j], pad_d);
            }
        }
    }

    const double bnorm = 1.0 + std::max(sf.b.lpNorm<Eigen::Infinity>(),
                                        [&] {
                                            double u = 0.0;
                                            for (int j = 0; j < n; ++j)
                                                if (sf.bounded[j]) u = std::max(u, sf.u[j]);
                                            return u;
                                        }());
    const double cnorm = 1.0 + sf.c.lpNorm<Eigen::Infinity>();

    SolveStats stats;
    int stall_count = 0;
    double best_gap = kInf;
    int no_progress = 0;
    double last_mu = kInf;
    const bool trace = std::getenv("TESOPT_LP_TRACE") != nullptr;

    for (int iter = 0; iter <= options.max_iterations; ++iter) {
        stats.iterations = iter;

        Vec rb = sf.b - sf.A * it.x;
        Vec rc = sf.c - At * it.y - it.z + it.s;
        Vec ru = Vec::Zero(n);
        double gap = 0.0;
        for (int j = 0; j < n; ++j) {
            gap += it.x[j] * it.z[j];
            if (sf.bounded[j]) {
                ru[j] = sf.u[j] - it.x[j] - it.w[j];
                gap += it.w[j] * it.s[j];
            }
        }
        double mu = gap / comp_count;

        double pobj = sf.c.dot(it.x);
        double dobj = sf.b.dot(it.y);
        for (int j = 0; j < n; ++j)
            if (sf.bounded[j]) dobj -= sf.u[j] * it.s[j];

        stats.primal_inf =
            std::max(rb.lpNorm<Eigen::Infinity>(), ru.lpNorm<Eigen::Infinity>()) / bnorm;
        stats.dual_inf = rc.lpNorm<Eigen::Infinity>() / cnorm;
        stats.rel_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));
        // complementarity part of the gap; tracks rel_gap once feasible
        double comp_rel = gap / (1.0 + std::abs(pobj));

        if (trace)
            std::fprintf(stderr,
                         "[lp] it=%3d mu=%10.3e gap=%10.3e pinf=%10.3e dinf=%10.3e obj=%14.8e\n",
                         iter, mu, stats.rel_gap, stats.primal_inf, stats.dual_inf, pobj);

        auto finish = [&]() {
            sol.x = recover(it.x);
            sol.objective = original_objective(sol.x);
            sol.row_duals.assign(lp.rows.size(), 0.0);
            for (size_t r = 0; r < lp.rows.size(); ++r) {
                int sr = sf.row_of_user_row[r];
                if (sr >= 0) sol.row_duals[r] = it.y[sr];
            }
            sol.stats = stats;
        };
        if (stats.primal_inf <= options.tol_feas && stats.dual_inf <= options.tol_feas &&
            (stats.rel_gap <= options.tol_gap || comp_rel <= options.tol_gap)) {
            finish();
            return sol;
        }
        auto give_up = [&](const std::string& reason) {
            if (stats.primal_inf <= 10.0 * options.tol_feas &&
                stats.dual_inf <= 10.0 * options.tol_feas &&
                (stats.rel_gap <= 10.0 * options.tol_gap ||
                 comp_rel <= 10.0 * options.tol_gap)) {
                finish();
                return true;
            }
            throw SolverError("interior-point method " + reason + " after " +
                                  std::to_string(iter) + " iterations (rel gap " +
                                  std::to_string(stats.rel_gap) + "); " +
                                  worst_violation_message(lp, recover(it.x)),
                              iter);
        };
        // Complementarity has bottomed out; further steps only destabilize.
        if (mu <= 1e-16 * (1.0 + std::abs(pobj))) {
            if (give_up("hit the complementarity floor")) return sol;
        }
        if (!std::isfinite(mu) || !std::isfinite(pobj))
            throw SolverError("interior-point iterates diverged after " +
                                  std::to_string(iter) + " iterations; " +
                                  worst_violation_message(lp, recover(it.x)),
                              iter);
        if (pobj < -1e14 * bnorm * cnorm)
            throw SolverError("LP appears unbounded below", iter);
        if (stats.rel_gap < 0.9 * best_gap) {
            best_gap = stats.rel_gap;
            no_progress = 0;
        } else if (++no_progress >= 25) {
            if (give_up("stopped making progress")) return sol;
        }
        if (iter == options.max_iterations) break;

        // Exact scaling for the direction algebra; a clamped copy only for
        // assembling the factorized matrix. Using the exact d keeps the
        // elementwise Newton identities intact for near-bound variables.
        Vec d(n), d_factor(n);
        for (int j = 0; j < n; ++j) {
            double th = it.z[j] / it.x[j];
            if (sf.bounded[j]) th += it.s[j] / it.w[j];
            th = std::min(th, 1e300);
            d[j] = 1.0 / th;
            d_factor[j] = std::clamp(d[j], 1e-16, 1e18);
        }
        factor(d_factor);

        double direction_error = 0.0;
        auto direction = [&](const Vec& rxz, const Vec& rws, Vec& dx, Vec& dy, Vec& dz, Vec& dw,
                             Vec& ds) {
            Vec r2 = rc;
            for (int j = 0; j < n; ++j) {
                r2[j] -= rxz[j] / it.x[j];
                if (sf.bounded[j]) r2[j] += (rws[j] - it.s[j] * ru[j]) / it.w[j];
            }
            dy = solve_normal(d, rb + sf.A * d.cwiseProduct(r2));
            dx = d.cwiseProduct(At * dy - r2);
            direction_error = (sf.A * dx - rb).lpNorm<Eigen::Infinity>();
            dz.resize(n);
            dw = Vec::Zero(n);
            ds = Vec::Zero(n);
            for (int j = 0; j < n; ++j) {
                dz[j] = (rxz[j] - it.z[j] * dx[j]) / it.x[j];
                if (sf.bounded[j]) {
                    dw[j] = ru[j] - dx[j];
                    ds[j] = (rws[j] - it.s[j] * dw[j]) / it.w[j];
                }
            }
        };

        // predictor
        Vec rxz_aff(n), rws_aff = Vec::Zero(n);
        for (int j = 0; j < n; ++j) {
            rxz_aff[j] = -it.x[j] * it.z[j];
            if (sf.bounded[j]) rws_aff[j] = -it.w[j] * it.s[j];
        }
        Vec dx_a, dy_a, dz_a, dw_a, ds_a;
        direction(rxz_aff, rws_aff, dx_a, dy_a, dz_a, dw_a, ds_a);

        double ap = std::min(max_step(it.x, dx_a, nullptr), max_step(it.w, dw_a, &sf.bounded));
        double ad = std::min(max_step(it.z, dz_a, nullptr), max_step(it.s, ds_a, &sf.bounded));
        double mu_aff = 0.0;
        for (int j = 0; j < n; ++j) {
            mu_aff += (it.x[j] + ap * dx_a[j]) * (it.z[j] + ad * dz_a[j]);
            if (sf.bounded[j]) mu_aff += (it.w[j] + ap * dw_a[j]) * (it.s[j] + ad * ds_a[j]);
        }
        mu_aff = std::max(mu_aff, 0.0) / comp_count;
        double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 1e-8, 1.0);

        // corrector
        Vec rxz(n), rws = Vec::Zero(n);
        for (int j = 0; j < n; ++j) {
            rxz[j] = sigma * mu - it.x[j] * it.z[j] - dx_a[j] * dz_a[j];
            if (sf.bounded[j]) rws[j] = sigma * mu - it.w[j] * it.s[j] - dw_a[j] * ds_a[j];
        }
        Vec dx, dy, dz, dw, ds;
        direction(rxz, rws, dx, dy, dz, dw, ds);

        // A bad step would inject this error straight into the primal
        // residual; stop at the current (typically converged) iterate instead.
        if (direction_error >
            std::max(1e-8 * bnorm, 0.01 * rb.lpNorm<Eigen::Infinity>() + 1e-10 * bnorm)) {
            if (give_up("lost search-direction accuracy")) return sol;
        }

        constexpr double eta = 0.99995;
        double alpha_p = std::min(
            1.0, eta * std::min(max_step(it.x, dx, nullptr), max_step(it.w, dw, &sf.bounded)));
        double alpha_d = std::min(
            1.0, eta * std::min(max_step(it.z, dz, nullptr), max_step(it.s, ds, &sf.bounded)));

        it.x += alpha_p * dx;
        it.w += alpha_p * dw;
        it.y += alpha_d * dy;
        it.z += alpha_d * dz;
        it.s += alpha_d * ds;

        if (mu > 0.999 * last_mu && alpha_p < 1e-6 && alpha_d < 1e-6) {
            if (++stall_count >= 5) {
                if (give_up("stalled")) return sol;
            }
        } else {
            stall_count = 0;
        }
        last_mu = mu;
    }

    throw SolverError("interior-point method did not converge in " +
                          std::to_string(options.max_iterations) + " iterations; " +
                          worst_violation_message(lp, recover(it.x)),
                      options.max_iterations);
}

}  // namespace tesopt::lp
