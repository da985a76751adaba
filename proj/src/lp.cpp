#include "posecg/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace posecg {

namespace {

struct Tableau {
    int m = 0;
    int cols = 0;      // structural + slack (+ artificial) columns
    int stride = 0;    // allocated row length, >= cols
    std::vector<double> T;      // m x stride
    std::vector<double> rhs;    // m
    std::vector<double> r;      // reduced costs, cols
    double z = 0.0;             // current objective
    std::vector<int> basis;     // m, column index of basic variable per row

    double& at(int i, int j) { return T[static_cast<size_t>(i) * stride + j]; }

    void pivot(int row, int col) {
        double* prow = &T[static_cast<size_t>(row) * stride];
        const double inv = 1.0 / prow[col];
        for (int j = 0; j < cols; ++j) prow[j] *= inv;
        rhs[row] *= inv;
        prow[col] = 1.0;
        for (int i = 0; i < m; ++i) {
            if (i == row) continue;
            double* irow = &T[static_cast<size_t>(i) * stride];
            const double f = irow[col];
            if (f == 0.0) continue;
            for (int j = 0; j < cols; ++j) irow[j] -= f * prow[j];
            irow[col] = 0.0;
            rhs[i] -= f * rhs[row];
            if (rhs[i] < 0.0 && rhs[i] > -1e-10) rhs[i] = 0.0;
        }
        const double f = r[col];
        if (f != 0.0) {
            for (int j = 0; j < cols; ++j) r[j] -= f * prow[j];
            r[col] = 0.0;
            z += f * rhs[row];
        }
        basis[row] = col;
    }
};

// Runs the simplex loop on a primal-feasible tableau. Returns status.
LPStatus run_simplex(Tableau& t, const LPOptions& opt, int max_iters,
                     int* iterations_out) {
    bool bland = false;
    int degenerate_streak = 0;
    int iter = 0;
    for (; iter < max_iters; ++iter) {
        int enter = -1;
        if (bland) {
            for (int j = 0; j < t.cols; ++j)
                if (t.r[j] < -opt.pivot_tol) {
                    enter = j;
                    break;
                }
        } else {
            double best = -opt.pivot_tol;
            for (int j = 0; j < t.cols; ++j)
                if (t.r[j] < best) {
                    best = t.r[j];
                    enter = j;
                }
        }
        if (enter < 0) {
            *iterations_out = iter;
            return LPStatus::Optimal;
        }
        int leave = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        // Prefer well-conditioned pivots; fall back to the raw tolerance only
        // when no row clears the stricter bar.
        double min_pivot = std::max(opt.pivot_tol, 1e-7);
        for (int pass = 0; pass < 2 && leave < 0; ++pass, min_pivot = opt.pivot_tol)
        for (int i = 0; i < t.m; ++i) {
            const double a = t.at(i, enter);
            if (a <= min_pivot) continue;
            // Clamp tiny negative rhs so degeneracy noise cannot produce
            // negative ratios that would destroy primal feasibility.
            const double ratio = std::max(t.rhs[i], 0.0) / a;
            if (leave < 0 || ratio < best_ratio - 1e-9 * (1.0 + best_ratio)) {
                best_ratio = ratio;
                leave = i;
            } else if (ratio <= best_ratio + 1e-9 * (1.0 + best_ratio)) {
                // Tied: Bland wants the smallest basic index; otherwise take
                // the largest pivot element for numerical stability.
                if (bland ? t.basis[i] < t.basis[leave]
                          : a > t.at(leave, enter)) {
                    best_ratio = std::min(best_ratio, ratio);
                    leave = i;
                }
            }
        }
        if (leave < 0) {
            *iterations_out = iter;
            return LPStatus::Unbounded;
        }
        if (best_ratio < 1e-12) {
            if (++degenerate_streak >= opt.bland_after_degenerate) bland = true;
        } else {
            degenerate_streak = 0;
            bland = false;
        }
        t.pivot(leave, enter);
    }
    *iterations_out = iter;
    return LPStatus::IterationLimit;
}

int auto_iters(const LPOptions& opt, int m, int n) {
    return opt.max_iterations > 0 ? opt.max_iterations : 500 + 40 * (m + n);
}

void extract_primal(const Tableau& t, int n, std::vector<double>& x) {
    x.assign(n, 0.0);
    for (int i = 0; i < t.m; ++i)
        if (t.basis[i] < n) x[t.basis[i]] = t.rhs[i];
}

}    // namespace

LPSolution solve_lp(const DenseLP& lp, const LPOptions& opt) {
    const int m = lp.m, n = lp.n;
    LPSolution sol;
    if (n == 0) {
        sol.x.clear();
        sol.y.assign(m, 0.0);
        return sol;
    }
    Tableau t;
    t.m = m;
    t.cols = n + m;
    t.stride = t.cols;
    t.T.assign(static_cast<size_t>(m) * t.cols, 0.0);
    t.rhs = lp.b;
    t.r.assign(t.cols, 0.0);
    t.basis.resize(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) t.at(i, j) = lp.at(i, j);
        t.at(i, n + i) = 1.0;
        t.basis[i] = n + i;
    }
    for (int j = 0; j < n; ++j) t.r[j] = lp.c[j];

    sol.status = run_simplex(t, opt, auto_iters(opt, m, n), &sol.iterations);
    extract_primal(t, n, sol.x);
    sol.objective = t.z;
    sol.y.assign(m, 0.0);
    for (int i = 0; i < m; ++i) sol.y[i] = std::max(0.0, t.r[n + i]);

    if (sol.status == LPStatus::Optimal) {
        double dual_obj = 0.0;
        for (int i = 0; i < m; ++i) dual_obj -= lp.b[i] * sol.y[i];
        sol.duality_gap = std::abs(sol.objective - dual_obj);
        // Complementary slackness: y_i * slack_i and x_j * reduced cost_j.
        double cs = 0.0;
        for (int i = 0; i < m; ++i) {
            double ax = 0.0;
            for (int j = 0; j < n; ++j) ax += lp.at(i, j) * sol.x[j];
            cs = std::max(cs, std::abs(sol.y[i] * (lp.b[i] - ax)));
        }
        for (int j = 0; j < n; ++j) {
            double aty = lp.c[j];
            for (int i = 0; i < m; ++i) aty += lp.at(i, j) * sol.y[i];
            cs = std::max(cs, std::abs(sol.x[j] * aty));
        }
        sol.max_cs_violation = cs;
    }
    return sol;
}

LPSolution solve_lp_general(const DenseLP& lp, const LPOptions& opt) {
    const int m = lp.m, n = lp.n;
    LPSolution sol;
    std::vector<int> art_rows;
    for (int i = 0; i < m; ++i)
        if (lp.b[i] < 0.0) art_rows.push_back(i);
    if (art_rows.empty()) {
        sol = solve_lp(lp, opt);
        return sol;
    }
    const int k = static_cast<int>(art_rows.size());
    Tableau t;
    t.m = m;
    t.cols = n + m + k;
    t.stride = t.cols;
    t.T.assign(static_cast<size_t>(m) * t.cols, 0.0);
    t.rhs.resize(m);
    t.r.assign(t.cols, 0.0);
    t.basis.resize(m);
    std::vector<int> art_of_row(m, -1);
    for (int a = 0; a < k; ++a) art_of_row[art_rows[a]] = n + m + a;
    for (int i = 0; i < m; ++i) {
        const double sign = lp.b[i] < 0.0 ? -1.0 : 1.0;
        for (int j = 0; j < n; ++j) t.at(i, j) = sign * lp.at(i, j);
        t.at(i, n + i) = sign;
        t.rhs[i] = sign * lp.b[i];
        if (art_of_row[i] >= 0) {
            t.at(i, art_of_row[i]) = 1.0;
            t.basis[i] = art_of_row[i];
        } else {
            t.basis[i] = n + i;
        }
    }
    // Phase 1: minimize the sum of artificials.
    for (int a = 0; a < k; ++a) t.r[n + m + a] = 1.0;
    for (int i : art_rows) {
        for (int j = 0; j < t.cols; ++j) t.r[j] -= t.at(i, j);
        t.z += t.rhs[i];
    }
    int it1 = 0;
    LPStatus s1 = run_simplex(t, opt, auto_iters(opt, m, n + k), &it1);
    sol.iterations = it1;
    if (s1 == LPStatus::IterationLimit) {
        sol.status = s1;
        return sol;
    }
    if (t.z > opt.feas_tol) {
        sol.status = LPStatus::Infeasible;
        return sol;
    }
    // Pivot out any artificial still basic at zero level.
    for (int i = 0; i < m; ++i) {
        if (t.basis[i] < n + m) continue;
        int enter = -1;
        for (int j = 0; j < n + m; ++j)
            if (std::abs(t.at(i, j)) > 1e-7) {
                enter = j;
                break;
            }
        if (enter >= 0) t.pivot(i, enter);
    }
    // Phase 2: install the real costs; artificials get a huge cost so they
    // never re-enter the basis.
    std::vector<double> r2(t.cols, 0.0);
    for (int j = 0; j < n; ++j) r2[j] = lp.c[j];
    double z2 = 0.0;
    for (int i = 0; i < m; ++i) {
        const int bj = t.basis[i];
        const double cb = bj < n ? lp.c[bj] : 0.0;
        if (cb == 0.0) continue;
        for (int j = 0; j < t.cols; ++j) r2[j] -= cb * t.at(i, j);
        z2 += cb * t.rhs[i];
    }
    for (int a = 0; a < k; ++a) r2[n + m + a] = 1e30;    // never re-enter
    t.r = std::move(r2);
    t.z = z2;
    int it2 = 0;
    LPStatus s2 = run_simplex(t, opt, auto_iters(opt, m, n), &it2);
    sol.iterations += it2;
    sol.status = s2;
    extract_primal(t, n, sol.x);
    sol.objective = t.z;
    return sol;
}

// ---------------------------------------------------------------------------
// Incremental engine. Only the basis survives between solves; the tableau is
// refactorized from the original column data on every solve, so numerical
// error cannot accumulate across a whole generation run. Tableau layout:
// slack columns at [0, m), structural columns appended behind them.

struct IncrementalLP::Impl {
    int m = 0;
    std::vector<double> b;
    std::vector<std::vector<int>> nz;       // per column: nonzero row indices
    std::vector<std::vector<double>> nzv;   // per column: nonzero values
    std::vector<double> c;
    std::vector<int> basis;    // slack i = i, structural j = m + j

    void reset_basis() {
        basis.resize(m);
        for (int i = 0; i < m; ++i) basis[i] = i;
    }

    // Deterministic tiny right-hand-side perturbation that breaks the heavy
    // degeneracy of the master (many zero-slack rows); the final basis is
    // cleaned up against the true b before reporting.
    std::vector<double> perturbed_b() const {
        std::vector<double> bp(b);
        for (int i = 0; i < m; ++i) {
            const uint32_t h = static_cast<uint32_t>(i + 1) * 2654435761u;
            bp[i] += 1e-5 * (0.1 + 0.9 * (h / 4294967296.0));
        }
        return bp;
    }

    // Rebuilds the full tableau for the stored basis. Returns false when the
    // basis matrix is numerically singular.
    bool refactor(Tableau& t, const std::vector<double>& rhs_b) const {
        const int n = static_cast<int>(c.size());
        // Invert the basis matrix by Gauss-Jordan with partial pivoting.
        std::vector<double> M(static_cast<size_t>(m) * 2 * m, 0.0);
        auto mat = [&](int i, int j) -> double& {
            return M[static_cast<size_t>(i) * 2 * m + j];
        };
        for (int pos = 0; pos < m; ++pos) {
            const int bj = basis[pos];
            if (bj < m) {
                mat(bj, pos) = 1.0;
            } else {
                const auto& rows = nz[bj - m];
                const auto& vals = nzv[bj - m];
                for (size_t k = 0; k < rows.size(); ++k)
                    mat(rows[k], pos) = vals[k];
            }
        }
        for (int i = 0; i < m; ++i) mat(i, m + i) = 1.0;
        for (int col = 0; col < m; ++col) {
            int piv = col;
            for (int i = col + 1; i < m; ++i)
                if (std::abs(mat(i, col)) > std::abs(mat(piv, col))) piv = i;
            if (std::abs(mat(piv, col)) < 1e-10) return false;
            if (piv != col)
                for (int j = 0; j < 2 * m; ++j)
                    std::swap(mat(col, j), mat(piv, j));
            const double inv = 1.0 / mat(col, col);
            for (int j = 0; j < 2 * m; ++j) mat(col, j) *= inv;
            for (int i = 0; i < m; ++i) {
                if (i == col) continue;
                const double f = mat(i, col);
                if (f == 0.0) continue;
                for (int j = col; j < 2 * m; ++j) mat(i, j) -= f * mat(col, j);
            }
        }
        // Column 'col' of B^-1 lives at mat(:, m + col) after the sweep, but
        // rows were permuted in place; mat now holds [I | B^-1] directly.
        t.m = m;
        t.cols = m + n;
        t.stride = t.cols;
        t.T.assign(static_cast<size_t>(m) * t.stride, 0.0);
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < m; ++k) t.at(i, k) = mat(i, m + k);
        for (int j = 0; j < n; ++j) {
            const auto& rows = nz[j];
            const auto& vals = nzv[j];
            for (int i = 0; i < m; ++i) {
                double v = 0.0;
                for (size_t k = 0; k < rows.size(); ++k)
                    v += t.at(i, rows[k]) * vals[k];
                t.at(i, m + j) = v;
            }
        }
        t.rhs.assign(m, 0.0);
        for (int i = 0; i < m; ++i) {
            double v = 0.0;
            for (int k = 0; k < m; ++k) v += t.at(i, k) * rhs_b[k];
            t.rhs[i] = v;
        }
        double worst = 0.0;
        for (int i = 0; i < m; ++i) {
            if (t.rhs[i] < 0.0) {
                worst = std::min(worst, t.rhs[i]);
                t.rhs[i] = 0.0;
            }
        }
        if (worst < -1e-6) return false;    // basis lost primal feasibility
        // Duals of the basis: y' = c_B B^-1, via the refreshed slack block.
        std::vector<double> yprime(m, 0.0);
        double z = 0.0;
        for (int i = 0; i < m; ++i) {
            const int bj = basis[i];
            const double cb = bj < m ? 0.0 : c[bj - m];
            if (cb == 0.0) continue;
            for (int k = 0; k < m; ++k) yprime[k] += cb * t.at(i, k);
            z += cb * t.rhs[i];
        }
        t.r.assign(t.cols, 0.0);
        for (int k = 0; k < m; ++k) t.r[k] = -yprime[k];
        for (int j = 0; j < n; ++j) {
            double v = c[j];
            const auto& rows = nz[j];
            const auto& vals = nzv[j];
            for (size_t k = 0; k < rows.size(); ++k)
                v -= yprime[rows[k]] * vals[k];
            t.r[m + j] = v;
        }
        for (int i = 0; i < m; ++i) t.r[basis[i]] = 0.0;
        t.z = z;
        t.basis = basis;
        return true;
    }
};

IncrementalLP::IncrementalLP() : impl_(new Impl) {}
IncrementalLP::~IncrementalLP() = default;
IncrementalLP::IncrementalLP(IncrementalLP&&) noexcept = default;
IncrementalLP& IncrementalLP::operator=(IncrementalLP&&) noexcept = default;

void IncrementalLP::reset(const std::vector<double>& b) {
    Impl& im = *impl_;
    im.m = static_cast<int>(b.size());
    im.b = b;
    im.nz.clear();
    im.nzv.clear();
    im.c.clear();
    im.reset_basis();
}

int IncrementalLP::columns() const {
    return static_cast<int>(impl_->c.size());
}

void IncrementalLP::add_column(const std::vector<double>& a, double cost) {
    Impl& im = *impl_;
    std::vector<int> rows;
    std::vector<double> vals;
    for (int k = 0; k < im.m; ++k)
        if (a[k] != 0.0) {
            rows.push_back(k);
            vals.push_back(a[k]);
        }
    im.nz.push_back(std::move(rows));
    im.nzv.push_back(std::move(vals));
    im.c.push_back(cost);
}

LPSolution IncrementalLP::solve(const LPOptions& opt) {
    Impl& im = *impl_;
    const int m = im.m;
    const int n = static_cast<int>(im.c.size());
    LPSolution sol;
    Tableau t;
    const std::vector<double> bp = im.perturbed_b();
    auto refactor_or_cold = [&](const std::vector<double>& rb) {
        if (!im.refactor(t, rb)) {
            im.reset_basis();    // degraded basis: cold-start from the slacks
            im.refactor(t, rb);
        }
    };
    refactor_or_cold(bp);
    for (int attempt = 0; attempt < 3; ++attempt) {
        int iters = 0;
        sol.status = run_simplex(t, opt, auto_iters(opt, m, n), &iters);
        sol.iterations += iters;
        im.basis = t.basis;
        if (sol.status != LPStatus::IterationLimit) break;
        refactor_or_cold(bp);    // refresh numerics mid-flight and continue
    }
    if (sol.status == LPStatus::Optimal) {
        // Re-derive the solution for the true right-hand side. The basis is
        // dual feasible for any b, so this usually terminates in 0 pivots.
        refactor_or_cold(im.b);
        int iters = 0;
        sol.status = run_simplex(t, opt, auto_iters(opt, m, n), &iters);
        sol.iterations += iters;
        im.basis = t.basis;
    }
    sol.objective = t.z;
    sol.x.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
        if (t.basis[i] >= m) sol.x[t.basis[i] - m] = t.rhs[i];
    sol.y.assign(m, 0.0);
    for (int i = 0; i < m; ++i) sol.y[i] = std::max(0.0, t.r[i]);

    if (sol.status == LPStatus::Optimal) {
        double dual_obj = 0.0;
        for (int i = 0; i < m; ++i) dual_obj -= im.b[i] * sol.y[i];
        sol.duality_gap = std::abs(sol.objective - dual_obj);
        std::vector<double> row_act(m, 0.0);
        double cs = 0.0;
        for (int j = 0; j < n; ++j) {
            double aty = im.c[j];
            const auto& rows = im.nz[j];
            const auto& vals = im.nzv[j];
            for (size_t k = 0; k < rows.size(); ++k) {
                if (sol.x[j] != 0.0) row_act[rows[k]] += vals[k] * sol.x[j];
                aty += vals[k] * sol.y[rows[k]];
            }
            cs = std::max(cs, std::abs(sol.x[j] * aty));
        }
        for (int i = 0; i < m; ++i)
            cs = std::max(cs, std::abs(sol.y[i] * (im.b[i] - row_act[i])));
        sol.max_cs_violation = cs;
    }
    return sol;
}

}    // namespace posecg
