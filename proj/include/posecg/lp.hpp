#pragma once

#include <memory>
#include <string>
#include <vector>

namespace posecg {

// Dense LP: minimize c'x subject to Ax <= b, x >= 0. The master always has
// b >= 0, so the slack basis is feasible and no phase-1 is needed.
struct DenseLP {
    int m = 0, n = 0;
    std::vector<double> A;    // row-major, m*n
    std::vector<double> b;    // m
    std::vector<double> c;    // n

    double& at(int i, int j) { return A[static_cast<size_t>(i) * n + j]; }
    double at(int i, int j) const { return A[static_cast<size_t>(i) * n + j]; }
};

enum class LPStatus { Optimal, Unbounded, Infeasible, IterationLimit };

struct LPSolution {
    LPStatus status = LPStatus::Optimal;
    std::vector<double> x;    // primal, n
    std::vector<double> y;    // dual, m; y >= 0 with c + A'y >= 0 and obj = -b'y
    double objective = 0.0;
    double duality_gap = 0.0;          // |primal - dual| after solve
    double max_cs_violation = 0.0;     // complementary slackness residual
    int iterations = 0;
};

struct LPOptions {
    double pivot_tol = 1e-9;
    double feas_tol = 1e-7;
    int max_iterations = 0;        // 0 = automatic from size
    int bland_after_degenerate = 50;
};

// Primal simplex from the slack basis; requires b >= 0.
LPSolution solve_lp(const DenseLP& lp, const LPOptions& options = {});

// Two-phase simplex tolerating b of any sign; used for branch-and-bound
// nodes where fixings push constants into the right-hand side. Duals are
// not populated.
LPSolution solve_lp_general(const DenseLP& lp, const LPOptions& options = {});

// Warm-started variant for column generation: the row set and b stay fixed
// while columns arrive incrementally, so the optimal basis of one solve is
// the starting basis of the next. Column order is append order.
class IncrementalLP {
public:
    IncrementalLP();
    ~IncrementalLP();
    IncrementalLP(IncrementalLP&&) noexcept;
    IncrementalLP& operator=(IncrementalLP&&) noexcept;

    void reset(const std::vector<double>& b);    // requires b >= 0
    void add_column(const std::vector<double>& a, double cost);
    int columns() const;
    LPSolution solve(const LPOptions& options = {});

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}    // namespace posecg
