#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "posecg/instance.hpp"
#include "posecg/master.hpp"

namespace posecg {

struct SolverConfig {
    int max_iterations = 200;
    double tol = 1e-8;              // pricing violation threshold
    bool enable_triples = true;
    long long ilp_node_cap = 100000;
    long long pricing_node_cap = 1000000;
    int threads = 1;
    double frac_eps = 1e-6;         // fractionality test half-width
    int columns_per_sweep = 32;     // keep only the most violated (0 = all)
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class IterationCapReached : public SolverError {
public:
    using SolverError::SolverError;
};

struct PoseWithLocals {
    GlobalPoseColumn pose;
    std::vector<LocalAssignmentColumn> locals;
};

struct Solution {
    std::vector<PoseWithLocals> poses;
    std::vector<int> false_positives;
    double objective = 0.0;
};

struct SolveReport {
    double lp_objective = 0.0;
    double ilp_objective = 0.0;
    int n_columns_global = 0;
    int n_columns_local = 0;
    int n_triple_rows = 0;
    int n_iterations = 0;
    bool lp_integral = false;
    long long bnb_nodes = 0;
    double wall_time = 0.0;
    // Diagnostics beyond the headline statistics.
    int n_lp_solves = 0;
    double max_duality_gap = 0.0;
    double max_cs_violation = 0.0;
    long long pricing_nodes = 0;
    bool ilp_certified = true;
};

struct GenerationResult {
    ColumnPool pool;
    DualValues duals;
    std::vector<TripleRow> global_rows;
    std::vector<TripleRow> local_rows;
    std::vector<double> x;    // primal over [globals; locals]
    double lp_objective = 0.0;
    int iterations = 0;
    bool iteration_cap_reached = false;
    int lp_solves = 0;
    double max_duality_gap = 0.0;
    double max_cs_violation = 0.0;
    long long pricing_nodes = 0;
};

// Alg-1 style loop: solve the restricted LP, price locals per detection and
// globals per major-part detection, add violated columns, repeat until none.
GenerationResult run_column_generation(const Instance& inst,
                                       const SolverConfig& config = {});

// Interleaves pricing with odd-set-3 separation; terminates when neither new
// columns nor new rows are found.
GenerationResult run_column_row_generation(const Instance& inst,
                                           const SolverConfig& config = {});

bool is_integral(const std::vector<double>& x, double eps = 1e-6);

struct IlpResult {
    std::vector<char> chosen;    // over [globals; locals]
    double objective = 0.0;
    long long nodes = 0;
    bool certified = true;
};

// Exact optimum of the restricted ILP via depth-first branch-and-bound on
// column indicators; returns the LP solution directly when already integral.
IlpResult solve_ilp_over_columns(const Instance& inst, const ColumnPool& pool,
                                 const std::vector<TripleRow>& global_rows,
                                 const std::vector<TripleRow>& local_rows,
                                 const std::vector<double>& lp_x,
                                 const SolverConfig& config = {});

Solution extract_solution(const Instance& inst, const ColumnPool& pool,
                          const std::vector<char>& chosen);

std::pair<Solution, SolveReport> solve(const Instance& inst,
                                       const SolverConfig& config = {});

// Independent validity checker: verifies the four linking rules and the
// recomputed objective directly against the instance, sharing no code with
// the solver. Returns human-readable violations; empty means valid.
std::vector<std::string> check_solution(const Instance& inst,
                                        const Solution& solution);

}    // namespace posecg
