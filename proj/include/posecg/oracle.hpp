#pragma once

#include <stdexcept>
#include <vector>

#include "posecg/instance.hpp"
#include "posecg/master.hpp"
#include "posecg/solver.hpp"

namespace posecg {
namespace oracle {

class TooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ColumnUniverse {
    std::vector<GlobalPoseColumn> globals;
    std::vector<LocalAssignmentColumn> locals;
};

// Every structurally valid global pose and nonempty local assignment with its
// exact cost. Guarded at |D| <= 14.
ColumnUniverse enumerate_all_columns(const Instance& inst);

struct BruteForceResult {
    double objective = 0.0;
    Solution solution;
    // All optimal selections within tie_tol, as (global indices, local
    // indices) into the universe; used by tie-sensitive property tests.
    std::vector<std::pair<std::vector<int>, std::vector<int>>> all_optima;
    int min_pose_count = 0;    // minimum #poses among the optima
};

// Exact optimum by feasibility-pruned recursion over the full column
// universe. Recommended |D| <= 8; guarded at 10.
BruteForceResult brute_force_solve(const Instance& inst, double tie_tol = 1e-9);

enum class PriceKind { Local, Global };

struct BruteForcePrice {
    double reduced_cost = 0.0;    // +inf when no candidate exists
    bool violated = false;
    std::vector<int> detections;    // pose dets, or locals for Local kind
};

// Exhaustive pricing minimum, including triple penalty terms; independent of
// the DP/branch-and-bound code paths.
BruteForcePrice brute_force_price(const Instance& inst, int anchor,
                                  const DualValues& duals,
                                  const std::vector<TripleRow>& global_rows,
                                  const std::vector<TripleRow>& local_rows,
                                  PriceKind kind, double tol = 1e-8);

}    // namespace oracle
}    // namespace posecg
