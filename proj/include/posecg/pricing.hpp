#pragma once

#include <optional>
#include <stdexcept>

#include "posecg/instance.hpp"
#include "posecg/master.hpp"

namespace posecg {

class PricingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LocalPricingResult {
    double reduced_cost = 0.0;    // +inf when the anchor has no companions
    bool violated = false;
    std::optional<LocalAssignmentColumn> column;
};

struct GlobalPricingResult {
    double reduced_cost = 0.0;
    bool violated = false;
    std::optional<GlobalPoseColumn> column;
    long long nodes = 0;    // branch-and-bound nodes (0 for plain DP)
};

// Exact minimizer over all nonempty same-part local subsets for the anchor,
// by explicit enumeration. Ties break to the lexicographically smallest
// sorted-id set.
LocalPricingResult price_local(const Instance& inst, int anchor,
                               const DualValues& duals,
                               const std::vector<TripleRow>& local_rows,
                               double tol = 1e-8);

// Exact minimizer over all global poses containing the anchor (a major-part
// detection) via dynamic programming on the conditional forest. Requires all
// lambda4 to be zero. Ties break toward ABSENT, then smallest detection id.
GlobalPricingResult price_global_dp(const Instance& inst, int anchor,
                                    const DualValues& duals, double tol = 1e-8);

// Same problem with active Global triple penalties, solved by best-first
// branch-and-bound; the bound drops unresolved penalties (valid since
// lambda4 >= 0).
GlobalPricingResult price_global_bnb(const Instance& inst, int anchor,
                                     const DualValues& duals,
                                     const std::vector<TripleRow>& global_rows,
                                     double tol = 1e-8,
                                     long long node_limit = 1000000);

}    // namespace posecg
