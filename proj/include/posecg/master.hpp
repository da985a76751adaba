#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "posecg/instance.hpp"
#include "posecg/lp.hpp"

namespace posecg {

struct GlobalPoseColumn {
    std::vector<int> detections;    // sorted ids, <=1 per part, >=1 major
    double cost_gamma = 0.0;
};

struct LocalAssignmentColumn {
    int anchor = -1;
    std::vector<int> locals;    // sorted ids, nonempty, same part as anchor
    double cost_psi = 0.0;
};

enum class TripleFlavor { Global, Local };

struct TripleRow {
    std::vector<int> dets;    // exactly 3, sorted
    TripleFlavor flavor = TripleFlavor::Global;

    bool operator<(const TripleRow& o) const {
        if (flavor != o.flavor) return flavor < o.flavor;
        return dets < o.dets;
    }
    bool operator==(const TripleRow& o) const {
        return flavor == o.flavor && dets == o.dets;
    }
};

struct DualValues {
    std::vector<double> lambda1, lambda2, lambda3;    // per detection
    std::vector<double> lambda4;                      // per Global triple row
    std::vector<double> lambda5;                      // per Local triple row

    static DualValues zeros(int n_detections) {
        DualValues d;
        d.lambda1.assign(n_detections, 0.0);
        d.lambda2.assign(n_detections, 0.0);
        d.lambda3.assign(n_detections, 0.0);
        return d;
    }
};

class MasterError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class InvalidPose : public MasterError {
public:
    using MasterError::MasterError;
};
class InvalidLocalAssignment : public MasterError {
public:
    using MasterError::MasterError;
};
class CostMismatch : public MasterError {
public:
    using MasterError::MasterError;
};

// Structural checks (throwing variants used by cost evaluation).
bool is_valid_pose(const Instance& inst, const std::vector<int>& detections);
bool is_valid_local(const Instance& inst, int anchor,
                    const std::vector<int>& locals);

// Gamma = omega + sum theta + sum phi over unordered pairs in the set.
double compute_gamma(const Instance& inst, const std::vector<int>& detections);

// Psi = sum theta over locals (anchor's theta excluded) + sum phi over
// unordered pairs within locals + anchor.
double compute_psi(const Instance& inst, int anchor,
                   const std::vector<int>& locals);

enum class AddResult { Added, Duplicate };

class ColumnPool {
public:
    std::vector<GlobalPoseColumn> globals;
    std::vector<LocalAssignmentColumn> locals;

    AddResult add_global(const Instance& inst, GlobalPoseColumn column);
    AddResult add_local(const Instance& inst, LocalAssignmentColumn column);
    bool has_global(const std::vector<int>& detections) const;
    bool has_local(int anchor, const std::vector<int>& locals) const;
    int size() const {
        return static_cast<int>(globals.size() + locals.size());
    }

private:
    std::map<std::vector<int>, int> global_index_;
    // local signature: {anchor, -1, sorted locals...}
    std::map<std::vector<int>, int> local_index_;
};

// Reduced costs under the current duals; triple terms use the row lists the
// duals are aligned with.
double reduced_cost_global(const Instance& inst, const GlobalPoseColumn& col,
                           const DualValues& duals,
                           const std::vector<TripleRow>& global_rows);
double reduced_cost_local(const Instance& inst,
                          const LocalAssignmentColumn& col,
                          const DualValues& duals,
                          const std::vector<TripleRow>& local_rows);

// Row layout of the restricted master LP:
//   [family-1 per detection; family-2 per detection; family-3 per detection;
//    Global triples; Local triples], b = [1;1;0;1;1] blocks.
// Columns: [globals; locals].
struct MasterIndex {
    int n_detections = 0;
    int n_global_rows = 0;    // triple rows
    int n_local_rows = 0;
    int n_global_cols = 0;
    int n_local_cols = 0;

    int family1_row(int det) const { return det; }
    int family2_row(int det) const { return n_detections + det; }
    int family3_row(int det) const { return 2 * n_detections + det; }
    int global_triple_row(int t) const { return 3 * n_detections + t; }
    int local_triple_row(int t) const {
        return 3 * n_detections + n_global_rows + t;
    }
    int global_col(int g) const { return g; }
    int local_col(int l) const { return n_global_cols + l; }
};

struct RestrictedLP {
    DenseLP lp;
    MasterIndex index;
};

RestrictedLP build_restricted_lp(const Instance& inst, const ColumnPool& pool,
                                 const std::vector<TripleRow>& global_rows,
                                 const std::vector<TripleRow>& local_rows);

DualValues unpack_duals(const MasterIndex& index, const std::vector<double>& y);

// Debug CSV dump of rows, columns and costs for external cross-checks.
std::string dump_master_csv(const Instance& inst, const ColumnPool& pool,
                            const std::vector<TripleRow>& global_rows,
                            const std::vector<TripleRow>& local_rows);

int triple_overlap(const TripleRow& row, const std::vector<int>& sorted_dets);

}    // namespace posecg
