#include "posecg/master.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace posecg {

namespace {

bool sorted_unique(const std::vector<int>& v) {
    for (size_t i = 1; i < v.size(); ++i)
        if (v[i - 1] >= v[i]) return false;
    return true;
}

bool ids_exist(const Instance& inst, const std::vector<int>& v) {
    for (int d : v)
        if (d < 0 || d >= inst.num_detections()) return false;
    return true;
}

}    // namespace

bool is_valid_pose(const Instance& inst, const std::vector<int>& detections) {
    if (detections.empty()) return false;
    if (!sorted_unique(detections) || !ids_exist(inst, detections)) return false;
    std::vector<char> part_used(inst.num_parts(), 0);
    bool has_major = false;
    for (int d : detections) {
        const int r = inst.detections[d].part;
        if (part_used[r]) return false;
        part_used[r] = 1;
        if (inst.graph.is_major(r)) has_major = true;
    }
    return has_major;
}

bool is_valid_local(const Instance& inst, int anchor,
                    const std::vector<int>& locals) {
    if (locals.empty()) return false;
    if (anchor < 0 || anchor >= inst.num_detections()) return false;
    if (!sorted_unique(locals) || !ids_exist(inst, locals)) return false;
    const int part = inst.detections[anchor].part;
    for (int d : locals) {
        if (d == anchor) return false;
        if (inst.detections[d].part != part) return false;
    }
    return true;
}

double compute_gamma(const Instance& inst, const std::vector<int>& detections) {
    if (!is_valid_pose(inst, detections))
        throw InvalidPose("invalid global pose detection set");
    double cost = inst.omega;
    for (int d : detections) cost += inst.detections[d].theta;
    for (size_t i = 0; i < detections.size(); ++i)
        for (size_t j = i + 1; j < detections.size(); ++j)
            cost += inst.phi(detections[i], detections[j]);
    return cost;
}

double compute_psi(const Instance& inst, int anchor,
                   const std::vector<int>& locals) {
    if (!is_valid_local(inst, anchor, locals))
        throw InvalidLocalAssignment("invalid local assignment");
    double cost = 0.0;
    for (int d : locals) cost += inst.detections[d].theta;
    std::vector<int> body = locals;
    body.push_back(anchor);
    std::sort(body.begin(), body.end());
    for (size_t i = 0; i < body.size(); ++i)
        for (size_t j = i + 1; j < body.size(); ++j)
            cost += inst.phi(body[i], body[j]);
    return cost;
}

AddResult ColumnPool::add_global(const Instance& inst, GlobalPoseColumn column) {
    std::sort(column.detections.begin(), column.detections.end());
    const double expect = compute_gamma(inst, column.detections);
    if (std::abs(expect - column.cost_gamma) > 1e-9)
        throw CostMismatch("global pose cached cost does not match Gamma");
    auto [it, inserted] = global_index_.try_emplace(
        column.detections, static_cast<int>(globals.size()));
    if (!inserted) return AddResult::Duplicate;
    globals.push_back(std::move(column));
    return AddResult::Added;
}

AddResult ColumnPool::add_local(const Instance& inst,
                                LocalAssignmentColumn column) {
    std::sort(column.locals.begin(), column.locals.end());
    const double expect = compute_psi(inst, column.anchor, column.locals);
    if (std::abs(expect - column.cost_psi) > 1e-9)
        throw CostMismatch("local assignment cached cost does not match Psi");
    std::vector<int> sig;
    sig.push_back(column.anchor);
    sig.push_back(-1);
    sig.insert(sig.end(), column.locals.begin(), column.locals.end());
    auto [it, inserted] =
        local_index_.try_emplace(std::move(sig), static_cast<int>(locals.size()));
    if (!inserted) return AddResult::Duplicate;
    locals.push_back(std::move(column));
    return AddResult::Added;
}

bool ColumnPool::has_global(const std::vector<int>& detections) const {
    std::vector<int> key = detections;
    std::sort(key.begin(), key.end());
    return global_index_.count(key) != 0;
}

bool ColumnPool::has_local(int anchor, const std::vector<int>& locals) const {
    std::vector<int> sig;
    sig.push_back(anchor);
    sig.push_back(-1);
    std::vector<int> ls = locals;
    std::sort(ls.begin(), ls.end());
    sig.insert(sig.end(), ls.begin(), ls.end());
    return local_index_.count(sig) != 0;
}

int triple_overlap(const TripleRow& row, const std::vector<int>& sorted_dets) {
    int count = 0;
    for (int d : row.dets)
        if (std::binary_search(sorted_dets.begin(), sorted_dets.end(), d))
            ++count;
    return count;
}

double reduced_cost_global(const Instance& inst, const GlobalPoseColumn& col,
                           const DualValues& duals,
                           const std::vector<TripleRow>& global_rows) {
    double rc = col.cost_gamma;
    for (int d : col.detections) rc += duals.lambda1[d] - duals.lambda3[d];
    for (size_t t = 0; t < global_rows.size(); ++t)
        if (triple_overlap(global_rows[t], col.detections) >= 2)
            rc += duals.lambda4[t];
    return rc;
}

double reduced_cost_local(const Instance& inst,
                          const LocalAssignmentColumn& col,
                          const DualValues& duals,
                          const std::vector<TripleRow>& local_rows) {
    double rc = col.cost_psi + duals.lambda2[col.anchor] + duals.lambda3[col.anchor];
    for (int d : col.locals) rc += duals.lambda1[d] + duals.lambda2[d];
    if (!local_rows.empty()) {
        std::vector<int> body = col.locals;
        body.push_back(col.anchor);
        std::sort(body.begin(), body.end());
        for (size_t t = 0; t < local_rows.size(); ++t)
            if (triple_overlap(local_rows[t], body) >= 2)
                rc += duals.lambda5[t];
    }
    return rc;
}

RestrictedLP build_restricted_lp(const Instance& inst, const ColumnPool& pool,
                                 const std::vector<TripleRow>& global_rows,
                                 const std::vector<TripleRow>& local_rows) {
    RestrictedLP out;
    MasterIndex& ix = out.index;
    ix.n_detections = inst.num_detections();
    ix.n_global_rows = static_cast<int>(global_rows.size());
    ix.n_local_rows = static_cast<int>(local_rows.size());
    ix.n_global_cols = static_cast<int>(pool.globals.size());
    ix.n_local_cols = static_cast<int>(pool.locals.size());

    DenseLP& lp = out.lp;
    lp.m = 3 * ix.n_detections + ix.n_global_rows + ix.n_local_rows;
    lp.n = ix.n_global_cols + ix.n_local_cols;
    lp.A.assign(static_cast<size_t>(lp.m) * lp.n, 0.0);
    lp.b.assign(lp.m, 1.0);
    for (int d = 0; d < ix.n_detections; ++d) lp.b[ix.family3_row(d)] = 0.0;
    lp.c.assign(lp.n, 0.0);

    for (int g = 0; g < ix.n_global_cols; ++g) {
        const auto& col = pool.globals[g];
        const int j = ix.global_col(g);
        lp.c[j] = col.cost_gamma;
        for (int d : col.detections) {
            lp.at(ix.family1_row(d), j) += 1.0;
            lp.at(ix.family3_row(d), j) -= 1.0;
        }
        for (int t = 0; t < ix.n_global_rows; ++t)
            if (triple_overlap(global_rows[t], col.detections) >= 2)
                lp.at(ix.global_triple_row(t), j) = 1.0;
    }
    for (int l = 0; l < ix.n_local_cols; ++l) {
        const auto& col = pool.locals[l];
        const int j = ix.local_col(l);
        lp.c[j] = col.cost_psi;
        for (int d : col.locals) {
            lp.at(ix.family1_row(d), j) += 1.0;    // L in family 1
            lp.at(ix.family2_row(d), j) += 1.0;    // L in family 2
        }
        lp.at(ix.family2_row(col.anchor), j) += 1.0;    // M in family 2
        lp.at(ix.family3_row(col.anchor), j) += 1.0;    // M in family 3
        if (ix.n_local_rows > 0) {
            std::vector<int> body = col.locals;
            body.push_back(col.anchor);
            std::sort(body.begin(), body.end());
            for (int t = 0; t < ix.n_local_rows; ++t)
                if (triple_overlap(local_rows[t], body) >= 2)
                    lp.at(ix.local_triple_row(t), j) = 1.0;
        }
    }
    return out;
}

DualValues unpack_duals(const MasterIndex& ix, const std::vector<double>& y) {
    DualValues d = DualValues::zeros(ix.n_detections);
    for (int i = 0; i < ix.n_detections; ++i) {
        d.lambda1[i] = y[ix.family1_row(i)];
        d.lambda2[i] = y[ix.family2_row(i)];
        d.lambda3[i] = y[ix.family3_row(i)];
    }
    d.lambda4.resize(ix.n_global_rows);
    for (int t = 0; t < ix.n_global_rows; ++t)
        d.lambda4[t] = y[ix.global_triple_row(t)];
    d.lambda5.resize(ix.n_local_rows);
    for (int t = 0; t < ix.n_local_rows; ++t)
        d.lambda5[t] = y[ix.local_triple_row(t)];
    return d;
}

std::string dump_master_csv(const Instance& inst, const ColumnPool& pool,
                            const std::vector<TripleRow>& global_rows,
                            const std::vector<TripleRow>& local_rows) {
    RestrictedLP r = build_restricted_lp(inst, pool, global_rows, local_rows);
    std::ostringstream os;
    os << "row/col";
    for (int g = 0; g < r.index.n_global_cols; ++g) os << ",G" << g;
    for (int l = 0; l < r.index.n_local_cols; ++l) os << ",L" << l;
    os << ",b\n";
    for (int i = 0; i < r.lp.m; ++i) {
        os << "r" << i;
        for (int j = 0; j < r.lp.n; ++j) os << "," << r.lp.at(i, j);
        os << "," << r.lp.b[i] << "\n";
    }
    os << "cost";
    for (int j = 0; j < r.lp.n; ++j) os << "," << r.lp.c[j];
    os << ",\n";
    return os.str();
}

}    // namespace posecg
