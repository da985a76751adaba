#include "posecg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace posecg {
namespace oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pose_cost(const Instance& inst, const std::vector<int>& dets) {
    double c = inst.omega;
    for (int d : dets) c += inst.detections[d].theta;
    for (size_t i = 0; i < dets.size(); ++i)
        for (size_t j = i + 1; j < dets.size(); ++j)
            c += inst.phi(dets[i], dets[j]);
    return c;
}

double local_cost(const Instance& inst, int anchor,
                  const std::vector<int>& locals) {
    double c = 0.0;
    for (int d : locals) c += inst.detections[d].theta;
    std::vector<int> body = locals;
    body.push_back(anchor);
    for (size_t i = 0; i < body.size(); ++i)
        for (size_t j = i + 1; j < body.size(); ++j)
            c += inst.phi(body[i], body[j]);
    return c;
}

}    // namespace

ColumnUniverse enumerate_all_columns(const Instance& inst) {
    if (inst.num_detections() > 14)
        throw TooLarge("enumerate_all_columns guard: more than 14 detections");
    ColumnUniverse out;

    // Global poses: one choice (detection or none) per part, at least one
    // major part present.
    const int n_parts = inst.num_parts();
    std::vector<int> pick;
    std::function<void(int, bool)> rec = [&](int part, bool has_major) {
        if (part == n_parts) {
            if (!has_major || pick.empty()) return;
            GlobalPoseColumn col;
            col.detections = pick;
            std::sort(col.detections.begin(), col.detections.end());
            col.cost_gamma = pose_cost(inst, col.detections);
            out.globals.push_back(std::move(col));
            return;
        }
        rec(part + 1, has_major);    // part absent
        for (int d : inst.dets_of_part(part)) {
            pick.push_back(d);
            rec(part + 1, has_major || inst.graph.is_major(part));
            pick.pop_back();
        }
    };
    rec(0, false);

    // Local assignments: every anchor with every nonempty subset of its
    // same-part companions.
    for (int anchor = 0; anchor < inst.num_detections(); ++anchor) {
        std::vector<int> cands;
        for (int d : inst.dets_of_part(inst.detections[anchor].part))
            if (d != anchor) cands.push_back(d);
        const int k = static_cast<int>(cands.size());
        for (unsigned mask = 1; mask < (1u << k); ++mask) {
            LocalAssignmentColumn col;
            col.anchor = anchor;
            for (int i = 0; i < k; ++i)
                if (mask & (1u << i)) col.locals.push_back(cands[i]);
            col.cost_psi = local_cost(inst, anchor, col.locals);
            out.locals.push_back(std::move(col));
        }
    }
    return out;
}

namespace {

struct SearchState {
    const Instance& inst;
    const ColumnUniverse& universe;
    double tie_tol;
    std::vector<char> in_pose;          // detection in a selected pose
    std::vector<char> local_member;
    std::vector<char> local_anchor;
    std::vector<int> chosen_globals, chosen_locals;
    double best = kInf;
    std::vector<std::pair<std::vector<int>, std::vector<int>>> optima;
    std::vector<double> neg_suffix_globals;    // + all negative local mass
    std::vector<double> neg_suffix_locals;

    void record(double cost) {
        if (cost < best - tie_tol) {
            best = cost;
            optima.clear();
        }
        if (cost <= best + tie_tol && optima.size() < 100000)
            optima.push_back({chosen_globals, chosen_locals});
    }

    void recurse_locals(size_t idx, double cost) {
        if (idx == universe.locals.size()) {
            record(cost);
            return;
        }
        if (cost + neg_suffix_locals[idx] > best + tie_tol) return;
        const auto& col = universe.locals[idx];
        bool feasible = col.cost_psi <= tie_tol && in_pose[col.anchor] &&
                        !local_member[col.anchor] && !local_anchor[col.anchor];
        if (feasible)
            for (int d : col.locals)
                if (in_pose[d] || local_member[d] || local_anchor[d]) {
                    feasible = false;
                    break;
                }
        if (feasible) {
            local_anchor[col.anchor] = 1;
            for (int d : col.locals) local_member[d] = 1;
            chosen_locals.push_back(static_cast<int>(idx));
            recurse_locals(idx + 1, cost + col.cost_psi);
            chosen_locals.pop_back();
            for (int d : col.locals) local_member[d] = 0;
            local_anchor[col.anchor] = 0;
        }
        recurse_locals(idx + 1, cost);
    }

    void recurse_globals(size_t idx, double cost) {
        if (idx == universe.globals.size()) {
            recurse_locals(0, cost);
            return;
        }
        if (cost + neg_suffix_globals[idx] > best + tie_tol) return;
        const auto& col = universe.globals[idx];
        bool feasible = true;
        for (int d : col.detections)
            if (in_pose[d]) {
                feasible = false;
                break;
            }
        if (feasible) {
            for (int d : col.detections) in_pose[d] = 1;
            chosen_globals.push_back(static_cast<int>(idx));
            recurse_globals(idx + 1, cost + col.cost_gamma);
            chosen_globals.pop_back();
            for (int d : col.detections) in_pose[d] = 0;
        }
        recurse_globals(idx + 1, cost);
    }
};

}    // namespace

BruteForceResult brute_force_solve(const Instance& inst, double tie_tol) {
    if (inst.num_detections() > 10)
        throw TooLarge("brute_force_solve guard: more than 10 detections");
    ColumnUniverse universe = enumerate_all_columns(inst);

    SearchState st{inst, universe, tie_tol};
    const int n = inst.num_detections();
    st.in_pose.assign(n, 0);
    st.local_member.assign(n, 0);
    st.local_anchor.assign(n, 0);

    double neg_locals = 0.0;
    st.neg_suffix_locals.assign(universe.locals.size() + 1, 0.0);
    for (int i = static_cast<int>(universe.locals.size()) - 1; i >= 0; --i) {
        st.neg_suffix_locals[i] =
            st.neg_suffix_locals[i + 1] +
            std::min(0.0, universe.locals[i].cost_psi);
    }
    neg_locals = st.neg_suffix_locals.empty() ? 0.0 : st.neg_suffix_locals[0];
    st.neg_suffix_globals.assign(universe.globals.size() + 1, neg_locals);
    for (int i = static_cast<int>(universe.globals.size()) - 1; i >= 0; --i) {
        st.neg_suffix_globals[i] =
            st.neg_suffix_globals[i + 1] +
            std::min(0.0, universe.globals[i].cost_gamma);
    }

    st.recurse_globals(0, 0.0);

    BruteForceResult out;
    out.objective = st.best == kInf ? 0.0 : st.best;
    // Keep only true optima (the search may have recorded near-misses before
    // the final best was known).
    std::vector<std::pair<std::vector<int>, std::vector<int>>> optima;
    for (auto& o : st.optima) {
        double c = 0.0;
        for (int g : o.first) c += universe.globals[g].cost_gamma;
        for (int l : o.second) c += universe.locals[l].cost_psi;
        if (c <= out.objective + tie_tol) optima.push_back(std::move(o));
    }
    std::sort(optima.begin(), optima.end());
    optima.erase(std::unique(optima.begin(), optima.end()), optima.end());
    out.all_optima = std::move(optima);

    out.min_pose_count = 0;
    if (!out.all_optima.empty()) {
        int mn = static_cast<int>(out.all_optima.front().first.size());
        for (const auto& o : out.all_optima)
            mn = std::min(mn, static_cast<int>(o.first.size()));
        out.min_pose_count = mn;
    }

    // Materialize the first (lexicographically smallest) optimum.
    Solution sol;
    if (!out.all_optima.empty()) {
        const auto& [gs, ls] = out.all_optima.front();
        std::vector<int> pose_of_det(n, -1);
        for (int g : gs) {
            PoseWithLocals p;
            p.pose = universe.globals[g];
            for (int d : p.pose.detections)
                pose_of_det[d] = static_cast<int>(sol.poses.size());
            sol.objective += p.pose.cost_gamma;
            sol.poses.push_back(std::move(p));
        }
        std::vector<char> covered(n, 0);
        for (const auto& p : sol.poses)
            for (int d : p.pose.detections) covered[d] = 1;
        for (int l : ls) {
            const auto& col = universe.locals[l];
            sol.poses[pose_of_det[col.anchor]].locals.push_back(col);
            for (int d : col.locals) covered[d] = 1;
            sol.objective += col.cost_psi;
        }
        for (int d = 0; d < n; ++d)
            if (!covered[d]) sol.false_positives.push_back(d);
    } else {
        for (int d = 0; d < n; ++d) sol.false_positives.push_back(d);
    }
    out.solution = std::move(sol);
    return out;
}

BruteForcePrice brute_force_price(const Instance& inst, int anchor,
                                  const DualValues& duals,
                                  const std::vector<TripleRow>& global_rows,
                                  const std::vector<TripleRow>& local_rows,
                                  PriceKind kind, double tol) {
    if (inst.num_detections() > 14)
        throw TooLarge("brute_force_price guard: more than 14 detections");
    BruteForcePrice out;

    if (kind == PriceKind::Local) {
        std::vector<int> cands;
        for (int d : inst.dets_of_part(inst.detections[anchor].part))
            if (d != anchor) cands.push_back(d);
        const int k = static_cast<int>(cands.size());
        if (k == 0) {
            out.reduced_cost = kInf;
            return out;
        }
        double best = kInf;
        std::vector<int> best_set;
        for (unsigned mask = 1; mask < (1u << k); ++mask) {
            std::vector<int> subset;
            for (int i = 0; i < k; ++i)
                if (mask & (1u << i)) subset.push_back(cands[i]);
            double cost = duals.lambda2[anchor] + duals.lambda3[anchor];
            for (int d : subset)
                cost += inst.detections[d].theta + duals.lambda1[d] +
                        duals.lambda2[d];
            std::vector<int> body = subset;
            body.push_back(anchor);
            std::sort(body.begin(), body.end());
            for (size_t i = 0; i < body.size(); ++i)
                for (size_t j = i + 1; j < body.size(); ++j)
                    cost += inst.phi(body[i], body[j]);
            for (size_t t = 0; t < local_rows.size(); ++t)
                if (triple_overlap(local_rows[t], body) >= 2)
                    cost += duals.lambda5[t];
            if (cost < best - 1e-15) {
                best = cost;
                best_set = subset;
            }
        }
        out.reduced_cost = best;
        out.violated = best < -tol;
        out.detections = best_set;
        return out;
    }

    // Global: every pose containing the anchor, one detection or none per
    // other part.
    const int part = inst.detections[anchor].part;
    double best = kInf;
    std::vector<int> best_pose;
    std::vector<int> pick{anchor};
    std::function<void(int)> rec = [&](int r) {
        if (r == inst.num_parts()) {
            std::vector<int> pose = pick;
            std::sort(pose.begin(), pose.end());
            double cost = inst.omega;
            for (int d : pose)
                cost += inst.detections[d].theta + duals.lambda1[d] -
                        duals.lambda3[d];
            for (size_t i = 0; i < pose.size(); ++i)
                for (size_t j = i + 1; j < pose.size(); ++j)
                    cost += inst.phi(pose[i], pose[j]);
            for (size_t t = 0; t < global_rows.size(); ++t)
                if (triple_overlap(global_rows[t], pose) >= 2)
                    cost += duals.lambda4[t];
            if (cost < best - 1e-15) {
                best = cost;
                best_pose = pose;
            }
            return;
        }
        if (r == part) {
            rec(r + 1);
            return;
        }
        rec(r + 1);
        for (int d : inst.dets_of_part(r)) {
            pick.push_back(d);
            rec(r + 1);
            pick.pop_back();
        }
    };
    rec(0);
    out.reduced_cost = best;
    out.violated = best < -tol;
    out.detections = best_pose;
    return out;
}

}    // namespace oracle
}    // namespace posecg
