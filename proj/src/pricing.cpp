#include "posecg/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

namespace posecg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}    // namespace

LocalPricingResult price_local(const Instance& inst, int anchor,
                               const DualValues& duals,
                               const std::vector<TripleRow>& local_rows,
                               double tol) {
    LocalPricingResult result;
    const int part = inst.detections[anchor].part;
    std::vector<int> cands;
    for (int d : inst.dets_of_part(part))
        if (d != anchor) cands.push_back(d);
    if (cands.empty()) {
        result.reduced_cost = kInf;
        return result;
    }
    const int k = static_cast<int>(cands.size());
    const double base =
        duals.lambda2[anchor] + duals.lambda3[anchor];

    // Active triple rows and per-row membership of anchor/candidates.
    struct ActiveRow {
        double weight;
        int anchor_in;
        std::vector<char> member;    // per candidate index
    };
    std::vector<ActiveRow> rows;
    for (size_t t = 0; t < local_rows.size(); ++t) {
        if (duals.lambda5[t] <= 0.0) continue;
        ActiveRow ar;
        ar.weight = duals.lambda5[t];
        ar.anchor_in = std::binary_search(local_rows[t].dets.begin(),
                                          local_rows[t].dets.end(), anchor)
                           ? 1
                           : 0;
        ar.member.resize(k, 0);
        for (int i = 0; i < k; ++i)
            ar.member[i] = std::binary_search(local_rows[t].dets.begin(),
                                              local_rows[t].dets.end(), cands[i])
                               ? 1
                               : 0;
        rows.push_back(std::move(ar));
    }

    double best_cost = kInf;
    std::vector<int> best_set;
    std::vector<int> current;
    std::vector<int> overlap(rows.size());
    for (size_t t = 0; t < rows.size(); ++t) overlap[t] = rows[t].anchor_in;

    // Depth-first enumeration with incremental pair and triple bookkeeping.
    // Candidates are ascending, include-branch first, so the first subset
    // reaching a given cost is the lexicographically smallest one.
    auto consider = [&](double cost) {
        if (current.empty()) return;
        if (cost < best_cost - 1e-12) {
            best_cost = cost;
            best_set = current;
        }
    };
    std::vector<double> unary(k);
    for (int i = 0; i < k; ++i) {
        const int d = cands[i];
        unary[i] = inst.detections[d].theta + duals.lambda1[d] + duals.lambda2[d];
    }

    std::function<void(int, double)> rec = [&](int idx, double cost) {
        consider(cost);
        if (idx == k) return;
        // Include cands[idx].
        const int d = cands[idx];
        double add = unary[idx] + inst.phi(anchor, d);
        for (int j : current) add += inst.phi(j, d);
        double triple_add = 0.0;
        for (size_t t = 0; t < rows.size(); ++t) {
            if (rows[t].member[idx] && ++overlap[t] == 2)
                triple_add += rows[t].weight;
        }
        current.push_back(d);
        rec(idx + 1, cost + add + triple_add);
        current.pop_back();
        for (size_t t = 0; t < rows.size(); ++t)
            if (rows[t].member[idx]) --overlap[t];
        // Exclude cands[idx].
        rec(idx + 1, cost);
    };
    rec(0, base);

    result.reduced_cost = best_cost;
    result.violated = best_cost < -tol;
    if (result.violated) {
        LocalAssignmentColumn col;
        col.anchor = anchor;
        col.locals = best_set;
        col.cost_psi = compute_psi(inst, anchor, col.locals);
        result.column = std::move(col);
    }
    return result;
}

namespace {

// Conditional-forest DP over parts other than the anchor's part. Label 0 is
// ABSENT; labels 1..k map to the allowed detections of the part. Returns the
// minimum value and the chosen detection per part (-1 for ABSENT).
struct ConditionalDP {
    const Instance& inst;
    int anchor;
    const DualValues& duals;
    int anchor_part;
    std::vector<std::vector<int>> adj;    // conditional graph, part indices

    ConditionalDP(const Instance& i, int a, const DualValues& d)
        : inst(i), anchor(a), duals(d), anchor_part(i.detections[a].part) {
        const int n_parts = inst.num_parts();
        adj.assign(n_parts, {});
        for (const auto& [r1, r2] : inst.graph.edges) {
            if (r1 == anchor_part || r2 == anchor_part) continue;
            adj[r1].push_back(r2);
            adj[r2].push_back(r1);
        }
    }

    double node_cost(int det) const {
        return inst.detections[det].theta + duals.lambda1[det] -
               duals.lambda3[det] + inst.phi(anchor, det);
    }

    // labels[r]: allowed detections of part r (ABSENT handled separately);
    // allow_absent[r]: whether ABSENT is permitted.
    double run(const std::vector<std::vector<int>>& labels,
               const std::vector<char>& allow_absent,
               std::vector<int>& chosen) const {
        const int n_parts = inst.num_parts();
        chosen.assign(n_parts, -1);
        std::vector<char> visited(n_parts, 0);
        visited[anchor_part] = 1;
        double total = inst.omega + inst.detections[anchor].theta +
                       duals.lambda1[anchor] - duals.lambda3[anchor];
        for (int root = 0; root < n_parts; ++root) {
            if (visited[root]) continue;
            // Collect this component in DFS pre-order; parent pointers give a
            // rooted tree (validation guarantees acyclicity).
            std::vector<int> order;
            std::vector<int> parent(n_parts, -1);
            std::vector<int> stack{root};
            visited[root] = 1;
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                order.push_back(u);
                for (int v : adj[u]) {
                    if (visited[v]) continue;
                    visited[v] = 1;
                    parent[v] = u;
                    stack.push_back(v);
                }
            }
            // val[u][li]: best subtree cost of u taking its li-th label.
            // Label index 0 = ABSENT when allowed.
            std::vector<std::vector<double>> val(n_parts);
            std::vector<std::vector<std::vector<int>>> pick(n_parts);
            auto label_count = [&](int u) {
                return static_cast<int>(labels[u].size()) + (allow_absent[u] ? 1 : 0);
            };
            auto label_det = [&](int u, int li) {
                if (allow_absent[u]) return li == 0 ? -1 : labels[u][li - 1];
                return labels[u][li];
            };
            for (auto it = order.rbegin(); it != order.rend(); ++it) {
                const int u = *it;
                const int lc = label_count(u);
                val[u].assign(lc, 0.0);
                for (int li = 0; li < lc; ++li) {
                    const int det = label_det(u, li);
                    val[u][li] = det < 0 ? 0.0 : node_cost(det);
                }
                for (int v : adj[u]) {
                    if (parent[v] != u) continue;
                    const int vc = label_count(v);
                    for (int li = 0; li < lc; ++li) {
                        const int du = label_det(u, li);
                        double best = kInf;
                        int best_ci = -1;
                        for (int ci = 0; ci < vc; ++ci) {
                            const int dv = label_det(v, ci);
                            double e = (du >= 0 && dv >= 0) ? inst.phi(du, dv) : 0.0;
                            const double cand = val[v][ci] + e;
                            if (cand < best) {
                                best = cand;
                                best_ci = ci;
                            }
                        }
                        val[u][li] += best;
                        if (pick[u].empty()) pick[u].assign(lc, {});
                        pick[u][li].push_back(best_ci);
                    }
                }
            }
            // Root choice, then top-down reconstruction.
            double best = kInf;
            int best_li = -1;
            for (int li = 0; li < label_count(root); ++li)
                if (val[root][li] < best) {
                    best = val[root][li];
                    best_li = li;
                }
            if (best_li < 0) return kInf;    // empty label set (infeasible fixing)
            total += best;
            std::vector<std::pair<int, int>> dstack{{root, best_li}};
            while (!dstack.empty()) {
                auto [u, li] = dstack.back();
                dstack.pop_back();
                chosen[u] = label_det(u, li);
                int child_idx = 0;
                for (int v : adj[u]) {
                    if (parent[v] != u) continue;
                    dstack.push_back({v, pick[u][li][child_idx]});
                    ++child_idx;
                }
            }
        }
        return total;
    }
};

GlobalPoseColumn make_pose(const Instance& inst, int anchor,
                           const std::vector<int>& chosen) {
    GlobalPoseColumn col;
    col.detections.push_back(anchor);
    for (int r = 0; r < inst.num_parts(); ++r)
        if (chosen[r] >= 0) col.detections.push_back(chosen[r]);
    std::sort(col.detections.begin(), col.detections.end());
    col.cost_gamma = compute_gamma(inst, col.detections);
    return col;
}

}    // namespace

GlobalPricingResult price_global_dp(const Instance& inst, int anchor,
                                    const DualValues& duals, double tol) {
    const int part = inst.detections[anchor].part;
    if (!inst.graph.is_major(part))
        throw PricingError("global pricing anchor must be of a major part");
    ConditionalDP dp(inst, anchor, duals);
    std::vector<std::vector<int>> labels(inst.num_parts());
    std::vector<char> allow_absent(inst.num_parts(), 1);
    for (int r = 0; r < inst.num_parts(); ++r)
        if (r != part) labels[r] = inst.dets_of_part(r);
    std::vector<int> chosen;
    const double value = dp.run(labels, allow_absent, chosen);

    GlobalPricingResult result;
    result.reduced_cost = value;
    result.violated = value < -tol;
    result.column = make_pose(inst, anchor, chosen);
    return result;
}

GlobalPricingResult price_global_bnb(const Instance& inst, int anchor,
                                     const DualValues& duals,
                                     const std::vector<TripleRow>& global_rows,
                                     double tol, long long node_limit) {
    const int part = inst.detections[anchor].part;
    if (!inst.graph.is_major(part))
        throw PricingError("global pricing anchor must be of a major part");

    struct ActiveTriple {
        double weight;
        std::vector<int> dets;
        int index;
    };
    std::vector<ActiveTriple> triples;
    for (size_t t = 0; t < global_rows.size(); ++t)
        if (duals.lambda4[t] > 0.0)
            triples.push_back({duals.lambda4[t], global_rows[t].dets,
                               static_cast<int>(t)});
    if (triples.empty()) return price_global_dp(inst, anchor, duals, tol);

    ConditionalDP dp(inst, anchor, duals);
    const int n_parts = inst.num_parts();

    struct Node {
        std::vector<std::vector<int>> labels;
        std::vector<char> allow_absent;
        double bound;
        long long seq;
    };
    struct NodeCmp {
        bool operator()(const Node& a, const Node& b) const {
            if (a.bound != b.bound) return a.bound > b.bound;
            return a.seq > b.seq;
        }
    };

    // Detection state under a node's label restriction: 1 = forced in,
    // -1 = forced out, 0 = free.
    auto det_state = [&](const Node& nd, int d) -> int {
        if (d == anchor) return 1;
        const int r = inst.detections[d].part;
        if (r == part) return -1;
        const auto& ls = nd.labels[r];
        const bool present = std::find(ls.begin(), ls.end(), d) != ls.end();
        if (!present) return -1;
        if (ls.size() == 1 && !nd.allow_absent[r]) return 1;
        return 0;
    };

    // Bound = DP value plus penalties of triples already forced on.
    auto evaluate = [&](Node& nd, std::vector<int>& chosen) -> double {
        double v = dp.run(nd.labels, nd.allow_absent, chosen);
        if (v == kInf) return kInf;
        for (const auto& tr : triples) {
            int forced_in = 0;
            for (int d : tr.dets)
                if (det_state(nd, d) == 1) ++forced_in;
            if (forced_in >= 2) v += tr.weight;
        }
        return v;
    };
    auto exact_cost_of = [&](const Node& nd, const std::vector<int>& chosen,
                             double bound) -> double {
        std::vector<int> pose{anchor};
        for (int r = 0; r < n_parts; ++r)
            if (chosen[r] >= 0) pose.push_back(chosen[r]);
        std::sort(pose.begin(), pose.end());
        double extra = 0.0;
        for (const auto& tr : triples) {
            int forced_in = 0, in_pose = 0;
            for (int d : tr.dets) {
                if (det_state(nd, d) == 1) ++forced_in;
                if (std::binary_search(pose.begin(), pose.end(), d)) ++in_pose;
            }
            if (forced_in < 2 && in_pose >= 2) extra += tr.weight;
        }
        return bound + extra;
    };

    std::priority_queue<Node, std::vector<Node>, NodeCmp> queue;
    long long seq = 0;
    long long nodes = 0;

    Node root;
    root.labels.assign(n_parts, {});
    root.allow_absent.assign(n_parts, 1);
    for (int r = 0; r < n_parts; ++r)
        if (r != part) root.labels[r] = inst.dets_of_part(r);

    double incumbent = kInf;
    std::vector<int> incumbent_pose;    // chosen per part

    std::vector<int> chosen;
    root.bound = evaluate(root, chosen);
    root.seq = seq++;
    {
        const double exact = exact_cost_of(root, chosen, root.bound);
        incumbent = exact;
        incumbent_pose = chosen;
    }
    queue.push(std::move(root));

    while (!queue.empty()) {
        Node nd = queue.top();
        queue.pop();
        if (++nodes > node_limit)
            throw PricingError("branch-and-bound node limit reached");
        if (nd.bound >= incumbent - 1e-12) continue;
        std::vector<int> nd_chosen;
        const double bound = evaluate(nd, nd_chosen);
        if (bound == kInf || bound >= incumbent - 1e-12) continue;
        const double exact = exact_cost_of(nd, nd_chosen, bound);
        if (exact < incumbent - 1e-12) {
            incumbent = exact;
            incumbent_pose = nd_chosen;
        }
        if (exact <= bound + 1e-12) continue;    // node solved exactly

        // Branch on a free detection from the unresolved triple with the
        // largest weight; prefer one present in the node's DP argmin.
        std::vector<int> pose{anchor};
        for (int r = 0; r < n_parts; ++r)
            if (nd_chosen[r] >= 0) pose.push_back(nd_chosen[r]);
        std::sort(pose.begin(), pose.end());
        int branch_det = -1;
        double best_weight = -1.0;
        for (const auto& tr : triples) {
            int forced_in = 0, possible = 0;
            std::vector<int> free_dets;
            for (int d : tr.dets) {
                const int s = det_state(nd, d);
                if (s == 1) {
                    ++forced_in;
                    ++possible;
                } else if (s == 0) {
                    ++possible;
                    free_dets.push_back(d);
                }
            }
            const bool unresolved = forced_in < 2 && possible >= 2 &&
                                    !free_dets.empty();
            if (!unresolved) continue;
            // Only branch where the DP argmin actually triggers the penalty.
            int in_pose = 0;
            for (int d : tr.dets)
                if (std::binary_search(pose.begin(), pose.end(), d)) ++in_pose;
            if (in_pose < 2) continue;
            if (tr.weight > best_weight) {
                best_weight = tr.weight;
                branch_det = -1;
                for (int d : free_dets) {
                    const int r = inst.detections[d].part;
                    if (nd_chosen[r] == d) {
                        branch_det = d;
                        break;
                    }
                }
                if (branch_det < 0) branch_det = free_dets.front();
            }
        }
        if (branch_det < 0) {
            // The argmin triggers no unresolved penalty yet exact > bound;
            // cannot happen, but close the node rather than loop.
            continue;
        }
        const int r = inst.detections[branch_det].part;
        // Child x = 1.
        Node in_child = nd;
        in_child.labels[r] = {branch_det};
        in_child.allow_absent[r] = 0;
        std::vector<int> tmp;
        in_child.bound = evaluate(in_child, tmp);
        if (in_child.bound < incumbent - 1e-12) {
            const double e = exact_cost_of(in_child, tmp, in_child.bound);
            if (e < incumbent - 1e-12) {
                incumbent = e;
                incumbent_pose = tmp;
            }
            in_child.seq = seq++;
            queue.push(std::move(in_child));
        }
        // Child x = 0.
        Node out_child = nd;
        auto& ls = out_child.labels[r];
        ls.erase(std::remove(ls.begin(), ls.end(), branch_det), ls.end());
        out_child.bound = evaluate(out_child, tmp);
        if (out_child.bound < incumbent - 1e-12) {
            const double e = exact_cost_of(out_child, tmp, out_child.bound);
            if (e < incumbent - 1e-12) {
                incumbent = e;
                incumbent_pose = tmp;
            }
            out_child.seq = seq++;
            queue.push(std::move(out_child));
        }
    }

    GlobalPricingResult result;
    result.reduced_cost = incumbent;
    result.violated = incumbent < -tol;
    result.column = make_pose(inst, anchor, incumbent_pose);
    result.nodes = nodes;
    return result;
}

}    // namespace posecg
