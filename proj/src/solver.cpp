#include "posecg/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <set>

#include "posecg/lp.hpp"
#include "posecg/pricing.hpp"
#include "posecg/rowgen.hpp"

namespace posecg {

namespace {

struct LoopState {
    GenerationResult result;
    std::set<TripleRow> row_pool;    // dedupe across iterations
};

void record_lp_stats(GenerationResult& r, const LPSolution& sol) {
    ++r.lp_solves;
    r.max_duality_gap = std::max(r.max_duality_gap, sol.duality_gap);
    r.max_cs_violation = std::max(r.max_cs_violation, sol.max_cs_violation);
}

// Warm-started master: the engine keeps the simplex basis across pricing
// rounds, appending only the newly generated columns. A change in the row
// set (triple cuts) forces a rebuild from the slack basis.
struct MasterEngine {
    IncrementalLP lp;
    int rows_built = -1;
    int ng = 0, nl = 0;    // pool sizes already loaded into the engine
    std::vector<std::pair<char, int>> col_map;    // engine col -> (kind, idx)
};

LPSolution solve_master(const Instance& inst, GenerationResult& r,
                        MasterEngine& eng) {
    RestrictedLP master =
        build_restricted_lp(inst, r.pool, r.global_rows, r.local_rows);
    if (eng.rows_built != master.lp.m) {
        eng.lp.reset(master.lp.b);
        eng.rows_built = master.lp.m;
        eng.ng = eng.nl = 0;
        eng.col_map.clear();
    }
    std::vector<double> a(master.lp.m);
    auto append = [&](int j, char kind, int idx) {
        for (int i = 0; i < master.lp.m; ++i) a[i] = master.lp.at(i, j);
        eng.lp.add_column(a, master.lp.c[j]);
        eng.col_map.push_back({kind, idx});
    };
    const int ng_now = static_cast<int>(r.pool.globals.size());
    const int nl_now = static_cast<int>(r.pool.locals.size());
    for (int g = eng.ng; g < ng_now; ++g)
        append(master.index.global_col(g), 0, g);
    for (int l = eng.nl; l < nl_now; ++l)
        append(master.index.local_col(l), 1, l);
    eng.ng = ng_now;
    eng.nl = nl_now;

    LPSolution sol = eng.lp.solve();
    if (std::getenv("POSECG_LOG"))
        std::fprintf(stderr,
                     "[posecg] master m=%d n=%d (g=%d l=%d) simplex_iters=%d "
                     "status=%d obj=%.6f\n",
                     master.lp.m, master.lp.n, eng.ng, eng.nl, sol.iterations,
                     static_cast<int>(sol.status), sol.objective);
    if (sol.status == LPStatus::Unbounded)
        throw SolverError("master LP unbounded: construction bug");
    if (sol.status != LPStatus::Optimal)
        throw SolverError("master LP did not reach optimality");
    record_lp_stats(r, sol);
    r.duals = unpack_duals(master.index, sol.y);
    // Scatter engine order (append order) into master order [globals; locals].
    r.x.assign(master.lp.n, 0.0);
    for (size_t k = 0; k < eng.col_map.size(); ++k) {
        const auto [kind, idx] = eng.col_map[k];
        r.x[kind == 0 ? master.index.global_col(idx)
                      : master.index.local_col(idx)] = sol.x[k];
    }
    r.lp_objective = sol.objective;
    return sol;
}

// One pricing sweep; returns the number of columns actually added.
int price_and_add(const Instance& inst, const SolverConfig& cfg,
                  GenerationResult& r) {
    struct Candidate {
        double rc;
        std::optional<GlobalPoseColumn> global;
        std::optional<LocalAssignmentColumn> local;
    };
    std::vector<Candidate> cands;
    bool any_lambda4 = false;
    for (double v : r.duals.lambda4)
        if (v > 0.0) any_lambda4 = true;
    for (int d = 0; d < inst.num_detections(); ++d) {
        LocalPricingResult res =
            price_local(inst, d, r.duals, r.local_rows, cfg.tol);
        if (res.violated && res.column)
            cands.push_back({res.reduced_cost, std::nullopt,
                             std::move(res.column)});
    }
    for (int d = 0; d < inst.num_detections(); ++d) {
        if (!inst.graph.is_major(inst.detections[d].part)) continue;
        GlobalPricingResult res =
            any_lambda4
                ? price_global_bnb(inst, d, r.duals, r.global_rows, cfg.tol,
                                   cfg.pricing_node_cap)
                : price_global_dp(inst, d, r.duals, cfg.tol);
        r.pricing_nodes += res.nodes;
        if (res.violated && res.column)
            cands.push_back({res.reduced_cost, std::move(res.column),
                             std::nullopt});
    }
    // Keep only the most violated candidates per sweep; the master stays
    // small and anything dropped reappears in a later sweep if still needed.
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Candidate& a, const Candidate& b) {
                         return a.rc < b.rc;
                     });
    if (cfg.columns_per_sweep > 0 &&
        static_cast<int>(cands.size()) > cfg.columns_per_sweep)
        cands.resize(cfg.columns_per_sweep);
    int added = 0;
    for (auto& cand : cands) {
        const AddResult ar = cand.global
                                 ? r.pool.add_global(inst, *cand.global)
                                 : r.pool.add_local(inst, *cand.local);
        if (ar == AddResult::Added) ++added;
    }
    return added;
}

int separate_and_add(const Instance& inst, const SolverConfig& cfg,
                     LoopState& state) {
    GenerationResult& r = state.result;
    std::vector<double> gamma(r.x.begin(),
                              r.x.begin() + r.pool.globals.size());
    std::vector<double> psi(r.x.begin() + r.pool.globals.size(), r.x.end());
    RowGenOptions opt;
    std::vector<TripleRow> found =
        separate_triples_global(inst, r.pool, gamma, opt);
    std::vector<TripleRow> found_local =
        separate_triples_local(inst, r.pool, psi, opt);
    found.insert(found.end(), found_local.begin(), found_local.end());
    int added = 0;
    for (auto& row : found) {
        if (!state.row_pool.insert(row).second) continue;
        if (row.flavor == TripleFlavor::Global)
            r.global_rows.push_back(row);
        else
            r.local_rows.push_back(row);
        ++added;
    }
    return added;
}

}    // namespace

bool is_integral(const std::vector<double>& x, double eps) {
    for (double v : x)
        if (v > eps && v < 1.0 - eps) return false;
    return true;
}

GenerationResult run_column_generation(const Instance& inst,
                                       const SolverConfig& cfg) {
    GenerationResult r;
    MasterEngine eng;
    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        r.iterations = iter + 1;
        solve_master(inst, r, eng);
        if (price_and_add(inst, cfg, r) == 0) return r;
    }
    r.iteration_cap_reached = true;
    return r;
}

namespace {

GenerationResult run_column_row_generation_from(const Instance& inst,
                                                const SolverConfig& cfg,
                                                GenerationResult start) {
    LoopState state;
    state.result = std::move(start);
    for (const auto& row : state.result.global_rows) state.row_pool.insert(row);
    for (const auto& row : state.result.local_rows) state.row_pool.insert(row);
    GenerationResult& r = state.result;
    MasterEngine eng;
    const int start_iter = r.iterations;
    for (int iter = start_iter; iter < cfg.max_iterations; ++iter) {
        r.iterations = iter + 1;
        solve_master(inst, r, eng);
        // Separation first: it slices r.x by the pool sizes the LP was built
        // with, so it must run before pricing grows the pool.
        const int rows = separate_and_add(inst, cfg, state);
        const int cols = price_and_add(inst, cfg, r);
        if (cols == 0 && rows == 0) return std::move(state.result);
    }
    r.iteration_cap_reached = true;
    return std::move(state.result);
}

}    // namespace

GenerationResult run_column_row_generation(const Instance& inst,
                                           const SolverConfig& cfg) {
    return run_column_row_generation_from(inst, cfg, GenerationResult{});
}

namespace {

struct IlpContext {
    const DenseLP* base;
    const SolverConfig* cfg;
    std::vector<int> fix;    // -1 free, 0 fixed out, 1 fixed in
    double incumbent_obj = 0.0;
    std::vector<char> incumbent;    // chosen flags
    long long nodes = 0;
    bool cap_hit = false;
};

void ilp_dfs(IlpContext& ctx) {
    if (ctx.cap_hit) return;
    if (++ctx.nodes > ctx.cfg->ilp_node_cap) {
        ctx.cap_hit = true;
        return;
    }
    const DenseLP& base = *ctx.base;
    // Build the node LP over free columns; fixed-in columns move into the
    // right-hand side and a cost constant.
    std::vector<int> free_cols;
    double fixed_cost = 0.0;
    std::vector<double> b = base.b;
    for (int j = 0; j < base.n; ++j) {
        if (ctx.fix[j] == 1) {
            fixed_cost += base.c[j];
            for (int i = 0; i < base.m; ++i) b[i] -= base.at(i, j);
        } else if (ctx.fix[j] == -1) {
            free_cols.push_back(j);
        }
    }
    DenseLP node;
    node.m = base.m;
    node.n = static_cast<int>(free_cols.size());
    node.b = std::move(b);
    node.c.resize(node.n);
    node.A.assign(static_cast<size_t>(node.m) * node.n, 0.0);
    for (int jj = 0; jj < node.n; ++jj) {
        node.c[jj] = base.c[free_cols[jj]];
        for (int i = 0; i < node.m; ++i)
            node.at(i, jj) = base.at(i, free_cols[jj]);
    }
    LPSolution sol = solve_lp_general(node);
    if (sol.status == LPStatus::Infeasible) return;
    if (sol.status != LPStatus::Optimal) return;    // treat as pruned
    const double bound = fixed_cost + sol.objective;
    if (bound >= ctx.incumbent_obj - 1e-9) return;
    // Most fractional free variable.
    int branch = -1;
    double best_dist = 0.5;
    for (int jj = 0; jj < node.n; ++jj) {
        const double v = sol.x[jj];
        if (v <= ctx.cfg->frac_eps || v >= 1.0 - ctx.cfg->frac_eps) continue;
        const double dist = std::abs(v - 0.5);
        if (dist < best_dist - 1e-12 || branch < 0) {
            best_dist = dist;
            branch = free_cols[jj];
        }
    }
    if (branch < 0) {
        // Integral: adopt as incumbent.
        ctx.incumbent_obj = bound;
        ctx.incumbent.assign(base.n, 0);
        for (int j = 0; j < base.n; ++j)
            if (ctx.fix[j] == 1) ctx.incumbent[j] = 1;
        for (int jj = 0; jj < node.n; ++jj)
            if (sol.x[jj] > 0.5) ctx.incumbent[free_cols[jj]] = 1;
        return;
    }
    ctx.fix[branch] = 1;
    ilp_dfs(ctx);
    ctx.fix[branch] = 0;
    ilp_dfs(ctx);
    ctx.fix[branch] = -1;
}

}    // namespace

IlpResult solve_ilp_over_columns(const Instance& inst, const ColumnPool& pool,
                                 const std::vector<TripleRow>& global_rows,
                                 const std::vector<TripleRow>& local_rows,
                                 const std::vector<double>& lp_x,
                                 const SolverConfig& cfg) {
    IlpResult out;
    const int n = pool.size();
    if (is_integral(lp_x, cfg.frac_eps)) {
        out.chosen.assign(n, 0);
        double obj = 0.0;
        RestrictedLP master =
            build_restricted_lp(inst, pool, global_rows, local_rows);
        for (int j = 0; j < n; ++j)
            if (lp_x[j] > 0.5) {
                out.chosen[j] = 1;
                obj += master.lp.c[j];
            }
        out.objective = obj;
        out.nodes = 0;
        return out;
    }
    RestrictedLP master =
        build_restricted_lp(inst, pool, global_rows, local_rows);
    IlpContext ctx;
    ctx.base = &master.lp;
    ctx.cfg = &cfg;
    ctx.fix.assign(n, -1);
    ctx.incumbent_obj = 0.0;    // the empty selection is always feasible
    ctx.incumbent.assign(n, 0);
    ilp_dfs(ctx);
    out.chosen = std::move(ctx.incumbent);
    out.objective = ctx.incumbent_obj;
    out.nodes = ctx.nodes;
    out.certified = !ctx.cap_hit;
    return out;
}

Solution extract_solution(const Instance& inst, const ColumnPool& pool,
                          const std::vector<char>& chosen) {
    Solution sol;
    const int ng = static_cast<int>(pool.globals.size());
    std::vector<int> pose_of_det(inst.num_detections(), -1);
    for (int g = 0; g < ng; ++g) {
        if (!chosen[g]) continue;
        PoseWithLocals p;
        p.pose = pool.globals[g];
        for (int d : p.pose.detections)
            pose_of_det[d] = static_cast<int>(sol.poses.size());
        sol.objective += p.pose.cost_gamma;
        sol.poses.push_back(std::move(p));
    }
    std::vector<char> covered(inst.num_detections(), 0);
    for (const auto& p : sol.poses)
        for (int d : p.pose.detections) covered[d] = 1;
    for (size_t l = 0; l < pool.locals.size(); ++l) {
        if (!chosen[ng + l]) continue;
        const auto& col = pool.locals[l];
        const int pi = pose_of_det[col.anchor];
        if (pi < 0)
            throw SolverError("selected local assignment with unselected anchor pose");
        sol.poses[pi].locals.push_back(col);
        for (int d : col.locals) covered[d] = 1;
        sol.objective += col.cost_psi;
    }
    for (int d = 0; d < inst.num_detections(); ++d)
        if (!covered[d]) sol.false_positives.push_back(d);
    return sol;
}

std::pair<Solution, SolveReport> solve(const Instance& inst,
                                       const SolverConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    SolveReport report;

    GenerationResult gen = run_column_generation(inst, cfg);
    if (gen.iteration_cap_reached)
        throw IterationCapReached("column generation hit the iteration cap");
    if (cfg.enable_triples && !is_integral(gen.x, cfg.frac_eps)) {
        gen = run_column_row_generation_from(inst, cfg, std::move(gen));
        if (gen.iteration_cap_reached)
            throw IterationCapReached("column/row generation hit the iteration cap");
    }

    report.lp_objective = gen.lp_objective;
    report.lp_integral = is_integral(gen.x, cfg.frac_eps);
    report.n_columns_global = static_cast<int>(gen.pool.globals.size());
    report.n_columns_local = static_cast<int>(gen.pool.locals.size());
    report.n_triple_rows =
        static_cast<int>(gen.global_rows.size() + gen.local_rows.size());
    report.n_iterations = gen.iterations;
    report.n_lp_solves = gen.lp_solves;
    report.max_duality_gap = gen.max_duality_gap;
    report.max_cs_violation = gen.max_cs_violation;
    report.pricing_nodes = gen.pricing_nodes;

    IlpResult ilp = solve_ilp_over_columns(inst, gen.pool, gen.global_rows,
                                           gen.local_rows, gen.x, cfg);
    report.ilp_objective = ilp.objective;
    report.bnb_nodes = ilp.nodes;
    report.ilp_certified = ilp.certified;

    Solution sol = extract_solution(inst, gen.pool, ilp.chosen);
    report.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return {std::move(sol), std::move(report)};
}

}    // namespace posecg
