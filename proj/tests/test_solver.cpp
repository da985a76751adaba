#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "posecg/oracle.hpp"
#include "posecg/solver.hpp"

using namespace posecg;

TEST_CASE("column generation on the two-part instance") {
    Instance e1 = fixtures::neck_head();
    auto gen = run_column_generation(e1);
    CHECK(gen.lp_objective == doctest::Approx(-16.5));
    CHECK(gen.pool.has_global({0, 1}));
    CHECK(gen.pool.has_local(1, {2}));
    CHECK(!gen.iteration_cap_reached);
    CHECK(gen.max_duality_gap <= 1e-7);
    CHECK(gen.max_cs_violation <= 1e-7);

    // Termination certificate: every pool column prices out nonnegative.
    for (const auto& g : gen.pool.globals)
        CHECK(reduced_cost_global(e1, g, gen.duals, gen.global_rows) >= -1e-7);
    for (const auto& l : gen.pool.locals)
        CHECK(reduced_cost_local(e1, l, gen.duals, gen.local_rows) >= -1e-7);
}

TEST_CASE("all-positive instance terminates immediately with an empty pool") {
    RawInstance raw;
    raw.parts = {"neck", "head"};
    raw.major_parts = {"neck"};
    raw.edges = {{"neck", "head"}};
    raw.detections = {{0, "neck", {}, {}, 1.0}, {1, "head", {}, {}, 2.0},
                      {2, "head", {}, {}, 3.0}};
    raw.pairwise = {{0, 1, 0.5}};
    raw.omega = 3.0;
    auto vr = validate_instance(raw);
    REQUIRE(vr.ok());
    auto gen = run_column_generation(*vr.instance);
    CHECK(gen.pool.size() == 0);
    CHECK(gen.lp_objective == doctest::Approx(0.0));
    CHECK(gen.iterations == 1);

    auto [sol, report] = solve(*vr.instance);
    CHECK(sol.objective == doctest::Approx(0.0));
    CHECK(sol.poses.empty());
    CHECK(sol.false_positives == std::vector<int>{0, 1, 2});
    CHECK(check_solution(*vr.instance, sol).empty());
}

TEST_CASE("end-to-end solve of the two-part instance") {
    Instance e1 = fixtures::neck_head();
    auto [sol, report] = solve(e1);
    CHECK(sol.objective == doctest::Approx(-16.5));
    CHECK(report.lp_objective == doctest::Approx(-16.5));
    CHECK(report.ilp_objective == doctest::Approx(-16.5));
    CHECK(report.lp_integral);
    CHECK(report.n_triple_rows == 0);
    CHECK(report.ilp_certified);
    REQUIRE(sol.poses.size() == 1);
    CHECK(sol.poses[0].pose.detections == std::vector<int>{0, 1});
    REQUIRE(sol.poses[0].locals.size() == 1);
    CHECK(sol.poses[0].locals[0].anchor == 1);
    CHECK(sol.poses[0].locals[0].locals == std::vector<int>{2});
    CHECK(sol.false_positives.empty());
    CHECK(check_solution(e1, sol).empty());
}

TEST_CASE("odd cycle is closed by one triple row") {
    Instance inst = fixtures::odd_cycle();

    auto plain = run_column_generation(inst);
    CHECK(plain.lp_objective == doctest::Approx(-1.5));
    CHECK(!is_integral(plain.x));

    auto gen = run_column_row_generation(inst);
    CHECK(gen.global_rows.size() >= 1);
    CHECK(std::any_of(gen.global_rows.begin(), gen.global_rows.end(),
                      [](const TripleRow& r) {
                          return r.dets == std::vector<int>{0, 2, 3};
                      }));
    CHECK(gen.lp_objective == doctest::Approx(-1.0));
    CHECK(is_integral(gen.x));

    auto [sol, report] = solve(inst);
    CHECK(sol.objective == doctest::Approx(-1.0));
    CHECK(report.n_triple_rows >= 1);
    CHECK(check_solution(inst, sol).empty());
    auto bf = oracle::brute_force_solve(inst);
    CHECK(sol.objective == doctest::Approx(bf.objective));
}

TEST_CASE("triples disabled falls back to the restricted ILP") {
    Instance inst = fixtures::odd_cycle();
    SolverConfig cfg;
    cfg.enable_triples = false;
    auto [sol, report] = solve(inst, cfg);
    CHECK(report.n_triple_rows == 0);
    CHECK(sol.objective == doctest::Approx(-1.0));
    CHECK(report.lp_objective == doctest::Approx(-1.5));
    CHECK(!report.lp_integral);
    CHECK(report.bnb_nodes > 0);
    CHECK(check_solution(inst, sol).empty());
}

TEST_CASE("iteration cap raises") {
    Instance e1 = fixtures::neck_head();
    SolverConfig cfg;
    cfg.max_iterations = 0;
    CHECK_THROWS_AS(solve(e1, cfg), IterationCapReached);
}

TEST_CASE("integrality predicate") {
    CHECK(is_integral({0.0, 1.0, 1.0}));
    CHECK(is_integral({}));
    CHECK(!is_integral({0.5}));
    CHECK(!is_integral({1.0 - 1e-3}));
    CHECK(is_integral({1.0 - 1e-9}));
}

TEST_CASE("solver matches the brute-force oracle on random instances") {
    int solved = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        Instance inst = fixtures::random_small(seed, 8);
        CAPTURE(seed);
        auto [sol, report] = solve(inst);
        auto bf = oracle::brute_force_solve(inst);
        CHECK(std::abs(sol.objective - bf.objective) <= 1e-6);
        CHECK(check_solution(inst, sol).empty());
        CHECK(report.ilp_objective >= report.lp_objective - 1e-6);
        CHECK(report.max_duality_gap <= 1e-7);
        CHECK(report.max_cs_violation <= 1e-7);
        ++solved;
    }
    CHECK(solved == 60);
}

TEST_CASE("restricted LP value certifies against the full column universe") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Instance inst = fixtures::random_small(seed, 8);
        CAPTURE(seed);
        auto gen = run_column_generation(inst);

        // Full LP over every structurally valid column.
        auto u = oracle::enumerate_all_columns(inst);
        ColumnPool full;
        for (const auto& g : u.globals) full.add_global(inst, g);
        for (const auto& l : u.locals) full.add_local(inst, l);
        auto rm = build_restricted_lp(inst, full, {}, {});
        auto lpsol = solve_lp(rm.lp);
        REQUIRE(lpsol.status == LPStatus::Optimal);
        CHECK(std::abs(gen.lp_objective - lpsol.objective) <= 1e-6);
    }
}

TEST_CASE("independent checker flags corrupted solutions") {
    Instance e1 = fixtures::neck_head();
    auto [sol, report] = solve(e1);
    REQUIRE(check_solution(e1, sol).empty());

    Solution bad = sol;
    bad.objective += 1.0;
    CHECK(!check_solution(e1, bad).empty());

    bad = sol;
    bad.false_positives.push_back(0);    // detection 0 is covered by the pose
    CHECK(!check_solution(e1, bad).empty());

    bad = sol;
    bad.poses[0].locals[0].anchor = 2;    // anchor not in the pose
    CHECK(!check_solution(e1, bad).empty());

    bad = sol;
    bad.poses.push_back(bad.poses[0]);    // duplicate coverage
    CHECK(!check_solution(e1, bad).empty());
}
