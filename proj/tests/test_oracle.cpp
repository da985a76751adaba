#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "posecg/oracle.hpp"

using namespace posecg;

TEST_CASE("column universe of the two-part instance") {
    Instance e1 = fixtures::neck_head();
    auto u = oracle::enumerate_all_columns(e1);

    std::vector<std::vector<int>> globals;
    for (const auto& g : u.globals) globals.push_back(g.detections);
    std::sort(globals.begin(), globals.end());
    CHECK(globals == std::vector<std::vector<int>>{{0}, {0, 1}, {0, 2}});
    for (const auto& g : u.globals)
        CHECK(g.cost_gamma == doctest::Approx(compute_gamma(e1, g.detections)));

    REQUIRE(u.locals.size() == 2);
    std::vector<std::pair<int, std::vector<int>>> locals;
    for (const auto& l : u.locals) locals.push_back({l.anchor, l.locals});
    std::sort(locals.begin(), locals.end());
    CHECK(locals[0] == std::pair<int, std::vector<int>>{1, {2}});
    CHECK(locals[1] == std::pair<int, std::vector<int>>{2, {1}});
}

TEST_CASE("universe respects structural rules") {
    // One detection per part: no locals possible.
    RawInstance raw;
    raw.parts = {"neck", "head"};
    raw.major_parts = {"neck"};
    raw.edges = {{"neck", "head"}};
    raw.detections = {{0, "neck", {}, {}, -1.0}, {1, "head", {}, {}, -1.0}};
    auto vr = validate_instance(raw);
    REQUIRE(vr.ok());
    auto u = oracle::enumerate_all_columns(*vr.instance);
    CHECK(u.locals.empty());
    CHECK(u.globals.size() == 2);    // {0} and {0,1}

    // No major-part detection: no globals (and hence no usable columns).
    raw.detections = {{0, "head", {}, {}, -1.0}, {1, "head", {}, {}, -1.0}};
    vr = validate_instance(raw);
    REQUIRE(vr.ok());
    u = oracle::enumerate_all_columns(*vr.instance);
    CHECK(u.globals.empty());
}

TEST_CASE("brute force solves the two-part instance") {
    Instance e1 = fixtures::neck_head();
    auto bf = oracle::brute_force_solve(e1);
    CHECK(bf.objective == doctest::Approx(-16.5));
    REQUIRE(bf.solution.poses.size() == 1);
    CHECK(bf.solution.poses[0].pose.detections == std::vector<int>{0, 1});
    REQUIRE(bf.solution.poses[0].locals.size() == 1);
    CHECK(bf.solution.poses[0].locals[0].anchor == 1);
    CHECK(bf.solution.poses[0].locals[0].locals == std::vector<int>{2});
    CHECK(bf.solution.false_positives.empty());
    CHECK(bf.min_pose_count == 1);
    CHECK(check_solution(e1, bf.solution).empty());
}

TEST_CASE("brute force on the odd-cycle instance") {
    Instance inst = fixtures::odd_cycle();
    auto bf = oracle::brute_force_solve(inst);
    CHECK(bf.objective == doctest::Approx(-1.0));
    CHECK(check_solution(inst, bf.solution).empty());
    // Three poses tie at -1, and each extends by one disjoint zero-cost pose:
    // {0,2}, {0,3}, {1,2,3}, {0,2}+{1,3}, {0,3}+{1,2}, {1,2,3}+{0}.
    CHECK(bf.all_optima.size() == 6);
    CHECK(bf.min_pose_count == 1);
}

TEST_CASE("all-positive costs keep everything a false positive") {
    RawInstance raw;
    raw.parts = {"neck", "head"};
    raw.major_parts = {"neck"};
    raw.edges = {{"neck", "head"}};
    raw.detections = {{0, "neck", {}, {}, 2.0}, {1, "head", {}, {}, 2.0}};
    raw.pairwise = {{0, 1, 1.0}};
    raw.omega = 3.0;
    auto vr = validate_instance(raw);
    REQUIRE(vr.ok());
    auto bf = oracle::brute_force_solve(*vr.instance);
    CHECK(bf.objective == doctest::Approx(0.0));
    CHECK(bf.solution.poses.empty());
    CHECK(bf.solution.false_positives == std::vector<int>{0, 1});
}

TEST_CASE("objective is additive over non-interacting groups") {
    // Two copies with disjoint part names: no pairwise or local interaction
    // crosses copies, and omega = 0 makes pose count immaterial, so the
    // optimum is the sum of the per-copy optima (each -19.5).
    RawInstance raw;
    raw.parts = {"neckA", "headA", "neckB", "headB"};
    raw.major_parts = {"neckA", "neckB"};
    raw.edges = {{"neckA", "headA"}, {"neckB", "headB"}};
    raw.detections = {{0, "neckA", {}, {}, -10.0}, {1, "headA", {}, {}, -4.0},
                      {2, "headA", {}, {}, -3.0},  {3, "neckB", {}, {}, -10.0},
                      {4, "headB", {}, {}, -4.0},  {5, "headB", {}, {}, -3.0}};
    raw.pairwise = {{0, 1, -2.0}, {0, 2, -1.0}, {1, 2, -0.5},
                    {3, 4, -2.0}, {3, 5, -1.0}, {4, 5, -0.5}};
    raw.omega = 0.0;
    auto vr = validate_instance(raw);
    REQUIRE(vr.ok());
    auto bf = oracle::brute_force_solve(*vr.instance);
    CHECK(bf.objective == doctest::Approx(-39.0));
    CHECK(check_solution(*vr.instance, bf.solution).empty());
}

TEST_CASE("size guards fire") {
    GenConfig cfg;
    cfg.seed = 3;
    cfg.n_people = 4;
    cfg.dup_rate = 0.8;
    cfg.fp_rate = 0.5;
    Instance big = generate_synthetic(cfg);
    REQUIRE(big.num_detections() > 14);
    CHECK_THROWS_AS(oracle::enumerate_all_columns(big), oracle::TooLarge);
    CHECK_THROWS_AS(oracle::brute_force_solve(big), oracle::TooLarge);
}

TEST_CASE("brute-force pricing agrees with hand evaluation") {
    Instance e1 = fixtures::neck_head();
    DualValues zero = DualValues::zeros(3);
    auto g = oracle::brute_force_price(e1, 0, zero, {}, {},
                                       oracle::PriceKind::Global);
    CHECK(g.reduced_cost == doctest::Approx(-13.0));
    auto l = oracle::brute_force_price(e1, 1, zero, {}, {},
                                       oracle::PriceKind::Local);
    CHECK(l.reduced_cost == doctest::Approx(-3.5));
    auto none = oracle::brute_force_price(e1, 0, zero, {}, {},
                                          oracle::PriceKind::Local);
    CHECK(std::isinf(none.reduced_cost));
}
