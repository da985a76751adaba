#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "posecg/rowgen.hpp"

using namespace posecg;

namespace {

Instance four_necks() {
    RawInstance raw;
    raw.parts = {"neck", "head"};
    raw.major_parts = {"neck"};
    raw.edges = {{"neck", "head"}};
    raw.detections = {{0, "neck", {}, {}, -1.0},
                      {1, "neck", {}, {}, -1.0},
                      {2, "neck", {}, {}, -1.0},
                      {3, "neck", {}, {}, -1.0}};
    raw.omega = 3.0;
    auto vr = validate_instance(raw);
    REQUIRE(vr.ok());
    return *vr.instance;
}

bool contains(const std::vector<TripleRow>& rows, std::vector<int> dets,
              TripleFlavor flavor) {
    std::sort(dets.begin(), dets.end());
    return std::any_of(rows.begin(), rows.end(), [&](const TripleRow& r) {
        return r.flavor == flavor && r.dets == dets;
    });
}

}    // namespace

TEST_CASE("local separation finds overlapping fractional bodies") {
    Instance inst = four_necks();
    ColumnPool pool;
    pool.add_local(inst, {0, {1, 2}, -2.0});
    pool.add_local(inst, {1, {2, 3}, -2.0});

    SUBCASE("fractional weights violate the odd-set row") {
        auto rows = separate_triples_local(inst, pool, {0.6, 0.6});
        CHECK(contains(rows, {1, 2, 3}, TripleFlavor::Local));
        for (const auto& r : rows) CHECK(r.flavor == TripleFlavor::Local);
    }
    SUBCASE("integral weights violate nothing") {
        CHECK(separate_triples_local(inst, pool, {1.0, 0.0}).empty());
        CHECK(separate_triples_local(inst, pool, {0.0, 1.0}).empty());
    }
    SUBCASE("a lone column at weight 1 sits on the boundary") {
        ColumnPool one;
        one.add_local(inst, {0, {1, 2}, -2.0});
        CHECK(separate_triples_local(inst, one, {1.0}).empty());
    }
}

TEST_CASE("global separation finds the half-weight odd cycle") {
    Instance inst = fixtures::odd_cycle();
    ColumnPool pool;
    pool.add_global(inst, {{0, 2}, compute_gamma(inst, {0, 2})});
    pool.add_global(inst, {{0, 3}, compute_gamma(inst, {0, 3})});
    pool.add_global(inst, {{1, 2, 3}, compute_gamma(inst, {1, 2, 3})});

    SUBCASE("half weights") {
        auto rows = separate_triples_global(inst, pool, {0.5, 0.5, 0.5});
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].flavor == TripleFlavor::Global);
        CHECK(rows[0].dets == std::vector<int>{0, 2, 3});
    }
    SUBCASE("integral weights") {
        CHECK(separate_triples_global(inst, pool, {1.0, 0.0, 0.0}).empty());
    }
    SUBCASE("single fractional pose cannot exceed the bound") {
        CHECK(separate_triples_global(inst, pool, {0.7, 0.0, 0.0}).empty());
    }
}

TEST_CASE("full enumeration agrees with support restriction") {
    Instance inst = fixtures::odd_cycle();
    ColumnPool pool;
    pool.add_global(inst, {{0, 2}, compute_gamma(inst, {0, 2})});
    pool.add_global(inst, {{0, 3}, compute_gamma(inst, {0, 3})});
    pool.add_global(inst, {{1, 2, 3}, compute_gamma(inst, {1, 2, 3})});
    RowGenOptions audit;
    audit.full_enumeration = true;
    auto restricted = separate_triples_global(inst, pool, {0.5, 0.5, 0.5});
    auto full = separate_triples_global(inst, pool, {0.5, 0.5, 0.5}, audit);
    CHECK(restricted == full);
}
