#include <doctest.h>

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "posecg/instance.hpp"
#include "posecg/json_io.hpp"

using namespace posecg;

namespace {

bool has_issue(const ValidationResult& vr, IssueCode code) {
    return std::any_of(vr.issues.begin(), vr.issues.end(),
                       [&](const ValidationIssue& i) { return i.code == code; });
}

RawInstance valid_base() {
    RawInstance raw;
    raw.parts = {"neck", "head"};
    raw.major_parts = {"neck"};
    raw.edges = {{"neck", "head"}};
    raw.detections = {{0, "neck", {}, {}, -1.0}, {1, "head", {}, {}, -1.0}};
    raw.pairwise = {{0, 1, -0.5}};
    return raw;
}

}    // namespace

TEST_CASE("valid instances pass validation") {
    CHECK(validate_instance(valid_base()).ok());
    Instance e1 = fixtures::neck_head();
    CHECK(e1.num_detections() == 3);
    CHECK(e1.num_parts() == 2);
    CHECK(e1.phi(0, 1) == doctest::Approx(-2.0));
    CHECK(e1.phi(1, 0) == doctest::Approx(-2.0));
    CHECK(e1.phi(1, 2) == doctest::Approx(-0.5));
    CHECK(e1.phi(0, 0) == doctest::Approx(0.0));
    CHECK(e1.dets_of_part(e1.graph.part_index("head")) == std::vector<int>{1, 2});
    CHECK(validate_instance(e1).ok());
    CHECK(validate_instance(fixtures::odd_cycle()).ok());
}

TEST_CASE("body graphs are well formed") {
    PartGraph g = default_body_graph();
    CHECK(g.parts.size() == 14);
    CHECK(g.major_parts.size() == 1);
    CHECK(g.parts[g.major_parts[0]] == "neck");
    RawInstance raw;
    raw.parts = g.parts;
    for (int m : g.major_parts) raw.major_parts.push_back(g.parts[m]);
    for (auto [a, b] : g.edges) raw.edges.push_back({g.parts[a], g.parts[b]});
    CHECK(validate_instance(raw).ok());

    PartGraph mini = mini_body_graph();
    CHECK(mini.parts.size() == 3);
    CHECK(mini.has_edge(mini.part_index("neck"), mini.part_index("head")));
}

TEST_CASE("detection rule violations are reported") {
    RawInstance raw = valid_base();
    raw.detections.push_back({2, "elbow", {}, {}, 0.0});
    CHECK(has_issue(validate_instance(raw), IssueCode::UnknownPart));

    raw = valid_base();
    raw.detections.push_back({1, "head", {}, {}, 0.0});
    CHECK(has_issue(validate_instance(raw), IssueCode::DuplicateDetectionId));

    raw = valid_base();
    raw.detections[1].id = 5;
    CHECK(has_issue(validate_instance(raw), IssueCode::NonContiguousDetectionIds));

    raw = valid_base();
    for (int i = 0; i < 16; ++i)
        raw.detections.push_back({2 + i, "head", {}, {}, 0.0});
    CHECK(has_issue(validate_instance(raw), IssueCode::TooManyDetectionsPerPart));
}

TEST_CASE("pairwise rule violations are reported") {
    RawInstance raw = valid_base();
    raw.pairwise.push_back({1, 1, 0.5});
    CHECK(has_issue(validate_instance(raw), IssueCode::DiagonalPairwise));

    raw = valid_base();
    raw.pairwise.push_back({0, 9, 0.5});
    CHECK(has_issue(validate_instance(raw), IssueCode::UnknownDetectionId));

    raw = valid_base();
    raw.pairwise.push_back({1, 0, 0.25});    // same pair, other orientation
    CHECK(has_issue(validate_instance(raw), IssueCode::DuplicatePairwiseEntry));

    // A cost between parts with no edge is illegal even though both exist.
    raw = valid_base();
    raw.parts.push_back("shoulder");
    raw.detections.push_back({2, "shoulder", {}, {}, 0.0});
    raw.pairwise.push_back({1, 2, -0.5});
    CHECK(has_issue(validate_instance(raw), IssueCode::IllegalPairwisePartPair));

    // Same-part pairs are always legal.
    raw = valid_base();
    raw.detections.push_back({2, "head", {}, {}, 0.0});
    raw.pairwise.push_back({1, 2, -0.5});
    CHECK(validate_instance(raw).ok());
}

TEST_CASE("graph rule violations are reported") {
    RawInstance raw = valid_base();
    raw.edges.push_back({"head", "head"});
    CHECK(has_issue(validate_instance(raw), IssueCode::SelfLoopEdge));

    raw = valid_base();
    raw.edges.push_back({"head", "neck"});
    CHECK(has_issue(validate_instance(raw), IssueCode::DuplicateEdge));

    raw = valid_base();
    raw.major_parts.clear();
    CHECK(has_issue(validate_instance(raw), IssueCode::NoMajorPart));

    // Cycle among the non-major parts survives removal of the major part.
    raw.parts = {"neck", "a", "b", "c"};
    raw.major_parts = {"neck"};
    raw.edges = {{"neck", "a"}, {"a", "b"}, {"b", "c"}, {"a", "c"}};
    raw.detections.clear();
    raw.pairwise.clear();
    CHECK(has_issue(validate_instance(raw), IssueCode::ConditionalGraphNotForest));

    // Triangle through the major part is fine: removing it leaves a forest.
    raw.edges = {{"neck", "a"}, {"neck", "b"}, {"a", "b"}, {"b", "c"}};
    CHECK(validate_instance(raw).ok());
}

TEST_CASE("all violations are reported together") {
    RawInstance raw = valid_base();
    raw.major_parts.clear();
    raw.detections.push_back({1, "elbow", {}, {}, 0.0});
    raw.pairwise.push_back({0, 0, 1.0});
    auto vr = validate_instance(raw);
    CHECK(has_issue(vr, IssueCode::NoMajorPart));
    CHECK(has_issue(vr, IssueCode::UnknownPart));
    CHECK(has_issue(vr, IssueCode::DuplicateDetectionId));
    CHECK(has_issue(vr, IssueCode::DiagonalPairwise));
    CHECK(vr.issues.size() >= 4);
    CHECK(!vr.instance.has_value());
}

TEST_CASE("generator is deterministic per seed") {
    GenConfig cfg;
    cfg.seed = 42;
    cfg.n_people = 2;
    Instance a = generate_synthetic(cfg);
    Instance b = generate_synthetic(cfg);
    CHECK(instance_to_json(a) == instance_to_json(b));
    cfg.seed = 43;
    Instance c = generate_synthetic(cfg);
    CHECK(instance_to_json(a) != instance_to_json(c));
}

TEST_CASE("generator respects caps") {
    GenConfig cfg;
    cfg.seed = 7;
    cfg.n_people = 4;
    cfg.dup_rate = 0.9;
    cfg.max_per_part = 3;
    Instance inst = generate_synthetic(cfg);
    for (int r = 0; r < inst.num_parts(); ++r)
        CHECK(static_cast<int>(inst.dets_of_part(r).size()) <= 3);

    cfg.max_per_part = kMaxDetectionsPerPart;
    cfg.max_total = 10;
    inst = generate_synthetic(cfg);
    CHECK(inst.num_detections() <= 10);
}

TEST_CASE("generator output validates across a seed sweep") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        GenConfig cfg;
        cfg.seed = seed;
        cfg.n_people = 1 + static_cast<int>(seed % 3);
        cfg.dup_rate = 0.1 * static_cast<double>(seed % 8);
        cfg.fp_rate = 0.1 * static_cast<double>(seed % 5);
        if (seed % 2 == 0) cfg.graph = mini_body_graph();
        Instance inst = generate_synthetic(cfg);
        auto vr = validate_instance(inst);
        if (!vr.ok()) {
            CAPTURE(seed);
            CAPTURE(issue_code_name(vr.issues.front().code));
            REQUIRE(vr.ok());
        }
        // Pairwise legality, checked directly as well.
        for (const auto& e : inst.pairwise) {
            const int r1 = inst.detections[e.d1].part;
            const int r2 = inst.detections[e.d2].part;
            CHECK((r1 == r2 || inst.graph.has_edge(r1, r2)));
        }
    }
}
