#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace posecg {

// Body-part graph: tree edges plus augmented edges. For every major part m the
// subgraph on parts\{m} induced by edges not incident to m must be a forest;
// that is what makes conditional DP pricing exact.
struct PartGraph {
    std::vector<std::string> parts;
    std::vector<int> major_parts;              // indices into parts
    std::vector<std::pair<int, int>> edges;    // normalized, first < second

    int part_index(const std::string& name) const;
    bool is_major(int part) const;
    bool has_edge(int r1, int r2) const;

    void rebuild_lookups();

private:
    std::unordered_map<std::string, int> name_to_index_;
    std::unordered_set<std::uint64_t> edge_keys_;
    std::vector<char> major_flags_;
};

// 14-part body graph with neck as the major part: kinematic tree, neck
// augmented to all non-adjacent parts, plus hip-shoulder and shoulder-head
// extra edges.
PartGraph default_body_graph();

// 3-part graph (neck major, head, shoulder) for desk-scale instances.
PartGraph mini_body_graph();

struct Detection {
    int id = -1;
    int part = -1;
    std::optional<double> x, y;    // render/generator metadata only
    double theta = 0.0;
};

inline std::uint64_t pair_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

struct PairwiseEntry {
    int d1, d2;    // normalized d1 < d2
    double phi;
};

constexpr int kMaxDetectionsPerPart = 15;

class Instance {
public:
    PartGraph graph;
    std::vector<Detection> detections;
    std::vector<PairwiseEntry> pairwise;    // sorted by (d1,d2)
    double omega = 30.0;

    int num_detections() const { return static_cast<int>(detections.size()); }
    int num_parts() const { return static_cast<int>(graph.parts.size()); }

    double phi(int d1, int d2) const;    // 0 when no entry
    bool has_phi(int d1, int d2) const;
    const std::vector<int>& dets_of_part(int part) const;
    bool has_positions() const;

    void rebuild_lookups();

private:
    std::unordered_map<std::uint64_t, double> phi_map_;
    std::vector<std::vector<int>> dets_by_part_;
};

// Pre-validation form, as read from a file or built by hand.
struct RawDetection {
    int id = -1;
    std::string part;
    std::optional<double> x, y;
    double theta = 0.0;
};

struct RawInstance {
    std::vector<std::string> parts;
    std::vector<std::string> major_parts;
    std::vector<std::pair<std::string, std::string>> edges;
    std::vector<RawDetection> detections;
    std::vector<PairwiseEntry> pairwise;
    std::optional<double> omega;
};

enum class IssueCode {
    UnknownPart,
    DuplicateDetectionId,
    NonContiguousDetectionIds,
    DiagonalPairwise,
    UnknownDetectionId,
    DuplicatePairwiseEntry,
    IllegalPairwisePartPair,
    SelfLoopEdge,
    DuplicateEdge,
    ConditionalGraphNotForest,
    NoMajorPart,
    TooManyDetectionsPerPart,
};

const char* issue_code_name(IssueCode code);

struct ValidationIssue {
    IssueCode code;
    std::string detail;
};

struct ValidationResult {
    std::optional<Instance> instance;    // set iff issues empty
    std::vector<ValidationIssue> issues;

    bool ok() const { return issues.empty(); }
};

// Checks every rule and reports all violations, not just the first.
ValidationResult validate_instance(const RawInstance& raw);

// Re-validates an already built Instance (used by property tests).
ValidationResult validate_instance(const Instance& instance);

RawInstance to_raw(const Instance& instance);

struct GenConfig {
    std::uint64_t seed = 0;
    int n_people = 1;
    double dup_rate = 0.3;
    double fp_rate = 0.1;
    PartGraph graph;            // default_body_graph() when parts empty
    int max_per_part = kMaxDetectionsPerPart;
    int max_total = 0;          // 0 = unlimited
};

// Deterministic synthetic instance generator: skeleton templates with
// positional noise, duplicate detections per part, false positives, theta
// negative near true parts and positive for false positives, phi from
// same-part proximity and limb-length consistency. Output always validates.
Instance generate_synthetic(const GenConfig& config);

}    // namespace posecg
