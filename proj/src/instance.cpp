#include "posecg/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace posecg {

int PartGraph::part_index(const std::string& name) const {
    auto it = name_to_index_.find(name);
    return it == name_to_index_.end() ? -1 : it->second;
}

bool PartGraph::is_major(int part) const {
    return part >= 0 && part < static_cast<int>(major_flags_.size()) &&
           major_flags_[part] != 0;
}

bool PartGraph::has_edge(int r1, int r2) const {
    return edge_keys_.count(pair_key(r1, r2)) != 0;
}

void PartGraph::rebuild_lookups() {
    name_to_index_.clear();
    for (int i = 0; i < static_cast<int>(parts.size()); ++i)
        name_to_index_[parts[i]] = i;
    edge_keys_.clear();
    for (auto& [a, b] : edges) {
        if (a > b) std::swap(const_cast<int&>(a), const_cast<int&>(b));
        edge_keys_.insert(pair_key(a, b));
    }
    major_flags_.assign(parts.size(), 0);
    for (int m : major_parts)
        if (m >= 0 && m < static_cast<int>(parts.size())) major_flags_[m] = 1;
}

PartGraph default_body_graph() {
    PartGraph g;
    g.parts = {"head",       "neck",        "right-shoulder", "right-elbow",
               "right-wrist", "left-shoulder", "left-elbow",  "left-wrist",
               "right-hip",  "right-knee",  "right-ankle",    "left-hip",
               "left-knee",  "left-ankle"};
    auto idx = [&](const char* n) {
        return static_cast<int>(std::find(g.parts.begin(), g.parts.end(), n) -
                                g.parts.begin());
    };
    const int head = idx("head"), neck = idx("neck");
    const int rsho = idx("right-shoulder"), relb = idx("right-elbow"),
              rwri = idx("right-wrist");
    const int lsho = idx("left-shoulder"), lelb = idx("left-elbow"),
              lwri = idx("left-wrist");
    const int rhip = idx("right-hip"), rkne = idx("right-knee"),
              rank = idx("right-ankle");
    const int lhip = idx("left-hip"), lkne = idx("left-knee"),
              lank = idx("left-ankle");
    g.major_parts = {neck};
    // Kinematic tree.
    g.edges = {{neck, head}, {neck, rsho}, {rsho, relb}, {relb, rwri},
               {neck, lsho}, {lsho, lelb}, {lelb, lwri}, {neck, rhip},
               {rhip, rkne}, {rkne, rank}, {neck, lhip}, {lhip, lkne},
               {lkne, lank}};
    // Neck to every non-adjacent part.
    for (int r : {relb, rwri, lelb, lwri, rkne, rank, lkne, lank})
        g.edges.push_back({neck, r});
    // Hip-shoulder and shoulder-head extras.
    g.edges.push_back({lhip, lsho});
    g.edges.push_back({rhip, rsho});
    g.edges.push_back({rsho, head});
    g.edges.push_back({lsho, head});
    for (auto& e : g.edges)
        if (e.first > e.second) std::swap(e.first, e.second);
    g.rebuild_lookups();
    return g;
}

PartGraph mini_body_graph() {
    PartGraph g;
    g.parts = {"neck", "head", "shoulder"};
    g.major_parts = {0};
    g.edges = {{0, 1}, {0, 2}, {1, 2}};
    g.rebuild_lookups();
    return g;
}

double Instance::phi(int d1, int d2) const {
    auto it = phi_map_.find(pair_key(d1, d2));
    return it == phi_map_.end() ? 0.0 : it->second;
}

bool Instance::has_phi(int d1, int d2) const {
    return phi_map_.count(pair_key(d1, d2)) != 0;
}

const std::vector<int>& Instance::dets_of_part(int part) const {
    static const std::vector<int> empty;
    if (part < 0 || part >= static_cast<int>(dets_by_part_.size())) return empty;
    return dets_by_part_[part];
}

bool Instance::has_positions() const {
    for (const auto& d : detections)
        if (!d.x || !d.y) return false;
    return true;
}

void Instance::rebuild_lookups() {
    graph.rebuild_lookups();
    phi_map_.clear();
    for (const auto& e : pairwise) phi_map_[pair_key(e.d1, e.d2)] = e.phi;
    dets_by_part_.assign(graph.parts.size(), {});
    for (const auto& d : detections)
        if (d.part >= 0 && d.part < static_cast<int>(dets_by_part_.size()))
            dets_by_part_[d.part].push_back(d.id);
    for (auto& v : dets_by_part_) std::sort(v.begin(), v.end());
}

const char* issue_code_name(IssueCode code) {
    switch (code) {
        case IssueCode::UnknownPart: return "UnknownPart";
        case IssueCode::DuplicateDetectionId: return "DuplicateDetectionId";
        case IssueCode::NonContiguousDetectionIds:
            return "NonContiguousDetectionIds";
        case IssueCode::DiagonalPairwise: return "DiagonalPairwise";
        case IssueCode::UnknownDetectionId: return "UnknownDetectionId";
        case IssueCode::DuplicatePairwiseEntry: return "DuplicatePairwiseEntry";
        case IssueCode::IllegalPairwisePartPair:
            return "IllegalPairwisePartPair";
        case IssueCode::SelfLoopEdge: return "SelfLoopEdge";
        case IssueCode::DuplicateEdge: return "DuplicateEdge";
        case IssueCode::ConditionalGraphNotForest:
            return "ConditionalGraphNotForest";
        case IssueCode::NoMajorPart: return "NoMajorPart";
        case IssueCode::TooManyDetectionsPerPart:
            return "TooManyDetectionsPerPart";
    }
    return "Unknown";
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    bool unite(int a, int b) {    // false if already connected (cycle)
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

void add_issue(std::vector<ValidationIssue>& issues, IssueCode code,
               std::string detail) {
    issues.push_back({code, std::move(detail)});
}

}    // namespace

ValidationResult validate_instance(const RawInstance& raw) {
    ValidationResult result;
    auto& issues = result.issues;

    PartGraph graph;
    graph.parts = raw.parts;
    graph.rebuild_lookups();

    for (const auto& m : raw.major_parts) {
        int idx = graph.part_index(m);
        if (idx < 0)
            add_issue(issues, IssueCode::UnknownPart, "major part '" + m + "'");
        else
            graph.major_parts.push_back(idx);
    }
    std::sort(graph.major_parts.begin(), graph.major_parts.end());
    graph.major_parts.erase(
        std::unique(graph.major_parts.begin(), graph.major_parts.end()),
        graph.major_parts.end());
    if (graph.major_parts.empty())
        add_issue(issues, IssueCode::NoMajorPart, "major_parts is empty");

    std::unordered_set<std::uint64_t> seen_edges;
    for (const auto& [pa, pb] : raw.edges) {
        int a = graph.part_index(pa);
        int b = graph.part_index(pb);
        if (a < 0)
            add_issue(issues, IssueCode::UnknownPart, "edge endpoint '" + pa + "'");
        if (b < 0)
            add_issue(issues, IssueCode::UnknownPart, "edge endpoint '" + pb + "'");
        if (a < 0 || b < 0) continue;
        if (a == b) {
            add_issue(issues, IssueCode::SelfLoopEdge, "edge " + pa + "-" + pb);
            continue;
        }
        if (!seen_edges.insert(pair_key(a, b)).second) {
            add_issue(issues, IssueCode::DuplicateEdge, "edge " + pa + "-" + pb);
            continue;
        }
        graph.edges.push_back({std::min(a, b), std::max(a, b)});
    }
    graph.rebuild_lookups();

    // Conditional-forest check per major part.
    const int n_parts = static_cast<int>(graph.parts.size());
    for (int m : graph.major_parts) {
        UnionFind uf(n_parts);
        bool cyclic = false;
        for (const auto& [a, b] : graph.edges) {
            if (a == m || b == m) continue;
            if (!uf.unite(a, b)) cyclic = true;
        }
        if (cyclic)
            add_issue(issues, IssueCode::ConditionalGraphNotForest,
                      "conditioning on major part '" + graph.parts[m] + "'");
    }

    // Detections.
    std::vector<Detection> dets;
    std::unordered_set<int> seen_ids;
    int max_id = -1;
    for (const auto& rd : raw.detections) {
        Detection d;
        d.id = rd.id;
        d.theta = rd.theta;
        d.x = rd.x;
        d.y = rd.y;
        d.part = graph.part_index(rd.part);
        if (d.part < 0)
            add_issue(issues, IssueCode::UnknownPart,
                      "detection " + std::to_string(rd.id) + " part '" + rd.part + "'");
        if (!seen_ids.insert(rd.id).second)
            add_issue(issues, IssueCode::DuplicateDetectionId,
                      "id " + std::to_string(rd.id));
        max_id = std::max(max_id, rd.id);
        dets.push_back(d);
    }
    if (max_id != static_cast<int>(seen_ids.size()) - 1 ||
        static_cast<int>(seen_ids.size()) != static_cast<int>(dets.size())) {
        if (static_cast<int>(seen_ids.size()) == static_cast<int>(dets.size()) &&
            max_id >= static_cast<int>(dets.size()))
            add_issue(issues, IssueCode::NonContiguousDetectionIds,
                      "ids must be 0.." + std::to_string(dets.size() - 1));
    }
    std::sort(dets.begin(), dets.end(),
              [](const Detection& a, const Detection& b) { return a.id < b.id; });

    std::vector<int> per_part_counts(n_parts, 0);
    for (const auto& d : dets)
        if (d.part >= 0) ++per_part_counts[d.part];
    for (int r = 0; r < n_parts; ++r)
        if (per_part_counts[r] > kMaxDetectionsPerPart)
            add_issue(issues, IssueCode::TooManyDetectionsPerPart,
                      "part '" + graph.parts[r] + "' has " +
                          std::to_string(per_part_counts[r]) + " detections");

    // Pairwise entries.
    auto part_of = [&](int id) -> int {
        if (id < 0 || id >= static_cast<int>(dets.size())) return -2;
        return dets[id].part;
    };
    std::vector<PairwiseEntry> pw;
    std::unordered_set<std::uint64_t> seen_pairs;
    for (const auto& e : raw.pairwise) {
        if (e.d1 == e.d2) {
            add_issue(issues, IssueCode::DiagonalPairwise,
                      "pair {" + std::to_string(e.d1) + "," + std::to_string(e.d2) + "}");
            continue;
        }
        int p1 = part_of(e.d1);
        int p2 = part_of(e.d2);
        if (p1 == -2 || p2 == -2) {
            add_issue(issues, IssueCode::UnknownDetectionId,
                      "pair {" + std::to_string(e.d1) + "," + std::to_string(e.d2) + "}");
            continue;
        }
        if (!seen_pairs.insert(pair_key(e.d1, e.d2)).second) {
            add_issue(issues, IssueCode::DuplicatePairwiseEntry,
                      "pair {" + std::to_string(e.d1) + "," + std::to_string(e.d2) + "}");
            continue;
        }
        if (p1 >= 0 && p2 >= 0 && p1 != p2 && !graph.has_edge(p1, p2))
            add_issue(issues, IssueCode::IllegalPairwisePartPair,
                      "pair {" + std::to_string(e.d1) + "," + std::to_string(e.d2) +
                          "} parts " + graph.parts[p1] + "/" + graph.parts[p2]);
        PairwiseEntry n = e;
        if (n.d1 > n.d2) std::swap(n.d1, n.d2);
        pw.push_back(n);
    }
    std::sort(pw.begin(), pw.end(), [](const PairwiseEntry& a, const PairwiseEntry& b) {
        return std::tie(a.d1, a.d2) < std::tie(b.d1, b.d2);
    });

    if (!issues.empty()) return result;

    Instance inst;
    inst.graph = std::move(graph);
    inst.detections = std::move(dets);
    inst.pairwise = std::move(pw);
    inst.omega = raw.omega.value_or(30.0);
    inst.rebuild_lookups();
    result.instance = std::move(inst);
    return result;
}

ValidationResult validate_instance(const Instance& instance) {
    return validate_instance(to_raw(instance));
}

RawInstance to_raw(const Instance& instance) {
    RawInstance raw;
    raw.parts = instance.graph.parts;
    for (int m : instance.graph.major_parts)
        raw.major_parts.push_back(instance.graph.parts[m]);
    for (const auto& [a, b] : instance.graph.edges)
        raw.edges.push_back({instance.graph.parts[a], instance.graph.parts[b]});
    for (const auto& d : instance.detections) {
        RawDetection rd;
        rd.id = d.id;
        rd.part = instance.graph.parts[d.part];
        rd.x = d.x;
        rd.y = d.y;
        rd.theta = d.theta;
        raw.detections.push_back(rd);
    }
    raw.pairwise = instance.pairwise;
    raw.omega = instance.omega;
    return raw;
}

// ---------------------------------------------------------------------------
// Synthetic generator. All randomness goes through hand-rolled transforms of
// mt19937_64 output so files are bit-identical across platforms.
namespace {

struct Rng {
    std::mt19937_64 engine;
    explicit Rng(std::uint64_t seed) : engine(seed ^ 0x9e3779b97f4a7c15ULL) {}
    double u01() { return (engine() >> 11) * (1.0 / 9007199254740992.0); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }
    double normal(double stddev) {
        double u1 = std::max(u01(), 1e-12);
        double u2 = u01();
        return stddev * std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586 * u2);
    }
    int binomial(int n, double p) {
        int k = 0;
        for (int i = 0; i < n; ++i)
            if (u01() < p) ++k;
        return k;
    }
    int uniform_int(int n) {    // 0..n-1
        return n <= 1 ? 0 : static_cast<int>(u01() * n) % n;
    }
};

// Template offsets for skeletons; scaled to a ~100-unit body.
std::vector<std::pair<double, double>> template_offsets(const PartGraph& g) {
    std::unordered_map<std::string, std::pair<double, double>> table = {
        {"head", {0, -20}},          {"neck", {0, 0}},
        {"right-shoulder", {-14, 4}}, {"right-elbow", {-20, 26}},
        {"right-wrist", {-24, 48}},  {"left-shoulder", {14, 4}},
        {"left-elbow", {20, 26}},    {"left-wrist", {24, 48}},
        {"right-hip", {-10, 52}},    {"right-knee", {-11, 82}},
        {"right-ankle", {-12, 112}}, {"left-hip", {10, 52}},
        {"left-knee", {11, 82}},     {"left-ankle", {12, 112}},
        {"shoulder", {16, 6}},
    };
    std::vector<std::pair<double, double>> out(g.parts.size(), {0, 0});
    for (size_t i = 0; i < g.parts.size(); ++i) {
        auto it = table.find(g.parts[i]);
        if (it != table.end())
            out[i] = it->second;
        else
            out[i] = {20.0 * (static_cast<double>(i % 5) - 2), 15.0 * (i / 5)};
    }
    return out;
}

}    // namespace

Instance generate_synthetic(const GenConfig& config) {
    GenConfig cfg = config;
    if (cfg.graph.parts.empty()) cfg.graph = default_body_graph();
    cfg.graph.rebuild_lookups();
    cfg.n_people = std::max(0, cfg.n_people);
    cfg.dup_rate = std::clamp(cfg.dup_rate, 0.0, 1.0);
    cfg.fp_rate = std::clamp(cfg.fp_rate, 0.0, 1.0);
    cfg.max_per_part = std::clamp(cfg.max_per_part, 1, kMaxDetectionsPerPart);

    Rng rng(cfg.seed);
    const int n_parts = static_cast<int>(cfg.graph.parts.size());
    const auto offsets = template_offsets(cfg.graph);

    // Unary magnitude scaled so the default omega=30 sits below a full pose.
    const double theta_base = 44.0 / n_parts;

    struct Cand {
        int part;
        double x, y, theta;
        int priority;    // 0 = first copy, 1 = duplicate, 2 = false positive
    };
    std::vector<Cand> cands;
    std::vector<int> per_part(n_parts, 0);

    for (int p = 0; p < cfg.n_people; ++p) {
        // Grid placement with jitter keeps neighboring people from
        // interlocking, matching photographs more than uniform scatter.
        double rx = 80.0 + 150.0 * (p % 5) + rng.uniform(-30, 30);
        double ry = 90.0 + 170.0 * (p / 5) + rng.uniform(-25, 25);
        for (int r = 0; r < n_parts; ++r) {
            bool visible = cfg.graph.is_major(r) || rng.u01() < 0.94;
            if (!visible) continue;
            int copies = 1 + rng.binomial(3, cfg.dup_rate);
            for (int c = 0; c < copies; ++c) {
                if (per_part[r] >= cfg.max_per_part) break;
                Cand cd;
                cd.part = r;
                cd.x = rx + offsets[r].first + rng.normal(c == 0 ? 2.0 : 4.0);
                cd.y = ry + offsets[r].second + rng.normal(c == 0 ? 2.0 : 4.0);
                cd.theta = -(theta_base + rng.uniform(0.0, theta_base)) *
                           (c == 0 ? 1.0 : rng.uniform(0.5, 0.9));
                cd.priority = c == 0 ? 0 : 1;
                cands.push_back(cd);
                ++per_part[r];
            }
        }
    }
    int n_fp = rng.binomial(2 * n_parts, cfg.fp_rate);
    for (int i = 0; i < n_fp; ++i) {
        int r = rng.uniform_int(n_parts);
        if (per_part[r] >= cfg.max_per_part) continue;
        Cand cd;
        cd.part = r;
        cd.x = rng.uniform(0, 500);
        cd.y = rng.uniform(0, 300);
        cd.theta = rng.uniform(1.0, 1.0 + theta_base);
        cd.priority = 2;
        cands.push_back(cd);
        ++per_part[r];
    }

    if (cfg.max_total > 0 && static_cast<int>(cands.size()) > cfg.max_total) {
        std::vector<int> order(cands.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return cands[a].priority < cands[b].priority;
        });
        order.resize(cfg.max_total);
        std::sort(order.begin(), order.end());
        std::vector<Cand> kept;
        for (int i : order) kept.push_back(cands[i]);
        cands = std::move(kept);
    }

    Instance inst;
    inst.graph = cfg.graph;
    // Keep the default omega meaningful for small graphs too.
    inst.omega = n_parts >= 10 ? 30.0 : 30.0 * n_parts / 14.0;
    for (int i = 0; i < static_cast<int>(cands.size()); ++i) {
        Detection d;
        d.id = i;
        d.part = cands[i].part;
        d.x = cands[i].x;
        d.y = cands[i].y;
        d.theta = cands[i].theta;
        inst.detections.push_back(d);
    }

    // Expected limb lengths from the template.
    auto dist = [](double ax, double ay, double bx, double by) {
        return std::hypot(ax - bx, ay - by);
    };
    const int n = inst.num_detections();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const auto& a = inst.detections[i];
            const auto& b = inst.detections[j];
            double dij = dist(*a.x, *a.y, *b.x, *b.y);
            // Distant pairs get an explicit repulsive cost rather than being
            // omitted: an absent entry reads as zero, which would let far
            // apart detections merge into one pose for free.
            if (a.part == b.part) {
                const double v = dij < 14.0 ? -3.0 + 0.2 * dij
                                            : std::min(8.0, 1.0 + 0.05 * dij);
                inst.pairwise.push_back({i, j, v});
            } else if (cfg.graph.has_edge(a.part, b.part)) {
                double expect = dist(offsets[a.part].first, offsets[a.part].second,
                                     offsets[b.part].first, offsets[b.part].second);
                double err = std::abs(dij - expect);
                const double v = err < 45.0 ? 0.12 * err - 2.2
                                            : std::min(8.0, 1.0 + 0.05 * err);
                inst.pairwise.push_back({i, j, v});
            }
        }
    }
    inst.rebuild_lookups();
    return inst;
}

}    // namespace posecg
