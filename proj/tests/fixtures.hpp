#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <random>
#include <vector>

#include "posecg/instance.hpp"
#include "posecg/master.hpp"

namespace fixtures {

// Two-part instance (neck major, head), three detections:
//   d0 neck theta=-10, d1 head theta=-4, d2 head theta=-3
//   phi(0,1)=-2  phi(0,2)=-1  phi(1,2)=-0.5   omega=3
// Optimum -16.5: pose {d0,d1} (gamma -13) plus local (d1;{d2}) (psi -3.5).
inline posecg::Instance neck_head() {
    posecg::RawInstance raw;
    raw.parts = {"neck", "head"};
    raw.major_parts = {"neck"};
    raw.edges = {{"neck", "head"}};
    raw.detections = {{0, "neck", {}, {}, -10.0},
                      {1, "head", {}, {}, -4.0},
                      {2, "head", {}, {}, -3.0}};
    raw.pairwise = {{0, 1, -2.0}, {0, 2, -1.0}, {1, 2, -0.5}};
    raw.omega = 3.0;
    auto vr = posecg::validate_instance(raw);
    assert(vr.ok());
    return *vr.instance;
}

// Mini-graph instance whose LP relaxation has a unique fractional optimum
// gamma = (1/2, 1/2, 1/2) on poses {0,2}, {0,3}, {1,2,3}, objective -1.5,
// while the best integral solution is a single pose of cost -1. The triple
// {0,2,3} (neck, head, shoulder across the three half-poses) is violated
// with value 3/2, so one odd-set row closes the gap.
//   dets: 0 neck th=-3, 1 neck th=0, 2 head th=0, 3 shoulder th=0
//   phi: (0,2)=-1 (0,3)=-1 (2,3)=+2 (1,2)=-3 (1,3)=-3 (0,1)=+10  omega=3
inline posecg::Instance odd_cycle() {
    posecg::RawInstance raw;
    raw.parts = {"neck", "head", "shoulder"};
    raw.major_parts = {"neck"};
    raw.edges = {{"neck", "head"}, {"neck", "shoulder"}, {"head", "shoulder"}};
    raw.detections = {{0, "neck", {}, {}, -3.0},
                      {1, "neck", {}, {}, 0.0},
                      {2, "head", {}, {}, 0.0},
                      {3, "shoulder", {}, {}, 0.0}};
    raw.pairwise = {{0, 1, 10.0}, {0, 2, -1.0}, {0, 3, -1.0},
                    {1, 2, -3.0}, {1, 3, -3.0}, {2, 3, 2.0}};
    raw.omega = 3.0;
    auto vr = posecg::validate_instance(raw);
    assert(vr.ok());
    return *vr.instance;
}

// Random small instance on the mini body graph, suitable for oracle
// cross-checks. Detection count bounded by max_total.
inline posecg::Instance random_small(std::uint64_t seed, int max_total = 8) {
    posecg::GenConfig cfg;
    cfg.seed = seed;
    cfg.graph = posecg::mini_body_graph();
    cfg.n_people = 1 + static_cast<int>(seed % 2);
    cfg.dup_rate = 0.4;
    cfg.fp_rate = 0.3;
    cfg.max_total = max_total;
    return posecg::generate_synthetic(cfg);
}

// Random dual values (nonnegative, sparse) plus random triple rows over an
// instance; used by pricing cross-checks.
struct RandomDuals {
    posecg::DualValues duals;
    std::vector<posecg::TripleRow> global_rows;
    std::vector<posecg::TripleRow> local_rows;
};

inline RandomDuals random_duals(const posecg::Instance& inst, std::mt19937& rng,
                                bool with_triples) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_real_distribution<double> mag(0.0, 3.0);
    RandomDuals out;
    const int n = inst.num_detections();
    out.duals = posecg::DualValues::zeros(n);
    for (int d = 0; d < n; ++d) {
        if (u01(rng) < 0.7) out.duals.lambda1[d] = mag(rng);
        if (u01(rng) < 0.7) out.duals.lambda2[d] = mag(rng);
        if (u01(rng) < 0.7) out.duals.lambda3[d] = mag(rng);
    }
    if (!with_triples) return out;

    // Global triples: one detection from each of three distinct parts.
    std::vector<std::vector<int>> by_part;
    for (int r = 0; r < inst.num_parts(); ++r)
        by_part.push_back(inst.dets_of_part(r));
    for (int a = 0; a < inst.num_parts(); ++a)
        for (int b = a + 1; b < inst.num_parts(); ++b)
            for (int c = b + 1; c < inst.num_parts(); ++c) {
                if (by_part[a].empty() || by_part[b].empty() || by_part[c].empty())
                    continue;
                if (u01(rng) > 0.4) continue;
                posecg::TripleRow row;
                row.flavor = posecg::TripleFlavor::Global;
                row.dets = {by_part[a][static_cast<size_t>(u01(rng) * by_part[a].size()) %
                                       by_part[a].size()],
                            by_part[b][static_cast<size_t>(u01(rng) * by_part[b].size()) %
                                       by_part[b].size()],
                            by_part[c][static_cast<size_t>(u01(rng) * by_part[c].size()) %
                                       by_part[c].size()]};
                std::sort(row.dets.begin(), row.dets.end());
                out.global_rows.push_back(row);
                out.duals.lambda4.push_back(mag(rng));
            }
    // Local triples: three detections of one part.
    for (int r = 0; r < inst.num_parts(); ++r) {
        const auto& dets = by_part[r];
        for (size_t a = 0; a < dets.size(); ++a)
            for (size_t b = a + 1; b < dets.size(); ++b)
                for (size_t c = b + 1; c < dets.size(); ++c) {
                    if (u01(rng) > 0.4) continue;
                    posecg::TripleRow row;
                    row.flavor = posecg::TripleFlavor::Local;
                    row.dets = {dets[a], dets[b], dets[c]};
                    out.local_rows.push_back(row);
                    out.duals.lambda5.push_back(mag(rng));
                }
    }
    return out;
}

}    // namespace fixtures
