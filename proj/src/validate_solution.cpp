#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "posecg/solver.hpp"

// Standalone validity checker. Deliberately recomputes everything from the
// instance data with its own loops so that solver bugs cannot hide behind
// shared helpers.

namespace posecg {

std::vector<std::string> check_solution(const Instance& inst,
                                        const Solution& sol) {
    std::vector<std::string> errors;
    auto fail = [&](const std::string& msg) { errors.push_back(msg); };

    const int n = inst.num_detections();
    std::vector<int> global_count(n, 0);      // appearances in global poses
    std::vector<int> local_member_count(n, 0);
    std::vector<int> local_anchor_count(n, 0);

    double total = 0.0;
    for (size_t pi = 0; pi < sol.poses.size(); ++pi) {
        const auto& pose = sol.poses[pi].pose;
        std::vector<int> parts_seen;
        bool has_major = false;
        if (pose.detections.empty()) fail("pose " + std::to_string(pi) + " empty");
        for (int d : pose.detections) {
            if (d < 0 || d >= n) {
                fail("pose references unknown detection " + std::to_string(d));
                continue;
            }
            ++global_count[d];
            const int r = inst.detections[d].part;
            if (std::count(parts_seen.begin(), parts_seen.end(), r) > 0)
                fail("pose " + std::to_string(pi) + " repeats part " +
                     inst.graph.parts[r]);
            parts_seen.push_back(r);
            for (int m : inst.graph.major_parts)
                if (m == r) has_major = true;
        }
        if (!has_major)
            fail("pose " + std::to_string(pi) + " has no major-part detection");
        // Gamma recomputation.
        double gamma = inst.omega;
        for (int d : pose.detections) gamma += inst.detections[d].theta;
        for (size_t a = 0; a < pose.detections.size(); ++a)
            for (size_t b = a + 1; b < pose.detections.size(); ++b)
                gamma += inst.phi(pose.detections[a], pose.detections[b]);
        total += gamma;

        for (const auto& local : sol.poses[pi].locals) {
            if (std::find(pose.detections.begin(), pose.detections.end(),
                          local.anchor) == pose.detections.end())
                fail("local assignment anchored at " +
                     std::to_string(local.anchor) +
                     " attached to a pose that does not contain it");
            ++local_anchor_count[local.anchor];
            if (local.locals.empty())
                fail("empty local assignment at anchor " +
                     std::to_string(local.anchor));
            for (int d : local.locals) {
                if (d < 0 || d >= n) {
                    fail("local references unknown detection " + std::to_string(d));
                    continue;
                }
                ++local_member_count[d];
                if (inst.detections[d].part != inst.detections[local.anchor].part)
                    fail("local member " + std::to_string(d) +
                         " has a different part than its anchor");
                if (d == local.anchor)
                    fail("anchor " + std::to_string(d) + " listed as its own local");
            }
            double psi = 0.0;
            for (int d : local.locals) psi += inst.detections[d].theta;
            std::vector<int> body = local.locals;
            body.push_back(local.anchor);
            for (size_t a = 0; a < body.size(); ++a)
                for (size_t b = a + 1; b < body.size(); ++b)
                    psi += inst.phi(body[a], body[b]);
            total += psi;
        }
    }

    for (int d = 0; d < n; ++d) {
        if (global_count[d] + local_member_count[d] > 1)
            fail("detection " + std::to_string(d) +
                 " is global and/or local more than once");
        if (local_member_count[d] + local_anchor_count[d] > 1)
            fail("detection " + std::to_string(d) +
                 " appears in more than one local-assignment body");
    }

    // False positives must be exactly the uncovered detections.
    std::vector<char> covered(n, 0);
    for (const auto& p : sol.poses) {
        for (int d : p.pose.detections)
            if (d >= 0 && d < n) covered[d] = 1;
        for (const auto& l : p.locals)
            for (int d : l.locals)
                if (d >= 0 && d < n) covered[d] = 1;
    }
    std::vector<int> expect_fp;
    for (int d = 0; d < n; ++d)
        if (!covered[d]) expect_fp.push_back(d);
    std::vector<int> got_fp = sol.false_positives;
    std::sort(got_fp.begin(), got_fp.end());
    if (got_fp != expect_fp)
        fail("false_positives does not equal the set of uncovered detections");

    if (std::abs(total - sol.objective) > 1e-6)
        fail("objective mismatch: stored " + std::to_string(sol.objective) +
             " recomputed " + std::to_string(total));
    return errors;
}

}    // namespace posecg
