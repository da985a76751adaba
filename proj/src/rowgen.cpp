#include "posecg/rowgen.hpp"

#include <algorithm>
#include <set>

namespace posecg {

namespace {

struct ScoredRow {
    double violation;
    TripleRow row;
};

void take_top_k(std::vector<ScoredRow>& scored, int k,
                std::vector<TripleRow>& out) {
    std::sort(scored.begin(), scored.end(),
              [](const ScoredRow& a, const ScoredRow& b) {
                  if (a.violation != b.violation) return a.violation > b.violation;
                  return a.row < b.row;
              });
    if (static_cast<int>(scored.size()) > k) scored.resize(k);
    for (auto& s : scored) out.push_back(std::move(s.row));
}

}    // namespace

std::vector<TripleRow> separate_triples_local(const Instance& inst,
                                              const ColumnPool& pool,
                                              const std::vector<double>& psi_values,
                                              const RowGenOptions& opt) {
    std::vector<TripleRow> out;
    const int n_parts = inst.num_parts();

    // Column bodies (locals + anchor) with positive weight, grouped by part.
    struct WeightedBody {
        std::vector<int> body;    // sorted
        double weight;
    };
    std::vector<std::vector<WeightedBody>> by_part(n_parts);
    std::vector<std::set<int>> support(n_parts);
    for (size_t l = 0; l < pool.locals.size(); ++l) {
        const double w = psi_values[l];
        if (w <= opt.tol) continue;
        const auto& col = pool.locals[l];
        WeightedBody wb;
        wb.body = col.locals;
        wb.body.push_back(col.anchor);
        std::sort(wb.body.begin(), wb.body.end());
        wb.weight = w;
        const int part = inst.detections[col.anchor].part;
        for (int d : wb.body) support[part].insert(d);
        by_part[part].push_back(std::move(wb));
    }

    for (int r = 0; r < n_parts; ++r) {
        if (by_part[r].empty()) continue;
        std::vector<int> cands;
        if (opt.full_enumeration)
            cands = inst.dets_of_part(r);
        else
            cands.assign(support[r].begin(), support[r].end());
        const int k = static_cast<int>(cands.size());
        if (k < 3) continue;
        std::vector<ScoredRow> scored;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                for (int h = j + 1; h < k; ++h) {
                    TripleRow row;
                    row.dets = {cands[i], cands[j], cands[h]};
                    row.flavor = TripleFlavor::Local;
                    double violation = 0.0;
                    for (const auto& wb : by_part[r])
                        if (triple_overlap(row, wb.body) >= 2)
                            violation += wb.weight;
                    if (violation > 1.0 + opt.tol)
                        scored.push_back({violation, std::move(row)});
                }
        take_top_k(scored, opt.top_k, out);
    }
    return out;
}

std::vector<TripleRow> separate_triples_global(
    const Instance& inst, const ColumnPool& pool,
    const std::vector<double>& gamma_values, const RowGenOptions& opt) {
    std::vector<TripleRow> out;

    struct WeightedPose {
        const std::vector<int>* dets;
        double weight;
    };
    std::vector<WeightedPose> poses;
    std::set<int> support_set;
    for (size_t q = 0; q < pool.globals.size(); ++q) {
        const double w = gamma_values[q];
        if (w <= opt.tol) continue;
        poses.push_back({&pool.globals[q].detections, w});
        for (int d : pool.globals[q].detections) support_set.insert(d);
    }
    if (poses.empty()) return out;

    std::vector<int> cands;
    if (opt.full_enumeration) {
        for (int d = 0; d < inst.num_detections(); ++d) cands.push_back(d);
    } else {
        cands.assign(support_set.begin(), support_set.end());
    }
    const int k = static_cast<int>(cands.size());
    std::vector<ScoredRow> scored;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            if (inst.detections[cands[i]].part == inst.detections[cands[j]].part)
                continue;
            for (int h = j + 1; h < k; ++h) {
                const int ph = inst.detections[cands[h]].part;
                if (ph == inst.detections[cands[i]].part ||
                    ph == inst.detections[cands[j]].part)
                    continue;
                TripleRow row;
                row.dets = {cands[i], cands[j], cands[h]};
                row.flavor = TripleFlavor::Global;
                double violation = 0.0;
                for (const auto& wp : poses)
                    if (triple_overlap(row, *wp.dets) >= 2) violation += wp.weight;
                if (violation > 1.0 + opt.tol)
                    scored.push_back({violation, std::move(row)});
            }
        }
    take_top_k(scored, opt.top_k, out);
    return out;
}

}    // namespace posecg
