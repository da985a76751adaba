#pragma once

#include <vector>

#include "posecg/instance.hpp"
#include "posecg/master.hpp"

namespace posecg {

struct RowGenOptions {
    double tol = 1e-6;
    int top_k = 20;                  // cap per part (local) / overall (global)
    bool full_enumeration = false;   // audit mode: ignore fractional-support
                                     // restriction
};

// Per part, finds triples of same-part detections whose odd-set inequality is
// violated by the fractional local weights: sum over columns with overlap >= 2
// exceeds 1 + tol. Candidates are restricted to detections appearing in a
// column with psi > tol, which is exact for separation.
std::vector<TripleRow> separate_triples_local(const Instance& inst,
                                              const ColumnPool& pool,
                                              const std::vector<double>& psi_values,
                                              const RowGenOptions& options = {});

// Same over global poses; triples draw one detection each from three distinct
// parts.
std::vector<TripleRow> separate_triples_global(
    const Instance& inst, const ColumnPool& pool,
    const std::vector<double>& gamma_values, const RowGenOptions& options = {});

}    // namespace posecg
