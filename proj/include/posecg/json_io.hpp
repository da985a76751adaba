#pragma once

#include <stdexcept>
#include <string>

#include "posecg/instance.hpp"
#include "posecg/solver.hpp"

namespace posecg {

class JsonError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Instance file schema: {parts, major_parts, edges, detections:[{id, part,
// x?, y?, theta}], pairwise:[{d1, d2, phi}], omega}. Unknown keys are
// rejected in strict mode and warned to stderr otherwise.
RawInstance load_raw_instance(const std::string& path, bool strict = false);
RawInstance parse_raw_instance(const std::string& text, bool strict = false);

std::string instance_to_json(const Instance& inst);
void save_instance(const Instance& inst, const std::string& path);

// Solution schema: {objective, poses:[{global:{part: det_id,...},
// locals:[{anchor, locals:[ids]}]}], false_positives:[ids], report:{...}}.
// wall_time is deliberately excluded so identical runs produce identical
// files.
std::string solution_to_json(const Instance& inst, const Solution& solution,
                             const SolveReport& report);
void save_solution(const Instance& inst, const Solution& solution,
                   const SolveReport& report, const std::string& path);

// Reloads a solution against its instance; column costs are recomputed.
Solution load_solution(const Instance& inst, const std::string& path);

}    // namespace posecg
