#pragma once

#include <stdexcept>
#include <string>

#include "posecg/instance.hpp"
#include "posecg/solver.hpp"

namespace posecg {

class MissingPositions : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Renders a solved instance: one color per pose, circles at global
// detections, small squares at local detections, segments along body-graph
// edges between selected detections, grey crosses for false positives.
// Requires every detection to carry a position.
std::string render_svg(const Instance& inst, const Solution& solution);

}    // namespace posecg
