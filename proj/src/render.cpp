#include "posecg/render.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace posecg {

namespace {

const char* kPalette[] = {"#e41a1c", "#377eb8", "#4daf4a", "#984ea3",
                          "#ff7f00", "#a65628", "#f781bf", "#17becf"};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(2);
    os << std::fixed << v;
    return os.str();
}

}    // namespace

std::string render_svg(const Instance& inst, const Solution& solution) {
    if (!inst.has_positions())
        throw MissingPositions("instance detections carry no positions");

    double min_x = 0, min_y = 0, max_x = 100, max_y = 100;
    if (!inst.detections.empty()) {
        min_x = max_x = *inst.detections.front().x;
        min_y = max_y = *inst.detections.front().y;
        for (const auto& d : inst.detections) {
            min_x = std::min(min_x, *d.x);
            max_x = std::max(max_x, *d.x);
            min_y = std::min(min_y, *d.y);
            max_y = std::max(max_y, *d.y);
        }
    }
    const double pad = 20.0;
    const double w = max_x - min_x + 2 * pad;
    const double h = max_y - min_y + 2 * pad;
    auto px = [&](int d) { return *inst.detections[d].x - min_x + pad; };
    auto py = [&](int d) { return *inst.detections[d].y - min_y + pad; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w)
        << "\" height=\"" << fmt(h) << "\" viewBox=\"0 0 " << fmt(w) << " "
        << fmt(h) << "\">\n";
    svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    const int n_colors = static_cast<int>(sizeof(kPalette) / sizeof(*kPalette));
    for (size_t pi = 0; pi < solution.poses.size(); ++pi) {
        const char* color = kPalette[pi % n_colors];
        const auto& pose = solution.poses[pi].pose;
        // Segments along body-graph edges between selected detections.
        for (size_t i = 0; i < pose.detections.size(); ++i)
            for (size_t j = i + 1; j < pose.detections.size(); ++j) {
                const int a = pose.detections[i], b = pose.detections[j];
                if (!inst.graph.has_edge(inst.detections[a].part,
                                         inst.detections[b].part))
                    continue;
                svg << "  <line x1=\"" << fmt(px(a)) << "\" y1=\"" << fmt(py(a))
                    << "\" x2=\"" << fmt(px(b)) << "\" y2=\"" << fmt(py(b))
                    << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
            }
        for (int d : pose.detections)
            svg << "  <circle cx=\"" << fmt(px(d)) << "\" cy=\"" << fmt(py(d))
                << "\" r=\"5\" fill=\"" << color << "\"/>\n";
        for (const auto& local : solution.poses[pi].locals)
            for (int d : local.locals)
                svg << "  <rect x=\"" << fmt(px(d) - 3) << "\" y=\""
                    << fmt(py(d) - 3) << "\" width=\"6\" height=\"6\" fill=\""
                    << color << "\"/>\n";
    }
    for (int d : solution.false_positives) {
        const double x = px(d), y = py(d);
        svg << "  <path d=\"M " << fmt(x - 4) << " " << fmt(y - 4) << " L "
            << fmt(x + 4) << " " << fmt(y + 4) << " M " << fmt(x - 4) << " "
            << fmt(y + 4) << " L " << fmt(x + 4) << " " << fmt(y - 4)
            << "\" stroke=\"#999999\" stroke-width=\"2\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}    // namespace posecg
