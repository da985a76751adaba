#include "posecg/json_io.hpp"

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "posecg/master.hpp"

namespace posecg {

using nlohmann::ordered_json;

namespace {

void check_keys(const ordered_json& obj, const std::set<std::string>& allowed,
                const std::string& where, bool strict) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (allowed.count(it.key())) continue;
        const std::string msg = "unknown key '" + it.key() + "' in " + where;
        if (strict) throw JsonError(msg);
        std::cerr << "warning: " << msg << "\n";
    }
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw JsonError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}    // namespace

RawInstance parse_raw_instance(const std::string& text, bool strict) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw JsonError(std::string("instance parse error: ") + e.what());
    }
    if (!j.is_object()) throw JsonError("instance file must be a JSON object");
    check_keys(j,
               {"parts", "major_parts", "edges", "detections", "pairwise",
                "omega"},
               "instance", strict);

    RawInstance raw;
    try {
        for (const auto& p : j.at("parts")) raw.parts.push_back(p.get<std::string>());
        for (const auto& p : j.at("major_parts"))
            raw.major_parts.push_back(p.get<std::string>());
        for (const auto& e : j.value("edges", ordered_json::array())) {
            if (!e.is_array() || e.size() != 2)
                throw JsonError("each edge must be a 2-array of part names");
            raw.edges.push_back({e[0].get<std::string>(), e[1].get<std::string>()});
        }
        for (const auto& d : j.value("detections", ordered_json::array())) {
            check_keys(d, {"id", "part", "x", "y", "theta"}, "detection", strict);
            RawDetection rd;
            rd.id = d.at("id").get<int>();
            rd.part = d.at("part").get<std::string>();
            rd.theta = d.at("theta").get<double>();
            if (d.contains("x")) rd.x = d["x"].get<double>();
            if (d.contains("y")) rd.y = d["y"].get<double>();
            raw.detections.push_back(std::move(rd));
        }
        for (const auto& p : j.value("pairwise", ordered_json::array())) {
            check_keys(p, {"d1", "d2", "phi"}, "pairwise entry", strict);
            raw.pairwise.push_back({p.at("d1").get<int>(), p.at("d2").get<int>(),
                                    p.at("phi").get<double>()});
        }
        if (j.contains("omega")) raw.omega = j["omega"].get<double>();
    } catch (const JsonError&) {
        throw;
    } catch (const std::exception& e) {
        throw JsonError(std::string("instance schema error: ") + e.what());
    }
    return raw;
}

RawInstance load_raw_instance(const std::string& path, bool strict) {
    return parse_raw_instance(slurp(path), strict);
}

std::string instance_to_json(const Instance& inst) {
    ordered_json j;
    j["parts"] = inst.graph.parts;
    ordered_json majors = ordered_json::array();
    for (int m : inst.graph.major_parts) majors.push_back(inst.graph.parts[m]);
    j["major_parts"] = std::move(majors);
    ordered_json edges = ordered_json::array();
    for (const auto& [a, b] : inst.graph.edges)
        edges.push_back({inst.graph.parts[a], inst.graph.parts[b]});
    j["edges"] = std::move(edges);
    ordered_json dets = ordered_json::array();
    for (const auto& d : inst.detections) {
        ordered_json jd;
        jd["id"] = d.id;
        jd["part"] = inst.graph.parts[d.part];
        if (d.x) jd["x"] = *d.x;
        if (d.y) jd["y"] = *d.y;
        jd["theta"] = d.theta;
        dets.push_back(std::move(jd));
    }
    j["detections"] = std::move(dets);
    ordered_json pw = ordered_json::array();
    for (const auto& e : inst.pairwise)
        pw.push_back({{"d1", e.d1}, {"d2", e.d2}, {"phi", e.phi}});
    j["pairwise"] = std::move(pw);
    j["omega"] = inst.omega;
    return j.dump(2) + "\n";
}

void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw JsonError("cannot write file: " + path);
    out << instance_to_json(inst);
}

std::string solution_to_json(const Instance& inst, const Solution& solution,
                             const SolveReport& report) {
    ordered_json j;
    j["objective"] = solution.objective;
    ordered_json poses = ordered_json::array();
    for (const auto& p : solution.poses) {
        ordered_json jp;
        ordered_json global = ordered_json::object();
        for (int d : p.pose.detections)
            global[inst.graph.parts[inst.detections[d].part]] = d;
        jp["global"] = std::move(global);
        ordered_json locals = ordered_json::array();
        for (const auto& l : p.locals)
            locals.push_back({{"anchor", l.anchor}, {"locals", l.locals}});
        jp["locals"] = std::move(locals);
        poses.push_back(std::move(jp));
    }
    j["poses"] = std::move(poses);
    j["false_positives"] = solution.false_positives;
    ordered_json r;
    r["lp_objective"] = report.lp_objective;
    r["ilp_objective"] = report.ilp_objective;
    r["columns_global"] = report.n_columns_global;
    r["columns_local"] = report.n_columns_local;
    r["triple_rows"] = report.n_triple_rows;
    r["iterations"] = report.n_iterations;
    r["lp_integral"] = report.lp_integral;
    r["bnb_nodes"] = report.bnb_nodes;
    r["ilp_certified"] = report.ilp_certified;
    j["report"] = std::move(r);
    return j.dump(2) + "\n";
}

void save_solution(const Instance& inst, const Solution& solution,
                   const SolveReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw JsonError("cannot write file: " + path);
    out << solution_to_json(inst, solution, report);
}

Solution load_solution(const Instance& inst, const std::string& path) {
    ordered_json j;
    try {
        j = ordered_json::parse(slurp(path));
    } catch (const JsonError&) {
        throw;
    } catch (const std::exception& e) {
        throw JsonError(std::string("solution parse error: ") + e.what());
    }
    Solution sol;
    try {
        sol.objective = j.at("objective").get<double>();
        for (const auto& jp : j.at("poses")) {
            PoseWithLocals p;
            for (auto it = jp.at("global").begin(); it != jp.at("global").end(); ++it)
                p.pose.detections.push_back(it.value().get<int>());
            std::sort(p.pose.detections.begin(), p.pose.detections.end());
            p.pose.cost_gamma = compute_gamma(inst, p.pose.detections);
            for (const auto& jl : jp.value("locals", ordered_json::array())) {
                LocalAssignmentColumn l;
                l.anchor = jl.at("anchor").get<int>();
                for (const auto& d : jl.at("locals")) l.locals.push_back(d.get<int>());
                std::sort(l.locals.begin(), l.locals.end());
                l.cost_psi = compute_psi(inst, l.anchor, l.locals);
                p.locals.push_back(std::move(l));
            }
            sol.poses.push_back(std::move(p));
        }
        for (const auto& d : j.value("false_positives", ordered_json::array()))
            sol.false_positives.push_back(d.get<int>());
    } catch (const MasterError& e) {
        throw JsonError(std::string("solution inconsistent with instance: ") + e.what());
    } catch (const JsonError&) {
        throw;
    } catch (const std::exception& e) {
        throw JsonError(std::string("solution schema error: ") + e.what());
    }
    return sol;
}

}    // namespace posecg
