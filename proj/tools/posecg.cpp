#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "posecg/instance.hpp"
#include "posecg/json_io.hpp"
#include "posecg/oracle.hpp"
#include "posecg/render.hpp"
#include "posecg/solver.hpp"

namespace {

bool log_enabled() {
    const char* v = std::getenv("POSECG_LOG");
    return v != nullptr && std::string(v) != "" && std::string(v) != "none";
}

void log_line(const std::string& msg) {
    if (log_enabled()) std::cerr << "[posecg] " << msg << "\n";
}

posecg::Instance load_validated(const std::string& path, bool strict,
                                double* omega_override) {
    posecg::RawInstance raw = posecg::load_raw_instance(path, strict);
    if (omega_override) raw.omega = *omega_override;
    posecg::ValidationResult vr = posecg::validate_instance(raw);
    if (!vr.ok()) {
        std::cerr << "instance validation failed:\n";
        for (const auto& issue : vr.issues)
            std::cerr << "  " << posecg::issue_code_name(issue.code) << ": "
                      << issue.detail << "\n";
        std::exit(2);
    }
    return *vr.instance;
}

int cmd_solve(const std::string& path, const std::string& out_path,
              const posecg::SolverConfig& cfg, bool strict,
              std::optional<double> omega) {
    posecg::Instance inst;
    try {
        inst = load_validated(path, strict, omega ? &*omega : nullptr);
    } catch (const posecg::JsonError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    log_line("solving " + path + " with " +
             std::to_string(inst.num_detections()) + " detections");
    try {
        auto [sol, report] = posecg::solve(inst, cfg);
        std::string out = out_path;
        if (out.empty()) out = path + ".solution.json";
        posecg::save_solution(inst, sol, report, out);
        std::cout << "objective=" << sol.objective << " columns="
                  << report.n_columns_global << "+" << report.n_columns_local
                  << " rows=" << report.n_triple_rows << " iters="
                  << report.n_iterations << " integral="
                  << (report.lp_integral ? "true" : "false") << " time="
                  << report.wall_time << "\n";
        return report.ilp_certified ? 0 : 3;
    } catch (const posecg::IterationCapReached& e) {
        std::cerr << e.what() << "\n";
        return 3;
    }
}

int cmd_gen(const posecg::GenConfig& cfg, const std::string& out_path,
            bool stats) {
    posecg::Instance inst = posecg::generate_synthetic(cfg);
    posecg::save_instance(inst, out_path);
    if (stats) {
        for (int r = 0; r < inst.num_parts(); ++r)
            std::cout << inst.graph.parts[r] << ": "
                      << inst.dets_of_part(r).size() << "\n";
        std::cout << "total: " << inst.num_detections() << "\n";
    }
    log_line("wrote " + out_path);
    return 0;
}

int cmd_check(const std::string& path, bool force, bool wrong_omega,
              const posecg::SolverConfig& cfg) {
    posecg::Instance inst;
    try {
        inst = load_validated(path, false, nullptr);
    } catch (const posecg::JsonError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    if (inst.num_detections() > 8 && !force) {
        std::cerr << "check refuses instances with more than 8 detections "
                     "(|D|="
                  << inst.num_detections() << "); use --force to override\n";
        return 4;
    }
    posecg::Instance solver_inst = inst;
    if (wrong_omega) solver_inst.omega += 1.0;    // harness self-test hook
    auto [sol, report] = posecg::solve(solver_inst, cfg);
    posecg::oracle::BruteForceResult bf = posecg::oracle::brute_force_solve(inst);
    const double diff = std::abs(sol.objective - bf.objective);
    auto errors = posecg::check_solution(inst, sol);
    if (diff <= 1e-6 && errors.empty()) {
        std::cout << "PASS (" << sol.objective << " = " << bf.objective << ")\n";
        return 0;
    }
    std::cout << "FAIL solver=" << sol.objective << " oracle=" << bf.objective
              << "\n";
    for (const auto& e : errors) std::cout << "  invalid: " << e << "\n";
    return 1;
}

int cmd_render(const std::string& instance_path,
               const std::string& solution_path, const std::string& out_path) {
    try {
        posecg::Instance inst = load_validated(instance_path, false, nullptr);
        posecg::Solution sol = posecg::load_solution(inst, solution_path);
        std::string svg = posecg::render_svg(inst, sol);
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "cannot write " << out_path << "\n";
            return 2;
        }
        out << svg;
        return 0;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
}

}    // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-tier pose grouping solver (column generation)"};
    app.require_subcommand(1);

    posecg::SolverConfig cfg;
    std::optional<double> omega;
    bool strict = false;
    bool no_triples = false;

    auto add_solver_flags = [&](CLI::App* sub) {
        sub->add_option("--tol", cfg.tol, "pricing violation tolerance");
        sub->add_option("--max-iters", cfg.max_iterations,
                        "generation iteration cap");
        sub->add_flag("--no-triples", no_triples,
                      "disable odd-set-3 row generation");
        sub->add_option("--threads", cfg.threads, "pricing thread count");
    };

    // solve
    std::string solve_path, solve_out;
    auto* solve_cmd = app.add_subcommand("solve", "solve an instance file");
    solve_cmd->add_option("instance", solve_path, "instance JSON")->required();
    solve_cmd->add_option("-o,--out", solve_out, "solution output path");
    solve_cmd->add_option("--omega", omega, "override the pose-instancing cost");
    solve_cmd->add_flag("--strict", strict, "reject unknown JSON keys");
    add_solver_flags(solve_cmd);

    // gen
    posecg::GenConfig gen_cfg;
    std::string gen_out = "instance.json";
    bool gen_stats = false, gen_mini = false;
    auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic instance");
    gen_cmd->add_option("-o,--out", gen_out, "output path");
    gen_cmd->add_option("--seed", gen_cfg.seed, "random seed");
    gen_cmd->add_option("--people", gen_cfg.n_people, "number of people");
    gen_cmd->add_option("--dup", gen_cfg.dup_rate, "duplicate rate [0,1]");
    gen_cmd->add_option("--fp", gen_cfg.fp_rate, "false-positive rate [0,1]");
    gen_cmd->add_option("--max-per-part", gen_cfg.max_per_part,
                        "cap detections per part (<=15)");
    gen_cmd->add_option("--max-total", gen_cfg.max_total,
                        "cap total detections (0 = unlimited)");
    gen_cmd->add_flag("--mini", gen_mini, "use the 3-part mini body graph");
    gen_cmd->add_flag("--stats", gen_stats, "print per-part detection counts");

    // check
    std::string check_path;
    bool check_force = false, check_wrong_omega = false;
    auto* check_cmd =
        app.add_subcommand("check", "cross-check solve against the brute-force oracle");
    check_cmd->add_option("instance", check_path, "instance JSON")->required();
    check_cmd->add_flag("--force", check_force,
                        "check instances with more than 8 detections");
    check_cmd->add_flag("--wrong-omega", check_wrong_omega,
                        "inject an omega perturbation (harness self-test)");
    add_solver_flags(check_cmd);

    // render
    std::string render_inst, render_sol, render_out;
    auto* render_cmd = app.add_subcommand("render", "render a solution to SVG");
    render_cmd->add_option("instance", render_inst, "instance JSON")->required();
    render_cmd->add_option("solution", render_sol, "solution JSON")->required();
    render_cmd->add_option("out", render_out, "output SVG path")->required();

    CLI11_PARSE(app, argc, argv);
    cfg.enable_triples = !no_triples;

    if (solve_cmd->parsed())
        return cmd_solve(solve_path, solve_out, cfg, strict, omega);
    if (gen_cmd->parsed()) {
        if (gen_mini) gen_cfg.graph = posecg::mini_body_graph();
        return cmd_gen(gen_cfg, gen_out, gen_stats);
    }
    if (check_cmd->parsed())
        return cmd_check(check_path, check_force, check_wrong_omega, cfg);
    if (render_cmd->parsed())
        return cmd_render(render_inst, render_sol, render_out);
    return 1;
}
