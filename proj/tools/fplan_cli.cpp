#include <cmath>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "fplan/initialize.hpp"
#include "fplan/io.hpp"
#include "fplan/solver.hpp"

namespace {

struct SolveFlags {
    std::string instance_path;
    std::string mode = "basic";
    std::string out_path;
    std::string svg_path;
    fplan::SolverConfig config;
    bool lambda_init_set = false;
    bool gamma_init_set = false;
    bool gamma_growth_set = false;
};

void add_solver_flags(CLI::App* cmd, SolveFlags& f) {
    cmd->add_option("instance", f.instance_path, "instance file")->required();
    cmd->add_option("--mode", f.mode, "basic | io")
        ->check(CLI::IsMember({"basic", "io"}))
        ->capture_default_str();
    cmd->add_option("--seed", f.config.seed, "RNG seed")->capture_default_str();
    cmd->add_option("--lambda-min", f.config.sm.lambda_min, "minimum perturbation length")
        ->capture_default_str();
    cmd->add_option("--lambda-init", f.config.sm.lambda_init,
                    "initial perturbation length (default 321 basic, 488 io)")
        ->each([&](const std::string&) { f.lambda_init_set = true; });
    cmd->add_option("--Lambda", f.config.sm.decay, "perturbation decay factor in (0,1)")
        ->capture_default_str();
    cmd->add_option("--gamma-init", f.config.gamma_init,
                    "initial projection relaxation (default 0.7804 basic, 0.7761 io)")
        ->each([&](const std::string&) { f.gamma_init_set = true; });
    cmd->add_option("--Gamma", f.config.gamma_growth,
                    "projection progress factor > 1 (default 1.1 basic, 1.0001 io)")
        ->each([&](const std::string&) { f.gamma_growth_set = true; });
    cmd->add_option("--eps-post", f.config.eps_post, "post-phase decay-index reset fraction")
        ->capture_default_str();
    cmd->add_option("--eps-pref", f.config.eps_pref_rel,
                    "preference softmax temperature, fraction of the die diagonal")
        ->capture_default_str();
    cmd->add_option("--T", f.config.reset_threshold, "resetting-strategy threshold")
        ->capture_default_str();
    cmd->add_option("--num-perturb", f.config.sm.num_perturbations,
                    "perturbations per iteration")
        ->capture_default_str();
    cmd->add_option("--stop-threshold", f.config.stop_threshold,
                    "relative overlap area target")
        ->capture_default_str();
    cmd->add_option("--max-iter", f.config.max_iterations, "outer iteration cap")
        ->capture_default_str();
}

void apply_mode_defaults(SolveFlags& f) {
    f.config.io_assignment = f.mode == "io";
    if (f.config.io_assignment) {
        if (!f.lambda_init_set) f.config.sm.lambda_init = 488.0;
        if (!f.gamma_init_set) f.config.gamma_init = 0.7761;
        if (!f.gamma_growth_set) f.config.gamma_growth = 1.0001;
    }
}

int finish(const fplan::Instance& inst, const fplan::SolveResult& result,
           const SolveFlags& f) {
    if (!f.out_path.empty()) fplan::save_text(f.out_path, fplan::write_result(result));
    if (!f.svg_path.empty())
        fplan::save_text(f.svg_path, fplan::render_svg(inst, result.placement));
    std::printf("hpwl %.6f overlap %.3e iterations %ld feasible %s\n", result.hpwl,
                result.overlap, result.iterations, result.feasible ? "yes" : "no");
    return result.feasible ? 0 : 2;
}

int run_solve(SolveFlags& f) {
    apply_mode_defaults(f);
    fplan::Instance inst = fplan::load_instance(f.instance_path);
    fplan::SolveResult result = fplan::solve(inst, f.config);
    return finish(inst, result, f);
}

int run_compare(SolveFlags& f) {
    apply_mode_defaults(f);
    fplan::Instance inst = fplan::load_instance(f.instance_path);
    fplan::InitConfig ic;
    ic.area_quantile = f.config.key_area_quantile;
    fplan::Placement init = fplan::initialize(inst, ic);

    fplan::MapRunResult map = fplan::map_solve(inst, init, f.config);
    fplan::SolveResult rmap = fplan::per_rmap_solve(inst, init, f.config);

    std::printf("%-8s %10s %12s %14s\n", "method", "runtime", "iterations", "relative-oa");
    std::printf("%-8s %10.3f %12ld %13.4f%%\n", "map", map.seconds, map.iterations,
                100.0 * map.overlap);
    std::printf("%-8s %10.3f %12ld %13.4f%%\n", "rmap", rmap.global_seconds, rmap.iterations,
                100.0 * rmap.overlap);
    return 0;
}

int run_init(SolveFlags& f) {
    apply_mode_defaults(f);
    fplan::Instance inst = fplan::load_instance(f.instance_path);
    fplan::InitConfig ic;
    ic.area_quantile = f.config.key_area_quantile;
    fplan::SolveResult result;
    result.config = f.config;
    result.placement = fplan::initialize(inst, ic);
    result.hpwl = fplan::hpwl_total(inst, result.placement);
    result.overlap = fplan::relative_overlap_area(inst, result.placement);
    result.feasible =
        fplan::check_feasible(inst, result.placement, 1e-6 * inst.die.diagonal());
    if (!f.out_path.empty()) fplan::save_text(f.out_path, fplan::write_result(result));
    if (!f.svg_path.empty())
        fplan::save_text(f.svg_path, fplan::render_svg(inst, result.placement));
    std::printf("hpwl %.6f overlap %.3e\n", result.hpwl, result.overlap);
    return 0;
}

bool matches(double stored, double computed) {
    double scale = std::max({std::fabs(stored), std::fabs(computed), 1.0});
    return std::fabs(stored - computed) <= 1e-9 * scale;
}

int run_check(const std::string& instance_path, const std::string& result_path) {
    fplan::Instance inst = fplan::load_instance(instance_path);
    fplan::SolveResult result = fplan::load_result(result_path);
    if (result.placement.z.size() != 2 * static_cast<size_t>(inst.num_entities())) {
        std::fprintf(stderr, "coordinate count %zu does not match instance (expected %d)\n",
                     result.placement.z.size(), 2 * inst.num_entities());
        return 3;
    }
    double hp = fplan::hpwl_total(inst, result.placement);
    double ov = fplan::relative_overlap_area(inst, result.placement);
    bool feas = fplan::check_feasible(inst, result.placement, 1e-6 * inst.die.diagonal());
    int rc = 0;
    if (!matches(result.hpwl, hp)) {
        std::fprintf(stderr, "hpwl mismatch: stored %.17g recomputed %.17g\n", result.hpwl, hp);
        rc = 3;
    }
    if (!matches(result.overlap, ov)) {
        std::fprintf(stderr, "overlap mismatch: stored %.17g recomputed %.17g\n",
                     result.overlap, ov);
        rc = 3;
    }
    if (result.feasible != feas) {
        std::fprintf(stderr, "feasible flag mismatch: stored %d recomputed %d\n",
                     result.feasible, feas);
        rc = 3;
    }
    if (rc == 0) std::printf("ok\n");
    return rc;
}

int run_render(const std::string& instance_path, const std::string& result_path,
               const std::string& out_path) {
    fplan::Instance inst = fplan::load_instance(instance_path);
    fplan::SolveResult result = fplan::load_result(result_path);
    fplan::save_text(out_path, fplan::render_svg(inst, result.placement));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fixed-outline floorplanner: feasibility-seeking projections with "
                 "wirelength superiorization"};
    app.require_subcommand(1);

    SolveFlags solve_flags, compare_flags, init_flags;
    std::string check_instance, check_result;
    std::string render_instance, render_result, render_out;

    CLI::App* solve = app.add_subcommand("solve", "run the full three-phase solver");
    add_solver_flags(solve, solve_flags);
    solve->add_option("--out", solve_flags.out_path, "write the result file here");
    solve->add_option("--svg", solve_flags.svg_path, "render the final placement here");

    CLI::App* compare =
        app.add_subcommand("compare", "plain alternating projection vs. the resettable sweep");
    add_solver_flags(compare, compare_flags);

    CLI::App* init = app.add_subcommand("init", "initialization phase only");
    add_solver_flags(init, init_flags);
    init->add_option("--out", init_flags.out_path, "write the result file here");
    init->add_option("--svg", init_flags.svg_path, "render the initial placement here");

    CLI::App* check = app.add_subcommand("check", "re-verify a stored result");
    check->add_option("instance", check_instance, "instance file")->required();
    check->add_option("result", check_result, "result file")->required();

    CLI::App* render = app.add_subcommand("render", "render a stored result as SVG");
    render->add_option("instance", render_instance, "instance file")->required();
    render->add_option("result", render_result, "result file")->required();
    render->add_option("out", render_out, "output SVG path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return run_solve(solve_flags);
        if (compare->parsed()) return run_compare(compare_flags);
        if (init->parsed()) return run_init(init_flags);
        if (check->parsed()) return run_check(check_instance, check_result);
        if (render->parsed()) return run_render(render_instance, render_result, render_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
