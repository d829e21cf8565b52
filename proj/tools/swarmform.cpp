// Command-line front end: scenario generation, runs, trace verification and
// SVG rendering.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "swarm/io.hpp"
#include "swarm/render.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitParse = 2;
constexpr int kExitRejected = 3;
constexpr int kExitBudget = 4;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("SWARMFORM_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 1;
}

int exit_code_for(swarm::sim::RunStatus status) {
    switch (status) {
        case swarm::sim::RunStatus::Formed: return kExitOk;
        case swarm::sim::RunStatus::ActivationBudgetExceeded: return kExitBudget;
        case swarm::sim::RunStatus::ProtocolError: return kExitRejected;
    }
    return kExitRejected;
}

int cmd_generate(std::size_t n, std::uint64_t seed, const std::string& out,
                 const std::string& pattern_path) {
    swarm::sim::Scenario scenario;
    if (pattern_path.empty()) {
        scenario = swarm::io::generate_scenario(n, seed);
    } else {
        std::ifstream in(pattern_path);
        if (!in) {
            std::cerr << "cannot read " << pattern_path << "\n";
            return kExitParse;
        }
        std::stringstream buf;
        buf << in.rdbuf();
        const swarm::agreement::PatternSpec spec =
            swarm::agreement::parse_pattern_text(buf.str());
        scenario = swarm::io::generate_scenario_with_pattern(
            n, seed, spec.points.points);
    }
    swarm::io::save_scenario(out, scenario);
    std::cout << "wrote " << out << " (n=" << n << ", seed=" << seed << ")\n";
    return kExitOk;
}

int cmd_run(const std::string& path, std::uint64_t seed_override,
            bool have_seed, std::uint64_t budget_override, bool have_budget,
            const std::string& trace_out, const std::string& adversary,
            std::size_t starve_index, bool chord_mode) {
    swarm::sim::Scenario scenario;
    try {
        scenario = swarm::io::load_scenario(path);
    } catch (const std::exception& ex) {
        std::cerr << "parse error: " << ex.what() << "\n";
        return kExitParse;
    }
    if (have_seed) scenario.adversary.seed = seed_override;
    if (have_budget) scenario.budget = budget_override;
    if (!adversary.empty()) {
        if (adversary == "round_robin") {
            scenario.adversary.policy = swarm::sim::ActivationPolicy::RoundRobin;
        } else if (adversary == "random_fair") {
            scenario.adversary.policy = swarm::sim::ActivationPolicy::RandomFair;
        } else if (adversary == "starve_one") {
            scenario.adversary.policy = swarm::sim::ActivationPolicy::StarveOne;
            scenario.adversary.starve_index = starve_index;
        } else {
            std::cerr << "unknown adversary: " << adversary << "\n";
            return kExitParse;
        }
    }
    scenario.adversary.chord_mode = chord_mode;

    swarm::sim::Trace trace;
    swarm::sim::Outcome outcome;
    try {
        auto result = swarm::sim::run(scenario);
        trace = std::move(result.first);
        outcome = result.second;
    } catch (const std::exception& ex) {
        std::cerr << "rejected: " << ex.what() << "\n";
        return kExitRejected;
    }
    if (!trace_out.empty()) {
        swarm::io::save_trace(trace_out, scenario, trace);
    }

    const char* status = outcome.status == swarm::sim::RunStatus::Formed
                             ? "formed"
                             : outcome.status ==
                                       swarm::sim::RunStatus::
                                           ActivationBudgetExceeded
                                   ? "budget-exceeded"
                                   : "protocol-error";
    std::cout << "status: " << status << "\n"
              << "activations: " << outcome.activations_used << "\n"
              << "min pairwise distance: " << outcome.min_pairwise_distance
              << "\n"
              << "sec drift after I1: " << outcome.max_sec_drift_after_i1
              << "\n";
    if (!outcome.error.empty()) std::cout << "error: " << outcome.error << "\n";
    return exit_code_for(outcome.status);
}

int cmd_verify(const std::string& path) {
    swarm::io::TraceFile tf;
    try {
        tf = swarm::io::load_trace(path);
    } catch (const std::exception& ex) {
        std::cerr << "malformed trace: " << ex.what() << "\n";
        return kExitParse;
    }
    bool ok = true;

    const auto collisions = swarm::sim::check_collisions(tf.scenario, tf.trace, 64);
    const double r0 = swarm::geom::sec(tf.scenario.robots).radius;
    std::cout << (collisions.violation ? "FAIL" : "PASS")
              << " collision-freedom: min distance "
              << collisions.min_distance << " (threshold "
              << tf.scenario.tolerances.collide * r0 << ")\n";
    ok = ok && !collisions.violation;

    const auto drift = swarm::sim::check_sec_invariance(tf.scenario, tf.trace);
    if (drift.saw_i1) {
        const bool pass =
            drift.max_center_drift <= tf.scenario.tolerances.sec_drift &&
            drift.max_radius_drift <= tf.scenario.tolerances.sec_drift;
        std::cout << (pass ? "PASS" : "FAIL")
                  << " sec-invariance: center drift " << drift.max_center_drift
                  << ", radius drift " << drift.max_radius_drift << "\n";
        ok = ok && pass;
    } else {
        std::cout << "PASS sec-invariance: milestone I1 not reached in trace\n";
    }

    std::vector<swarm::geom::Point> final_positions = tf.scenario.robots;
    for (const auto& ev : tf.trace.events) {
        if (ev.kind == swarm::sim::EventKind::Moved) {
            final_positions[ev.robot] = ev.to;
        }
    }
    try {
        swarm::canon::Configuration robots{tf.scenario.robots};
        swarm::agreement::PatternSpec spec{
            swarm::canon::Configuration{tf.scenario.pattern}};
        auto [frame, placed] =
            swarm::agreement::agreement_coordinate_system(robots, spec);
        (void)frame;
        const bool matched = swarm::sim::match_pattern(
            final_positions, placed.points, tf.scenario.tolerances.match);
        std::cout << (matched ? "PASS" : "FAIL") << " pattern-match\n";
        ok = ok && matched;
    } catch (const std::exception& ex) {
        std::cout << "FAIL pattern-match: " << ex.what() << "\n";
        ok = false;
    }
    return ok ? kExitOk : kExitFail;
}

int cmd_render(const std::string& path, std::uint64_t every,
               const std::string& out_dir) {
    swarm::io::TraceFile tf;
    try {
        tf = swarm::io::load_trace(path);
    } catch (const std::exception& ex) {
        std::cerr << "malformed trace: " << ex.what() << "\n";
        return kExitParse;
    }
    try {
        const std::size_t frames = swarm::render::render_trace(tf, out_dir, every);
        std::cout << "wrote " << frames << " frames to " << out_dir << "\n";
    } catch (const std::exception& ex) {
        std::cerr << "render error: " << ex.what() << "\n";
        return kExitParse;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pattern formation for oblivious robot swarms"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("generate", "generate a random scenario");
    std::size_t gen_n = 5;
    std::uint64_t gen_seed = default_seed();
    std::string gen_out = "scenario.json";
    std::string gen_pattern;
    gen->add_option("--n", gen_n, "number of robots")->check(CLI::Range(3, 256));
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--out", gen_out, "output scenario file");
    gen->add_option("--pattern", gen_pattern,
                    "pattern file (one 'x y' point per line, # comments)");

    auto* runc = app.add_subcommand("run", "run a scenario");
    std::string run_path;
    std::uint64_t run_seed = 0;
    std::uint64_t run_budget = 0;
    std::string run_trace, run_adversary;
    std::size_t run_starve = 0;
    bool run_chord = false;
    runc->add_option("scenario", run_path, "scenario file")->required();
    auto* seed_opt = runc->add_option("--seed", run_seed, "adversary seed");
    auto* budget_opt = runc->add_option("--budget", run_budget,
                                        "activation budget");
    runc->add_option("--trace-out", run_trace, "write the trace here");
    runc->add_option("--adversary", run_adversary,
                     "round_robin | random_fair | starve_one");
    runc->add_option("--starve-index", run_starve, "victim for starve_one");
    runc->add_flag("--chord-mode", run_chord,
                   "execute arc moves as straight chords");

    auto* ver = app.add_subcommand("verify", "check a recorded trace");
    std::string ver_path;
    ver->add_option("trace", ver_path, "trace file")->required();

    auto* ren = app.add_subcommand("render", "render a trace to SVG frames");
    std::string ren_path, ren_out = "frames";
    std::uint64_t ren_every = 25;
    ren->add_option("trace", ren_path, "trace file")->required();
    ren->add_option("--every", ren_every, "activations per frame");
    ren->add_option("--out", ren_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            return cmd_generate(gen_n, gen_seed, gen_out, gen_pattern);
        }
        if (runc->parsed()) {
            return cmd_run(run_path, run_seed, seed_opt->count() > 0,
                           run_budget, budget_opt->count() > 0, run_trace,
                           run_adversary, run_starve, run_chord);
        }
        if (ver->parsed()) return cmd_verify(ver_path);
        if (ren->parsed()) return cmd_render(ren_path, ren_every, ren_out);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitFail;
    }
    return kExitOk;
}
