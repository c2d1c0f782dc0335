#include "nmopso/cli.hpp"

#include "nmopso/engine.hpp"
#include "nmopso/errors.hpp"
#include "nmopso/metrics.hpp"
#include "nmopso/navdecode.hpp"
#include "nmopso/scenario.hpp"
#include "nmopso/terrain.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace nmopso::cli {

namespace {

struct WriteError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw WriteError("cannot open '" + path + "' for writing");
    }
    f << contents;
    f.close();
    if (!f) {
        throw WriteError("failed writing '" + path + "'");
    }
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// NMOPSO_THREADS, 0 = auto. Unset means a single evaluation thread.
std::size_t threads_from_env() {
    const char* raw = std::getenv("NMOPSO_THREADS");
    if (raw == nullptr || *raw == '\0') {
        return 1;
    }
    char* end = nullptr;
    const long v = std::strtol(raw, &end, 10);
    if (*end != '\0' || v < 0) {
        throw CLI::ValidationError("NMOPSO_THREADS", "must be a non-negative integer");
    }
    return static_cast<std::size_t>(v);
}

/// Flags shared by plan and compare, bound to a SwarmConfig.
struct SwarmFlags {
    SwarmConfig config;
    double delta = 0.0;

    void attach(CLI::App& cmd) {
        cmd.add_option("--pop", config.population, "Swarm size")->capture_default_str();
        cmd.add_option("--iters", config.max_iterations, "Iterations")->capture_default_str();
        cmd.add_option("--seed", config.seed, "Master random seed")->capture_default_str();
        cmd.add_option("--archive-cap", config.archive_capacity, "Repository capacity")
            ->capture_default_str();
        cmd.add_option("--grid-divisions", config.grid_divisions, "Hypergrid divisions M")
            ->capture_default_str();
        cmd.add_option("--kappa", config.kappa, "Crowd scaling coefficient")->capture_default_str();
        cmd.add_option("--delta", delta,
                       "Mutation coefficient (default: occupied cells after initialisation)");
        cmd.add_option("--mutation-prob", config.mutation_prob,
                       "Per-particle mutation probability per iteration")
            ->capture_default_str();
        cmd.add_option("--inertia", config.inertia, "Initial inertia weight")->capture_default_str();
        cmd.add_option("--damping", config.inertia_damping, "Inertia damping per iteration")
            ->capture_default_str();
        cmd.add_option("--c1", config.c1, "Cognitive coefficient")->capture_default_str();
        cmd.add_option("--c2", config.c2, "Social coefficient")->capture_default_str();
        cmd.add_option("--vmax-fraction", config.v_max_fraction,
                       "Velocity clamp as a fraction of each dimension's range")
            ->capture_default_str();
    }

    SwarmConfig resolve(const CLI::App& cmd) const {
        SwarmConfig c = config;
        if (cmd.count("--delta") > 0) {
            c.delta = delta;
        }
        c.threads = threads_from_env();
        return c;
    }
};

nlohmann::json config_json(const SwarmConfig& c) {
    nlohmann::json j = {{"population", c.population},
                        {"max_iterations", c.max_iterations},
                        {"inertia", c.inertia},
                        {"inertia_damping", c.inertia_damping},
                        {"c1", c.c1},
                        {"c2", c.c2},
                        {"grid_divisions", c.grid_divisions},
                        {"kappa", c.kappa},
                        {"mutation_prob", c.mutation_prob},
                        {"v_max_fraction", c.v_max_fraction},
                        {"archive_capacity", c.archive_capacity},
                        {"seed", c.seed},
                        {"disable_mutation", c.disable_mutation},
                        {"cartesian_encoding", c.cartesian_encoding}};
    j["delta"] = c.delta ? nlohmann::json(*c.delta) : nlohmann::json("auto");
    return j;
}

std::vector<ObjectiveVector> objectives_of(const RunResult& r) {
    std::vector<ObjectiveVector> v;
    for (const auto& m : r.pareto_front) {
        v.push_back(m.objectives);
    }
    return v;
}

int cmd_plan(const std::string& scenario_file, const SwarmConfig& config, const std::string& front_out,
             const std::string& paths_out, const std::string& stats_out,
             const std::string& manifest_out, const std::string& command_line, std::ostream& out,
             std::ostream& err) {
    Scenario scenario;
    try {
        scenario = load_scenario(scenario_file);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return data_error;
    }

    const std::string started = utc_now();
    Engine engine(scenario, config);
    const RunResult result = engine.run();
    for (const auto& w : result.warnings) {
        err << "warning: " << w << '\n';
    }

    write_file(front_out, export_front_csv(result));
    write_file(paths_out, export_paths_json(result));
    std::vector<std::string> artifacts = {front_out, paths_out};
    if (!result.pareto_front.empty()) {
        const auto objs = objectives_of(result);
        write_file(stats_out, export_stats_csv(front_stats(objs, config.grid_divisions, config.kappa)));
        artifacts.push_back(stats_out);
    }

    if (!manifest_out.empty()) {
        nlohmann::json m = {{"command_line", command_line},
                            {"scenario", scenario_file},
                            {"config", config_json(config)},
                            {"seed", config.seed},
                            {"resolved_delta", engine.delta() ? nlohmann::json(*engine.delta())
                                                              : nlohmann::json(nullptr)},
                            {"started_utc", started},
                            {"finished_utc", utc_now()},
                            {"wall_time_s", result.wall_time},
                            {"iterations_run", result.iterations_run},
                            {"front_size", result.pareto_front.size()},
                            {"mutations", result.mutation_count},
                            {"artifacts", artifacts}};
        write_file(manifest_out, m.dump(2) + "\n");
    }

    if (result.pareto_front.empty()) {
        err << "no feasible solution found after " << result.iterations_run << " iterations\n";
        return empty_front;
    }
    out << "front size " << result.pareto_front.size() << ", iterations " << result.iterations_run
        << ", " << format_number(result.wall_time) << " s\n";
    return ok;
}

int cmd_evaluate(const std::string& scenario_file, const std::string& path_file, std::ostream& out,
                 std::ostream& err) {
    Scenario scenario;
    CartesianPath path;
    try {
        scenario = load_scenario(scenario_file);
        path = parse_path_text(read_text(path_file));
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return data_error;
    }
    const ObjectiveVector v = evaluate_all(path, scenario);
    for (std::size_t i = 0; i < kNumObjectives; ++i) {
        out << 'f' << (i + 1) << ' ' << format_number(v[i]) << '\n';
    }
    try {
        const KinematicReport report = validate_kinematics(path, scenario.limits);
        out << "kinematics " << (report.overall_pass ? "pass" : "fail") << '\n';
        for (std::size_t j = 0; j < report.joints.size(); ++j) {
            const auto& joint = report.joints[j];
            out << "joint " << (j + 1) << " climb " << format_number(joint.delta_climb) << " turn "
                << format_number(joint.delta_turn) << ' ' << (joint.within_limits ? "ok" : "violation")
                << (j + 1 == report.joints.size() ? " (goal joint)" : "") << '\n';
        }
    } catch (const ValidationError& e) {
        out << "kinematics unavailable: " << e.what() << '\n';
    }
    return v.feasible() ? ok : infeasible_path;
}

struct Aggregate {
    std::size_t runs = 0;
    std::array<ObjectiveStats, kNumObjectives> sums{};
    std::vector<double> s_d;
};

int cmd_compare(const std::string& scenario_file, const std::vector<std::string>& algos,
                std::size_t runs, const SwarmConfig& base, const std::string& out_file,
                std::ostream& out, std::ostream& err) {
    static const std::vector<std::string> known = {"nmopso", "nmopso-nomut", "nmopso-cartesian",
                                                   "wpso"};
    for (const auto& a : algos) {
        if (std::find(known.begin(), known.end(), a) == known.end()) {
            err << "error: unknown algorithm '" << a << "' (expected nmopso, nmopso-nomut, "
                                                        "nmopso-cartesian or wpso)\n";
            return usage;
        }
    }
    Scenario scenario;
    try {
        scenario = load_scenario(scenario_file);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return data_error;
    }

    std::ostringstream table;
    table << "algorithm,runs,metric,max,min,mean,std\n";
    for (const auto& algo : algos) {
        Aggregate agg;
        for (std::size_t k = 0; k < runs; ++k) {
            SwarmConfig c = base;
            c.seed = base.seed + k;
            c.disable_mutation = algo == "nmopso-nomut";
            c.cartesian_encoding = algo == "nmopso-cartesian";
            std::vector<ObjectiveVector> front;
            if (algo == "wpso") {
                const auto r = run_weighted_pso(scenario, c, WeightVector{});
                if (r.objectives.feasible()) {
                    front.push_back(r.objectives);
                }
            } else {
                front = objectives_of(run_nmopso(scenario, c));
            }
            if (front.empty()) {
                continue;
            }
            const FrontStats s = front_stats(front, c.grid_divisions, c.kappa);
            ++agg.runs;
            for (std::size_t i = 0; i < kNumObjectives; ++i) {
                agg.sums[i].max += s.objectives[i].max;
                agg.sums[i].min += s.objectives[i].min;
                agg.sums[i].mean += s.objectives[i].mean;
                agg.sums[i].std += s.objectives[i].std;
            }
            agg.s_d.push_back(s.s_d);
        }
        if (agg.runs == 0) {
            table << algo << ",0,none,,,,\n";
            continue;
        }
        const double n = static_cast<double>(agg.runs);
        for (std::size_t i = 0; i < kNumObjectives; ++i) {
            const auto& s = agg.sums[i];
            table << algo << ',' << agg.runs << ",f" << (i + 1) << ',' << format_number(s.max / n)
                  << ',' << format_number(s.min / n) << ',' << format_number(s.mean / n) << ','
                  << format_number(s.std / n) << '\n';
        }
        double lo = agg.s_d.front();
        double hi = lo;
        double sum = 0.0;
        for (double v : agg.s_d) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            sum += v;
        }
        const double mean = sum / n;
        double sq = 0.0;
        for (double v : agg.s_d) {
            sq += (v - mean) * (v - mean);
        }
        table << algo << ',' << agg.runs << ",s_d," << format_number(hi) << ',' << format_number(lo)
              << ',' << format_number(mean) << ',' << format_number(std::sqrt(sq / n)) << '\n';
    }

    if (out_file.empty()) {
        out << table.str();
    } else {
        write_file(out_file, table.str());
    }
    return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multi-objective UAV path planner (navigation-variable MOPSO)", "nmopso"};
    app.require_subcommand(1);

    std::string command_line;
    for (std::size_t i = 0; i < args.size(); ++i) {
        command_line += (i ? " " : "") + args[i];
    }

    // plan
    auto* plan = app.add_subcommand("plan", "Run the planner and export the Pareto front");
    std::string plan_scenario;
    std::string front_out = "front.csv";
    std::string paths_out = "paths.json";
    std::string stats_out = "stats.csv";
    std::string manifest_out;
    SwarmFlags plan_flags;
    plan->add_option("--scenario", plan_scenario, "Scenario JSON file")->required();
    plan_flags.attach(*plan);
    plan->add_option("--out", front_out, "Front CSV output")->capture_default_str();
    plan->add_option("--paths", paths_out, "Paths JSON output")->capture_default_str();
    plan->add_option("--stats", stats_out, "Front statistics CSV output")->capture_default_str();
    plan->add_option("--manifest", manifest_out, "Write a run manifest JSON here");
    plan->add_flag("--no-mutation", plan_flags.config.disable_mutation, "Disable region-based mutation");
    plan->add_flag("--cartesian", plan_flags.config.cartesian_encoding,
                   "Search raw waypoint coordinates instead of navigation variables");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Score a waypoint file against a scenario");
    std::string eval_scenario;
    std::string eval_path;
    evaluate->add_option("--scenario", eval_scenario, "Scenario JSON file")->required();
    evaluate->add_option("--path", eval_path, "Waypoint file, one 'x y z' per line")->required();

    // compare
    auto* compare = app.add_subcommand("compare", "Run several algorithms over a seed range");
    std::string cmp_scenario;
    std::vector<std::string> algos = {"nmopso", "wpso"};
    std::size_t runs = 10;
    std::string cmp_out;
    SwarmFlags cmp_flags;
    compare->add_option("--scenario", cmp_scenario, "Scenario JSON file")->required();
    compare->add_option("--algos", algos, "Comma-separated: nmopso,nmopso-nomut,nmopso-cartesian,wpso")
        ->delimiter(',')
        ->capture_default_str();
    compare->add_option("--runs", runs, "Runs per algorithm")->capture_default_str()->check(
        CLI::PositiveNumber);
    cmp_flags.attach(*compare);
    compare->add_option("--out", cmp_out, "Table CSV output (default: stdout)");

    // terrain-gen
    auto* tgen = app.add_subcommand("terrain-gen", "Write a synthetic terrain raster");
    TerrainGenParams gen;
    std::string tgen_out;
    tgen->add_option("--width", gen.width, "Columns")->capture_default_str();
    tgen->add_option("--height", gen.height, "Rows")->capture_default_str();
    tgen->add_option("--cellsize", gen.cellsize, "Cell size, meters")->capture_default_str();
    tgen->add_option("--roughness", gen.roughness, "Relief in [0, 1]")->capture_default_str();
    tgen->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
    tgen->add_option("--origin-x", gen.origin_x, "Lower-left x")->capture_default_str();
    tgen->add_option("--origin-y", gen.origin_y, "Lower-left y")->capture_default_str();
    tgen->add_option("--out", tgen_out, "Output terrain file")->required();

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (*plan) {
            return cmd_plan(plan_scenario, plan_flags.resolve(*plan), front_out, paths_out, stats_out,
                            manifest_out, command_line, out, err);
        }
        if (*evaluate) {
            return cmd_evaluate(eval_scenario, eval_path, out, err);
        }
        if (*compare) {
            return cmd_compare(cmp_scenario, algos, runs, cmp_flags.resolve(*compare), cmp_out, out,
                               err);
        }
        if (*tgen) {
            TerrainGrid grid = [&] {
                try {
                    return generate_terrain(gen);
                } catch (const ValidationError& e) {
                    throw CLI::ValidationError("terrain-gen", e.what());
                }
            }();
            write_file(tgen_out, serialize_terrain(grid));
            return ok;
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    } catch (const WriteError& e) {
        err << "error: " << e.what() << '\n';
        return cannot_write;
    } catch (const ValidationError& e) {
        // Swarm settings rejected by the engine.
        err << "error: " << e.what() << '\n';
        return usage;
    }
    return usage;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace nmopso::cli
