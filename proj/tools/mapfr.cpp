#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "mapfr/demos.hpp"
#include "mapfr/generate.hpp"
#include "mapfr/scenario_io.hpp"

#ifndef MAPFR_DATA_DIR
#define MAPFR_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using namespace mapfr;

namespace {

enum Exit { kOk = 0, kUsage = 1, kBudget = 2, kInfeasible = 3, kConflicts = 4, kDemoFailed = 5 };

/// Anything the user can fix by pointing at a different file.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Instance read_instance(const fs::path& path) {
    Instance inst;
    try {
        inst = load_scenario(path);
    } catch (const std::exception& e) {
        throw UsageError(path.string() + ": " + e.what());
    }
    const auto problems = validate_instance(inst);
    if (!problems.empty()) throw UsageError(path.string() + ": " + problems.front());
    return inst;
}

std::string digest(const Instance& inst) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the canonical text
    for (unsigned char c : format_scenario(inst)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

std::string agent_table(const Instance& inst, const Solution& sol) {
    std::ostringstream out;
    out << pad("agent", 10) << pad("start", 10) << pad("goal", 10) << pad("arrival", 16) << "motions\n";
    for (const Plan& p : sol.plans) {
        const Agent& a = inst.agents[p.agent];
        out << pad(a.name, 10) << pad(inst.vertices[a.start].name, 10) << pad(inst.vertices[a.goal].name, 10)
            << pad(format_number(p.completion_time()), 16) << p.motions.size() << "\n";
    }
    return out.str();
}

/// Up to eleven evenly spaced samples of the per-expansion lower bound.
std::string trace_samples(const SearchStats& s) {
    std::ostringstream out;
    const auto& lb = s.lower_bounds;
    if (lb.empty()) return "-";
    const std::size_t n = lb.size();
    for (std::size_t k = 0; k <= 10; ++k) {
        const std::size_t i = std::min(n - 1, k * (n - 1) / 10);
        if (k > 0 && i == std::min(n - 1, (k - 1) * (n - 1) / 10)) continue;
        out << (k ? " " : "") << "#" << i + 1 << "=" << format_number(lb[i]);
    }
    return out.str();
}

struct SolveJob {
    fs::path scenario;
    fs::path output;
    std::optional<fs::path> trace;
};

struct SolveResult {
    int code = kOk;
    std::string report;
    std::string error;
};

SolveResult run_solve(const SolveJob& job, const SolverOptions& base) {
    SolveResult r;
    try {
        const Instance inst = read_instance(job.scenario);
        SolverOptions options = base;
        std::ofstream trace;
        if (job.trace) {
            trace.open(*job.trace);
            if (!trace) throw UsageError("cannot write '" + job.trace->string() + "'");
            options.trace = &trace;
        }
        const SearchOutcome out = solve(inst, options);
        const SearchStats& s = out.stats;

        std::ostringstream rep;
        rep << "scenario " << job.scenario.filename().string() << "\n";
        rep << "digest " << digest(inst) << "\n";
        rep << "mode " << to_string(options.mode);
        if (options.mode == SplitMode::DiscreteTime) rep << " unit=" << format_number(options.unit);
        if (options.mode == SplitMode::Shifting) rep << " delta=" << options.delta.to_string();
        rep << "\n";
        rep << "status " << to_string(out.status) << "\n";
        rep << (out.status == SearchStatus::Solved ? "cost " : "lower-bound ") << format_number(out.g) << "\n";
        rep << "expansions " << s.expansions << " generated " << s.generated << " pruned " << s.pruned_children
            << " frontier " << out.frontier << "\n";
        rep << "monotonicity-checks " << s.monotonicity_checks << " violations 0\n";
        rep << "root-g " << format_number(s.root_g) << " max-lower-bound " << format_number(s.max_lower_bound())
            << " rise " << format_number(s.max_lower_bound() - s.root_g) << "\n";
        rep << "lower-bound-trace " << trace_samples(s) << "\n";
        if (options.mode == SplitMode::Shifting)
            rep << "shift-audit splits " << out.shift_audit.splits << " residual " << out.shift_audit.residual
                << " zero-delta " << out.shift_audit.zero_delta << "\n";
        if (out.solution) {
            rep << "\n" << agent_table(inst, *out.solution) << "\n";
            const std::string block = format_solution(inst, *out.solution);
            rep << "--- solution ---\n" << block << "--- end ---\n";
            save_text(job.output, block);
            rep << "written " << job.output.string() << "\n";
        }
        r.report = rep.str();
        r.code = out.status == SearchStatus::Solved ? kOk : out.status == SearchStatus::BudgetExhausted ? kBudget
                                                                                                        : kInfeasible;
    } catch (const MonotonicityViolation& e) {
        r.code = kUsage;
        r.error = job.scenario.string() + ": cost monotonicity violated: " + e.what();
    } catch (const std::exception& e) {
        r.code = kUsage;
        r.error = e.what();
    }
    return r;
}

/// Lower is better except that errors dominate everything.
int combine(int a, int b) {
    if (a == kUsage || b == kUsage) return kUsage;
    return std::max(a, b);
}

SolverOptions solver_options(const std::string& mode, double unit, const std::string& delta, std::size_t budget,
                             double timeout) {
    SolverOptions o;
    const auto m = parse_split_mode(mode);
    if (!m) throw UsageError("unknown mode '" + mode + "'");
    const auto d = DeltaRule::parse(delta);
    if (!d) throw UsageError("bad delta rule '" + delta + "'");
    if (!(unit > 0.0)) throw UsageError("unit must be positive");
    o.mode = *m;
    o.unit = unit;
    o.delta = *d;
    o.max_expansions = budget;
    o.max_seconds = timeout;
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Continuous-time multi-agent path finding lab"};
    app.require_subcommand(1);

    std::string mode = "vertex-range", delta = "half";
    double unit = 1.0, timeout = 60.0;
    std::size_t budget = 100'000;
    auto add_solver_flags = [&](CLI::App* cmd) {
        cmd->add_option("--mode", mode, "motion | vertex-range | shifting | dt")->capture_default_str();
        cmd->add_option("--unit", unit, "unit wait duration for dt mode")->capture_default_str();
        cmd->add_option("--delta-rule", delta, "half | zero | fixed:<x>")->capture_default_str();
        cmd->add_option("--budget", budget, "maximum constraint-tree expansions")->capture_default_str();
        cmd->add_option("--timeout", timeout, "wall-clock limit in seconds")->capture_default_str();
    };

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "Run the constraint-tree search on scenario files");
    std::vector<fs::path> scenarios;
    std::optional<fs::path> output, trace;
    fs::path out_dir = ".";
    unsigned jobs = 1;
    add_solver_flags(solve_cmd);
    solve_cmd->add_option("scenarios", scenarios, "scenario files")->required();
    solve_cmd->add_option("-o,--output", output, "solution path (single scenario only)");
    solve_cmd->add_option("--out-dir", out_dir, "directory for <stem>.<mode>.sol files")->capture_default_str();
    solve_cmd->add_option("--trace", trace, "per-expansion trace file (single scenario only)");
    solve_cmd->add_option("--jobs", jobs, "scenarios solved concurrently")->check(CLI::Range(1u, 256u));

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "Check a solution for structure and collisions");
    fs::path scenario, solution;
    validate_cmd->add_option("scenario", scenario)->required();
    validate_cmd->add_option("solution", solution)->required();

    // classify
    auto* classify_cmd = app.add_subcommand("classify", "Report whether a scenario is non-overlapping");
    classify_cmd->add_option("scenario", scenario)->required();

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive joint search over unit-wait plans");
    double bound = 0.0;
    oracle_cmd->add_option("scenario", scenario)->required();
    oracle_cmd->add_option("--unit", unit)->capture_default_str();
    oracle_cmd->add_option("--bound", bound, "largest SIC to consider")->required();

    // generate
    auto* generate_cmd = app.add_subcommand("generate", "Write a random scenario");
    std::uint64_t seed = 1;
    generate_cmd->add_option("--seed", seed)->capture_default_str();
    generate_cmd->add_option("-o,--output", output, "scenario path (stdout when omitted)");

    // demo
    auto* demo_cmd = app.add_subcommand("demo", "Exhibit a known failure mode and check its signature");
    std::string demo_name;
    std::optional<fs::path> demo_scenario, demo_solution;
    std::optional<std::size_t> demo_budget;
    fs::path data_dir = MAPFR_DATA_DIR;
    demo_cmd->add_option("name", demo_name)
        ->required()
        ->check(CLI::IsMember({"fig2-unsound", "nontermination", "shifting", "counterexample"}));
    demo_cmd->add_option("--scenario", demo_scenario, "override the bundled fixture");
    demo_cmd->add_option("--solution", demo_solution, "override the handcrafted solution (counterexample)");
    demo_cmd->add_option("--budget", demo_budget, "expansion budget");
    demo_cmd->add_option("--delta-rule", delta, "shifting demo only")->capture_default_str();
    demo_cmd->add_option("--data", data_dir, "fixture directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*solve_cmd) {
            if (scenarios.size() > 1 && (output || trace))
                throw UsageError("--output and --trace take a single scenario");
            const SolverOptions options = solver_options(mode, unit, delta, budget, timeout);
            std::vector<SolveJob> work;
            for (const fs::path& p : scenarios) {
                const fs::path target = output ? *output : out_dir / (p.stem().string() + "." + mode + ".sol");
                work.push_back({p, target, trace});
            }
            std::vector<SolveResult> results(work.size());
            std::atomic<std::size_t> next{0};
            auto worker = [&] {
                for (std::size_t i; (i = next++) < work.size();) results[i] = run_solve(work[i], options);
            };
            std::vector<std::thread> pool;
            for (unsigned t = 1; t < std::min<std::size_t>(jobs, work.size()); ++t) pool.emplace_back(worker);
            worker();
            for (auto& t : pool) t.join();

            int code = kOk;
            for (std::size_t i = 0; i < results.size(); ++i) {
                if (i) std::cout << "\n";
                std::cout << results[i].report;
                if (!results[i].error.empty()) std::cerr << "error: " << results[i].error << "\n";
                code = i ? combine(code, results[i].code) : results[i].code;
            }
            return code;
        }

        if (*validate_cmd) {
            const Instance inst = read_instance(scenario);
            Solution sol;
            std::vector<Conflict> conflicts;
            try {
                sol = load_solution(solution, inst);
                conflicts = validate_solution(inst, sol);
            } catch (const std::exception& e) {
                std::cerr << "error: " << solution.string() << ": " << e.what() << "\n";
                return kUsage;
            }
            for (const Conflict& c : conflicts) {
                auto show = [&](const TimedMotion& m) {
                    std::ostringstream s;
                    if (m.is_wait()) s << "wait " << inst.vertices[m.from].name;
                    else s << "move " << inst.vertices[m.from].name << "->" << inst.vertices[m.to].name;
                    s << " @" << format_number(m.start);
                    return s.str();
                };
                std::cout << "conflict " << inst.agents[c.agent_i].name << " " << show(c.motion_i) << " | "
                          << inst.agents[c.agent_j].name << " " << show(c.motion_j) << " during "
                          << c.interval.to_string() << "\n";
            }
            std::cout << conflicts.size() << " conflicts, SIC=" << format_number(sic(sol)) << "\n";
            return conflicts.empty() ? kOk : kConflicts;
        }

        if (*classify_cmd) {
            const Instance inst = read_instance(scenario);
            const Classification c = classify(inst);
            std::cout << "class " << (c.non_overlapping ? "non-overlapping" : "overlapping") << "\n";
            for (const auto& w : c.edge_witnesses) {
                const Edge& e = inst.edges[w.edge];
                std::cout << "vertex " << inst.vertices[w.vertex].name << " blocks edge " << inst.vertices[e.u].name
                          << "-" << inst.vertices[e.v].name << "\n";
            }
            for (const auto& w : c.vertex_witnesses)
                std::cout << "vertices " << inst.vertices[w.first].name << " " << inst.vertices[w.second].name
                          << " closer than 2r\n";
            return kOk;
        }

        if (*oracle_cmd) {
            const Instance inst = read_instance(scenario);
            std::optional<Solution> sol;
            try {
                sol = oracle_dt(inst, unit, bound);
            } catch (const OracleRefused& e) {
                throw UsageError(scenario.string() + ": " + e.what());
            }
            if (!sol) {
                std::cout << "no solution with SIC <= " << format_number(bound) << "\n";
                return kInfeasible;
            }
            std::cout << "SIC=" << format_number(sic(*sol)) << "\n" << format_solution(inst, *sol);
            return kOk;
        }

        if (*generate_cmd) {
            const std::string text = format_scenario(random_instance(seed));
            if (output) save_text(*output, text);
            else std::cout << text;
            return kOk;
        }

        if (*demo_cmd) {
            const bool counter = demo_name == "counterexample";
            const fs::path fixture =
                demo_scenario ? *demo_scenario : data_dir / (counter ? "counterexample.scn" : "fig2.scn");
            const Instance inst = read_instance(fixture);
            DemoReport report;
            if (demo_name == "fig2-unsound") {
                report = demo_fig2_unsound(inst);
            } else if (demo_name == "nontermination") {
                report = demo_nontermination(inst, demo_budget.value_or(10'000));
            } else if (demo_name == "shifting") {
                const auto rule = DeltaRule::parse(delta);
                if (!rule) throw UsageError("bad delta rule '" + delta + "'");
                report = demo_shifting(inst, *rule, demo_budget.value_or(5'000));
            } else {
                const fs::path sol_path =
                    demo_solution ? *demo_solution : data_dir / "counterexample.handcrafted.sol";
                Solution handcrafted;
                try {
                    handcrafted = load_solution(sol_path, inst);
                } catch (const std::exception& e) {
                    throw UsageError(sol_path.string() + ": " + e.what());
                }
                report = demo_counterexample(inst, handcrafted);
            }
            std::cout << "digest " << digest(inst) << "\n" << report.render();
            return report.pass ? kOk : kDemoFailed;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
