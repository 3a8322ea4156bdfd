#include "mapfr/demos.hpp"

#include <algorithm>
#include <sstream>

#include "mapfr/scenario_io.hpp"

namespace mapfr {

std::string DemoReport::render() const {
    std::ostringstream out;
    out << "demo " << name << "\n";
    out << "claim: " << claim << "\n";
    for (const std::string& l : lines) out << "  " << l << "\n";
    out << "verdict: " << verdict() << "\n";
    return out.str();
}

namespace {

Solution root_solution(const Instance& inst) {
    Solution sol;
    for (AgentId a = 0; a < inst.agents.size(); ++a) {
        auto p = plan_path(inst, a, {});
        if (!p) throw std::runtime_error("agent '" + inst.agents[a].name + "' cannot reach its goal");
        sol.plans.push_back(std::move(*p));
    }
    return sol;
}

/// The mover's root plan delayed by `delay` at its start vertex.
Plan delayed(const Instance& inst, const Plan& plan, double delay) {
    std::vector<TimedMotion> motions;
    for (TimedMotion m : plan.motions) {
        if (m.is_terminal()) break;
        m.start += delay;
        motions.push_back(m);
    }
    return normalize_plan(inst, plan.agent, std::move(motions));
}

std::string fmt(double x) { return format_number(x); }

}  // namespace

std::optional<UnsoundnessWitness> vertex_range_witness(const Instance& inst) {
    if (inst.agents.size() != 2) return std::nullopt;
    const Solution root = root_solution(inst);
    const auto conflict = detect_conflict(inst, root);
    if (!conflict || conflict->motion_i.is_wait() == conflict->motion_j.is_wait()) return std::nullopt;

    UnsoundnessWitness w;
    w.conflict = *conflict;
    w.constraints = split_vertex_range(inst, *conflict);
    const WaitMoveRoles roles = wait_move_roles(*conflict);
    const auto& range = std::get<VertexRangeConstraint>(w.constraints.first);
    const VertexId v = range.vertex;

    // The waiter lingers into the forbidden range, then hides next door.
    const Plan& mover_root = root.plans[roles.mover];
    std::optional<Neighbor> pocket;
    for (const Neighbor& n : inst.neighbors(v)) {
        const bool on_route = std::any_of(mover_root.motions.begin(), mover_root.motions.end(),
                                          [&](const TimedMotion& m) { return m.from == n.vertex || m.to == n.vertex; });
        if (!on_route) {
            pocket = n;
            break;
        }
    }
    if (!pocket) return std::nullopt;
    const double leave = (range.forbidden.lo() + range.forbidden.hi().value()) / 2.0;
    const double at_pocket = leave + pocket->length;

    const double step = 0.25;
    for (double delay = leave; delay <= leave + 4.0 * pocket->length + 40.0; delay += step) {
        const Plan mover = delayed(inst, mover_root, delay);
        for (double back = at_pocket; back <= mover.completion_time() + 4.0 * pocket->length + 10.0; back += step) {
            std::vector<TimedMotion> hide{TimedMotion::wait(v, 0.0, leave),
                                          TimedMotion::move(inst, v, pocket->vertex, leave)};
            if (back > at_pocket) hide.push_back(TimedMotion::wait(pocket->vertex, at_pocket, back - at_pocket));
            hide.push_back(TimedMotion::move(inst, pocket->vertex, v, back));
            Plan waiter = normalize_plan(inst, roles.waiter, std::move(hide));
            Solution sol;
            sol.plans.resize(2);
            sol.plans[roles.waiter] = waiter;
            sol.plans[roles.mover] = mover;
            if (!validate_solution(inst, sol).empty()) continue;
            w.solution = sol;
            w.collision_free = true;
            w.violates_first = !satisfies(inst, waiter, w.constraints.first);
            w.violates_second = !satisfies(inst, mover, w.constraints.second);
            return w;
        }
    }
    return w;
}

DemoReport demo_fig2_unsound(const Instance& inst) {
    DemoReport r;
    r.name = "fig2-unsound";
    r.claim = "vertex-range splitting removes a collision-free solution in which both agents wait";
    const auto w = vertex_range_witness(inst);
    if (!w) {
        r.applicable = false;
        r.lines.push_back("no two-agent wait-vs-move root conflict with a free neighbour");
        return r;
    }
    r.lines.push_back("root conflict: " + inst.agents[w->conflict.agent_i].name + " vs " +
                      inst.agents[w->conflict.agent_j].name + " over " + w->conflict.interval.to_string());
    r.lines.push_back("waiter constraint: " + describe(inst, w->constraints.first));
    r.lines.push_back("mover constraint: " + describe(inst, w->constraints.second));
    if (w->collision_free) {
        r.lines.push_back("witness SIC " + fmt(sic(w->solution)) + ", validator: 0 conflicts");
        std::istringstream plans(format_solution(inst, w->solution));
        for (std::string l; std::getline(plans, l);) r.lines.push_back("  " + l);
    } else {
        r.lines.push_back("no collision-free witness found on the search grid");
    }
    r.lines.push_back(std::string("violates waiter constraint: ") + (w->violates_first ? "yes" : "no"));
    r.lines.push_back(std::string("violates mover constraint: ") + (w->violates_second ? "yes" : "no"));
    r.pass = w->collision_free && w->violates_first && w->violates_second;
    return r;
}

namespace {

void add_stats(DemoReport& r, const SearchOutcome& out) {
    r.monotonicity_checks += out.stats.monotonicity_checks;
    r.lines.push_back("status: " + to_string(out.status) + ", g " + fmt(out.g) + ", root g " + fmt(out.stats.root_g));
    r.lines.push_back("expansions " + std::to_string(out.stats.expansions) + ", generated " +
                      std::to_string(out.stats.generated) + ", conflicts resolved " +
                      std::to_string(out.stats.conflicts_resolved));
    r.lines.push_back("lower-bound trace max " + fmt(out.stats.max_lower_bound()) + " over " +
                      std::to_string(out.stats.lower_bounds.size()) + " expansions");
    r.lines.push_back("cost monotonicity checks: " + std::to_string(out.stats.monotonicity_checks) + ", violations: 0");
}

}  // namespace

DemoReport demo_nontermination(const Instance& inst, std::size_t budget) {
    DemoReport r;
    r.name = "nontermination";
    r.claim = "motion constraints never exclude an equal-cost split wait, so the lower bound stays flat";
    SolverOptions o;
    o.mode = SplitMode::Motion;
    o.max_expansions = budget;
    try {
        const SearchOutcome out = solve(inst, o);
        add_stats(r, out);
        const double rise = out.stats.max_lower_bound() - out.stats.root_g;
        r.lines.push_back("rise above root g: " + fmt(rise));
        r.pass = out.status == SearchStatus::BudgetExhausted && rise <= 1e-6;
    } catch (const MonotonicityViolation& e) {
        r.monotonicity_violated = true;
        r.lines.push_back(std::string("cost monotonicity violated: ") + e.what());
    }
    return r;
}

DemoReport demo_shifting(const Instance& inst, const DeltaRule& rule, std::size_t budget) {
    DemoReport r;
    r.name = "shifting";
    r.claim = "sound shifting constraints still fail to terminate (delta rule " + rule.to_string() + ")";
    SolverOptions o;
    o.mode = SplitMode::Shifting;
    o.delta = rule;
    o.max_expansions = budget;
    try {
        const SearchOutcome out = solve(inst, o);
        add_stats(r, out);
        const ShiftAudit& a = out.shift_audit;
        r.lines.push_back("wait-vs-move splits " + std::to_string(a.splits) + ", residual conflict in vertex-range child " +
                          std::to_string(a.residual) + ", zero-width shifts " + std::to_string(a.zero_delta));
        if (a.splits == 0) {
            r.applicable = false;
            return r;
        }
        const bool exhausted = out.status == SearchStatus::BudgetExhausted;
        if (rule.kind == DeltaRule::Kind::Zero) {
            const double rise = out.stats.max_lower_bound() - out.stats.root_g;
            r.lines.push_back("rise above root g: " + fmt(rise));
            r.pass = exhausted && a.zero_delta == a.splits && rise <= 1e-4;
        } else {
            r.pass = exhausted && a.residual + a.zero_delta == a.splits && a.residual > 0;
        }
    } catch (const MonotonicityViolation& e) {
        r.monotonicity_violated = true;
        r.lines.push_back(std::string("cost monotonicity violated: ") + e.what());
    }
    return r;
}

DemoReport demo_counterexample(const Instance& inst, const Solution& handcrafted) {
    DemoReport r;
    r.name = "counterexample";
    r.claim = "vertex-range splitting returns a costlier solution than a known collision-free one";
    std::size_t conflicts = 0;
    try {
        conflicts = validate_solution(inst, handcrafted).size();
    } catch (const StructuralError& e) {
        r.lines.push_back(std::string("handcrafted solution malformed: ") + e.what());
        return r;
    }
    const double reference = sic(handcrafted);
    r.lines.push_back("handcrafted: " + std::to_string(conflicts) + " conflicts, SIC " + fmt(reference));
    SolverOptions o;
    o.mode = SplitMode::VertexRange;
    try {
        const SearchOutcome out = solve(inst, o);
        add_stats(r, out);
        r.lines.push_back("gap over handcrafted SIC: " + fmt(out.g - reference));
        r.pass = conflicts == 0 && std::abs(reference - 32.1) <= 0.05 && out.status == SearchStatus::Solved &&
                 out.g >= 32.2 && out.g <= 36.0 && out.g > reference && out.stats.expansions >= 100 &&
                 out.stats.expansions <= 5000;
    } catch (const MonotonicityViolation& e) {
        r.monotonicity_violated = true;
        r.lines.push_back(std::string("cost monotonicity violated: ") + e.what());
    }
    return r;
}

}  // namespace mapfr
