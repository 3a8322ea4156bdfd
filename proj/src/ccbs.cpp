#include "mapfr/ccbs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <ostream>
#include <queue>
#include <sstream>

#include "mapfr/scenario_io.hpp"

namespace mapfr {

std::string to_string(SplitMode mode) {
    switch (mode) {
        case SplitMode::Motion: return "motion";
        case SplitMode::VertexRange: return "vertex-range";
        case SplitMode::Shifting: return "shifting";
        case SplitMode::DiscreteTime: return "dt";
    }
    return "?";
}

std::optional<SplitMode> parse_split_mode(const std::string& text) {
    if (text == "motion") return SplitMode::Motion;
    if (text == "vertex-range" || text == "vertex_range") return SplitMode::VertexRange;
    if (text == "shifting") return SplitMode::Shifting;
    if (text == "dt") return SplitMode::DiscreteTime;
    return std::nullopt;
}

double DeltaRule::delta_for(double width) const {
    switch (kind) {
        case Kind::Half: return width / 2.0;
        case Kind::Zero: return 0.0;
        case Kind::Fixed: return value;
    }
    return 0.0;
}

std::string DeltaRule::to_string() const {
    switch (kind) {
        case Kind::Half: return "half";
        case Kind::Zero: return "zero";
        case Kind::Fixed: return "fixed:" + format_number(value);
    }
    return "?";
}

std::optional<DeltaRule> DeltaRule::parse(const std::string& text) {
    if (text == "half") return DeltaRule{Kind::Half, 0.0};
    if (text == "zero") return DeltaRule{Kind::Zero, 0.0};
    if (text.rfind("fixed:", 0) == 0) {
        try {
            std::size_t used = 0;
            const double x = std::stod(text.substr(6), &used);
            if (used == text.size() - 6 && x >= 0.0 && std::isfinite(x)) return DeltaRule{Kind::Fixed, x};
        } catch (const std::exception&) {
        }
    }
    return std::nullopt;
}

double SearchStats::max_lower_bound() const {
    double m = root_g;
    for (double g : lower_bounds) m = std::max(m, g);
    return m;
}

std::string to_string(SearchStatus status) {
    switch (status) {
        case SearchStatus::Solved: return "solved";
        case SearchStatus::BudgetExhausted: return "budget-exhausted";
        case SearchStatus::Infeasible: return "infeasible";
    }
    return "?";
}

namespace {

template <typename Visit>
void for_each_collision(const Instance& inst, const Solution& sol, Visit&& visit) {
    for (AgentId i = 0; i < sol.plans.size(); ++i)
        for (AgentId j = i + 1; j < sol.plans.size(); ++j)
            for (const TimedMotion& mi : sol.plans[i].motions)
                for (const TimedMotion& mj : sol.plans[j].motions) {
                    if (!(Time(mj.start) < mi.end()) || !(Time(mi.start) < mj.end())) continue;
                    if (auto c = make_conflict(inst, i, mi, j, mj)) visit(*c);
                }
}

}  // namespace

std::optional<Conflict> detect_conflict(const Instance& inst, const Solution& sol) {
    std::optional<Conflict> best;
    for_each_collision(inst, sol, [&](const Conflict& c) {
        if (!best || c.interval.lo() < best->interval.lo()) best = c;
    });
    return best;
}

std::size_t count_conflicts(const Instance& inst, const Solution& sol) {
    std::size_t n = 0;
    for_each_collision(inst, sol, [&](const Conflict&) { ++n; });
    return n;
}

ConstraintPair split_conflict(const Instance& inst, const Conflict& c, const SolverOptions& options) {
    const bool wi = c.motion_i.is_wait();
    const bool wj = c.motion_j.is_wait();
    switch (options.mode) {
        case SplitMode::Motion:
        case SplitMode::DiscreteTime:
            return split_motion(inst, c);
        case SplitMode::VertexRange:
            if (wi != wj) return split_vertex_range(inst, c);
            if (wi && wj)
                return {VertexRangeConstraint{c.agent_i, c.motion_i.from, c.interval},
                        VertexRangeConstraint{c.agent_j, c.motion_j.from, c.interval}};
            return split_motion(inst, c);
        case SplitMode::Shifting:
            if (wi != wj) {
                const double width = vertex_collision_interval(inst, c).width().value();
                return split_shifting(inst, c, ShiftParameters::make(inst, c, options.delta.delta_for(width)));
            }
            return split_motion(inst, c);
    }
    throw std::logic_error("unknown split mode");
}

PlannerOptions planner_options_for(const SolverOptions& options) {
    PlannerOptions p;
    p.unit = options.unit;
    switch (options.mode) {
        case SplitMode::DiscreteTime: p.mode = PlannerMode::DiscreteTime; break;
        case SplitMode::Motion: p.mode = PlannerMode::Motion; break;
        default: p.mode = PlannerMode::Continuous; break;
    }
    return p;
}

namespace {

/// Constraint-tree node. Plans are shared with the parent except for the
/// one agent that was replanned; constraints live on the parent chain.
struct CTNode {
    std::shared_ptr<const CTNode> parent;
    std::optional<Constraint> added;
    std::vector<std::shared_ptr<const Plan>> plans;
    double g = 0.0;
    std::size_t conflicts = 0;
    std::size_t seq = 0;

    Solution solution() const {
        Solution s;
        for (const auto& p : plans) s.plans.push_back(*p);
        return s;
    }

    std::vector<Constraint> constraints_for(std::optional<AgentId> agent) const {
        std::vector<Constraint> out;
        for (const CTNode* n = this; n; n = n->parent.get())
            if (n->added && (!agent || constrained_agent(*n->added) == *agent)) out.push_back(*n->added);
        std::reverse(out.begin(), out.end());
        return out;
    }
};

using NodePtr = std::shared_ptr<const CTNode>;

struct FrontierOrder {
    bool operator()(const NodePtr& a, const NodePtr& b) const {
        if (a->g != b->g) return a->g > b->g;
        if (a->conflicts != b->conflicts) return a->conflicts > b->conflicts;
        return a->seq > b->seq;
    }
};

double cost_of(const std::vector<std::shared_ptr<const Plan>>& plans) {
    double g = 0.0;
    for (const auto& p : plans) g += p->completion_time();
    return g;
}

}  // namespace

SearchOutcome solve(const Instance& inst, const SolverOptions& options) {
    using Clock = std::chrono::steady_clock;
    const auto started = Clock::now();
    const PlannerOptions low = planner_options_for(options);
    SearchOutcome out;

    auto root = std::make_shared<CTNode>();
    for (AgentId a = 0; a < inst.agents.size(); ++a) {
        auto p = plan_path(inst, a, {}, low);
        if (!p) {
            out.status = SearchStatus::Infeasible;
            return out;
        }
        root->plans.push_back(std::make_shared<const Plan>(std::move(*p)));
    }
    root->g = cost_of(root->plans);
    root->conflicts = count_conflicts(inst, root->solution());
    out.stats.root_g = root->g;
    out.stats.generated = 1;

    std::priority_queue<NodePtr, std::vector<NodePtr>, FrontierOrder> open;
    open.push(root);
    std::size_t seq = 1;
    auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - started).count(); };

    while (!open.empty()) {
        if (out.stats.expansions >= options.max_expansions || elapsed() > options.max_seconds) {
            out.status = SearchStatus::BudgetExhausted;
            out.g = open.top()->g;
            out.frontier = open.size();
            out.stats.seconds = elapsed();
            return out;
        }
        const NodePtr node = open.top();
        open.pop();
        ++out.stats.expansions;
        out.stats.lower_bounds.push_back(node->g);

        const Solution current = node->solution();
        const auto conflict = detect_conflict(inst, current);
        if (!conflict) {
            out.status = SearchStatus::Solved;
            out.solution = current;
            out.g = node->g;
            out.frontier = open.size();
            out.goal_constraints = node->constraints_for(std::nullopt);
            out.stats.seconds = elapsed();
            if (options.trace)
                *options.trace << "expand " << out.stats.expansions << " g=" << format_number(node->g)
                               << " goal\n";
            return out;
        }
        ++out.stats.conflicts_resolved;

        const ConstraintPair pair = split_conflict(inst, *conflict, options);
        if (options.mode == SplitMode::Shifting && conflict->motion_i.is_wait() != conflict->motion_j.is_wait()) {
            const double width = vertex_collision_interval(inst, *conflict).width().value();
            const auto params = ShiftParameters::make(inst, *conflict, options.delta.delta_for(width));
            ++out.shift_audit.splits;
            if (params.delta == 0.0) ++out.shift_audit.zero_delta;
            else if (residual_conflict(inst, *conflict, params)) ++out.shift_audit.residual;
        }

        std::ostringstream line;
        if (options.trace)
            line << "expand " << out.stats.expansions << " g=" << format_number(node->g) << " conflict "
                 << inst.agents[conflict->agent_i].name << "," << inst.agents[conflict->agent_j].name << " "
                 << conflict->interval.to_string();

        for (const Constraint& k : {pair.first, pair.second}) {
            const AgentId agent = constrained_agent(k);
            auto constraints = node->constraints_for(agent);
            constraints.push_back(k);
            auto p = plan_path(inst, agent, constraints, low);
            if (options.trace) line << " | " << describe(inst, k);
            if (!p) {
                ++out.stats.pruned_children;
                if (options.trace) line << " pruned";
                continue;
            }
            auto child = std::make_shared<CTNode>();
            child->parent = node;
            child->added = k;
            child->plans = node->plans;
            child->plans[agent] = std::make_shared<const Plan>(std::move(*p));
            child->g = cost_of(child->plans);
            child->conflicts = count_conflicts(inst, child->solution());
            child->seq = seq++;
            ++out.stats.monotonicity_checks;
            if (child->g < node->g - kEpsilon) {
                std::ostringstream msg;
                msg << "child cost " << format_number(child->g) << " below parent cost " << format_number(node->g)
                    << " after adding " << describe(inst, k);
                throw MonotonicityViolation(msg.str());
            }
            if (options.trace) line << " g=" << format_number(child->g);
            ++out.stats.generated;
            open.push(std::move(child));
        }
        if (options.trace) *options.trace << line.str() << "\n";
    }
    out.status = SearchStatus::Infeasible;
    out.stats.seconds = elapsed();
    return out;
}

}  // namespace mapfr
