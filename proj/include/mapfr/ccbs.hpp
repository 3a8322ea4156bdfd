#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mapfr/sipp.hpp"

namespace mapfr {

/// How a conflict is split into two child constraints.
///
/// Motion: motion constraints on both sides. VertexRange: a wait-vs-move
/// conflict keeps the waiter off its vertex for the collision interval.
/// Shifting: a wait-vs-move conflict gets a sound shifting pair. DiscreteTime:
/// motion constraints over a unit-wait low level.
enum class SplitMode { Motion, VertexRange, Shifting, DiscreteTime };

std::string to_string(SplitMode mode);
std::optional<SplitMode> parse_split_mode(const std::string& text);

/// Picks the shift delta from the width of the mover's collision interval.
struct DeltaRule {
    enum class Kind { Half, Zero, Fixed };
    Kind kind = Kind::Half;
    double value = 0.0;  // Fixed only

    double delta_for(double collision_width) const;
    std::string to_string() const;
    /// "half", "zero" or "fixed:<x>".
    static std::optional<DeltaRule> parse(const std::string& text);
};

struct SolverOptions {
    SplitMode mode = SplitMode::Motion;
    double unit = 1.0;  // DiscreteTime only
    DeltaRule delta;    // Shifting only
    std::size_t max_expansions = 100'000;
    double max_seconds = 60.0;
    std::ostream* trace = nullptr;  // one line per expansion when set
};

/// A child whose cost dropped below its parent's: the low level is not
/// optimal under a superset of constraints.
class MonotonicityViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct SearchStats {
    std::size_t expansions = 0;
    std::size_t generated = 0;
    std::size_t conflicts_resolved = 0;
    std::size_t pruned_children = 0;
    std::size_t monotonicity_checks = 0;
    std::vector<double> lower_bounds;  // g of each expanded node, in order
    double root_g = 0.0;
    double seconds = 0.0;

    /// Largest expanded g, root g when nothing was expanded.
    double max_lower_bound() const;
};

/// Residual-conflict bookkeeping for shifting splits.
struct ShiftAudit {
    std::size_t splits = 0;
    std::size_t residual = 0;  // splits whose vertex-range child keeps the conflict
    std::size_t zero_delta = 0;
};

enum class SearchStatus { Solved, BudgetExhausted, Infeasible };
std::string to_string(SearchStatus status);

struct SearchOutcome {
    SearchStatus status = SearchStatus::Infeasible;
    std::optional<Solution> solution;  // Solved only
    double g = 0.0;                    // cost when Solved, best lower bound otherwise
    std::size_t frontier = 0;
    SearchStats stats;
    ShiftAudit shift_audit;
    std::vector<Constraint> goal_constraints;  // on the solved node's path
};

/// Earliest-starting conflict; ties go to the lexicographically smallest agent pair.
std::optional<Conflict> detect_conflict(const Instance& inst, const Solution& sol);

/// Number of colliding motion pairs in the solution.
std::size_t count_conflicts(const Instance& inst, const Solution& sol);

/// The two constraints a mode adds for one conflict.
ConstraintPair split_conflict(const Instance& inst, const Conflict& c, const SolverOptions& options);

PlannerOptions planner_options_for(const SolverOptions& options);

/// Best-first constraint-tree search. Throws MonotonicityViolation when a
/// child is cheaper than its parent.
SearchOutcome solve(const Instance& inst, const SolverOptions& options);

/// Thrown when an instance is too large for exhaustive joint search.
class OracleRefused : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct OracleLimits {
    std::size_t max_agents = 4;
    std::size_t max_vertices = 10;
    std::size_t max_states = 5'000'000;
};

/// Exhaustive best-first search over joint discrete-time plans: each agent
/// traverses an edge, waits one unit, or finishes at its goal. Returns a
/// minimum-SIC collision-free solution costing at most `cost_bound`, or
/// nullopt when none exists.
std::optional<Solution> oracle_dt(const Instance& inst, double unit, double cost_bound,
                                  const OracleLimits& limits = {});

}  // namespace mapfr
