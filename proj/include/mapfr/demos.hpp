#pragma once

#include <string>
#include <vector>

#include "mapfr/ccbs.hpp"

namespace mapfr {

/// What a demo set out to show, what it observed, and whether the
/// observation matches the expected signature.
struct DemoReport {
    std::string name;
    std::string claim;
    std::vector<std::string> lines;
    bool applicable = true;  // false when the instance holds nothing to exhibit
    bool pass = false;
    std::size_t monotonicity_checks = 0;
    bool monotonicity_violated = false;

    std::string verdict() const { return !applicable ? "N/A" : pass ? "PASS" : "FAIL"; }
    std::string render() const;
};

/// A collision-free pair of plans (the waiter steps aside and returns, the
/// mover waits then departs) that still violates both vertex-range split
/// constraints of the root conflict.
struct UnsoundnessWitness {
    Conflict conflict;
    ConstraintPair constraints;  // first: waiter, second: mover
    Solution solution;
    bool collision_free = false;
    bool violates_first = false;
    bool violates_second = false;
};

/// Builds the witness from the root conflict of a two-agent wait-vs-move
/// instance whose waiter has a neighbour off the mover's route.
std::optional<UnsoundnessWitness> vertex_range_witness(const Instance& inst);

DemoReport demo_fig2_unsound(const Instance& inst);
/// Motion mode under an expansion budget; passes on a flat lower-bound trace.
DemoReport demo_nontermination(const Instance& inst, std::size_t budget = 10'000);
/// Shifting mode under an expansion budget with a residual-conflict audit.
DemoReport demo_shifting(const Instance& inst, const DeltaRule& rule, std::size_t budget = 5'000);
/// Vertex-range mode against a validated handcrafted solution.
DemoReport demo_counterexample(const Instance& inst, const Solution& handcrafted);

}  // namespace mapfr
