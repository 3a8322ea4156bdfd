#include "mapfr/generate.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace mapfr {

Instance random_instance(std::uint64_t seed, const GeneratorSpec& spec) {
    std::mt19937_64 rng(seed);
    auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };

    Instance inst;
    inst.radius = uniform(spec.min_radius, spec.max_radius);
    const std::size_t n = pick(spec.min_vertices, spec.max_vertices);
    // Keep vertices well apart so parked agents never touch each other.
    while (inst.vertices.size() < n) {
        const Coordinate p(uniform(0.0, spec.extent), uniform(0.0, spec.extent));
        const bool clear = std::all_of(inst.vertices.begin(), inst.vertices.end(), [&](const Vertex& v) {
            return (v.position - p).norm() > 2.0 * inst.radius + 0.5;
        });
        if (clear) inst.add_vertex("v" + std::to_string(inst.vertices.size()), p);
    }
    for (VertexId v = 1; v < n; ++v) inst.add_edge(v, pick(0, v - 1));
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = u + 1; v < n; ++v)
            if (!inst.find_edge(u, v) && uniform(0.0, 1.0) < spec.extra_edge_probability) inst.add_edge(u, v);

    std::vector<VertexId> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<VertexId> goals = order;
    std::shuffle(goals.begin(), goals.end(), rng);
    const std::size_t k = pick(std::min(spec.min_agents, n), std::min(spec.max_agents, n));
    for (std::size_t a = 0; a < k; ++a) inst.add_agent("a" + std::to_string(a + 1), order[a], goals[a]);
    return inst;
}

}  // namespace mapfr
