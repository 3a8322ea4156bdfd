#pragma once

#include <cstdint>

#include "mapfr/model.hpp"

namespace mapfr {

struct GeneratorSpec {
    std::size_t min_vertices = 3;
    std::size_t max_vertices = 6;
    std::size_t min_agents = 1;
    std::size_t max_agents = 3;
    double extent = 6.0;  // coordinates in [0, extent]^2
    double min_radius = 0.1;
    double max_radius = 0.4;
    double extra_edge_probability = 0.3;
};

/// Small connected instance with Euclidean edge lengths, drawn from `seed`.
/// Identical seeds give identical instances.
Instance random_instance(std::uint64_t seed, const GeneratorSpec& spec = {});

}  // namespace mapfr
