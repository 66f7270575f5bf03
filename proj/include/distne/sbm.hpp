#pragma once

#include "distne/graph.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace distne {

// Stochastic block model with near-equal contiguous blocks: node pairs
// inside a block are edges with probability p_in, across blocks with
// probability p_out.
struct SbmConfig {
    std::size_t nodes = 1000;
    std::size_t communities = 10;
    double p_in = 0.05;
    double p_out = 0.001;
    std::uint64_t seed = 42;
    std::string label_prefix = "n";
};

Graph sbm_graph(const SbmConfig &cfg);

// Planted community of each node, parallel to internal ids.
std::vector<int> sbm_communities(const SbmConfig &cfg);

} // namespace distne
