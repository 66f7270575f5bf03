#pragma once

#include "distne/graph.hpp"

#include <cstdint>

namespace distne {

struct PartitionConfig {
    std::uint32_t k = 2;
    int max_sweeps = 100;
    int patience = 5;     // sweeps without improvement before stopping
    int sample_size = 4;  // extra random swap candidates per node
    int restarts = 3;     // independent runs; lowest final cut wins
    std::uint64_t seed = 42;
};

struct PartitionResult {
    PartitionAssignment assignment;
    // Edge cut after initialization and after every sweep.
    std::vector<std::uint64_t> cut_history;
};

// Balanced k-way partitioning by greedy color swaps: grow k balanced
// regions breadth-first from seeded start nodes, then repeatedly swap
// the colors of node pairs when the swap strictly lowers their combined
// local cut. Swaps exchange colors one-for-one, so |size_i - size_j| <= 1
// holds throughout and the global edge cut never increases. The best of
// `restarts` independent runs is returned; cut_history belongs to the
// winning run.
PartitionResult partition_with_history(const Graph &g,
                                       const PartitionConfig &cfg);
PartitionAssignment partition(const Graph &g, const PartitionConfig &cfg);

// Number of undirected edges whose endpoints carry different colors.
std::uint64_t edge_cut(const Graph &g, const PartitionAssignment &pa);

} // namespace distne
