#pragma once

#include "distne/embedder.hpp"
#include "distne/graph.hpp"
#include "distne/partitioner.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace distne {

inline constexpr std::uint32_t kAuto = 0; // sentinel for AUTO settings

struct RecursionConfig {
    std::size_t d = 128;
    std::uint32_t k_initial = kAuto;
    std::uint64_t mem_budget = 1ULL << 30; // bytes, used when k is AUTO
    double bytes_per_node = 0;  // AUTO: measured from the input graph
    double delta = 0;           // AUTO: |V_b| / (|V| + |V_b|) at level 1
    int gamma_cap = 10;
    std::size_t max_leaf_nodes = 0; // AUTO: ceil(n / k1)
    std::uint64_t seed = 42;
    PartitionConfig partition; // k and seed filled per level
    // Test hook: use this assignment at level 1 instead of running the
    // partitioner (must match k_initial).
    std::optional<std::vector<std::uint32_t>> forced_level1;
};

struct LengthEntry {
    int iteration = 1;   // j
    int border_flag = 0; // q
    std::size_t ell = 0;
};

struct LeafInfo {
    std::string id; // e.g. sub_1_0_3
    int iteration = 1;
    int border_flag = 0;
    std::size_t ell = 0;
    std::uint64_t seed = 0;
    std::string path; // edge-list file, filled by the pipeline
    Graph graph;
};

struct LevelInfo {
    int iteration = 1;
    std::uint32_t k = 1;
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    std::size_t border_count = 0;
    std::uint64_t cut = 0;
    PartitionAssignment assignment;
};

struct PartitionTree {
    double delta = 0;
    int gamma = 1;
    bool border_empty = false; // recursion stopped on an empty border set
    std::size_t d = 0;
    std::vector<LengthEntry> length_table;
    std::vector<LevelInfo> levels;
    std::vector<LeafInfo> leaves;
};

// k = ceil(n * delta_bytes / mem), clamped into [1, n].
std::uint32_t estimate_k(std::size_t n, double delta_bytes, std::uint64_t mem);

// delta = nb / (n + nb), clamped into [0.05, 0.5].
double compute_delta(std::size_t n, std::size_t nb);

// Largest gamma with d * delta^gamma >= 10, at least 1.
int gamma_bound(std::size_t d, double delta);

// k for the next level: ceil(nb / n_prev * k_prev), clamped to [1, nb].
std::uint32_t next_k(std::uint32_t k_prev, std::size_t nb, std::size_t n_prev);

// Recursively partition g: each level splits the current graph into
// k_j induced leaves and a border subgraph, which becomes the next
// level's input until it fits max_leaf_nodes or gamma runs out.
PartitionTree recursive_partition(const Graph &g, const RecursionConfig &cfg);

} // namespace distne
