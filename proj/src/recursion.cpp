#include "distne/recursion.hpp"
#include "distne/errors.hpp"
#include "distne/rng.hpp"

#include <algorithm>
#include <cmath>

namespace distne {

std::uint32_t estimate_k(std::size_t n, double delta_bytes,
                         std::uint64_t mem) {
    if (n == 0 || delta_bytes <= 0 || mem == 0)
        throw ConfigError("estimate_k: all inputs must be positive");
    double raw = std::ceil(static_cast<double>(n) * delta_bytes /
                           static_cast<double>(mem));
    auto k = static_cast<std::uint64_t>(std::max(raw, 1.0));
    return static_cast<std::uint32_t>(std::min<std::uint64_t>(k, n));
}

double compute_delta(std::size_t n, std::size_t nb) {
    if (n == 0 || nb > n)
        throw ConfigError("compute_delta: need 0 <= nb <= n, n > 0");
    double raw = static_cast<double>(nb) / static_cast<double>(n + nb);
    return std::clamp(raw, 0.05, 0.5);
}

int gamma_bound(std::size_t d, double delta) {
    if (d < 10)
        throw ConfigError("gamma_bound: d must be >= 10");
    if (delta <= 0 || delta >= 1)
        throw ConfigError("gamma_bound: delta must be in (0, 1)");
    double bound = std::log(static_cast<double>(d) / 10.0) /
                   std::log(1.0 / delta);
    return std::max(1, static_cast<int>(std::floor(bound + 1e-9)));
}

std::uint32_t next_k(std::uint32_t k_prev, std::size_t nb,
                     std::size_t n_prev) {
    if (k_prev < 1 || n_prev == 0)
        throw ConfigError("next_k: k_prev >= 1 and n_prev > 0 required");
    std::uint64_t k = (static_cast<std::uint64_t>(nb) * k_prev + n_prev - 1) /
                      n_prev;
    k = std::max<std::uint64_t>(k, 1);
    if (nb > 0)
        k = std::min<std::uint64_t>(k, nb);
    return static_cast<std::uint32_t>(k);
}

namespace {

std::uint64_t fnv1a(const std::string &s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string leaf_name(int j, int q, std::size_t index) {
    return "sub_" + std::to_string(j) + "_" + std::to_string(q) + "_" +
           std::to_string(index);
}

} // namespace

PartitionTree recursive_partition(const Graph &g, const RecursionConfig &cfg) {
    const std::size_t n = g.node_count();
    if (n == 0)
        throw ConfigError("recursive_partition: empty graph");
    if (cfg.d < 16)
        throw ConfigError("recursive_partition: d must be >= 16");
    if (cfg.gamma_cap < 1)
        throw ConfigError("recursive_partition: gamma_cap must be >= 1");
    if (cfg.delta != 0 && (cfg.delta <= 0 || cfg.delta >= 1))
        throw ConfigError("recursive_partition: delta must be in (0, 1)");
    if (cfg.forced_level1 && cfg.k_initial == kAuto)
        throw ConfigError("recursive_partition: forced level-1 assignment "
                          "requires an explicit k");

    const double bytes = cfg.bytes_per_node > 0 ? cfg.bytes_per_node
                                                : g.avg_adjacency_bytes();
    const std::uint32_t k1 = cfg.k_initial != kAuto
                                 ? cfg.k_initial
                                 : estimate_k(n, bytes, cfg.mem_budget);
    const std::size_t max_leaf =
        cfg.max_leaf_nodes > 0 ? cfg.max_leaf_nodes : (n + k1 - 1) / k1;

    PartitionTree tree;
    tree.d = cfg.d;

    Graph current = g;
    std::uint32_t k = k1;
    int gamma_max = 0; // known after delta is fixed at level 1
    for (int j = 1;; ++j) {
        PartitionAssignment pa;
        if (j == 1 && cfg.forced_level1) {
            pa.node_count = n;
            pa.k = k1;
            pa.assign = *cfg.forced_level1;
            if (pa.assign.size() != n)
                throw ContractError("forced assignment length mismatch");
            pa.sizes.assign(k1, 0);
            for (std::uint32_t c : pa.assign) {
                if (c >= k1)
                    throw ContractError("forced assignment index out of range");
                ++pa.sizes[c];
            }
        } else {
            PartitionConfig pcfg = cfg.partition;
            pcfg.k = k;
            pcfg.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(j));
            pa = partition(current, pcfg);
        }

        NodeSet border = border_nodes(current, pa);
        if (j == 1) {
            tree.delta = cfg.delta > 0 ? cfg.delta
                                       : compute_delta(n, border.size());
            gamma_max = std::min(cfg.gamma_cap, gamma_bound(cfg.d, tree.delta));
        }

        LevelInfo level;
        level.iteration = j;
        level.k = pa.k;
        level.node_count = current.node_count();
        level.edge_count = current.edge_count();
        level.border_count = border.size();
        level.cut = edge_cut(current, pa);
        level.assignment = pa;
        tree.levels.push_back(std::move(level));

        // induced leaves of this level
        std::vector<NodeSet> parts(pa.k);
        for (NodeId u = 0; u < current.node_count(); ++u)
            parts[pa.assign[u]].push_back(u);
        for (std::uint32_t p = 0; p < pa.k; ++p) {
            LeafInfo leaf;
            leaf.id = leaf_name(j, 0, p);
            leaf.iteration = j;
            leaf.border_flag = 0;
            leaf.seed = mix_seed(cfg.seed, fnv1a(leaf.id));
            leaf.graph = induced_subgraph(current, parts[p]);
            tree.leaves.push_back(std::move(leaf));
        }

        if (border.empty()) {
            tree.gamma = j;
            tree.border_empty = true;
            break;
        }
        if (border.size() <= max_leaf || j >= gamma_max) {
            LeafInfo leaf;
            leaf.id = leaf_name(j, 1, 0);
            leaf.iteration = j;
            leaf.border_flag = 1;
            leaf.seed = mix_seed(cfg.seed, fnv1a(leaf.id));
            leaf.graph = induced_subgraph(current, border);
            tree.leaves.push_back(std::move(leaf));
            tree.gamma = j;
            tree.border_empty = false;
            break;
        }
        Graph next = induced_subgraph(current, border);
        k = next_k(k, border.size(), current.node_count());
        current = std::move(next);
    }

    for (int j = 1; j <= tree.gamma; ++j)
        tree.length_table.push_back(
            {j, 0,
             embed_length(j, 0, cfg.d, tree.delta, tree.gamma,
                          tree.border_empty)});
    if (!tree.border_empty)
        tree.length_table.push_back(
            {tree.gamma, 1,
             embed_length(tree.gamma, 1, cfg.d, tree.delta, tree.gamma,
                          false)});
    for (auto &leaf : tree.leaves)
        leaf.ell = embed_length(leaf.iteration, leaf.border_flag, cfg.d,
                                tree.delta, tree.gamma, tree.border_empty);
    return tree;
}

} // namespace distne
