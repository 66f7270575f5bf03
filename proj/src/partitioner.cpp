#include "distne/partitioner.hpp"
#include "distne/errors.hpp"
#include "distne/rng.hpp"

#include <algorithm>
#include <numeric>

namespace distne {

std::uint64_t edge_cut(const Graph &g, const PartitionAssignment &pa) {
    if (pa.node_count != g.node_count() || pa.assign.size() != g.node_count())
        throw ContractError("edge_cut: assignment does not match graph");
    std::uint64_t cut = 0;
    for (NodeId u = 0; u < g.node_count(); ++u)
        for (NodeId v : g.neighbors(u))
            if (u < v && pa.assign[u] != pa.assign[v])
                ++cut;
    return cut;
}

namespace {

// Cut contribution of u if it carried color c, ignoring the edge to
// `skip` (the prospective partner, whose edge status a swap never
// changes).
std::uint64_t local_cut(const Graph &g, const std::vector<std::uint32_t> &color,
                        NodeId u, std::uint32_t c, NodeId skip) {
    std::uint64_t cut = 0;
    for (NodeId v : g.neighbors(u))
        if (v != skip && color[v] != c)
            ++cut;
    return cut;
}

// Balanced multi-source BFS growth: k regions expand breadth-first from
// spread-out seeds until each hits its size cap, so the initial coloring
// already follows the graph's locality instead of being random.
void grow_regions(const Graph &g, std::uint32_t k,
                  const std::vector<NodeId> &order,
                  std::vector<std::uint32_t> &color,
                  std::vector<std::uint64_t> &sizes) {
    const std::size_t n = g.node_count();
    constexpr std::uint32_t kUnset = UINT32_MAX;
    color.assign(n, kUnset);
    sizes.assign(k, 0);
    std::vector<std::uint64_t> caps(k, n / k);
    for (std::size_t i = 0; i < n % k; ++i)
        ++caps[i];

    std::vector<std::vector<NodeId>> queue(k);
    std::vector<std::size_t> head(k, 0);
    for (std::uint32_t c = 0; c < k; ++c)
        queue[c].push_back(order[c]); // shuffled order spreads the seeds
    std::size_t refill = 0; // scan position into `order` for new seeds
    std::size_t assigned = 0;
    while (assigned < n) {
        for (std::uint32_t c = 0; c < k && assigned < n; ++c) {
            if (sizes[c] >= caps[c])
                continue;
            NodeId u = Graph::npos;
            while (head[c] < queue[c].size()) {
                NodeId cand = queue[c][head[c]++];
                if (color[cand] == kUnset) {
                    u = cand;
                    break;
                }
            }
            if (u == Graph::npos) { // region ran dry: seed a new front
                while (refill < n && color[order[refill]] != kUnset)
                    ++refill;
                if (refill >= n)
                    break;
                u = order[refill];
            }
            color[u] = c;
            ++sizes[c];
            ++assigned;
            for (NodeId v : g.neighbors(u))
                if (color[v] == kUnset)
                    queue[c].push_back(v);
        }
    }
}

PartitionResult run_one_partition(const Graph &g, const PartitionConfig &cfg,
                                  std::uint64_t run_seed) {
    const std::size_t n = g.node_count();
    PartitionResult res;
    res.assignment.node_count = n;
    res.assignment.k = cfg.k;
    res.assignment.sizes.assign(cfg.k, 0);
    if (n == 0) {
        res.cut_history.push_back(0);
        return res;
    }

    Rng rng(mix_seed(run_seed, 0x7061727469746eULL));
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    rng.shuffle(order);

    auto &color = res.assignment.assign;
    grow_regions(g, cfg.k, order, color, res.assignment.sizes);

    std::uint64_t cut = edge_cut(g, res.assignment);
    res.cut_history.push_back(cut);
    if (cfg.k == 1)
        return res;

    std::vector<NodeId> candidates;
    int stale = 0;
    for (int sweep = 0; sweep < cfg.max_sweeps && stale < cfg.patience;
         ++sweep) {
        rng.shuffle(order);
        bool improved = false;
        for (NodeId u : order) {
            const std::uint32_t cu = color[u];
            candidates.assign(g.neighbors(u).begin(), g.neighbors(u).end());
            for (int s = 0; s < cfg.sample_size; ++s)
                candidates.push_back(
                    static_cast<NodeId>(rng.below(n)));

            NodeId best_partner = Graph::npos;
            std::int64_t best_gain = 0; // accept strict improvement only
            for (NodeId v : candidates) {
                const std::uint32_t cv = color[v];
                if (v == u || cv == cu)
                    continue;
                const std::int64_t before =
                    static_cast<std::int64_t>(local_cut(g, color, u, cu, v) +
                                              local_cut(g, color, v, cv, u));
                const std::int64_t after =
                    static_cast<std::int64_t>(local_cut(g, color, u, cv, v) +
                                              local_cut(g, color, v, cu, u));
                const std::int64_t gain = before - after;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_partner = v;
                }
            }
            if (best_partner != Graph::npos) {
                std::swap(color[u], color[best_partner]);
                cut -= static_cast<std::uint64_t>(best_gain);
                improved = true;
            }
        }
        res.cut_history.push_back(cut);
        stale = improved ? 0 : stale + 1;
    }
    return res;
}

} // namespace

PartitionResult partition_with_history(const Graph &g,
                                       const PartitionConfig &cfg) {
    if (cfg.k < 1)
        throw ConfigError("partition: k must be >= 1");
    if (cfg.max_sweeps < 1 || cfg.sample_size < 0 || cfg.restarts < 1)
        throw ConfigError("partition: bad sweep configuration");
    if (g.node_count() > 0 && cfg.k > g.node_count())
        throw ConfigError("partition: k exceeds node count");

    PartitionResult best;
    for (int r = 0; r < cfg.restarts; ++r) {
        PartitionResult res =
            run_one_partition(g, cfg, mix_seed(cfg.seed, r));
        if (r == 0 || res.cut_history.back() < best.cut_history.back())
            best = std::move(res);
    }
    return best;
}

PartitionAssignment partition(const Graph &g, const PartitionConfig &cfg) {
    return partition_with_history(g, cfg).assignment;
}

} // namespace distne
