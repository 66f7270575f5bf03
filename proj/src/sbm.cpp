#include "distne/sbm.hpp"
#include "distne/errors.hpp"
#include "distne/rng.hpp"

#include <cmath>

namespace distne {

namespace {

std::vector<std::size_t> block_starts(const SbmConfig &cfg) {
    std::vector<std::size_t> starts(cfg.communities + 1, 0);
    const std::size_t base = cfg.nodes / cfg.communities;
    const std::size_t extra = cfg.nodes % cfg.communities;
    for (std::size_t c = 0; c < cfg.communities; ++c)
        starts[c + 1] = starts[c] + base + (c < extra ? 1 : 0);
    return starts;
}

// Visit each of `cells` Bernoulli(p) trials that succeed, by geometric
// gap sampling.
template <typename F>
void sample_cells(Rng &rng, std::uint64_t cells, double p, F &&emit) {
    if (p <= 0 || cells == 0)
        return;
    const double log1mp = std::log1p(-std::min(p, 1.0 - 1e-12));
    std::uint64_t pos = 0;
    for (;;) {
        const double u = rng.uniform();
        const std::uint64_t gap =
            p >= 1.0 ? 1
                     : static_cast<std::uint64_t>(
                           std::floor(std::log1p(-u) / log1mp)) + 1;
        if (gap > cells - pos)
            return;
        pos += gap;
        emit(pos - 1);
        if (pos == cells)
            return;
    }
}

// Linear index -> (i, j) with i < j over the upper triangle of an
// s-by-s block, rows in increasing i.
std::pair<std::size_t, std::size_t> triangle_cell(std::uint64_t t,
                                                  std::size_t s) {
    const std::uint64_t cells = static_cast<std::uint64_t>(s) * (s - 1) / 2;
    const std::uint64_t rev = cells - 1 - t;
    std::uint64_t k = static_cast<std::uint64_t>(
        (std::sqrt(8.0 * static_cast<double>(rev) + 1.0) - 1.0) / 2.0);
    while (k * (k + 1) / 2 > rev)
        --k;
    while ((k + 1) * (k + 2) / 2 <= rev)
        ++k;
    const std::size_t i = s - 2 - static_cast<std::size_t>(k);
    const std::size_t j =
        s - 1 - static_cast<std::size_t>(rev - k * (k + 1) / 2);
    return {i, j};
}

} // namespace

std::vector<int> sbm_communities(const SbmConfig &cfg) {
    if (cfg.communities == 0 || cfg.nodes < cfg.communities)
        throw ConfigError("sbm: need 1 <= communities <= nodes");
    auto starts = block_starts(cfg);
    std::vector<int> out(cfg.nodes);
    for (std::size_t c = 0; c < cfg.communities; ++c)
        for (std::size_t i = starts[c]; i < starts[c + 1]; ++i)
            out[i] = static_cast<int>(c);
    return out;
}

Graph sbm_graph(const SbmConfig &cfg) {
    if (cfg.communities == 0 || cfg.nodes < cfg.communities)
        throw ConfigError("sbm: need 1 <= communities <= nodes");
    if (cfg.p_in < 0 || cfg.p_in > 1 || cfg.p_out < 0 || cfg.p_out > 1)
        throw ConfigError("sbm: probabilities must be in [0, 1]");
    auto starts = block_starts(cfg);
    std::vector<std::pair<NodeId, NodeId>> edges;
    Rng rng(mix_seed(cfg.seed, 0x73626dULL));
    for (std::size_t a = 0; a < cfg.communities; ++a) {
        const std::size_t sa = starts[a + 1] - starts[a];
        if (sa >= 2) {
            const std::uint64_t cells =
                static_cast<std::uint64_t>(sa) * (sa - 1) / 2;
            sample_cells(rng, cells, cfg.p_in, [&](std::uint64_t t) {
                auto [i, j] = triangle_cell(t, sa);
                edges.emplace_back(static_cast<NodeId>(starts[a] + i),
                                   static_cast<NodeId>(starts[a] + j));
            });
        }
        for (std::size_t b = a + 1; b < cfg.communities; ++b) {
            const std::size_t sb = starts[b + 1] - starts[b];
            const std::uint64_t cells =
                static_cast<std::uint64_t>(sa) * sb;
            sample_cells(rng, cells, cfg.p_out, [&](std::uint64_t t) {
                edges.emplace_back(
                    static_cast<NodeId>(starts[a] + t / sb),
                    static_cast<NodeId>(starts[b] + t % sb));
            });
        }
    }
    std::vector<std::string> labels(cfg.nodes);
    for (std::size_t i = 0; i < cfg.nodes; ++i)
        labels[i] = cfg.label_prefix + std::to_string(i);
    return Graph::build(std::move(labels), edges);
}

} // namespace distne
