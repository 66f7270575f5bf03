#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace distne {

using NodeId = std::uint32_t;

// Sorted, deduplicated set of internal node ids.
using NodeSet = std::vector<NodeId>;

// Immutable undirected simple graph: CSR adjacency over dense internal
// ids plus a bidirectional map to the external string labels. Safe to
// read concurrently once built.
class Graph {
public:
    Graph() = default;

    // Builds from (u,v) id pairs; symmetrizes, drops self-loops,
    // collapses duplicates. labels[i] is the external label of id i.
    static Graph build(std::vector<std::string> labels,
                       const std::vector<std::pair<NodeId, NodeId>> &edges);

    std::size_t node_count() const { return labels_.size(); }
    std::size_t edge_count() const { return adj_.size() / 2; }

    std::span<const NodeId> neighbors(NodeId u) const {
        return {adj_.data() + offsets_[u], adj_.data() + offsets_[u + 1]};
    }
    std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }
    bool has_edge(NodeId u, NodeId v) const;

    const std::string &label(NodeId u) const { return labels_[u]; }
    const std::vector<std::string> &labels() const { return labels_; }

    // Internal id for an external label, or -1 cast to NodeId if absent.
    static constexpr NodeId npos = static_cast<NodeId>(-1);
    NodeId find(const std::string &label) const;

    // Undirected edges as (u,v) with u < v, in CSR order.
    std::vector<std::pair<NodeId, NodeId>> edges() const;

    // Full-scan check of the CSR invariants (symmetry, sortedness,
    // no loops or duplicates).
    bool validate() const;

    // Average serialized adjacency bytes per node; the default memory
    // estimate for choosing k.
    double avg_adjacency_bytes() const;

private:
    std::vector<std::uint64_t> offsets_{0};
    std::vector<NodeId> adj_;
    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> ids_;
};

// One level of a k-way partitioning: node -> partition index plus
// per-partition cardinalities.
struct PartitionAssignment {
    std::size_t node_count = 0; // of the partitioned graph
    std::uint32_t k = 0;
    std::vector<std::uint32_t> assign;
    std::vector<std::uint64_t> sizes;
};

// Edge-list ingestion: two whitespace-separated labels per line, `#`
// lines ignored. Duplicate edges collapse, self-loops drop, internal
// ids follow first appearance.
Graph load_edge_list(std::istream &in);
Graph load_edge_list_file(const std::string &path);
// Writes one self-loop line per node before the edges so that loading
// the file reproduces the exact node ordering, isolated nodes included.
void save_edge_list(const Graph &g, std::ostream &out);
void save_edge_list_file(const Graph &g, const std::string &path);

// Induced subgraph on `nodes` (sorted parent ids). Subgraph id i maps
// back to parent id nodes[i]; labels carry over.
Graph induced_subgraph(const Graph &g, const NodeSet &nodes);

// Nodes with at least one neighbor in a different partition.
NodeSet border_nodes(const Graph &g, const PartitionAssignment &pa);

Graph border_subgraph(const Graph &g, const PartitionAssignment &pa);

// Component with the most nodes; ties broken by smallest minimum
// internal id. Second element is the parent-id set of the component.
std::pair<Graph, NodeSet> largest_connected_component(const Graph &g);

} // namespace distne
