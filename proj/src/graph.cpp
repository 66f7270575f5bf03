#include "distne/graph.hpp"
#include "distne/errors.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace distne {

Graph Graph::build(std::vector<std::string> labels,
                   const std::vector<std::pair<NodeId, NodeId>> &edges) {
    const std::size_t n = labels.size();
    std::vector<std::vector<NodeId>> adj(n);
    for (const auto &[u, v] : edges) {
        if (u >= n || v >= n)
            throw ContractError("edge endpoint out of range");
        if (u == v)
            continue;
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    Graph g;
    g.labels_ = std::move(labels);
    g.ids_.reserve(n);
    for (NodeId i = 0; i < n; ++i)
        g.ids_.emplace(g.labels_[i], i);
    g.offsets_.assign(n + 1, 0);
    std::size_t total = 0;
    for (NodeId u = 0; u < n; ++u) {
        auto &nb = adj[u];
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        total += nb.size();
        g.offsets_[u + 1] = total;
    }
    g.adj_.reserve(total);
    for (NodeId u = 0; u < n; ++u)
        g.adj_.insert(g.adj_.end(), adj[u].begin(), adj[u].end());
    return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

NodeId Graph::find(const std::string &label) const {
    auto it = ids_.find(label);
    return it == ids_.end() ? npos : it->second;
}

std::vector<std::pair<NodeId, NodeId>> Graph::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u)
        for (NodeId v : neighbors(u))
            if (u < v)
                out.emplace_back(u, v);
    return out;
}

bool Graph::validate() const {
    const std::size_t n = node_count();
    if (offsets_.size() != n + 1 || offsets_[0] != 0)
        return false;
    if (offsets_[n] != adj_.size() || adj_.size() != 2 * edge_count())
        return false;
    for (NodeId u = 0; u < n; ++u) {
        if (offsets_[u] > offsets_[u + 1])
            return false;
        auto nb = neighbors(u);
        for (std::size_t i = 0; i < nb.size(); ++i) {
            if (nb[i] >= n || nb[i] == u)
                return false;
            if (i > 0 && nb[i - 1] >= nb[i])
                return false;
            if (!has_edge(nb[i], u))
                return false;
        }
    }
    return true;
}

double Graph::avg_adjacency_bytes() const {
    if (node_count() == 0)
        return static_cast<double>(sizeof(NodeId));
    // id + offset per node plus one id per directed adjacency entry
    double bytes = static_cast<double>(adj_.size()) * sizeof(NodeId) +
                   static_cast<double>(node_count()) *
                       (sizeof(NodeId) + sizeof(std::uint64_t));
    return bytes / static_cast<double>(node_count());
}

Graph load_edge_list(std::istream &in) {
    std::vector<std::string> labels;
    std::unordered_map<std::string, NodeId> ids;
    std::vector<std::pair<NodeId, NodeId>> edges;
    auto intern = [&](const std::string &s) -> NodeId {
        auto it = ids.find(s);
        if (it != ids.end())
            return it->second;
        NodeId id = static_cast<NodeId>(labels.size());
        labels.push_back(s);
        ids.emplace(s, id);
        return id;
    };
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string a, b, extra;
        if (!(ls >> a))
            continue; // blank line
        if (a[0] == '#')
            continue;
        if (!(ls >> b) || (ls >> extra))
            throw ParseError("edge list line " + std::to_string(lineno) +
                             ": expected exactly two tokens");
        // sequence the interning: argument evaluation order is unspecified
        const NodeId ua = intern(a);
        const NodeId ub = intern(b);
        edges.emplace_back(ua, ub);
    }
    return Graph::build(std::move(labels), edges);
}

Graph load_edge_list_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open edge list: " + path);
    return load_edge_list(in);
}

void save_edge_list(const Graph &g, std::ostream &out) {
    // leading self-loop lines register every node; loading drops the
    // loops but keeps node order and isolated nodes intact
    for (NodeId u = 0; u < g.node_count(); ++u)
        out << g.label(u) << ' ' << g.label(u) << '\n';
    for (const auto &[u, v] : g.edges())
        out << g.label(u) << ' ' << g.label(v) << '\n';
}

void save_edge_list_file(const Graph &g, const std::string &path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write edge list: " + path);
    save_edge_list(g, out);
}

Graph induced_subgraph(const Graph &g, const NodeSet &nodes) {
    const std::size_t n = g.node_count();
    std::vector<NodeId> local(n, Graph::npos);
    std::vector<std::string> labels;
    labels.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        NodeId u = nodes[i];
        if (u >= n)
            throw ContractError("induced_subgraph: node id out of range");
        if (local[u] != Graph::npos)
            throw ContractError("induced_subgraph: duplicate node id");
        local[u] = static_cast<NodeId>(i);
        labels.push_back(g.label(u));
    }
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId u : nodes)
        for (NodeId v : g.neighbors(u))
            if (u < v && local[v] != Graph::npos)
                edges.emplace_back(local[u], local[v]);
    return Graph::build(std::move(labels), edges);
}

static void check_assignment(const Graph &g, const PartitionAssignment &pa) {
    if (pa.node_count != g.node_count() || pa.assign.size() != g.node_count())
        throw ContractError("assignment does not match graph");
}

NodeSet border_nodes(const Graph &g, const PartitionAssignment &pa) {
    check_assignment(g, pa);
    NodeSet out;
    for (NodeId u = 0; u < g.node_count(); ++u)
        for (NodeId v : g.neighbors(u))
            if (pa.assign[u] != pa.assign[v]) {
                out.push_back(u);
                break;
            }
    return out;
}

Graph border_subgraph(const Graph &g, const PartitionAssignment &pa) {
    return induced_subgraph(g, border_nodes(g, pa));
}

std::pair<Graph, NodeSet> largest_connected_component(const Graph &g) {
    const std::size_t n = g.node_count();
    std::vector<NodeId> comp(n, Graph::npos);
    NodeId best = Graph::npos;
    std::size_t best_size = 0;
    std::vector<NodeId> stack;
    NodeId ncomp = 0;
    for (NodeId s = 0; s < n; ++s) {
        if (comp[s] != Graph::npos)
            continue;
        std::size_t size = 0;
        stack.push_back(s);
        comp[s] = ncomp;
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            ++size;
            for (NodeId v : g.neighbors(u))
                if (comp[v] == Graph::npos) {
                    comp[v] = ncomp;
                    stack.push_back(v);
                }
        }
        // ties resolved toward the earlier component, whose minimum id
        // is necessarily smaller (components are discovered in id order)
        if (size > best_size) {
            best_size = size;
            best = ncomp;
        }
        ++ncomp;
    }
    NodeSet members;
    members.reserve(best_size);
    for (NodeId u = 0; u < n; ++u)
        if (comp[u] == best)
            members.push_back(u);
    return {induced_subgraph(g, members), members};
}

} // namespace distne
