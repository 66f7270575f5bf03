#include "distne/errors.hpp"
#include "distne/graph.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

using namespace distne;
using namespace distne::testing;

TEST_CASE("load_edge_list: fig1 worked example") {
    Graph g = fig1_graph();
    CHECK(g.node_count() == 10);
    CHECK(g.edge_count() == 12);
    CHECK(g.validate());
    // internal ids follow first appearance
    CHECK(g.label(0) == "v1");
    CHECK(g.label(1) == "v2");
    CHECK(g.find("v10") == 9);
}

TEST_CASE("load_edge_list: empty stream") {
    std::istringstream in("");
    Graph g = load_edge_list(in);
    CHECK(g.node_count() == 0);
    CHECK(g.edge_count() == 0);
}

TEST_CASE("load_edge_list: duplicates and self-loops collapse") {
    std::istringstream in("a b\nb a\na a\na b\n");
    Graph g = load_edge_list(in);
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 1);
}

TEST_CASE("load_edge_list: comments and blanks are skipped") {
    std::istringstream in("# header\n\na b\n");
    CHECK(load_edge_list(in).edge_count() == 1);
}

TEST_CASE("load_edge_list: malformed line reports line number") {
    std::istringstream in("a b\nc\n");
    CHECK_THROWS_WITH_AS(load_edge_list(in),
                         doctest::Contains("line 2"), ParseError);
    std::istringstream in3("a b c\n");
    CHECK_THROWS_AS(load_edge_list(in3), ParseError);
}

TEST_CASE("induced_subgraph: fig1 G2") {
    Graph g = fig1_graph();
    NodeSet nodes = {g.find("v5"), g.find("v6"), g.find("v7")};
    std::sort(nodes.begin(), nodes.end());
    Graph g2 = induced_subgraph(g, nodes);
    CHECK(g2.node_count() == 3);
    CHECK(g2.edge_count() == 3); // v5-v6, v6-v7, v5-v7
    CHECK(g2.find("v6") != Graph::npos);
    CHECK(g2.validate());
}

TEST_CASE("induced_subgraph: full node set is the identity") {
    Graph g = fig1_graph();
    NodeSet all(g.node_count());
    std::iota(all.begin(), all.end(), NodeId{0});
    Graph h = induced_subgraph(g, all);
    CHECK(h.node_count() == g.node_count());
    CHECK(edge_set(h) == edge_set(g));
}

TEST_CASE("induced_subgraph: matches brute-force edge filter") {
    Graph g = random_graph(20, 0.3, 991);
    Rng rng(17);
    NodeSet subset;
    for (NodeId u = 0; u < 20; ++u)
        if (subset.size() < 8 && rng.uniform() < 0.5)
            subset.push_back(u);
    Graph sub = induced_subgraph(g, subset);
    std::vector<bool> in(20, false);
    for (NodeId u : subset)
        in[u] = true;
    std::size_t expected = 0;
    for (const auto &[u, v] : g.edges())
        expected += in[u] && in[v];
    CHECK(sub.edge_count() == expected);
    CHECK(sub.validate());
    // every subgraph edge maps back to a parent edge
    for (const auto &[a, b] : sub.edges())
        CHECK(g.has_edge(subset[a], subset[b]));
}

TEST_CASE("induced_subgraph: invalid id") {
    Graph g = fig1_graph();
    CHECK_THROWS_AS(induced_subgraph(g, {99}), ContractError);
}

TEST_CASE("border_nodes: fig1 has exactly v4, v5, v8, v10") {
    Graph g = fig1_graph();
    PartitionAssignment pa = fig1_assignment(g);
    NodeSet border = border_nodes(g, pa);
    std::vector<std::string> names;
    for (NodeId u : border)
        names.push_back(g.label(u));
    std::sort(names.begin(), names.end());
    CHECK(names == std::vector<std::string>{"v10", "v4", "v5", "v8"});
}

TEST_CASE("border_nodes: k=1 is always empty") {
    Graph g = random_graph(30, 0.2, 5);
    PartitionAssignment pa{g.node_count(), 1,
                           std::vector<std::uint32_t>(g.node_count(), 0),
                           {g.node_count()}};
    CHECK(border_nodes(g, pa).empty());
}

TEST_CASE("border_nodes: matches brute-force edge scan") {
    Graph g = random_graph(25, 0.25, 77);
    Rng rng(3);
    PartitionAssignment pa;
    pa.node_count = g.node_count();
    pa.k = 4;
    pa.sizes.assign(4, 0);
    for (NodeId u = 0; u < g.node_count(); ++u) {
        pa.assign.push_back(static_cast<std::uint32_t>(rng.below(4)));
        ++pa.sizes[pa.assign.back()];
    }
    std::set<NodeId> expected;
    for (const auto &[u, v] : g.edges())
        if (pa.assign[u] != pa.assign[v]) {
            expected.insert(u);
            expected.insert(v);
        }
    NodeSet got = border_nodes(g, pa);
    CHECK(std::set<NodeId>(got.begin(), got.end()) == expected);
}

TEST_CASE("border_nodes: mismatched assignment") {
    Graph g = fig1_graph();
    PartitionAssignment pa;
    pa.node_count = 3;
    pa.assign = {0, 0, 0};
    CHECK_THROWS_AS(border_nodes(g, pa), ContractError);
}

TEST_CASE("border_subgraph: fig1 has 4 nodes and 3 edges") {
    Graph g = fig1_graph();
    Graph gb = border_subgraph(g, fig1_assignment(g));
    CHECK(gb.node_count() == 4);
    CHECK(gb.edge_count() == 3);
    CHECK(gb.validate());
}

TEST_CASE("border_subgraph: two cliques joined by one edge") {
    // clique-wise partition leaves only the bridge endpoints
    std::vector<std::string> labels;
    for (int i = 0; i < 8; ++i)
        labels.push_back("c" + std::to_string(i));
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId u = 0; u < 4; ++u)
        for (NodeId v = u + 1; v < 4; ++v) {
            edges.emplace_back(u, v);
            edges.emplace_back(u + 4, v + 4);
        }
    edges.emplace_back(0, 4);
    Graph g = Graph::build(labels, edges);
    PartitionAssignment pa{8, 2, {0, 0, 0, 0, 1, 1, 1, 1}, {4, 4}};
    Graph gb = border_subgraph(g, pa);
    CHECK(gb.node_count() == 2);
    CHECK(gb.edge_count() == 1);
}

TEST_CASE("largest_connected_component: connected graph is itself") {
    Graph g = fig1_graph();
    auto [comp, members] = largest_connected_component(g);
    CHECK(comp.node_count() == g.node_count());
    CHECK(comp.edge_count() == g.edge_count());
    CHECK(members.size() == g.node_count());
}

TEST_CASE("largest_connected_component: triangle beats an edge") {
    std::istringstream in("a b\nb c\na c\nd e\n");
    Graph g = load_edge_list(in);
    auto [comp, members] = largest_connected_component(g);
    CHECK(comp.node_count() == 3);
    CHECK(comp.edge_count() == 3);
    CHECK(comp.find("d") == Graph::npos);
}

TEST_CASE("largest_connected_component: empty graph") {
    Graph g;
    auto [comp, members] = largest_connected_component(g);
    CHECK(comp.node_count() == 0);
    CHECK(members.empty());
}

TEST_CASE("largest_connected_component: matches union-find oracle") {
    // planted components: sparse graph decomposes into several pieces
    Graph g = random_graph(60, 0.02, 4242);
    std::vector<NodeId> parent(g.node_count());
    std::iota(parent.begin(), parent.end(), NodeId{0});
    std::function<NodeId(NodeId)> find = [&](NodeId x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto &[u, v] : g.edges())
        parent[find(u)] = find(v);
    std::map<NodeId, std::size_t> sizes;
    for (NodeId u = 0; u < g.node_count(); ++u)
        ++sizes[find(u)];
    std::size_t best = 0;
    for (const auto &[root, sz] : sizes)
        best = std::max(best, sz);
    auto [comp, members] = largest_connected_component(g);
    CHECK(comp.node_count() == best);
    // members all share one union-find root
    for (NodeId u : members)
        CHECK(find(u) == find(members[0]));
}
