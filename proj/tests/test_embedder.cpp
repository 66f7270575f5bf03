#include "distne/embedder.hpp"
#include "distne/errors.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace distne;
using namespace distne::testing;

TEST_CASE("embed_length: worked values") {
    // d=128, delta=0.5, gamma=3: cuts at 64, 32, 16
    CHECK(embed_length(1, 0, 128, 0.5, 3, false) == 64);
    CHECK(embed_length(2, 0, 128, 0.5, 3, false) == 32);
    CHECK(embed_length(3, 0, 128, 0.5, 3, false) == 16);
    CHECK(embed_length(3, 1, 128, 0.5, 3, false) == 16);
    // border leaves above the last level are not embedded
    CHECK(embed_length(1, 1, 128, 0.5, 3, false) == 0);
    CHECK(embed_length(2, 1, 128, 0.5, 3, false) == 0);
}

TEST_CASE("embed_length: segments always sum to the full dimension") {
    for (std::size_t d : {16u, 33u, 100u, 128u, 257u}) {
        for (double delta : {0.05, 0.17, 1.0 / 3.0, 0.5}) {
            for (int gamma = 1; gamma <= 5; ++gamma) {
                std::size_t total = 0;
                for (int j = 1; j <= gamma; ++j)
                    total += embed_length(j, 0, d, delta, gamma, false);
                total += embed_length(gamma, 1, d, delta, gamma, false);
                CHECK(total == d);
            }
        }
    }
}

TEST_CASE("embed_length: empty border gives the last level the remainder") {
    // with no border subgraph the level-gamma induced leaves absorb
    // what the border segment would have taken
    std::size_t with_border = embed_length(2, 0, 128, 0.5, 2, false);
    std::size_t without = embed_length(2, 0, 128, 0.5, 2, true);
    CHECK(with_border == 32);
    CHECK(without == 64);
    CHECK(embed_length(1, 0, 128, 0.5, 2, true) +
              embed_length(2, 0, 128, 0.5, 2, true) ==
          128);
}

TEST_CASE("random_walks: shape and validity") {
    Graph g = fig1_graph();
    WalkConfig cfg;
    cfg.walks_per_node = 4;
    cfg.walk_length = 12;
    cfg.seed = 17;
    WalkCorpus walks = random_walks(g, cfg);
    REQUIRE(walks.size() == g.node_count() * 4);
    for (std::size_t i = 0; i < walks.size(); ++i) {
        const auto &w = walks[i];
        REQUIRE(!w.empty());
        CHECK(w.size() <= 12);
        CHECK(w[0] == i / 4); // walks grouped by start node
        for (std::size_t t = 1; t < w.size(); ++t)
            CHECK(g.has_edge(w[t - 1], w[t]));
    }
}

TEST_CASE("random_walks: isolated node yields singleton walks") {
    Graph g = Graph::build({"alone", "a", "b"}, {{1, 2}});
    WalkConfig cfg;
    cfg.walks_per_node = 3;
    WalkCorpus walks = random_walks(g, cfg);
    for (const auto &w : walks)
        if (w[0] == g.find("alone"))
            CHECK(w.size() == 1);
}

TEST_CASE("random_walks: deterministic per seed") {
    Graph g = random_graph(30, 0.2, 55);
    WalkConfig cfg;
    cfg.seed = 1234;
    CHECK(random_walks(g, cfg) == random_walks(g, cfg));
    cfg.seed = 1235;
    CHECK(random_walks(g, cfg) != random_walks(random_graph(30, 0.2, 55),
                                               WalkConfig{10, 40, 1.0, 1.0,
                                                          1234}));
}

TEST_CASE("random_walks: return parameter biases backtracking") {
    // second-order bias: small p makes immediate returns much more
    // likely than large p on the same graph
    Graph g = random_graph(40, 0.15, 777);
    auto backtrack_rate = [&](double p) {
        WalkConfig cfg;
        cfg.walks_per_node = 20;
        cfg.walk_length = 20;
        cfg.return_param = p;
        cfg.seed = 5;
        WalkCorpus walks = random_walks(g, cfg);
        std::size_t returns = 0, steps = 0;
        for (const auto &w : walks)
            for (std::size_t t = 2; t < w.size(); ++t) {
                ++steps;
                returns += w[t] == w[t - 2];
            }
        return static_cast<double>(returns) / static_cast<double>(steps);
    };
    CHECK(backtrack_rate(0.1) > backtrack_rate(10.0) + 0.1);
}

TEST_CASE("sgns_gradient: loss at the origin") {
    // all-zero vectors: every sigmoid is 1/2
    std::vector<double> zero(8, 0.0);
    SgnsGradient grad = sgns_gradient(zero, zero, {zero, zero, zero});
    CHECK(grad.loss == doctest::Approx(4.0 * std::log(2.0)));
    for (double v : grad.d_positive)
        CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("sgns_gradient: matches finite differences") {
    Rng rng(321);
    const std::size_t dim = 6;
    auto rand_vec = [&] {
        std::vector<double> v(dim);
        for (double &x : v)
            x = rng.uniform() * 2.0 - 1.0;
        return v;
    };
    std::vector<double> x = rand_vec(), y = rand_vec();
    std::vector<std::vector<double>> z = {rand_vec(), rand_vec()};
    SgnsGradient g0 = sgns_gradient(x, y, z);
    const double h = 1e-6;
    auto probe = [&](std::vector<double> &target, const double *analytic) {
        for (std::size_t i = 0; i < dim; ++i) {
            const double save = target[i];
            target[i] = save + h;
            const double up = sgns_gradient(x, y, z).loss;
            target[i] = save - h;
            const double dn = sgns_gradient(x, y, z).loss;
            target[i] = save;
            const double fd = (up - dn) / (2 * h);
            CHECK(analytic[i] == doctest::Approx(fd).epsilon(1e-5));
        }
    };
    probe(x, g0.d_center.data());
    probe(y, g0.d_positive.data());
    probe(z[0], g0.d_negatives[0].data());
    probe(z[1], g0.d_negatives[1].data());
}

TEST_CASE("train_sgns: loss decreases and output is deterministic") {
    Graph g = random_graph(40, 0.15, 808);
    WalkConfig wcfg;
    wcfg.walks_per_node = 5;
    wcfg.walk_length = 20;
    wcfg.seed = 2;
    WalkCorpus walks = random_walks(g, wcfg);
    TrainConfig tcfg;
    tcfg.dim = 16;
    tcfg.epochs = 4;
    tcfg.seed = 9;
    TrainStats stats;
    auto vecs = train_sgns(g, walks, tcfg, &stats);
    REQUIRE(vecs.size() == g.node_count());
    for (const auto &v : vecs) {
        REQUIRE(v.size() == 16);
        for (double x : v)
            CHECK(std::isfinite(x));
    }
    REQUIRE(stats.epoch_mean_loss.size() == 4);
    CHECK(stats.pair_count > 0);
    CHECK(stats.epoch_mean_loss.back() < stats.epoch_mean_loss.front());
    CHECK(train_sgns(g, walks, tcfg) == vecs);
}

TEST_CASE("embed_subgraph: shapes, labels, and the zero-length contract") {
    Graph g = fig1_graph();
    WalkConfig wcfg;
    wcfg.walks_per_node = 3;
    wcfg.walk_length = 10;
    TrainConfig tcfg;
    tcfg.dim = 12;
    tcfg.epochs = 1;
    SegmentEmbedding seg = embed_subgraph(g, "sub_1_0_0", 1, 0, wcfg, tcfg);
    CHECK(seg.leaf_id == "sub_1_0_0");
    CHECK(seg.iteration == 1);
    CHECK(seg.border_flag == 0);
    CHECK(seg.dim == 12);
    REQUIRE(seg.labels.size() == g.node_count());
    REQUIRE(seg.vectors.size() == g.node_count());
    for (std::size_t i = 0; i < seg.labels.size(); ++i)
        CHECK(seg.labels[i] == g.label(static_cast<NodeId>(i)));

    tcfg.dim = 0;
    CHECK_THROWS_AS(embed_subgraph(g, "bad", 1, 0, wcfg, tcfg),
                    ContractError);
}

TEST_CASE("segment round trip through the text format") {
    SegmentEmbedding seg;
    seg.leaf_id = "sub_2_1_0";
    seg.iteration = 2;
    seg.border_flag = 1;
    seg.dim = 3;
    seg.labels = {"alpha", "beta"};
    seg.vectors = {{0.125, -3.5, 0.000001}, {1.0, 2.0, -0.75}};
    std::ostringstream out;
    save_segment(seg, out);
    std::istringstream in(out.str());
    SegmentEmbedding back = load_segment(in);
    CHECK(back.iteration == 2);
    CHECK(back.border_flag == 1);
    CHECK(back.dim == 3);
    REQUIRE(back.labels == seg.labels);
    for (std::size_t i = 0; i < seg.vectors.size(); ++i)
        for (std::size_t c = 0; c < 3; ++c)
            CHECK(back.vectors[i][c] ==
                  doctest::Approx(seg.vectors[i][c]).epsilon(1e-6));
}

TEST_CASE("load_segment: malformed header") {
    std::istringstream in("not a header\n");
    CHECK_THROWS_AS(load_segment(in), ParseError);
}
