#include "distne/evaluate.hpp"
#include "distne/errors.hpp"
#include "distne/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace distne {

SimilarityKind parse_similarity(const std::string &name) {
    if (name == "cosine")
        return SimilarityKind::Cosine;
    if (name == "euclidean")
        return SimilarityKind::Euclidean;
    throw ConfigError("unknown similarity kind: " + name);
}

LinkPredSplit lp_split(const Graph &g, double alpha, std::uint64_t seed) {
    if (alpha <= 0 || alpha >= 1)
        throw ConfigError("lp_split: alpha must be in (0, 1)");
    if (g.edge_count() < 10)
        throw ConfigError("lp_split: graph needs at least 10 edges");

    auto edges = g.edges();
    Rng rng(mix_seed(seed, 0x6c70ULL));
    rng.shuffle(edges);
    const std::size_t n_remove = static_cast<std::size_t>(
        std::floor(alpha * static_cast<double>(edges.size())));
    std::vector<std::pair<NodeId, NodeId>> removed(edges.begin(),
                                                   edges.begin() + n_remove);
    std::vector<std::pair<NodeId, NodeId>> residual(edges.begin() + n_remove,
                                                    edges.end());

    Graph residual_graph = Graph::build(g.labels(), residual);
    auto [component, members] = largest_connected_component(residual_graph);

    std::vector<bool> in_comp(g.node_count(), false);
    for (NodeId u : members)
        in_comp[u] = true;

    LinkPredSplit split;
    split.alpha = alpha;
    split.seed = seed;
    split.train_graph = std::move(component);
    for (const auto &[u, v] : removed)
        if (in_comp[u] && in_comp[v])
            split.positives.emplace_back(g.label(u), g.label(v));
    if (split.positives.empty())
        throw IntegrityError("lp_split: degenerate split, no positive edges "
                             "survive the component restriction; retry with "
                             "another seed");

    std::set<std::pair<NodeId, NodeId>> chosen;
    const std::size_t need = split.positives.size();
    std::size_t budget = 1000 * need + 1000;
    while (chosen.size() < need) {
        if (budget-- == 0)
            throw IntegrityError("lp_split: cannot sample enough non-edges");
        NodeId a = members[rng.below(members.size())];
        NodeId b = members[rng.below(members.size())];
        if (a == b)
            continue;
        auto pair = std::minmax(a, b);
        if (g.has_edge(a, b))
            continue;
        if (chosen.insert({pair.first, pair.second}).second)
            split.negatives.emplace_back(g.label(pair.first),
                                         g.label(pair.second));
    }
    return split;
}

double similarity(std::span<const double> x, std::span<const double> y,
                  SimilarityKind kind) {
    if (x.size() != y.size())
        throw ContractError("similarity: length mismatch");
    if (kind == SimilarityKind::Cosine) {
        double dot = 0, nx = 0, ny = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            dot += x[i] * y[i];
            nx += x[i] * x[i];
            ny += y[i] * y[i];
        }
        if (nx == 0 || ny == 0)
            return 0.0;
        return dot / (std::sqrt(nx) * std::sqrt(ny));
    }
    double dist2 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double diff = x[i] - y[i];
        dist2 += diff * diff;
    }
    return -std::sqrt(dist2);
}

double lp_precision(const FusedEmbedding &emb, const LinkPredSplit &split,
                    SimilarityKind kind) {
    struct Scored {
        double sim;
        std::pair<std::string, std::string> key;
        bool positive;
    };
    std::vector<Scored> scored;
    scored.reserve(split.positives.size() + split.negatives.size());
    auto score = [&](const std::pair<std::string, std::string> &p,
                     bool positive) {
        const auto *x = emb.find(p.first);
        const auto *y = emb.find(p.second);
        if (!x)
            throw IntegrityError("lp_precision: no embedding for node '" +
                                 p.first + "'");
        if (!y)
            throw IntegrityError("lp_precision: no embedding for node '" +
                                 p.second + "'");
        auto key = std::minmax(p.first, p.second);
        scored.push_back({similarity(*x, *y, kind),
                          {key.first, key.second}, positive});
    };
    for (const auto &p : split.positives)
        score(p, true);
    for (const auto &p : split.negatives)
        score(p, false);
    std::sort(scored.begin(), scored.end(), [](const Scored &a,
                                               const Scored &b) {
        if (a.sim != b.sim)
            return a.sim > b.sim;
        return a.key < b.key;
    });
    const std::size_t cut = split.positives.size();
    std::size_t hits = 0;
    for (std::size_t i = 0; i < cut && i < scored.size(); ++i)
        hits += scored[i].positive;
    return static_cast<double>(hits) / static_cast<double>(cut);
}

LabelSet load_labels(std::istream &in) {
    LabelSet out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string node;
        if (!(ls >> node) || node[0] == '#')
            continue;
        std::vector<int> classes;
        int c;
        while (ls >> c) {
            if (c < 0)
                throw ParseError("label file line " + std::to_string(lineno) +
                                 ": negative class index");
            classes.push_back(c);
            out.num_classes = std::max(out.num_classes, c + 1);
        }
        if (classes.empty())
            throw ParseError("label file line " + std::to_string(lineno) +
                             ": node without classes");
        std::sort(classes.begin(), classes.end());
        classes.erase(std::unique(classes.begin(), classes.end()),
                      classes.end());
        out.labels[node] = std::move(classes);
    }
    return out;
}

LabelSet load_labels_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open label file: " + path);
    return load_labels(in);
}

namespace {

struct SplitData {
    std::vector<const std::vector<double> *> features;
    std::vector<const std::vector<int> *> classes;
    std::size_t train_count = 0; // prefix of the arrays
};

SplitData make_split(const FusedEmbedding &emb, const LabelSet &labels,
                     std::uint64_t seed) {
    std::vector<std::string> nodes;
    nodes.reserve(labels.labels.size());
    for (const auto &[node, cls] : labels.labels)
        nodes.push_back(node);
    std::sort(nodes.begin(), nodes.end());
    Rng rng(mix_seed(seed, 0x6e63ULL));
    rng.shuffle(nodes);
    SplitData data;
    for (const auto &node : nodes) {
        const auto *vec = emb.find(node);
        if (!vec)
            throw IntegrityError("node_classification: no embedding for "
                                 "node '" + node + "'");
        data.features.push_back(vec);
        data.classes.push_back(&labels.labels.at(node));
    }
    data.train_count = nodes.size() / 2;
    return data;
}

void score_to_f1(const std::vector<std::vector<double>> &scores,
                 const SplitData &data, int num_classes,
                 NodeClassificationResult &out) {
    std::vector<std::uint64_t> tp(num_classes, 0), fp(num_classes, 0),
        fn(num_classes, 0);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const auto &truth = *data.classes[data.train_count + i];
        const std::size_t t = truth.size();
        std::vector<int> order(num_classes);
        for (int c = 0; c < num_classes; ++c)
            order[c] = c;
        std::partial_sort(order.begin(), order.begin() + t, order.end(),
                          [&](int a, int b) {
                              if (scores[i][a] != scores[i][b])
                                  return scores[i][a] > scores[i][b];
                              return a < b;
                          });
        std::vector<bool> predicted(num_classes, false);
        for (std::size_t r = 0; r < t; ++r)
            predicted[order[r]] = true;
        std::vector<bool> actual(num_classes, false);
        for (int c : truth)
            actual[c] = true;
        for (int c = 0; c < num_classes; ++c) {
            if (predicted[c] && actual[c])
                ++tp[c];
            else if (predicted[c])
                ++fp[c];
            else if (actual[c])
                ++fn[c];
        }
    }
    std::uint64_t stp = 0, sfp = 0, sfn = 0;
    double macro = 0;
    for (int c = 0; c < num_classes; ++c) {
        stp += tp[c];
        sfp += fp[c];
        sfn += fn[c];
        const std::uint64_t denom = 2 * tp[c] + fp[c] + fn[c];
        macro += denom == 0 ? 0.0
                            : 2.0 * static_cast<double>(tp[c]) /
                                  static_cast<double>(denom);
    }
    const std::uint64_t denom = 2 * stp + sfp + sfn;
    out.micro_f1 = denom == 0 ? 0.0
                              : 2.0 * static_cast<double>(stp) /
                                    static_cast<double>(denom);
    out.macro_f1 = num_classes == 0 ? 0.0 : macro / num_classes;
}

} // namespace

NodeClassificationResult
node_classification(const FusedEmbedding &emb, const LabelSet &labels,
                    std::uint64_t seed, const NodeClassificationConfig &cfg) {
    const int num_classes = labels.num_classes;
    if (num_classes < 2)
        throw ConfigError("node_classification: need at least 2 classes");
    SplitData data = make_split(emb, labels, seed);
    const std::size_t n_train = data.train_count;
    const std::size_t n_test = data.features.size() - n_train;
    if (n_train == 0 || n_test == 0)
        throw ConfigError("node_classification: not enough labeled nodes");
    const std::size_t dim = data.features[0]->size();

    NodeClassificationResult out;
    std::vector<std::vector<double>> scores(n_test,
                                            std::vector<double>(num_classes));
    std::vector<double> w(dim);
    std::vector<double> grad(dim);
    for (int c = 0; c < num_classes; ++c) {
        std::size_t positives = 0;
        for (std::size_t i = 0; i < n_train; ++i)
            positives += std::binary_search(data.classes[i]->begin(),
                                            data.classes[i]->end(), c);
        if (positives == 0) {
            // Laplace-smoothed prior as a constant score
            out.prior_only_classes.push_back(c);
            const double prior = 1.0 / static_cast<double>(n_train + 2);
            const double bias = std::log(prior / (1.0 - prior));
            for (std::size_t i = 0; i < n_test; ++i)
                scores[i][c] = bias;
            continue;
        }
        std::fill(w.begin(), w.end(), 0.0);
        double b = 0;
        for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
            std::fill(grad.begin(), grad.end(), 0.0);
            double gb = 0;
            for (std::size_t i = 0; i < n_train; ++i) {
                const auto &x = *data.features[i];
                double s = b;
                for (std::size_t d = 0; d < dim; ++d)
                    s += w[d] * x[d];
                const double p = 1.0 / (1.0 + std::exp(-s));
                const double y = std::binary_search(data.classes[i]->begin(),
                                                    data.classes[i]->end(), c)
                                     ? 1.0
                                     : 0.0;
                const double err = p - y;
                for (std::size_t d = 0; d < dim; ++d)
                    grad[d] += err * x[d];
                gb += err;
            }
            const double inv_n = 1.0 / static_cast<double>(n_train);
            for (std::size_t d = 0; d < dim; ++d)
                w[d] -= cfg.lr * (grad[d] * inv_n + cfg.l2 * inv_n * w[d]);
            b -= cfg.lr * gb * inv_n;
        }
        for (std::size_t i = 0; i < n_test; ++i) {
            const auto &x = *data.features[n_train + i];
            double s = b;
            for (std::size_t d = 0; d < dim; ++d)
                s += w[d] * x[d];
            scores[i][c] = s;
        }
    }
    score_to_f1(scores, data, num_classes, out);
    return out;
}

double nc_frequency_baseline(const FusedEmbedding &emb, const LabelSet &labels,
                             std::uint64_t seed) {
    const int num_classes = labels.num_classes;
    SplitData data = make_split(emb, labels, seed);
    const std::size_t n_train = data.train_count;
    const std::size_t n_test = data.features.size() - n_train;
    std::vector<double> freq(num_classes, 0.0);
    for (std::size_t i = 0; i < n_train; ++i)
        for (int c : *data.classes[i])
            freq[c] += 1.0;
    std::vector<std::vector<double>> scores(n_test, freq);
    NodeClassificationResult out;
    score_to_f1(scores, data, num_classes, out);
    return out.micro_f1;
}

} // namespace distne
