#include "distne/embedder.hpp"
#include "distne/errors.hpp"
#include "distne/rng.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace distne {

std::size_t embed_length(int j, int q, std::size_t d, double delta, int gamma,
                         bool border_empty) {
    if (j < 1 || j > gamma || (q != 0 && q != 1))
        throw ContractError("embed_length: (j, q) out of range");
    auto budget = [&](int e) -> std::size_t {
        // ceil(delta^e * d); budget(0) == d
        return static_cast<std::size_t>(
            std::ceil(std::pow(delta, e) * static_cast<double>(d)));
    };
    if (q == 1) {
        if (j < gamma || border_empty)
            return 0;
        return budget(gamma);
    }
    if (j == gamma && border_empty)
        return budget(gamma - 1);
    return budget(j - 1) - budget(j);
}

WalkCorpus random_walks(const Graph &g, const WalkConfig &cfg) {
    if (cfg.walks_per_node < 1 || cfg.walk_length < 1 ||
        cfg.return_param <= 0 || cfg.inout_param <= 0)
        throw ConfigError("random_walks: bad walk configuration");
    const std::size_t n = g.node_count();
    WalkCorpus corpus;
    corpus.reserve(n * static_cast<std::size_t>(cfg.walks_per_node));
    std::vector<double> weights;
    for (NodeId u = 0; u < n; ++u) {
        for (int r = 0; r < cfg.walks_per_node; ++r) {
            Rng rng(mix_seed(mix_seed(cfg.seed, u), static_cast<std::uint64_t>(r)));
            std::vector<NodeId> walk{u};
            walk.reserve(cfg.walk_length);
            while (walk.size() < static_cast<std::size_t>(cfg.walk_length)) {
                NodeId cur = walk.back();
                auto nb = g.neighbors(cur);
                if (nb.empty())
                    break;
                NodeId next;
                if (walk.size() == 1) {
                    next = nb[rng.below(nb.size())];
                } else {
                    NodeId prev = walk[walk.size() - 2];
                    weights.resize(nb.size());
                    double total = 0;
                    for (std::size_t i = 0; i < nb.size(); ++i) {
                        double w;
                        if (nb[i] == prev)
                            w = 1.0 / cfg.return_param;
                        else if (g.has_edge(nb[i], prev))
                            w = 1.0;
                        else
                            w = 1.0 / cfg.inout_param;
                        total += w;
                        weights[i] = total;
                    }
                    double t = rng.uniform() * total;
                    std::size_t i = 0;
                    while (i + 1 < nb.size() && weights[i] <= t)
                        ++i;
                    next = nb[i];
                }
                walk.push_back(next);
            }
            corpus.push_back(std::move(walk));
        }
    }
    return corpus;
}

SgnsGradient sgns_gradient(const std::vector<double> &center,
                           const std::vector<double> &positive,
                           const std::vector<std::vector<double>> &negatives) {
    const std::size_t dim = center.size();
    if (positive.size() != dim)
        throw ContractError("sgns_gradient: length mismatch");
    auto sigmoid = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
    auto dot = [&](const std::vector<double> &a, const std::vector<double> &b) {
        double s = 0;
        for (std::size_t i = 0; i < dim; ++i)
            s += a[i] * b[i];
        return s;
    };
    SgnsGradient out;
    out.d_center.assign(dim, 0.0);
    out.d_positive.assign(dim, 0.0);
    const double sp = sigmoid(dot(center, positive));
    out.loss = -std::log(sp);
    for (std::size_t i = 0; i < dim; ++i) {
        out.d_center[i] += (sp - 1.0) * positive[i];
        out.d_positive[i] = (sp - 1.0) * center[i];
    }
    out.d_negatives.reserve(negatives.size());
    for (const auto &z : negatives) {
        if (z.size() != dim)
            throw ContractError("sgns_gradient: length mismatch");
        const double sn = sigmoid(dot(center, z));
        out.loss -= std::log(1.0 - sn);
        std::vector<double> dz(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            out.d_center[i] += sn * z[i];
            dz[i] = sn * center[i];
        }
        out.d_negatives.push_back(std::move(dz));
    }
    return out;
}

namespace {

std::vector<NodeId> build_negative_table(const Graph &g, std::size_t size) {
    const std::size_t n = g.node_count();
    std::vector<double> cum(n);
    double total = 0;
    for (NodeId u = 0; u < n; ++u) {
        double w = std::pow(static_cast<double>(g.degree(u)), 0.75);
        if (w <= 0)
            w = 1e-12; // keep isolated nodes sampleable in degenerate leaves
        total += w;
        cum[u] = total;
    }
    std::vector<NodeId> table(size);
    NodeId u = 0;
    for (std::size_t i = 0; i < size; ++i) {
        double target = (static_cast<double>(i) + 0.5) / size * total;
        while (u + 1 < n && cum[u] < target)
            ++u;
        table[i] = u;
    }
    return table;
}

} // namespace

std::vector<std::vector<double>> train_sgns(const Graph &g,
                                            const WalkCorpus &corpus,
                                            const TrainConfig &cfg,
                                            TrainStats *stats) {
    const std::size_t n = g.node_count();
    const std::size_t dim = cfg.dim;
    if (cfg.window < 1 || cfg.negatives < 1 || cfg.epochs < 1 ||
        cfg.lr_initial <= 0)
        throw ConfigError("train_sgns: bad training configuration");
    std::vector<std::vector<double>> input(n, std::vector<double>(dim));
    if (dim == 0)
        return input;
    Rng init_rng(mix_seed(cfg.seed, 0x696e6974ULL));
    const double half = 0.5 / static_cast<double>(dim);
    for (auto &vec : input)
        for (auto &x : vec)
            x = init_rng.uniform(-half, half);
    std::vector<std::vector<double>> output(n, std::vector<double>(dim, 0.0));

    std::uint64_t pair_count = 0;
    const int w = cfg.window;
    for (const auto &walk : corpus) {
        const std::ptrdiff_t len = static_cast<std::ptrdiff_t>(walk.size());
        for (std::ptrdiff_t i = 0; i < len; ++i)
            pair_count += static_cast<std::uint64_t>(
                std::min<std::ptrdiff_t>(i + w, len - 1) -
                std::max<std::ptrdiff_t>(i - w, 0));
    }
    if (stats) {
        stats->pair_count = pair_count;
        stats->epoch_mean_loss.clear();
    }
    if (pair_count == 0)
        return input; // e.g. corpus of isolated nodes only

    const std::size_t table_size =
        std::min<std::size_t>(10'000'000, 100 * std::max<std::size_t>(n, 1));
    const std::vector<NodeId> neg_table = build_negative_table(g, table_size);

    Rng rng(mix_seed(cfg.seed, 0x74726169ULL));
    const std::uint64_t total_updates =
        pair_count * static_cast<std::uint64_t>(cfg.epochs);
    std::uint64_t processed = 0;
    std::vector<double> grad_center(dim);
    auto sigmoid = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        double epoch_loss = 0;
        for (const auto &walk : corpus) {
            const std::ptrdiff_t len = static_cast<std::ptrdiff_t>(walk.size());
            for (std::ptrdiff_t i = 0; i < len; ++i) {
                const NodeId center = walk[i];
                std::vector<double> &x = input[center];
                const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(i - w, 0);
                const std::ptrdiff_t hi =
                    std::min<std::ptrdiff_t>(i + w, len - 1);
                for (std::ptrdiff_t jx = lo; jx <= hi; ++jx) {
                    if (jx == i)
                        continue;
                    const NodeId pos = walk[jx];
                    const double lr =
                        cfg.lr_initial *
                        std::max(1.0 - static_cast<double>(processed) /
                                           static_cast<double>(total_updates),
                                 0.01);
                    ++processed;
                    std::fill(grad_center.begin(), grad_center.end(), 0.0);
                    for (int m = 0; m <= cfg.negatives; ++m) {
                        NodeId target;
                        double label;
                        if (m == 0) {
                            target = pos;
                            label = 1.0;
                        } else {
                            target = neg_table[rng.below(neg_table.size())];
                            if (target == pos)
                                continue;
                            label = 0.0;
                        }
                        std::vector<double> &y = output[target];
                        double s = 0;
                        for (std::size_t d2 = 0; d2 < dim; ++d2)
                            s += x[d2] * y[d2];
                        const double p = sigmoid(s);
                        epoch_loss -= label > 0.5 ? std::log(std::max(p, 1e-300))
                                                  : std::log(std::max(1.0 - p, 1e-300));
                        const double gscale = (p - label) * lr;
                        for (std::size_t d2 = 0; d2 < dim; ++d2) {
                            grad_center[d2] += (p - label) * y[d2];
                            y[d2] -= gscale * x[d2];
                        }
                    }
                    for (std::size_t d2 = 0; d2 < dim; ++d2)
                        x[d2] -= lr * grad_center[d2];
                }
            }
        }
        if (stats)
            stats->epoch_mean_loss.push_back(epoch_loss /
                                             static_cast<double>(pair_count));
    }
    return input;
}

SegmentEmbedding embed_subgraph(const Graph &leaf, const std::string &leaf_id,
                                int iteration, int border_flag,
                                const WalkConfig &walk_cfg,
                                const TrainConfig &train_cfg) {
    if (train_cfg.dim == 0)
        throw ContractError("embed_subgraph: zero-length leaf must not be scheduled");
    WalkCorpus corpus = random_walks(leaf, walk_cfg);
    SegmentEmbedding seg;
    seg.leaf_id = leaf_id;
    seg.iteration = iteration;
    seg.border_flag = border_flag;
    seg.dim = train_cfg.dim;
    seg.labels = leaf.labels();
    seg.vectors = train_sgns(leaf, corpus, train_cfg);
    return seg;
}

void save_segment(const SegmentEmbedding &seg, std::ostream &out) {
    out << seg.labels.size() << ' ' << seg.dim << ' ' << seg.iteration << ' '
        << seg.border_flag << '\n';
    out << std::fixed << std::setprecision(6);
    for (std::size_t i = 0; i < seg.labels.size(); ++i) {
        out << seg.labels[i];
        for (double x : seg.vectors[i])
            out << ' ' << x;
        out << '\n';
    }
}

void save_segment_file(const SegmentEmbedding &seg, const std::string &path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write segment file: " + path);
    save_segment(seg, out);
}

SegmentEmbedding load_segment(std::istream &in) {
    SegmentEmbedding seg;
    std::size_t count = 0;
    if (!(in >> count >> seg.dim >> seg.iteration >> seg.border_flag))
        throw ParseError("segment file: bad header");
    seg.labels.reserve(count);
    seg.vectors.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::string label;
        if (!(in >> label))
            throw ParseError("segment file: truncated at row " +
                             std::to_string(i));
        std::vector<double> vec(seg.dim);
        for (std::size_t d = 0; d < seg.dim; ++d)
            if (!(in >> vec[d]))
                throw ParseError("segment file: truncated vector for " + label);
        seg.labels.push_back(std::move(label));
        seg.vectors.push_back(std::move(vec));
    }
    return seg;
}

SegmentEmbedding load_segment_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open segment file: " + path);
    SegmentEmbedding seg = load_segment(in);
    seg.leaf_id = std::filesystem::path(path).stem().string();
    return seg;
}

} // namespace distne
