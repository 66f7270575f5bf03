#pragma once

#include "distne/fusion.hpp"
#include "distne/graph.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace distne {

enum class SimilarityKind { Cosine, Euclidean };

SimilarityKind parse_similarity(const std::string &name);

struct LinkPredSplit {
    Graph train_graph; // largest component of the residual graph
    std::vector<std::pair<std::string, std::string>> positives;
    std::vector<std::pair<std::string, std::string>> negatives;
    double alpha = 0.1;
    std::uint64_t seed = 0;
};

// Remove floor(alpha * |E|) random edges, keep the largest connected
// component of the residual graph, and collect the removed edges with
// both endpoints in that component as positives. Negatives are an
// equal number of uniformly sampled component node pairs that are
// non-edges of the original graph.
LinkPredSplit lp_split(const Graph &g, double alpha, std::uint64_t seed);

// cosine: x.y / (|x||y|), 0 when either vector is zero.
// euclidean: -|x - y|, larger means more similar.
double similarity(std::span<const double> x, std::span<const double> y,
                  SimilarityKind kind);

// Rank all 2|E_p| test pairs by similarity (ties broken by the pair's
// lexicographic labels); precision is the fraction of positives among
// the top |E_p|.
double lp_precision(const FusedEmbedding &emb, const LinkPredSplit &split,
                    SimilarityKind kind);

struct LabelSet {
    std::unordered_map<std::string, std::vector<int>> labels;
    int num_classes = 0;
};

// `<node> <class> [<class> ...]` per line; `#` lines ignored.
LabelSet load_labels(std::istream &in);
LabelSet load_labels_file(const std::string &path);

struct NodeClassificationConfig {
    double l2 = 1.0;
    int epochs = 200;
    double lr = 0.1;
};

struct NodeClassificationResult {
    double micro_f1 = 0;
    double macro_f1 = 0;
    // classes absent from the training half, scored by prior only
    std::vector<int> prior_only_classes;
};

// 50/50 split of the labeled nodes; one-vs-rest logistic regression
// (full-batch gradient descent, L2 regularized) on the embeddings; a
// test node with t true labels is predicted its top-t scoring classes.
NodeClassificationResult node_classification(const FusedEmbedding &emb,
                                             const LabelSet &labels,
                                             std::uint64_t seed,
                                             const NodeClassificationConfig &cfg = {});

// Micro F1 when every test node is scored by training-set class
// frequency alone (same split as node_classification); the reference
// point for null-model sanity checks.
double nc_frequency_baseline(const FusedEmbedding &emb, const LabelSet &labels,
                             std::uint64_t seed);

} // namespace distne
