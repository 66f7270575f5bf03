#pragma once

#include "distne/graph.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace distne {

struct WalkConfig {
    int walks_per_node = 10;
    int walk_length = 40;
    double return_param = 1.0; // node2vec p
    double inout_param = 1.0;  // node2vec q
    std::uint64_t seed = 42;
};

struct TrainConfig {
    std::size_t dim = 128; // segment length for this leaf
    int window = 5;
    int negatives = 5;
    int epochs = 3;
    double lr_initial = 0.025; // linear decay to lr_initial / 100
    std::uint64_t seed = 42;
};

// One leaf's output: per-node vectors of length ell(j, q), keyed by the
// node's external label.
struct SegmentEmbedding {
    std::string leaf_id;
    int iteration = 1;   // j
    int border_flag = 0; // q
    std::size_t dim = 0;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> vectors; // parallel to labels
};

// Embedding length allocated to the subgraphs at iteration j with
// border flag q. Induced leaves at level j take
// ceil(delta^{j-1} d) - ceil(delta^j d); the single embedded border
// leaf at level gamma takes ceil(delta^gamma d). When the recursion
// terminated on an empty border set, level gamma's induced leaves
// absorb the whole remaining budget so the lengths still sum to d.
std::size_t embed_length(int j, int q, std::size_t d, double delta, int gamma,
                         bool border_empty);

using WalkCorpus = std::vector<std::vector<NodeId>>;

// walks_per_node second-order (p, q)-biased walks per start node, each
// of length <= walk_length. An isolated node yields the length-1 walk
// [u]. Deterministic per (seed, node, walk index), independent of
// generation order.
WalkCorpus random_walks(const Graph &g, const WalkConfig &cfg);

// Loss and gradients of one SGNS example: center vector x, positive
// context y, negative contexts z_i. Exposed so the trainer and the
// finite-difference checks share one definition.
//   loss = -log sigma(x.y) - sum_i log sigma(-x.z_i)
struct SgnsGradient {
    double loss = 0;
    std::vector<double> d_center;
    std::vector<double> d_positive;
    std::vector<std::vector<double>> d_negatives;
};
SgnsGradient sgns_gradient(const std::vector<double> &center,
                           const std::vector<double> &positive,
                           const std::vector<std::vector<double>> &negatives);

struct TrainStats {
    std::vector<double> epoch_mean_loss;
    std::uint64_t pair_count = 0; // per epoch
};

// Skip-gram with negative sampling over window-w co-occurrences of the
// corpus; negatives drawn proportional to degree^0.75 in g. Returns the
// input vectors. Single-threaded and deterministic per seed.
std::vector<std::vector<double>> train_sgns(const Graph &g,
                                            const WalkCorpus &corpus,
                                            const TrainConfig &cfg,
                                            TrainStats *stats = nullptr);

// Walks + training for one leaf subgraph.
SegmentEmbedding embed_subgraph(const Graph &leaf, const std::string &leaf_id,
                                int iteration, int border_flag,
                                const WalkConfig &walk_cfg,
                                const TrainConfig &train_cfg);

// Segment file: header `<count> <ell> <j> <q>`, then one
// `<label> <v1> ... <v_ell>` row per node, 6-decimal fixed.
void save_segment(const SegmentEmbedding &seg, std::ostream &out);
void save_segment_file(const SegmentEmbedding &seg, const std::string &path);
SegmentEmbedding load_segment(std::istream &in);
SegmentEmbedding load_segment_file(const std::string &path);

} // namespace distne
