#pragma once

#include "distne/recursion.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace distne {

// Placement of every embedded (j, q) segment inside the final length-d
// vector: induced segments in iteration order, the border segment last.
struct SegmentLayout {
    std::size_t d = 0;
    int gamma = 1;
    std::vector<LengthEntry> lengths;
    // start offset per (j, q)
    std::map<std::pair<int, int>, std::size_t> starts;

    std::size_t start_of(int j, int q) const;
    std::size_t length_of(int j, int q) const;
};

struct FusedEmbedding {
    std::size_t d = 0;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> vectors; // parallel to labels

    std::map<std::string, std::size_t> index;

    const std::vector<double> *find(const std::string &label) const;
};

struct FuseDiagnostics {
    std::size_t zero_segment_nodes = 0;
};

// Prefix-sum layout over the length table; requires the lengths to sum
// to exactly d.
SegmentLayout build_layout(const std::vector<LengthEntry> &length_table,
                           std::size_t d, int gamma);

// Scatter each (j, q, vector) segment into a zero-initialized length-d
// vector at its layout offset. O(d).
std::vector<double>
fuse_node(const std::vector<std::tuple<int, int, std::vector<double>>> &segments,
          const SegmentLayout &layout, FuseDiagnostics *diag = nullptr);

// Fuse one vector per node from the shuffled per-node segment groups.
// Every node must carry its level-1 induced segment.
FusedEmbedding fuse_all(
    const std::map<std::string,
                   std::vector<std::tuple<int, int, std::vector<double>>>>
        &grouped,
    const SegmentLayout &layout);

// Text format: `<n> <d>` header then `<label> <v1> ... <v_d>` rows with
// 6-decimal fixed formatting.
void save_embedding(const FusedEmbedding &emb, std::ostream &out);
void save_embedding_file(const FusedEmbedding &emb, const std::string &path);
FusedEmbedding load_embedding(std::istream &in);
FusedEmbedding load_embedding_file(const std::string &path);

// Binary variant: little-endian float32 rows in `path`, one label per
// line in `label_path`.
void save_embedding_binary(const FusedEmbedding &emb, const std::string &path,
                           const std::string &label_path);

} // namespace distne
