#include "distne/fusion.hpp"
#include "distne/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace distne {

std::size_t SegmentLayout::start_of(int j, int q) const {
    auto it = starts.find({j, q});
    if (it == starts.end())
        throw ContractError("layout: no segment (" + std::to_string(j) + ", " +
                            std::to_string(q) + ")");
    return it->second;
}

std::size_t SegmentLayout::length_of(int j, int q) const {
    for (const auto &e : lengths)
        if (e.iteration == j && e.border_flag == q)
            return e.ell;
    throw ContractError("layout: no segment (" + std::to_string(j) + ", " +
                        std::to_string(q) + ")");
}

const std::vector<double> *FusedEmbedding::find(const std::string &label) const {
    auto it = index.find(label);
    return it == index.end() ? nullptr : &vectors[it->second];
}

SegmentLayout build_layout(const std::vector<LengthEntry> &length_table,
                           std::size_t d, int gamma) {
    SegmentLayout layout;
    layout.d = d;
    layout.gamma = gamma;
    // induced segments by iteration, the border segment after them
    layout.lengths = length_table;
    std::stable_sort(layout.lengths.begin(), layout.lengths.end(),
                     [](const LengthEntry &a, const LengthEntry &b) {
                         if (a.border_flag != b.border_flag)
                             return a.border_flag < b.border_flag;
                         return a.iteration < b.iteration;
                     });
    std::size_t offset = 0;
    for (const auto &e : layout.lengths) {
        if (!layout.starts.emplace(std::make_pair(e.iteration, e.border_flag),
                                   offset)
                 .second)
            throw ContractError("layout: duplicate (j, q) entry");
        offset += e.ell;
    }
    if (offset != d)
        throw ContractError("layout: segment lengths sum to " +
                            std::to_string(offset) + ", expected " +
                            std::to_string(d));
    return layout;
}

std::vector<double>
fuse_node(const std::vector<std::tuple<int, int, std::vector<double>>> &segments,
          const SegmentLayout &layout, FuseDiagnostics *diag) {
    std::vector<double> out(layout.d, 0.0);
    if (segments.empty() && diag)
        ++diag->zero_segment_nodes;
    std::vector<std::pair<int, int>> seen;
    for (const auto &[j, q, vec] : segments) {
        if (std::find(seen.begin(), seen.end(), std::make_pair(j, q)) !=
            seen.end())
            throw IntegrityError("fuse_node: duplicate segment (" +
                                 std::to_string(j) + ", " + std::to_string(q) +
                                 ")");
        seen.emplace_back(j, q);
        if (vec.size() != layout.length_of(j, q))
            throw ContractError("fuse_node: segment (" + std::to_string(j) +
                                ", " + std::to_string(q) +
                                ") has wrong length");
        std::copy(vec.begin(), vec.end(), out.begin() + layout.start_of(j, q));
    }
    return out;
}

FusedEmbedding fuse_all(
    const std::map<std::string,
                   std::vector<std::tuple<int, int, std::vector<double>>>>
        &grouped,
    const SegmentLayout &layout) {
    FusedEmbedding emb;
    emb.d = layout.d;
    emb.labels.reserve(grouped.size());
    emb.vectors.reserve(grouped.size());
    FuseDiagnostics diag;
    for (const auto &[label, segments] : grouped) {
        bool has_level1 = false;
        for (const auto &[j, q, vec] : segments)
            if (j == 1 && q == 0)
                has_level1 = true;
        if (!has_level1)
            throw IntegrityError("fuse_all: node '" + label +
                                 "' is missing its level-1 segment");
        emb.index.emplace(label, emb.labels.size());
        emb.labels.push_back(label);
        emb.vectors.push_back(fuse_node(segments, layout, &diag));
    }
    return emb;
}

void save_embedding(const FusedEmbedding &emb, std::ostream &out) {
    out << emb.labels.size() << ' ' << emb.d << '\n';
    out << std::fixed << std::setprecision(6);
    for (std::size_t i = 0; i < emb.labels.size(); ++i) {
        out << emb.labels[i];
        for (double x : emb.vectors[i])
            out << ' ' << x;
        out << '\n';
    }
}

void save_embedding_file(const FusedEmbedding &emb, const std::string &path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write embedding file: " + path);
    save_embedding(emb, out);
}

FusedEmbedding load_embedding(std::istream &in) {
    FusedEmbedding emb;
    std::size_t count = 0;
    if (!(in >> count >> emb.d))
        throw ParseError("embedding file: bad header");
    for (std::size_t i = 0; i < count; ++i) {
        std::string label;
        if (!(in >> label))
            throw ParseError("embedding file: truncated at row " +
                             std::to_string(i));
        std::vector<double> vec(emb.d);
        for (std::size_t d = 0; d < emb.d; ++d)
            if (!(in >> vec[d]))
                throw ParseError("embedding file: truncated vector for " +
                                 label);
        emb.index.emplace(label, emb.labels.size());
        emb.labels.push_back(std::move(label));
        emb.vectors.push_back(std::move(vec));
    }
    return emb;
}

FusedEmbedding load_embedding_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open embedding file: " + path);
    return load_embedding(in);
}

void save_embedding_binary(const FusedEmbedding &emb, const std::string &path,
                           const std::string &label_path) {
    std::ofstream bin(path, std::ios::binary);
    std::ofstream lab(label_path);
    if (!bin || !lab)
        throw IoError("cannot write binary embedding: " + path);
    for (std::size_t i = 0; i < emb.labels.size(); ++i) {
        lab << emb.labels[i] << '\n';
        std::vector<float> row(emb.vectors[i].begin(), emb.vectors[i].end());
        bin.write(reinterpret_cast<const char *>(row.data()),
                  static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
}

} // namespace distne
