#pragma once

#include "distne/fusion.hpp"
#include "distne/recursion.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

namespace distne {

struct PipelineConfig {
    RecursionConfig recursion;
    WalkConfig walk;
    TrainConfig train; // dim is set per leaf from the length table
    unsigned worker_count = std::thread::hardware_concurrency();
    std::filesystem::path work_dir = "distne_work";
    bool keep_intermediates = true;
    bool skip_border = false; // ablation: leave the border segment zero
};

struct KeyValueRecord {
    std::string key; // node label
    int iteration = 1;
    int border_flag = 0;
    std::vector<double> vec;
};

using SegmentGroup = std::vector<std::tuple<int, int, std::vector<double>>>;

struct TaskRecord {
    std::string leaf_id;
    int attempts = 0;
};

struct PipelineResult {
    FusedEmbedding embedding;
    PartitionTree tree;
    SegmentLayout layout;
    std::vector<TaskRecord> tasks;
    double embed_seconds = 0;
    std::filesystem::path manifest_path;
    std::filesystem::path final_path;
    std::filesystem::path stats_path;
};

// Full map -> shuffle -> reduce run: recursive partitioning, one embed
// task per positive-length leaf (parallel up to worker_count, one retry
// per leaf), keyed grouping of segment vectors, then fusion. Output is
// deterministic for a fixed config and seed regardless of worker count
// or task completion order.
PipelineResult run_pipeline(const Graph &g, const PipelineConfig &cfg);

// Exact grouping by node label; within each group records are ordered
// by (j, q). Duplicate (key, j, q) triples are data corruption.
std::map<std::string, SegmentGroup>
shuffle_group(std::vector<KeyValueRecord> records);

struct LevelStats {
    int iteration = 1;
    std::uint32_t k = 1;
    std::size_t node_count = 0;
    std::size_t border_count = 0;
    double border_ratio = 0;
    std::uint64_t cut = 0;
};

struct StatsReport {
    std::vector<LevelStats> levels;
    std::size_t leaf_min = 0, leaf_max = 0;
    double leaf_mean = 0;
    std::string to_json() const;
    std::string to_text() const;
};

StatsReport stats_report(const PartitionTree &tree);

// manifest.json: run configuration plus the recursion artifact (delta,
// gamma, length table, per-level leaves with file paths and seeds).
void save_manifest(const PartitionTree &tree, const PipelineConfig &cfg,
                   const std::filesystem::path &path);

struct Manifest {
    PartitionTree tree; // leaf graphs not loaded; paths and metadata only
    PipelineConfig config;
    std::vector<std::size_t> leaf_node_counts;
    std::vector<std::size_t> leaf_edge_counts;
};

Manifest load_manifest(const std::filesystem::path &path);

} // namespace distne
