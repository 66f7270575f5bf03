// distne: recursive-partitioning network embedding toolchain.

#include "distne/errors.hpp"
#include "distne/evaluate.hpp"
#include "distne/pipeline.hpp"
#include "distne/rng.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace distne;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr int kExitPipeline = 3;

std::string default_work_dir() {
    if (const char *env = std::getenv("DISTNE_WORK_DIR"))
        return env;
    return "distne_work";
}

struct PipelineFlags {
    std::string input;
    std::string out_dir = default_work_dir();
    std::size_t dim = 128;
    std::string k = "auto";
    std::uint64_t mem_budget = 1ULL << 30;
    std::string delta = "auto";
    int gamma_max = 10;
    std::size_t max_leaf_nodes = 0;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::uint64_t seed = 42;
    int walks = 10;
    int walk_len = 40;
    int window = 5;
    int neg = 5;
    int epochs = 3;
    double p = 1.0;
    double q = 1.0;
    bool keep_intermediates = false;
    bool skip_border = false;
    bool binary = false;
};

PipelineConfig to_config(const PipelineFlags &f) {
    PipelineConfig cfg;
    cfg.recursion.d = f.dim;
    if (f.k == "auto")
        cfg.recursion.k_initial = kAuto;
    else
        cfg.recursion.k_initial =
            static_cast<std::uint32_t>(std::stoul(f.k));
    cfg.recursion.mem_budget = f.mem_budget;
    if (f.delta != "auto")
        cfg.recursion.delta = std::stod(f.delta);
    cfg.recursion.gamma_cap = f.gamma_max;
    cfg.recursion.max_leaf_nodes = f.max_leaf_nodes;
    cfg.recursion.seed = f.seed;
    cfg.walk.walks_per_node = f.walks;
    cfg.walk.walk_length = f.walk_len;
    cfg.walk.return_param = f.p;
    cfg.walk.inout_param = f.q;
    cfg.walk.seed = f.seed;
    cfg.train.window = f.window;
    cfg.train.negatives = f.neg;
    cfg.train.epochs = f.epochs;
    cfg.train.seed = f.seed;
    cfg.worker_count = f.threads;
    cfg.work_dir = f.out_dir;
    cfg.keep_intermediates = f.keep_intermediates;
    cfg.skip_border = f.skip_border;
    return cfg;
}

void add_pipeline_flags(CLI::App *cmd, PipelineFlags &f, bool need_input) {
    if (need_input)
        cmd->add_option("--input", f.input, "Edge-list file")->required();
    cmd->add_option("--out-dir", f.out_dir, "Work/output directory")
        ->capture_default_str();
    cmd->add_option("--dim", f.dim, "Final embedding length d")
        ->capture_default_str();
    cmd->add_option("--k", f.k, "Partition count, or 'auto'")
        ->capture_default_str();
    cmd->add_option("--mem-budget", f.mem_budget,
                    "Per-worker memory budget in bytes (k=auto)")
        ->capture_default_str();
    cmd->add_option("--delta", f.delta,
                    "Border embedding fraction, or 'auto'")
        ->capture_default_str();
    cmd->add_option("--gamma-max", f.gamma_max, "Iteration ceiling")
        ->capture_default_str();
    cmd->add_option("--max-leaf-nodes", f.max_leaf_nodes,
                    "Leaf size threshold (0 = ceil(n/k))")
        ->capture_default_str();
    cmd->add_option("--threads", f.threads, "Worker count")
        ->capture_default_str();
    cmd->add_option("--seed", f.seed, "Global seed")->capture_default_str();
    cmd->add_option("--walks", f.walks, "Walks per node")
        ->capture_default_str();
    cmd->add_option("--walk-len", f.walk_len, "Walk length")
        ->capture_default_str();
    cmd->add_option("--window", f.window, "Skip-gram window")
        ->capture_default_str();
    cmd->add_option("--neg", f.neg, "Negative samples per pair")
        ->capture_default_str();
    cmd->add_option("--epochs", f.epochs, "Training epochs")
        ->capture_default_str();
    cmd->add_option("--p", f.p, "Walk return parameter")
        ->capture_default_str();
    cmd->add_option("--q", f.q, "Walk in-out parameter")
        ->capture_default_str();
    cmd->add_flag("--keep-intermediates", f.keep_intermediates,
                  "Keep per-leaf edge and segment files");
    cmd->add_flag("--skip-border", f.skip_border,
                  "Skip the border-subgraph embedding (ablation)");
    cmd->add_flag("--binary", f.binary,
                  "Also write final.bin/final.labels (float32 rows)");
}

int cmd_pipeline(const PipelineFlags &f) {
    Graph g = load_edge_list_file(f.input);
    PipelineConfig cfg = to_config(f);
    PipelineResult res = run_pipeline(g, cfg);
    if (f.binary)
        save_embedding_binary(res.embedding,
                              (cfg.work_dir / "final.bin").string(),
                              (cfg.work_dir / "final.labels").string());
    std::cout << "nodes=" << g.node_count() << " edges=" << g.edge_count()
              << " gamma=" << res.tree.gamma << " delta=" << res.tree.delta
              << " leaves=" << res.tree.leaves.size() << '\n';
    std::cout << "final=" << res.final_path.string() << '\n';
    return 0;
}

int cmd_partition(const std::string &input, std::uint32_t k,
                  std::uint64_t seed, const std::string &out) {
    Graph g = load_edge_list_file(input);
    PartitionConfig cfg;
    cfg.k = k;
    cfg.seed = seed;
    PartitionAssignment pa = partition(g, cfg);
    std::ofstream os(out);
    if (!os)
        throw IoError("cannot write assignment file: " + out);
    for (NodeId u = 0; u < g.node_count(); ++u)
        os << g.label(u) << ' ' << pa.assign[u] << '\n';
    std::cout << "edge_cut=" << edge_cut(g, pa) << '\n';
    return 0;
}

int cmd_embed(const std::string &manifest_path) {
    Manifest m = load_manifest(manifest_path);
    const fs::path dir = fs::path(manifest_path).parent_path();
    for (const auto &leaf : m.tree.leaves) {
        if (leaf.ell == 0)
            continue;
        if (m.config.skip_border && leaf.border_flag == 1)
            continue;
        Graph lg = load_edge_list_file(leaf.path);
        WalkConfig wcfg = m.config.walk;
        wcfg.seed = mix_seed(leaf.seed, 1);
        TrainConfig tcfg = m.config.train;
        tcfg.dim = leaf.ell;
        tcfg.seed = mix_seed(leaf.seed, 2);
        SegmentEmbedding seg = embed_subgraph(lg, leaf.id, leaf.iteration,
                                              leaf.border_flag, wcfg, tcfg);
        save_segment_file(seg, (dir / (leaf.id + ".emb")).string());
        std::cout << "embedded=" << leaf.id << " nodes=" << lg.node_count()
                  << " ell=" << leaf.ell << '\n';
    }
    return 0;
}

int cmd_fuse(const std::string &manifest_path) {
    Manifest m = load_manifest(manifest_path);
    const fs::path dir = fs::path(manifest_path).parent_path();
    std::vector<KeyValueRecord> records;
    for (const auto &leaf : m.tree.leaves) {
        if (leaf.ell == 0)
            continue;
        if (m.config.skip_border && leaf.border_flag == 1)
            continue;
        const fs::path seg_path = dir / (leaf.id + ".emb");
        if (!fs::exists(seg_path))
            throw IntegrityError("missing segment file for leaf '" + leaf.id +
                                 "': " + seg_path.string());
        SegmentEmbedding seg = load_segment_file(seg_path.string());
        for (std::size_t i = 0; i < seg.labels.size(); ++i)
            records.push_back({seg.labels[i], seg.iteration, seg.border_flag,
                               std::move(seg.vectors[i])});
    }
    auto grouped = shuffle_group(std::move(records));
    SegmentLayout layout =
        build_layout(m.tree.length_table, m.tree.d, m.tree.gamma);
    FusedEmbedding emb = fuse_all(grouped, layout);
    const fs::path out = dir / "final.emb";
    save_embedding_file(emb, out.string());
    std::cout << "fused=" << emb.labels.size() << " d=" << emb.d << '\n';
    std::cout << "final=" << out.string() << '\n';
    return 0;
}

void write_report(const std::string &path, const nlohmann::json &doc) {
    if (path.empty())
        return;
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write report: " + path);
    out << doc.dump(2) << '\n';
}

int cmd_eval_lp(const std::string &emb_path, const std::string &graph_path,
                double alpha, const std::string &sim, std::uint64_t seed,
                const std::string &report) {
    FusedEmbedding emb = load_embedding_file(emb_path);
    Graph g = load_edge_list_file(graph_path);
    LinkPredSplit split = lp_split(g, alpha, seed);
    double precision = lp_precision(emb, split, parse_similarity(sim));
    std::cout << "precision=" << precision << '\n';
    write_report(report, {{"task", "link_prediction"},
                          {"alpha", alpha},
                          {"similarity", sim},
                          {"seed", seed},
                          {"positives", split.positives.size()},
                          {"precision", precision}});
    return 0;
}

int cmd_eval_nc(const std::string &emb_path, const std::string &labels_path,
                std::uint64_t seed, const std::string &report) {
    FusedEmbedding emb = load_embedding_file(emb_path);
    LabelSet labels = load_labels_file(labels_path);
    NodeClassificationResult res = node_classification(emb, labels, seed);
    std::cout << "micro_f1=" << res.micro_f1 << " macro_f1=" << res.macro_f1
              << '\n';
    write_report(report, {{"task", "node_classification"},
                          {"seed", seed},
                          {"classes", labels.num_classes},
                          {"micro_f1", res.micro_f1},
                          {"macro_f1", res.macro_f1},
                          {"prior_only_classes", res.prior_only_classes}});
    return 0;
}

int cmd_stats(const std::string &manifest_path) {
    Manifest m = load_manifest(manifest_path);
    // leaf graphs are not loaded here; rebuild sizes from the manifest
    StatsReport report = stats_report(m.tree);
    std::size_t lo = SIZE_MAX, hi = 0, total = 0;
    for (std::size_t sz : m.leaf_node_counts) {
        lo = std::min(lo, sz);
        hi = std::max(hi, sz);
        total += sz;
    }
    if (!m.leaf_node_counts.empty()) {
        report.leaf_min = lo;
        report.leaf_max = hi;
        report.leaf_mean =
            static_cast<double>(total) / m.leaf_node_counts.size();
    }
    std::cout << report.to_text();
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"DistNE: network embedding via recursive graph "
                 "partitioning, per-subgraph training, and segment fusion"};
    app.require_subcommand(1);

    PipelineFlags pf;
    auto *pipeline = app.add_subcommand("pipeline", "End-to-end run");
    add_pipeline_flags(pipeline, pf, true);

    std::string part_input, part_out = "assignment.txt";
    std::uint32_t part_k = 2;
    std::uint64_t part_seed = 42;
    auto *part = app.add_subcommand("partition", "Balanced k-way partition");
    part->add_option("--input", part_input, "Edge-list file")->required();
    part->add_option("--k", part_k, "Partition count")->required();
    part->add_option("--seed", part_seed, "Seed")->capture_default_str();
    part->add_option("--out", part_out, "Assignment output file")
        ->capture_default_str();

    std::string embed_manifest;
    auto *embed = app.add_subcommand("embed", "Embed leaves from a manifest");
    embed->add_option("--manifest", embed_manifest, "manifest.json path")
        ->required();

    std::string fuse_manifest;
    auto *fuse = app.add_subcommand("fuse", "Fuse segment files");
    fuse->add_option("--manifest", fuse_manifest, "manifest.json path")
        ->required();

    std::string lp_emb, lp_graph, lp_sim = "cosine", lp_report;
    double lp_alpha = 0.1;
    std::uint64_t lp_seed = 42;
    auto *eval_lp = app.add_subcommand("eval-lp", "Link prediction");
    eval_lp->add_option("--emb", lp_emb, "Embedding file")->required();
    eval_lp->add_option("--graph", lp_graph, "Edge-list file")->required();
    eval_lp->add_option("--alpha", lp_alpha, "Removed-edge fraction")
        ->capture_default_str();
    eval_lp->add_option("--similarity", lp_sim, "cosine or euclidean")
        ->capture_default_str();
    eval_lp->add_option("--seed", lp_seed, "Seed")->capture_default_str();
    eval_lp->add_option("--report", lp_report, "JSON report path");

    std::string nc_emb, nc_labels, nc_report;
    std::uint64_t nc_seed = 42;
    auto *eval_nc = app.add_subcommand("eval-nc", "Node classification");
    eval_nc->add_option("--emb", nc_emb, "Embedding file")->required();
    eval_nc->add_option("--labels", nc_labels, "Label file")->required();
    eval_nc->add_option("--seed", nc_seed, "Seed")->capture_default_str();
    eval_nc->add_option("--report", nc_report, "JSON report path");

    std::string stats_manifest;
    auto *stats = app.add_subcommand("stats", "Per-level recursion stats");
    stats->add_option("--manifest", stats_manifest, "manifest.json path")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }

    try {
        if (*pipeline)
            return cmd_pipeline(pf);
        if (*part)
            return cmd_partition(part_input, part_k, part_seed, part_out);
        if (*embed)
            return cmd_embed(embed_manifest);
        if (*fuse)
            return cmd_fuse(fuse_manifest);
        if (*eval_lp)
            return cmd_eval_lp(lp_emb, lp_graph, lp_alpha, lp_sim, lp_seed,
                               lp_report);
        if (*eval_nc)
            return cmd_eval_nc(nc_emb, nc_labels, nc_seed, nc_report);
        if (*stats)
            return cmd_stats(stats_manifest);
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ContractError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError &e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const ParseError &e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const IntegrityError &e) {
        std::cerr << "pipeline error: " << e.what() << '\n';
        return kExitPipeline;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitPipeline;
    }
    return kExitConfig;
}
