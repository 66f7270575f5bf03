#include "distne/pipeline.hpp"
#include "distne/errors.hpp"
#include "distne/rng.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

namespace distne {

using nlohmann::json;

std::map<std::string, SegmentGroup>
shuffle_group(std::vector<KeyValueRecord> records) {
    std::map<std::string, SegmentGroup> grouped;
    for (auto &rec : records) {
        SegmentGroup &group = grouped[rec.key];
        for (const auto &[j, q, vec] : group)
            if (j == rec.iteration && q == rec.border_flag)
                throw IntegrityError("shuffle: duplicate segment (" +
                                     std::to_string(j) + ", " +
                                     std::to_string(q) + ") for node '" +
                                     rec.key + "'");
        group.emplace_back(rec.iteration, rec.border_flag, std::move(rec.vec));
    }
    for (auto &[key, group] : grouped)
        std::sort(group.begin(), group.end(),
                  [](const auto &a, const auto &b) {
                      return std::make_pair(std::get<0>(a), std::get<1>(a)) <
                             std::make_pair(std::get<0>(b), std::get<1>(b));
                  });
    return grouped;
}

namespace {

json length_table_json(const std::vector<LengthEntry> &table) {
    json out = json::array();
    for (const auto &e : table)
        out.push_back({{"j", e.iteration},
                       {"q", e.border_flag},
                       {"ell", e.ell}});
    return out;
}

json config_json(const PipelineConfig &cfg) {
    return {{"dim", cfg.recursion.d},
            {"k", cfg.recursion.k_initial},
            {"mem_budget", cfg.recursion.mem_budget},
            {"bytes_per_node", cfg.recursion.bytes_per_node},
            {"delta", cfg.recursion.delta},
            {"gamma_max", cfg.recursion.gamma_cap},
            {"max_leaf_nodes", cfg.recursion.max_leaf_nodes},
            {"seed", cfg.recursion.seed},
            {"walks", cfg.walk.walks_per_node},
            {"walk_len", cfg.walk.walk_length},
            {"p", cfg.walk.return_param},
            {"q", cfg.walk.inout_param},
            {"window", cfg.train.window},
            {"neg", cfg.train.negatives},
            {"epochs", cfg.train.epochs},
            {"lr", cfg.train.lr_initial},
            {"threads", cfg.worker_count},
            {"keep_intermediates", cfg.keep_intermediates},
            {"skip_border", cfg.skip_border}};
}

} // namespace

void save_manifest(const PartitionTree &tree, const PipelineConfig &cfg,
                   const std::filesystem::path &path) {
    json m;
    m["delta"] = tree.delta;
    m["gamma"] = tree.gamma;
    m["border_empty"] = tree.border_empty;
    m["d"] = tree.d;
    m["length_table"] = length_table_json(tree.length_table);
    m["config"] = config_json(cfg);
    json levels = json::array();
    for (const auto &lvl : tree.levels) {
        json leaves = json::array();
        for (const auto &leaf : tree.leaves) {
            if (leaf.iteration != lvl.iteration)
                continue;
            leaves.push_back({{"id", leaf.id},
                              {"j", leaf.iteration},
                              {"q", leaf.border_flag},
                              {"node_count", leaf.graph.node_count()},
                              {"edge_count", leaf.graph.edge_count()},
                              {"ell", leaf.ell},
                              {"path", leaf.path},
                              {"seed", leaf.seed}});
        }
        levels.push_back({{"j", lvl.iteration},
                          {"k", lvl.k},
                          {"node_count", lvl.node_count},
                          {"edge_count", lvl.edge_count},
                          {"border_count", lvl.border_count},
                          {"cut", lvl.cut},
                          {"leaves", std::move(leaves)}});
    }
    m["levels"] = std::move(levels);
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write manifest: " + path.string());
    out << m.dump(2) << '\n';
}

Manifest load_manifest(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open manifest: " + path.string());
    json m;
    try {
        in >> m;
    } catch (const json::exception &e) {
        throw ParseError("manifest: " + std::string(e.what()));
    }
    Manifest out;
    out.tree.delta = m.at("delta").get<double>();
    out.tree.gamma = m.at("gamma").get<int>();
    out.tree.border_empty = m.at("border_empty").get<bool>();
    out.tree.d = m.at("d").get<std::size_t>();
    for (const auto &e : m.at("length_table"))
        out.tree.length_table.push_back({e.at("j").get<int>(),
                                         e.at("q").get<int>(),
                                         e.at("ell").get<std::size_t>()});
    const json &c = m.at("config");
    out.config.recursion.d = c.at("dim").get<std::size_t>();
    out.config.recursion.k_initial = c.at("k").get<std::uint32_t>();
    out.config.recursion.mem_budget = c.at("mem_budget").get<std::uint64_t>();
    out.config.recursion.bytes_per_node = c.at("bytes_per_node").get<double>();
    out.config.recursion.delta = c.at("delta").get<double>();
    out.config.recursion.gamma_cap = c.at("gamma_max").get<int>();
    out.config.recursion.max_leaf_nodes =
        c.at("max_leaf_nodes").get<std::size_t>();
    out.config.recursion.seed = c.at("seed").get<std::uint64_t>();
    out.config.walk.walks_per_node = c.at("walks").get<int>();
    out.config.walk.walk_length = c.at("walk_len").get<int>();
    out.config.walk.return_param = c.at("p").get<double>();
    out.config.walk.inout_param = c.at("q").get<double>();
    out.config.walk.seed = out.config.recursion.seed;
    out.config.train.window = c.at("window").get<int>();
    out.config.train.negatives = c.at("neg").get<int>();
    out.config.train.epochs = c.at("epochs").get<int>();
    out.config.train.lr_initial = c.at("lr").get<double>();
    out.config.train.seed = out.config.recursion.seed;
    out.config.worker_count = c.at("threads").get<unsigned>();
    out.config.keep_intermediates = c.at("keep_intermediates").get<bool>();
    out.config.skip_border = c.at("skip_border").get<bool>();
    out.config.work_dir = path.parent_path();
    for (const auto &lvl : m.at("levels")) {
        LevelInfo info;
        info.iteration = lvl.at("j").get<int>();
        info.k = lvl.at("k").get<std::uint32_t>();
        info.node_count = lvl.at("node_count").get<std::size_t>();
        info.edge_count = lvl.at("edge_count").get<std::size_t>();
        info.border_count = lvl.at("border_count").get<std::size_t>();
        info.cut = lvl.at("cut").get<std::uint64_t>();
        out.tree.levels.push_back(std::move(info));
        for (const auto &lj : lvl.at("leaves")) {
            LeafInfo leaf;
            leaf.id = lj.at("id").get<std::string>();
            leaf.iteration = lj.at("j").get<int>();
            leaf.border_flag = lj.at("q").get<int>();
            leaf.ell = lj.at("ell").get<std::size_t>();
            leaf.seed = lj.at("seed").get<std::uint64_t>();
            leaf.path = lj.at("path").get<std::string>();
            out.tree.leaves.push_back(std::move(leaf));
            out.leaf_node_counts.push_back(
                lj.at("node_count").get<std::size_t>());
            out.leaf_edge_counts.push_back(
                lj.at("edge_count").get<std::size_t>());
        }
    }
    return out;
}

StatsReport stats_report(const PartitionTree &tree) {
    StatsReport report;
    for (const auto &lvl : tree.levels) {
        LevelStats s;
        s.iteration = lvl.iteration;
        s.k = lvl.k;
        s.node_count = lvl.node_count;
        s.border_count = lvl.border_count;
        s.border_ratio = lvl.node_count == 0
                             ? 0.0
                             : static_cast<double>(lvl.border_count) /
                                   static_cast<double>(lvl.node_count);
        s.cut = lvl.cut;
        report.levels.push_back(s);
    }
    std::size_t lo = SIZE_MAX, hi = 0, total = 0, count = 0;
    for (const auto &leaf : tree.leaves) {
        std::size_t sz = leaf.graph.node_count();
        lo = std::min(lo, sz);
        hi = std::max(hi, sz);
        total += sz;
        ++count;
    }
    report.leaf_min = count ? lo : 0;
    report.leaf_max = hi;
    report.leaf_mean = count ? static_cast<double>(total) / count : 0.0;
    return report;
}

std::string StatsReport::to_json() const {
    json out;
    json lvls = json::array();
    for (const auto &s : levels)
        lvls.push_back({{"j", s.iteration},
                        {"k", s.k},
                        {"node_count", s.node_count},
                        {"border_count", s.border_count},
                        {"border_ratio", s.border_ratio},
                        {"edge_cut", s.cut}});
    out["levels"] = std::move(lvls);
    out["leaf_nodes"] = {{"min", leaf_min}, {"max", leaf_max},
                         {"mean", leaf_mean}};
    return out.dump(2);
}

std::string StatsReport::to_text() const {
    std::ostringstream os;
    os << "level  k      nodes      border     ratio    cut\n";
    char buf[160];
    for (const auto &s : levels) {
        std::snprintf(buf, sizeof(buf), "%-6d %-6u %-10zu %-10zu %-8.4f %llu\n",
                      s.iteration, s.k, s.node_count, s.border_count,
                      s.border_ratio,
                      static_cast<unsigned long long>(s.cut));
        os << buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "leaf nodes: min=%zu max=%zu mean=%.1f\n", leaf_min,
                  leaf_max, leaf_mean);
    os << buf;
    return os.str();
}

namespace {

// One embed task per scheduled leaf, pulled from a shared index so idle
// workers keep busy. Values never depend on which worker runs a task.
std::vector<SegmentEmbedding>
embed_leaves(const std::vector<const LeafInfo *> &scheduled,
             const PipelineConfig &cfg, std::vector<TaskRecord> &tasks) {
    std::vector<SegmentEmbedding> results(scheduled.size());
    std::vector<std::string> failures(scheduled.size());
    tasks.assign(scheduled.size(), {});
    std::atomic<std::size_t> next{0};
    const unsigned workers =
        std::max(1u, std::min<unsigned>(cfg.worker_count,
                                        static_cast<unsigned>(
                                            scheduled.size() ? scheduled.size()
                                                             : 1)));
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= scheduled.size())
                return;
            const LeafInfo &leaf = *scheduled[i];
            WalkConfig wcfg = cfg.walk;
            wcfg.seed = mix_seed(leaf.seed, 1);
            TrainConfig tcfg = cfg.train;
            tcfg.dim = leaf.ell;
            tcfg.seed = mix_seed(leaf.seed, 2);
            tasks[i].leaf_id = leaf.id;
            for (int attempt = 1; attempt <= 2; ++attempt) {
                tasks[i].attempts = attempt;
                try {
                    results[i] = embed_subgraph(leaf.graph, leaf.id,
                                                leaf.iteration,
                                                leaf.border_flag, wcfg, tcfg);
                    failures[i].clear();
                    break;
                } catch (const std::exception &e) {
                    failures[i] = e.what();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back(work);
    for (auto &t : pool)
        t.join();
    for (std::size_t i = 0; i < scheduled.size(); ++i)
        if (!failures[i].empty())
            throw IntegrityError("embed task failed twice for leaf '" +
                                 scheduled[i]->id + "': " + failures[i]);
    return results;
}

} // namespace

PipelineResult run_pipeline(const Graph &g, const PipelineConfig &cfg) {
    if (cfg.worker_count < 1)
        throw ConfigError("pipeline: worker_count must be >= 1");
    namespace fs = std::filesystem;
    fs::create_directories(cfg.work_dir);

    PipelineResult res;
    res.tree = recursive_partition(g, cfg.recursion);
    for (auto &leaf : res.tree.leaves) {
        leaf.path = (cfg.work_dir / (leaf.id + ".edges")).string();
        save_edge_list_file(leaf.graph, leaf.path);
    }
    res.manifest_path = cfg.work_dir / "manifest.json";
    save_manifest(res.tree, cfg, res.manifest_path);

    // map phase
    std::vector<const LeafInfo *> scheduled;
    for (const auto &leaf : res.tree.leaves) {
        if (leaf.ell == 0)
            continue;
        if (cfg.skip_border && leaf.border_flag == 1)
            continue;
        scheduled.push_back(&leaf);
    }
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<SegmentEmbedding> segments =
        embed_leaves(scheduled, cfg, res.tasks);
    res.embed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    for (const auto &seg : segments)
        save_segment_file(seg,
                          (cfg.work_dir / (seg.leaf_id + ".emb")).string());

    // shuffle phase
    std::vector<KeyValueRecord> records;
    for (auto &seg : segments)
        for (std::size_t i = 0; i < seg.labels.size(); ++i)
            records.push_back({seg.labels[i], seg.iteration, seg.border_flag,
                               std::move(seg.vectors[i])});
    auto grouped = shuffle_group(std::move(records));

    // reduce phase
    res.layout =
        build_layout(res.tree.length_table, res.tree.d, res.tree.gamma);
    res.embedding = fuse_all(grouped, res.layout);
    if (res.embedding.labels.size() != g.node_count())
        throw IntegrityError("pipeline: fused node count " +
                             std::to_string(res.embedding.labels.size()) +
                             " != graph node count " +
                             std::to_string(g.node_count()));
    res.final_path = cfg.work_dir / "final.emb";
    save_embedding_file(res.embedding, res.final_path.string());
    res.stats_path = cfg.work_dir / "stats.json";
    {
        std::ofstream out(res.stats_path);
        if (!out)
            throw IoError("cannot write stats: " + res.stats_path.string());
        out << stats_report(res.tree).to_json() << '\n';
    }
    if (!cfg.keep_intermediates)
        for (const auto &leaf : res.tree.leaves) {
            fs::remove(leaf.path);
            fs::remove(cfg.work_dir / (leaf.id + ".emb"));
        }
    return res;
}

} // namespace distne
