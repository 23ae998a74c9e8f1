// End-to-end acceptance suite. Each numbered criterion prints one PASS/FAIL
// line with its measured numbers; the process exits nonzero if any hard
// criterion fails. Criteria 7 and 8 are comparative model-quality checks and
// are reported as soft: a FAIL there is documented output, not a build
// rejection.

#include "flowgnn/autodiff.hpp"
#include "flowgnn/baselines.hpp"
#include "flowgnn/commands.hpp"
#include "flowgnn/gradcheck.hpp"
#include "flowgnn/network.hpp"
#include "flowgnn/pca.hpp"
#include "flowgnn/rng.hpp"
#include "flowgnn/runconfig.hpp"
#include "flowgnn/serialize.hpp"
#include "flowgnn/training.hpp"

#include "oracles.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace flowgnn;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int criterion = 0;
    bool pass = false;
    bool soft = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void report(const Outcome& o) {
    std::printf("criterion %d: %s%s - %s\n", o.criterion, o.pass ? "PASS" : "FAIL",
                o.soft ? " (soft)" : "", o.detail.c_str());
    std::fflush(stdout);
}

Graph random_test_graph(std::size_t n, std::size_t extra, std::size_t f, Rng& rng) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (std::uint32_t v = 0; v + 1 < n; ++v) {
        edges.push_back({v, v + 1});
        seen.insert({v, v + 1});
    }
    while (edges.size() < n - 1 + extra) {
        auto a = static_cast<std::uint32_t>(rng.uniform_index(0, n - 1));
        auto b = static_cast<std::uint32_t>(rng.uniform_index(0, n - 1));
        if (a == b)
            continue;
        if (a > b)
            std::swap(a, b);
        if (seen.insert({a, b}).second)
            edges.push_back({a, b});
    }
    std::vector<double> values(n * f);
    for (auto& v : values)
        v = rng.normal();
    return build_graph(Tensor::from_values({n, f}, std::move(values)), edges);
}

// --- criterion 1: permutation invariance on generated meshes ---

Outcome run_criterion_1(const Dataset* dataset) {
    Outcome o{1, false, false, ""};
    if (!dataset) {
        o.detail = "dataset generation failed upstream";
        return o;
    }
    const auto start = std::chrono::steady_clock::now();
    ModelParams params = init_model(ModelConfig{}, 2024);
    Rng rng(501);
    double worst = 0.0;
    const std::size_t graphs = 50;
    for (std::size_t i = 0; i < graphs; ++i) {
        const Graph& g = dataset->samples[i].graph;
        const double base = forward(g, params).scalar_value();
        for (int p = 0; p < 10; ++p) {
            std::vector<std::uint32_t> mapping(g.num_nodes());
            for (std::uint32_t j = 0; j < mapping.size(); ++j)
                mapping[j] = j;
            rng.shuffle(mapping);
            Graph h = permute(g, Permutation(mapping));
            const double permuted = forward(h, params).scalar_value();
            worst = std::max(worst, std::fabs(permuted - base) / (std::fabs(base) + 1e-12));
        }
    }
    o.pass = worst < 1e-9;
    o.detail = "max relative deviation " + fmt(worst) + " over 50 graphs x 10 permutations (" +
               fmt(seconds_since(start)) + " s)";
    return o;
}

// --- criterion 2: finite-difference gradient check of the full model ---

Outcome run_criterion_2() {
    Outcome o{2, false, false, ""};
    const auto start = std::chrono::steady_clock::now();
    Rng rng(77);
    Graph g = random_test_graph(30, 25, 2, rng);
    ModelParams model = init_model(ModelConfig{}, 3);
    std::vector<Tensor> params = model.parameters();
    auto loss_fn = [&]() {
        Tensor out = forward(g, model);
        return mse(out, Tensor::vector_of({0.42}));
    };
    GradCheckOptions options;
    options.step = 1e-6;
    options.max_coords_per_param = 16;
    const GradCheckReport report = finite_diff_check(params, loss_fn, options);
    o.pass = report.coords_checked >= 200 && report.max_rel_error < 1e-4;
    o.detail = "max relative error " + fmt(report.max_rel_error) + " over " +
               std::to_string(report.coords_checked) + " coordinates (" +
               fmt(seconds_since(start)) + " s)";
    return o;
}

// --- criterion 3: oracle equivalence on random small instances ---

Outcome run_criterion_3() {
    Outcome o{3, false, false, ""};
    const auto start = std::chrono::steady_clock::now();
    Rng rng(909);
    double worst_sage = 0.0;
    std::size_t structure_mismatches = 0;
    double worst_pca = 0.0;

    for (int instance = 0; instance < 100; ++instance) {
        const std::size_t n = 5 + rng.uniform_index(0, 45);
        const std::size_t f = 1 + rng.uniform_index(0, 19);
        Graph g = random_test_graph(n, n / 2, f, rng);

        // sage_ring against the dense loop implementation.
        {
            const std::size_t f_out = 1 + rng.uniform_index(0, 7);
            std::vector<double> w(2 * f * f_out), b(f_out);
            for (auto& x : w)
                x = rng.normal();
            for (auto& x : b)
                x = rng.normal();
            SageRingOptions options;
            options.normalize = (instance % 2 == 0);
            Tensor got = sage_ring(g, g.features(),
                                   Tensor::from_values({2 * f, f_out}, w),
                                   Tensor::from_values({f_out}, b), options);
            const auto want = oracle::dense_sage_ring(g, g.features().values(), f, w, f_out, b,
                                                      true, options.normalize);
            for (std::size_t i = 0; i < want.size(); ++i) {
                const double denom = std::max({std::fabs(want[i]), std::fabs(got.values()[i]),
                                               1e-9});
                worst_sage = std::max(worst_sage,
                                      std::fabs(got.values()[i] - want[i]) / denom);
            }
        }

        // topk_pool against the scalar replay.
        {
            std::vector<double> p(f);
            for (auto& x : p)
                x = rng.normal();
            TopKParams tk;
            tk.p = Tensor::from_values({f}, p);
            tk.ratio = rng.uniform(0.2, 1.0);
            TopKResult got = topk_pool(g, g.features(), tk);
            const auto want = oracle::topk_reference(g, g.features().values(), f, p, tk.ratio);
            bool same = got.kept == want.kept;
            std::vector<std::pair<std::uint32_t, std::uint32_t>> got_edges;
            for (const auto& [u, v] : got.graph.directed_edges())
                if (u < v)
                    got_edges.push_back({u, v});
            same = same && got_edges == want.edges;
            if (same)
                for (std::size_t i = 0; i < want.features.size(); ++i) {
                    const double denom = std::max({std::fabs(want.features[i]), 1e-9});
                    if (std::fabs(got.features.values()[i] - want.features[i]) / denom > 1e-9)
                        same = false;
                }
            if (!same)
                ++structure_mismatches;
        }

        // k_hop_neighbors against truncated BFS.
        {
            const auto v = static_cast<std::uint32_t>(rng.uniform_index(0, n - 1));
            const auto k = static_cast<std::uint32_t>(rng.uniform_index(0, 4));
            if (k_hop_neighbors(g, v, k) != oracle::bfs_k_hop(g, v, k))
                ++structure_mismatches;
        }

        // induced_subgraph against the all-pairs filter.
        {
            std::vector<std::uint32_t> keep;
            for (std::uint32_t node = 0; node < n; ++node)
                if (rng.next_double() < 0.6)
                    keep.push_back(node);
            if (keep.empty())
                keep.push_back(0);
            auto [sub, remap] = induced_subgraph(g, keep);
            std::vector<std::pair<std::uint32_t, std::uint32_t>> got_edges;
            for (const auto& [u, v] : sub.directed_edges())
                if (u < v)
                    got_edges.push_back({u, v});
            if (got_edges != oracle::induced_edges(g, keep))
                ++structure_mismatches;
        }

        // pca eigenvalues/projections against a dense Jacobi solve.
        {
            const std::size_t rows = 6 + rng.uniform_index(0, 24);
            const std::size_t cols = 2 + rng.uniform_index(0, 18);
            DataMatrix x;
            x.rows = rows;
            x.cols = cols;
            x.values.resize(rows * cols);
            for (auto& v : x.values)
                v = rng.normal();
            const std::size_t k = 1 + rng.uniform_index(0, std::min<std::size_t>(cols, 5) - 1);
            PcaResult got = pca(x, k);
            const auto cov = oracle::covariance(x.values, rows, cols);
            const auto eig = oracle::jacobi_eigensymm(cov, cols);
            const double scale = std::max(std::fabs(eig.values[0]), 1e-12);
            for (std::size_t j = 0; j < k; ++j)
                worst_pca = std::max(worst_pca,
                                     std::fabs(got.eigenvalues[j] - eig.values[j]) / scale);
            // Projections must equal centered data on the components.
            for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t j = 0; j < k; ++j) {
                    double dot = 0.0;
                    for (std::size_t c = 0; c < cols; ++c)
                        dot += (x.at(r, c) - got.column_means[c]) *
                               got.components[j * cols + c];
                    worst_pca = std::max(worst_pca,
                                         std::fabs(got.projections[r * k + j] - dot) / scale);
                }
        }
    }

    o.pass = worst_sage < 1e-9 && structure_mismatches == 0 && worst_pca < 1e-6;
    o.detail = "sage dev " + fmt(worst_sage) + ", pca dev " + fmt(worst_pca) + ", " +
               std::to_string(structure_mismatches) +
               " structural mismatches over 100 instances (" + fmt(seconds_since(start)) + " s)";
    return o;
}

// --- criterion 4: pressure-integral force against the closed-form lift ---

Outcome run_criterion_4() {
    Outcome o{4, false, false, ""};
    const auto start = std::chrono::steady_clock::now();
    Rng rng(404);
    double worst_lift = 0.0, worst_drag = 0.0;
    for (int i = 0; i < 20; ++i) {
        AirfoilSpec spec;
        spec.mu_x = rng.uniform(-0.18, -0.04);
        spec.mu_y = rng.uniform(0.0, 0.12);
        spec.alpha_deg = rng.uniform(-10.0, 10.0);
        JoukowskiFlow flow(spec);
        const auto samples = bernoulli_surface_samples(spec, 2000);
        const double lift = surface_force_integral(samples, flow.lift_direction());
        const double drag = surface_force_integral(samples, flow.drag_direction());
        const double expect = flow.lift();
        const double denom = std::max(std::fabs(expect), 1e-9);
        worst_lift = std::max(worst_lift, std::fabs(lift - expect) / denom);
        worst_drag = std::max(worst_drag, std::fabs(drag) / denom);
    }
    o.pass = worst_lift < 0.01 && worst_drag < 0.005;
    o.detail = "max lift error " + fmt(worst_lift * 100.0) + "%, max |drag| " +
               fmt(worst_drag * 100.0) + "% of lift, 20 specs at 2000 panels (" +
               fmt(seconds_since(start)) + " s)";
    return o;
}

// --- criterion 5: end-to-end regression on the synthetic analog ---

struct TrainedPipeline {
    Dataset dataset;
    TrainResult result;
    TrainConfig config;
    Metrics val;
};

Outcome run_criterion_5(std::optional<Dataset>& dataset,
                        std::optional<TrainedPipeline>& pipeline, double generation_seconds) {
    Outcome o{5, false, false, ""};
    if (!dataset) {
        o.detail = "dataset generation failed upstream";
        return o;
    }
    const auto start = std::chrono::steady_clock::now();
    try {
        TrainConfig config;
        config.lr = 1e-3;
        config.epochs = 150;
        config.batch_size = 32;
        config.train_fraction = 0.8;
        config.seed = 7;
        config.standardize_targets = true;
        config.early_stop_r2 = 0.97;

        TrainedPipeline p;
        p.config = config;
        p.dataset = std::move(*dataset);
        dataset.reset();
        p.result = train(p.dataset, config);
        p.val = evaluate(p.result.params, p.dataset, p.result.val_indices);
        const double train_seconds = seconds_since(start);

        o.pass = p.val.r2 >= 0.95 && p.val.nmse <= 0.05 && train_seconds < 1800.0;
        o.detail = "val R2 " + fmt(p.val.r2) + ", NMSE " + fmt(p.val.nmse) + " on " +
                   std::to_string(p.result.val_indices.size()) + " held-out samples; " +
                   std::to_string(p.result.history.size()) + " epochs in " + fmt(train_seconds) +
                   " s (generation " + fmt(generation_seconds) + " s)";
        pipeline = std::move(p);
    } catch (const std::exception& e) {
        o.detail = std::string("exception: ") + e.what();
        pipeline.reset();
    }
    return o;
}

// --- criterion 6: inductive evaluation outside the training band ---

Outcome run_criterion_6(const std::optional<TrainedPipeline>& pipeline) {
    Outcome o{6, false, false, ""};
    if (!pipeline) {
        o.detail = "no trained model from criterion 5";
        return o;
    }
    const auto start = std::chrono::steady_clock::now();
    try {
        GenConfig gen;
        gen.count = 100;
        gen.seed = 4242;
        gen.mesh.min_nodes = 500;
        gen.mesh.max_nodes = 700;
        Dataset fresh = generate_dataset(gen);
        ModelParams params = pipeline->result.params;
        const Metrics m = evaluate(params, fresh);
        o.pass = m.r2 >= 0.85;
        o.detail = "R2 " + fmt(m.r2) + " on 100 samples at 500-700 nodes (" +
                   fmt(seconds_since(start)) + " s)";
    } catch (const std::exception& e) {
        o.detail = std::string("exception: ") + e.what();
    }
    return o;
}

// --- criterion 7 (soft): baseline ordering on the criterion-5 split ---

Outcome run_criterion_7(const std::optional<TrainedPipeline>& pipeline) {
    Outcome o{7, false, true, ""};
    if (!pipeline) {
        o.detail = "no trained model from criterion 5";
        return o;
    }
    const auto start = std::chrono::steady_clock::now();
    try {
        BenchmarkConfig config;
        config.gcnn = pipeline->config; // identical split derivation
        const BenchmarkResult bench =
            benchmark_compare(pipeline->dataset, config, {"gb_stumps", "mlp"});
        const double gcnn_r2 = pipeline->val.r2;
        double gb_r2 = 0.0, mlp_r2 = 0.0;
        for (const auto& e : bench.entries) {
            if (e.name == "gb_stumps")
                gb_r2 = e.r2;
            if (e.name == "mlp")
                mlp_r2 = e.r2;
        }
        o.pass = gcnn_r2 >= gb_r2 && gcnn_r2 >= mlp_r2;
        o.detail = "R2 gcnn " + fmt(gcnn_r2) + ", gb_stumps " + fmt(gb_r2) + ", mlp " +
                   fmt(mlp_r2) + " on the shared validation split (" +
                   fmt(seconds_since(start)) + " s)";
    } catch (const std::exception& e) {
        o.detail = std::string("exception: ") + e.what();
    }
    return o;
}

// --- criterion 8 (soft): skip-connection ablation ---

Outcome run_criterion_8(const std::optional<TrainedPipeline>& pipeline) {
    Outcome o{8, false, true, ""};
    if (!pipeline) {
        o.detail = "no dataset from criterion 5";
        return o;
    }
    const auto start = std::chrono::steady_clock::now();
    try {
        TrainConfig config = pipeline->config;
        // Shortened ablation: both variants separate well before full length.
        config.epochs = 25;
        config.early_stop_r2 = 0.0;
        const AblationResult ab = ablate_skip(pipeline->dataset, config);
        save_history(ab.with_skip, config, "acceptance_ablation_with_skip.tsv");
        save_history(ab.without_skip, config, "acceptance_ablation_without_skip.tsv");
        const double with_skip = ab.with_skip.back().val_nmse;
        const double without_skip = ab.without_skip.back().val_nmse;
        o.pass = with_skip <= without_skip;
        o.detail = "final val NMSE with skip " + fmt(with_skip) + ", without " +
                   fmt(without_skip) + " after 25 epochs; curves written (" +
                   fmt(seconds_since(start)) + " s)";
    } catch (const std::exception& e) {
        o.detail = std::string("exception: ") + e.what();
    }
    return o;
}

// --- criterion 9: byte-identical command outputs ---

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("flowgnn-accept-" + tag + "-" +
                                            std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::vector<char> read_bytes(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome run_criterion_9() {
    Outcome o{9, false, false, ""};
    const auto start = std::chrono::steady_clock::now();
    try {
        TempDir a("a"), b("b");
        const auto config_for = [](const TempDir& dir) {
            RunConfig config;
            config.generate.gen.count = 12;
            config.generate.gen.seed = 31;
            config.generate.gen.mesh.min_nodes = 150;
            config.generate.gen.mesh.max_nodes = 220;
            config.generate.out = dir.file("data.fgd");
            config.train.dataset = dir.file("data.fgd");
            config.train.checkpoint_out = dir.file("model.fgc");
            config.train.history_out = dir.file("history.tsv");
            config.train.train.epochs = 2;
            config.train.train.batch_size = 4;
            config.train.train.seed = 5;
            config.train.train.model.conv_width = 8;
            config.train.train.model.fc_widths = {12, 6};
            return config;
        };
        for (const TempDir* dir : {&a, &b}) {
            RunConfig config = config_for(*dir);
            cmd_generate(config);
            cmd_train(config);
        }
        const bool data_same = read_bytes(a.file("data.fgd")) == read_bytes(b.file("data.fgd"));
        const bool model_same = read_bytes(a.file("model.fgc")) == read_bytes(b.file("model.fgc"));
        const bool history_same =
            read_bytes(a.file("history.tsv")) == read_bytes(b.file("history.tsv"));
        o.pass = data_same && model_same && history_same;
        o.detail = std::string("dataset ") + (data_same ? "identical" : "DIFFERS") +
                   ", checkpoint " + (model_same ? "identical" : "DIFFERS") + ", history " +
                   (history_same ? "identical" : "DIFFERS") + " across repeated runs (" +
                   fmt(seconds_since(start)) + " s)";
    } catch (const std::exception& e) {
        o.detail = std::string("exception: ") + e.what();
    }
    return o;
}

// --- criterion 10: mesh statistics under the default generator ---

Outcome run_criterion_10(const Dataset* dataset) {
    Outcome o{10, false, false, ""};
    if (!dataset) {
        o.detail = "dataset generation failed upstream";
        return o;
    }
    double min_degree = 1e300, max_degree = 0.0;
    std::size_t min_edges = SIZE_MAX, max_edges = 0;
    const std::size_t checked = std::min<std::size_t>(50, dataset->size());
    for (std::size_t i = 0; i < checked; ++i) {
        const Graph& g = dataset->samples[i].graph;
        const std::size_t e = g.num_undirected_edges();
        const double mean_degree =
            2.0 * static_cast<double>(e) / static_cast<double>(g.num_nodes());
        min_degree = std::min(min_degree, mean_degree);
        max_degree = std::max(max_degree, mean_degree);
        min_edges = std::min(min_edges, e);
        max_edges = std::max(max_edges, e);
    }
    o.pass = min_degree >= 4.0 && max_degree <= 7.0 && min_edges >= 3000 && max_edges <= 4000;
    o.detail = "mean degree in [" + fmt(min_degree) + ", " + fmt(max_degree) + "], edges in [" +
               std::to_string(min_edges) + ", " + std::to_string(max_edges) + "] over " +
               std::to_string(checked) + " default meshes";
    return o;
}

} // namespace

int main() {
    std::printf("acceptance suite: graph lift-regression engine\n");
    std::fflush(stdout);

    // Shared 1000-sample dataset at the default mesh band, reused by
    // criteria 1, 5, 7, 8 and 10.
    std::optional<Dataset> dataset;
    std::optional<TrainedPipeline> pipeline;
    double generation_seconds = 0.0;
    {
        const auto start = std::chrono::steady_clock::now();
        try {
            GenConfig gen;
            gen.count = 1000;
            gen.seed = 20240731;
            dataset = generate_dataset(gen);
            generation_seconds = seconds_since(start);
            std::printf("generated %zu samples in %.1f s\n", dataset->size(),
                        generation_seconds);
            std::fflush(stdout);
        } catch (const std::exception& e) {
            std::printf("dataset generation failed: %s\n", e.what());
        }
    }
    const Dataset* shared = dataset ? &*dataset : nullptr;

    std::vector<Outcome> outcomes;
    outcomes.push_back(run_criterion_1(shared));
    report(outcomes.back());
    outcomes.push_back(run_criterion_2());
    report(outcomes.back());
    outcomes.push_back(run_criterion_3());
    report(outcomes.back());
    outcomes.push_back(run_criterion_4());
    report(outcomes.back());
    // Criterion 10 reads the dataset before criterion 5 consumes it.
    Outcome c10 = run_criterion_10(shared);
    outcomes.push_back(run_criterion_5(dataset, pipeline, generation_seconds));
    report(outcomes.back());
    outcomes.push_back(run_criterion_6(pipeline));
    report(outcomes.back());
    outcomes.push_back(run_criterion_7(pipeline));
    report(outcomes.back());
    outcomes.push_back(run_criterion_8(pipeline));
    report(outcomes.back());
    outcomes.push_back(run_criterion_9());
    report(outcomes.back());
    outcomes.push_back(c10);
    report(outcomes.back());

    std::size_t hard_failures = 0, soft_failures = 0;
    for (const auto& o : outcomes) {
        if (!o.pass)
            (o.soft ? soft_failures : hard_failures) += 1;
    }
    std::printf("summary: %zu/%zu criteria passed (%zu hard failures, %zu soft failures)\n",
                outcomes.size() - hard_failures - soft_failures, outcomes.size(), hard_failures,
                soft_failures);
    return hard_failures == 0 ? 0 : 1;
}
