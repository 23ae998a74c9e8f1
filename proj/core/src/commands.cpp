#include "flowgnn/commands.hpp"

#include "flowgnn/network.hpp"
#include "flowgnn/pca.hpp"
#include "flowgnn/rng.hpp"
#include "flowgnn/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace flowgnn {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string commented(const std::string& block) {
    std::string out;
    std::istringstream in(block);
    std::string line;
    while (std::getline(in, line))
        out += "# " + line + "\n";
    return out;
}

void write_scatter(const std::string& path, const std::string& header,
                   const std::vector<double>& truth, const std::vector<double>& pred) {
    std::string out = header;
    out += "truth\tprediction\n";
    for (std::size_t i = 0; i < truth.size(); ++i)
        out += fmt(truth[i]) + "\t" + fmt(pred[i]) + "\n";
    write_text_atomic(path, out);
}

} // namespace

void cmd_generate(const RunConfig& config) {
    validate_run_config(config, Command::Generate);
    const Dataset dataset = generate_dataset(config.generate.gen);
    save_dataset(dataset, config.generate.out);
}

void cmd_train(const RunConfig& config) {
    validate_run_config(config, Command::Train);
    const Dataset dataset = load_dataset(config.train.dataset);
    TrainResult result = train(dataset, config.train.train);
    save_checkpoint(result.params, config.train.train, config.train.checkpoint_out);
    save_history(result.history, config.train.train, config.train.history_out);
}

void cmd_eval(const RunConfig& config) {
    validate_run_config(config, Command::Eval);
    Checkpoint ck = load_checkpoint(config.eval.checkpoint);
    const Dataset dataset = load_dataset(config.eval.dataset);
    if (dataset.samples.empty())
        throw std::runtime_error("eval: dataset is empty");
    const std::size_t width = dataset.samples.front().graph.feature_width();
    if (width != ck.config.model.in_width)
        throw std::runtime_error("eval: dataset feature width " + std::to_string(width) +
                                 " does not match checkpoint input width " +
                                 std::to_string(ck.config.model.in_width));

    const Metrics m = evaluate(ck.params, dataset);

    std::string header = "# flowgnn-eval 1\n";
    header += "# checkpoint=" + config.eval.checkpoint + "\n";
    header += "# dataset=" + config.eval.dataset + "\n";
    header += commented(format_train_config(ck.config));

    std::string metrics = header;
    metrics += "samples=" + std::to_string(dataset.size()) + "\n";
    metrics += "mse=" + fmt(m.mse) + "\n";
    metrics += "nmse=" + fmt(m.nmse) + "\n";
    metrics += "r2=" + fmt(m.r2) + "\n";
    metrics += std::string("normalized_defined=") + (m.normalized_defined ? "1" : "0") + "\n";
    write_text_atomic(config.eval.metrics_out, metrics);

    std::vector<double> truth;
    std::vector<double> pred;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        truth.push_back(dataset.samples[i].target);
        pred.push_back(dataset.samples[i].target + m.residuals[i]);
    }
    write_scatter(config.eval.scatter_out, header, truth, pred);
}

void cmd_benchmark(const RunConfig& config) {
    validate_run_config(config, Command::Benchmark);
    const Dataset dataset = load_dataset(config.benchmark.dataset);
    const BenchmarkResult result =
        benchmark_compare(dataset, config.benchmark.bench, config.benchmark.models);

    std::string header = "# flowgnn-benchmark 1\n";
    header += "# dataset=" + config.benchmark.dataset + "\n";
    header += "# seed=" + std::to_string(config.benchmark.bench.gcnn.seed) + "\n";
    header += "# ordered_m=" + std::to_string(result.ordered_m) + "\n";
    header += "# gb_rounds=" + std::to_string(config.benchmark.bench.gb_rounds) + "\n";
    header += "# gb_shrinkage=" + fmt(config.benchmark.bench.gb_shrinkage) + "\n";
    header += "# mlp_width=" + std::to_string(config.benchmark.bench.mlp.width) + "\n";
    header += "# mlp_hidden_layers=" + std::to_string(config.benchmark.bench.mlp.hidden_layers) +
              "\n";
    header += commented(format_train_config(config.benchmark.bench.gcnn));

    std::string table = header;
    table += "model\tr2\tnmse\n";
    for (const auto& entry : result.entries)
        table += entry.name + "\t" + fmt(entry.r2) + "\t" + fmt(entry.nmse) + "\n";
    write_text_atomic(config.benchmark.table_out, table);

    for (const auto& entry : result.entries)
        write_scatter(config.benchmark.scatter_prefix + "_" + entry.name + ".tsv", header,
                      result.val_targets, entry.predictions);
}

void cmd_analyze(const RunConfig& config) {
    validate_run_config(config, Command::Analyze);
    const AnalyzeSection& a = config.analyze;
    const SpecRanges& ranges = config.generate.gen.ranges;

    std::string header = "# flowgnn-analyze 1\n";
    header += "# seed=" + std::to_string(a.seed) + "\n";
    header += "# shape_samples=" + std::to_string(a.shape_samples) + "\n";
    header += "# shape_points=" + std::to_string(a.shape_points) + "\n";
    header += "# components=" + std::to_string(a.components) + "\n";
    header += "# mu_x=[" + fmt(ranges.mu_x_lo) + "," + fmt(ranges.mu_x_hi) + "]\n";
    header += "# mu_y=[" + fmt(ranges.mu_y_lo) + "," + fmt(ranges.mu_y_hi) + "]\n";

    // Shape space: each row is a boundary polyline, flattened (x,y) pairs.
    // Angle of attack does not move the geometry, so it is not drawn here.
    {
        Rng rng(a.seed);
        DataMatrix shapes;
        shapes.rows = a.shape_samples;
        shapes.cols = 2 * a.shape_points;
        shapes.values.reserve(shapes.rows * shapes.cols);
        std::vector<AirfoilSpec> specs;
        for (std::size_t i = 0; i < a.shape_samples; ++i) {
            AirfoilSpec spec;
            spec.mu_x = rng.uniform(ranges.mu_x_lo, ranges.mu_x_hi);
            spec.mu_y = rng.uniform(ranges.mu_y_lo, ranges.mu_y_hi);
            spec.u_inf = ranges.u_inf;
            spec.rho = ranges.rho;
            specs.push_back(spec);
            for (const auto& p : joukowski_boundary(spec, a.shape_points)) {
                shapes.values.push_back(p[0]);
                shapes.values.push_back(p[1]);
            }
        }
        const std::size_t k = std::min(a.components, shapes.cols);
        const PcaResult res = pca(shapes, k);

        std::string out = header;
        out += "# rows: per component, eigenvalue and explained ratio; then\n";
        out += "# per sample, mu_x mu_y followed by the k projections\n";
        for (std::size_t c = 0; c < res.k; ++c)
            out += "component\t" + std::to_string(c) + "\t" + fmt(res.eigenvalues[c]) + "\t" +
                   fmt(res.explained_ratio[c]) + "\n";
        for (std::size_t r = 0; r < shapes.rows; ++r) {
            out += fmt(specs[r].mu_x) + "\t" + fmt(specs[r].mu_y);
            for (std::size_t c = 0; c < res.k; ++c)
                out += "\t" + fmt(res.projections[r * res.k + c]);
            out += "\n";
        }
        write_text_atomic(a.geometry_out, out);
    }

    // Embedding space: readout vectors of a trained model over a dataset,
    // one row per sample, tagged with the lift target for coloring.
    if (!a.checkpoint.empty() || !a.dataset.empty()) {
        Checkpoint ck = load_checkpoint(a.checkpoint);
        const Dataset dataset = load_dataset(a.dataset);
        if (dataset.size() < 2)
            throw std::runtime_error("analyze: embedding pca needs at least 2 samples");

        DataMatrix rows;
        rows.rows = dataset.size();
        for (const auto& sample : dataset.samples) {
            const Tensor e = embed(sample.graph, ck.params);
            if (rows.cols == 0)
                rows.cols = e.numel();
            rows.values.insert(rows.values.end(), e.values().begin(), e.values().end());
        }
        const std::size_t k = std::min(a.components, rows.cols);
        const PcaResult res = pca(rows, k);

        std::string out = header;
        out += "# checkpoint=" + a.checkpoint + "\n";
        out += "# dataset=" + a.dataset + "\n";
        out += "# rows: per component, eigenvalue and explained ratio; then\n";
        out += "# per sample, lift target followed by the k projections\n";
        for (std::size_t c = 0; c < res.k; ++c)
            out += "component\t" + std::to_string(c) + "\t" + fmt(res.eigenvalues[c]) + "\t" +
                   fmt(res.explained_ratio[c]) + "\n";
        for (std::size_t r = 0; r < rows.rows; ++r) {
            out += fmt(dataset.samples[r].target);
            for (std::size_t c = 0; c < res.k; ++c)
                out += "\t" + fmt(res.projections[r * res.k + c]);
            out += "\n";
        }
        write_text_atomic(a.embedding_out, out);
    }
}

void run_command(const RunConfig& config, Command command) {
    switch (command) {
    case Command::Generate:
        cmd_generate(config);
        break;
    case Command::Train:
        cmd_train(config);
        break;
    case Command::Eval:
        cmd_eval(config);
        break;
    case Command::Benchmark:
        cmd_benchmark(config);
        break;
    case Command::Analyze:
        cmd_analyze(config);
        break;
    }
}

} // namespace flowgnn
