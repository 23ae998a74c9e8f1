#pragma once

#include "flowgnn/baselines.hpp"
#include "flowgnn/dataset.hpp"
#include "flowgnn/training.hpp"

#include <map>
#include <string>

namespace flowgnn {

/// Output locations and inputs for each command, on top of the library
/// configs they wrap. Paths are taken as written (relative to the working
/// directory); validate_run_config checks they resolve before a command
/// starts so nothing fails halfway through a long run.
struct GenerateSection {
    GenConfig gen;
    std::string out = "dataset.fgd";
};

struct TrainSection {
    TrainConfig train;
    std::string dataset;
    std::string checkpoint_out = "model.fgc";
    std::string history_out = "history.tsv";
};

struct EvalSection {
    std::string checkpoint;
    std::string dataset;
    std::string metrics_out = "metrics.txt";
    std::string scatter_out = "scatter.tsv";
};

struct BenchmarkSection {
    BenchmarkConfig bench;
    std::vector<std::string> models = {"gcnn", "gb_stumps", "mlp"};
    std::string dataset;
    std::string table_out = "benchmark.tsv";
    std::string scatter_prefix = "benchmark_scatter";
};

struct AnalyzeSection {
    /// Shape-space rows: boundary polylines of freshly drawn specs.
    std::size_t shape_samples = 200;
    std::size_t shape_points = 64;
    std::size_t components = 4;
    std::uint64_t seed = 1;
    std::string geometry_out = "pca_geometry.tsv";
    /// Embedding rows need a trained model; both paths empty skips that half.
    std::string checkpoint;
    std::string dataset;
    std::string embedding_out = "pca_embedding.tsv";
};

struct RunConfig {
    GenerateSection generate;
    TrainSection train;
    EvalSection eval;
    BenchmarkSection benchmark;
    AnalyzeSection analyze;
};

/// Sectioned key=value text ([generate], [train], ...). '#' comments, blank
/// lines ignored. Unknown sections or keys are errors so typos surface
/// instead of silently running defaults. Seeds only change when set here or
/// via the --seed flag; nothing reads the clock.
RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& text);

/// Command names as accepted on the command line.
enum class Command { Generate, Train, Eval, Benchmark, Analyze };

Command parse_command(const std::string& name);

/// Input paths must exist, output paths must land in an existing directory.
/// Throws with the offending section.key and path.
void validate_run_config(const RunConfig& config, Command command);

/// Applies the --seed / --out command-line overrides to the sections the
/// given command reads.
void apply_seed_override(RunConfig& config, Command command, std::uint64_t seed);
void apply_out_dir(RunConfig& config, Command command, const std::string& dir);

} // namespace flowgnn
