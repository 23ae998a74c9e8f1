#include "flowgnn/runconfig.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace flowgnn {

namespace {

std::string trim(const std::string& s) {
    auto start = s.begin();
    while (start != s.end() && std::isspace(static_cast<unsigned char>(*start)))
        ++start;
    auto end = s.end();
    while (end != start && std::isspace(static_cast<unsigned char>(*(end - 1))))
        --end;
    return std::string(start, end);
}

/// Tracks which keys a section consumed so leftovers can be reported.
struct Section {
    std::string name;
    std::map<std::string, std::string> kv;
    mutable std::set<std::string> seen;

    bool has(const std::string& key) const {
        const bool present = kv.count(key) != 0;
        if (present)
            seen.insert(key);
        return present;
    }
    const std::string& raw(const std::string& key) const { return kv.at(key); }

    std::string get_string(const std::string& key, std::string def) const {
        return has(key) ? raw(key) : def;
    }
    double get_double(const std::string& key, double def) const {
        if (!has(key))
            return def;
        try {
            std::size_t used = 0;
            const double v = std::stod(raw(key), &used);
            if (used != raw(key).size())
                throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw std::invalid_argument("config: [" + name + "] " + key + " = '" + raw(key) +
                                        "' is not a number");
        }
    }
    std::uint64_t get_u64(const std::string& key, std::uint64_t def) const {
        if (!has(key))
            return def;
        try {
            std::size_t used = 0;
            const std::uint64_t v = std::stoull(raw(key), &used);
            if (used != raw(key).size())
                throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw std::invalid_argument("config: [" + name + "] " + key + " = '" + raw(key) +
                                        "' is not a non-negative integer");
        }
    }
    std::size_t get_size(const std::string& key, std::size_t def) const {
        return static_cast<std::size_t>(get_u64(key, static_cast<std::uint64_t>(def)));
    }
    bool get_bool(const std::string& key, bool def) const {
        if (!has(key))
            return def;
        const std::string& v = raw(key);
        if (v == "true" || v == "1")
            return true;
        if (v == "false" || v == "0")
            return false;
        throw std::invalid_argument("config: [" + name + "] " + key + " = '" + v +
                                    "' is not a boolean (true/false/1/0)");
    }
    std::vector<std::string> get_list(const std::string& key,
                                      std::vector<std::string> def) const {
        if (!has(key))
            return def;
        std::vector<std::string> out;
        std::stringstream ss(raw(key));
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty())
                out.push_back(item);
        }
        return out;
    }
    std::vector<std::size_t> get_size_list(const std::string& key,
                                           std::vector<std::size_t> def) const {
        if (!has(key))
            return def;
        std::vector<std::size_t> out;
        for (const auto& item : get_list(key, {})) {
            try {
                out.push_back(std::stoul(item));
            } catch (const std::exception&) {
                throw std::invalid_argument("config: [" + name + "] " + key +
                                            " must be a comma list of integers");
            }
        }
        return out;
    }

    void check_consumed() const {
        for (const auto& [key, value] : kv)
            if (!seen.count(key))
                throw std::invalid_argument("config: unknown key '" + key + "' in section [" +
                                            name + "]");
    }
};

std::map<std::string, Section> split_sections(const std::string& text) {
    std::map<std::string, Section> sections;
    static const std::set<std::string> known = {"generate", "train", "eval", "benchmark",
                                                "analyze"};
    std::istringstream in(text);
    std::string line;
    std::string current;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#')
            continue;
        if (line.front() == '[' && line.back() == ']') {
            current = trim(line.substr(1, line.size() - 2));
            if (!known.count(current))
                throw std::invalid_argument("config: unknown section [" + current + "] at line " +
                                            std::to_string(lineno));
            sections[current].name = current;
            continue;
        }
        const auto pos = line.find('=');
        if (pos == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not a key=value pair: '" + line + "'");
        if (current.empty())
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " appears before any [section] header");
        const std::string key = trim(line.substr(0, pos));
        sections[current].name = current;
        sections[current].kv[key] = trim(line.substr(pos + 1));
    }
    return sections;
}

TrainConfig parse_train_section(const Section& s, TrainConfig c) {
    c.lr = s.get_double("lr", c.lr);
    c.epochs = s.get_size("epochs", c.epochs);
    c.batch_size = s.get_size("batch_size", c.batch_size);
    c.train_fraction = s.get_double("train_fraction", c.train_fraction);
    c.seed = s.get_u64("seed", c.seed);
    c.standardize_targets = s.get_bool("standardize_targets", c.standardize_targets);
    c.early_stop_r2 = s.get_double("early_stop_r2", c.early_stop_r2);
    c.model.conv_width = s.get_size("conv_width", c.model.conv_width);
    c.model.rings = s.get_size("rings", c.model.rings);
    c.model.pool_ratio = s.get_double("pool_ratio", c.model.pool_ratio);
    c.model.fc_widths = s.get_size_list("fc_widths", c.model.fc_widths);
    c.model.sage_normalize = s.get_bool("sage_normalize", c.model.sage_normalize);
    c.model.skip_connection = s.get_bool("skip_connection", c.model.skip_connection);
    return c;
}

void require_parent_dir(const std::string& section_key, const std::string& path) {
    if (path.empty())
        throw std::invalid_argument("config: " + section_key + " must not be empty");
    const std::filesystem::path parent = std::filesystem::path(path).parent_path();
    if (!parent.empty() && !std::filesystem::is_directory(parent))
        throw std::invalid_argument("config: " + section_key + " = '" + path +
                                    "': directory does not exist");
}

void require_file(const std::string& section_key, const std::string& path) {
    if (path.empty())
        throw std::invalid_argument("config: " + section_key + " must be set");
    if (!std::filesystem::is_regular_file(path))
        throw std::invalid_argument("config: " + section_key + " = '" + path +
                                    "': file does not exist");
}

} // namespace

RunConfig parse_run_config(const std::string& text) {
    RunConfig config;
    const auto sections = split_sections(text);

    if (const auto it = sections.find("generate"); it != sections.end()) {
        const Section& s = it->second;
        GenerateSection& g = config.generate;
        g.gen.count = s.get_size("count", g.gen.count);
        g.gen.seed = s.get_u64("seed", g.gen.seed);
        g.gen.threads = s.get_size("threads", g.gen.threads);
        g.gen.ranges.mu_x_lo = s.get_double("mu_x_lo", g.gen.ranges.mu_x_lo);
        g.gen.ranges.mu_x_hi = s.get_double("mu_x_hi", g.gen.ranges.mu_x_hi);
        g.gen.ranges.mu_y_lo = s.get_double("mu_y_lo", g.gen.ranges.mu_y_lo);
        g.gen.ranges.mu_y_hi = s.get_double("mu_y_hi", g.gen.ranges.mu_y_hi);
        g.gen.ranges.alpha_lo = s.get_double("alpha_lo", g.gen.ranges.alpha_lo);
        g.gen.ranges.alpha_hi = s.get_double("alpha_hi", g.gen.ranges.alpha_hi);
        g.gen.ranges.u_inf = s.get_double("u_inf", g.gen.ranges.u_inf);
        g.gen.ranges.rho = s.get_double("rho", g.gen.ranges.rho);
        g.gen.mesh.min_nodes = s.get_size("min_nodes", g.gen.mesh.min_nodes);
        g.gen.mesh.max_nodes = s.get_size("max_nodes", g.gen.mesh.max_nodes);
        g.gen.mesh.d0 = s.get_double("d0", g.gen.mesh.d0);
        g.gen.mesh.clearance = s.get_double("clearance", g.gen.mesh.clearance);
        g.out = s.get_string("out", g.out);
        s.check_consumed();
    }
    if (const auto it = sections.find("train"); it != sections.end()) {
        const Section& s = it->second;
        TrainSection& t = config.train;
        t.train = parse_train_section(s, t.train);
        t.dataset = s.get_string("dataset", t.dataset);
        t.checkpoint_out = s.get_string("checkpoint", t.checkpoint_out);
        t.history_out = s.get_string("history", t.history_out);
        s.check_consumed();
    }
    if (const auto it = sections.find("eval"); it != sections.end()) {
        const Section& s = it->second;
        EvalSection& e = config.eval;
        e.checkpoint = s.get_string("checkpoint", e.checkpoint);
        e.dataset = s.get_string("dataset", e.dataset);
        e.metrics_out = s.get_string("metrics", e.metrics_out);
        e.scatter_out = s.get_string("scatter", e.scatter_out);
        s.check_consumed();
    }
    if (const auto it = sections.find("benchmark"); it != sections.end()) {
        const Section& s = it->second;
        BenchmarkSection& b = config.benchmark;
        b.bench.gcnn = config.train.train;
        b.bench.gcnn.lr = s.get_double("gcnn_lr", b.bench.gcnn.lr);
        b.bench.gcnn.epochs = s.get_size("gcnn_epochs", b.bench.gcnn.epochs);
        b.bench.gcnn.seed = s.get_u64("seed", b.bench.gcnn.seed);
        b.bench.gcnn.early_stop_r2 = s.get_double("gcnn_early_stop_r2", b.bench.gcnn.early_stop_r2);
        b.bench.mlp.hidden_layers = s.get_size("mlp_hidden_layers", b.bench.mlp.hidden_layers);
        b.bench.mlp.width = s.get_size("mlp_width", b.bench.mlp.width);
        b.bench.mlp.lr = s.get_double("mlp_lr", b.bench.mlp.lr);
        b.bench.mlp.momentum = s.get_double("mlp_momentum", b.bench.mlp.momentum);
        b.bench.mlp.epochs = s.get_size("mlp_epochs", b.bench.mlp.epochs);
        b.bench.mlp.batch_size = s.get_size("mlp_batch_size", b.bench.mlp.batch_size);
        b.bench.mlp.seed = b.bench.gcnn.seed;
        b.bench.gb_rounds = s.get_size("gb_rounds", b.bench.gb_rounds);
        b.bench.gb_shrinkage = s.get_double("gb_shrinkage", b.bench.gb_shrinkage);
        b.bench.ordered_m = s.get_size("ordered_m", b.bench.ordered_m);
        b.models = s.get_list("models", b.models);
        b.dataset = s.get_string("dataset", b.dataset);
        b.table_out = s.get_string("table", b.table_out);
        b.scatter_prefix = s.get_string("scatter_prefix", b.scatter_prefix);
        s.check_consumed();
    }
    if (const auto it = sections.find("analyze"); it != sections.end()) {
        const Section& s = it->second;
        AnalyzeSection& a = config.analyze;
        a.shape_samples = s.get_size("shape_samples", a.shape_samples);
        a.shape_points = s.get_size("shape_points", a.shape_points);
        a.components = s.get_size("components", a.components);
        a.seed = s.get_u64("seed", a.seed);
        a.geometry_out = s.get_string("geometry", a.geometry_out);
        a.checkpoint = s.get_string("checkpoint", a.checkpoint);
        a.dataset = s.get_string("dataset", a.dataset);
        a.embedding_out = s.get_string("embedding", a.embedding_out);
        s.check_consumed();
    }
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

Command parse_command(const std::string& name) {
    if (name == "generate")
        return Command::Generate;
    if (name == "train")
        return Command::Train;
    if (name == "eval")
        return Command::Eval;
    if (name == "benchmark")
        return Command::Benchmark;
    if (name == "analyze")
        return Command::Analyze;
    throw std::invalid_argument("unknown command: " + name);
}

void validate_run_config(const RunConfig& config, Command command) {
    switch (command) {
    case Command::Generate:
        if (config.generate.gen.count == 0)
            throw std::invalid_argument("config: [generate] count must be positive");
        require_parent_dir("[generate] out", config.generate.out);
        break;
    case Command::Train:
        require_file("[train] dataset", config.train.dataset);
        require_parent_dir("[train] checkpoint", config.train.checkpoint_out);
        require_parent_dir("[train] history", config.train.history_out);
        break;
    case Command::Eval:
        require_file("[eval] checkpoint", config.eval.checkpoint);
        require_file("[eval] dataset", config.eval.dataset);
        require_parent_dir("[eval] metrics", config.eval.metrics_out);
        require_parent_dir("[eval] scatter", config.eval.scatter_out);
        break;
    case Command::Benchmark:
        require_file("[benchmark] dataset", config.benchmark.dataset);
        require_parent_dir("[benchmark] table", config.benchmark.table_out);
        require_parent_dir("[benchmark] scatter_prefix", config.benchmark.scatter_prefix);
        if (config.benchmark.models.empty())
            throw std::invalid_argument("config: [benchmark] models must not be empty");
        for (const auto& m : config.benchmark.models)
            if (m != "gcnn" && m != "gb_stumps" && m != "mlp")
                throw std::invalid_argument("config: [benchmark] unknown model '" + m + "'");
        break;
    case Command::Analyze:
        require_parent_dir("[analyze] geometry", config.analyze.geometry_out);
        if (!config.analyze.checkpoint.empty() || !config.analyze.dataset.empty()) {
            require_file("[analyze] checkpoint", config.analyze.checkpoint);
            require_file("[analyze] dataset", config.analyze.dataset);
            require_parent_dir("[analyze] embedding", config.analyze.embedding_out);
        }
        if (config.analyze.components == 0)
            throw std::invalid_argument("config: [analyze] components must be positive");
        if (config.analyze.shape_samples < 2)
            throw std::invalid_argument("config: [analyze] shape_samples must be at least 2");
        break;
    }
}

void apply_seed_override(RunConfig& config, Command command, std::uint64_t seed) {
    switch (command) {
    case Command::Generate:
        config.generate.gen.seed = seed;
        break;
    case Command::Train:
        config.train.train.seed = seed;
        break;
    case Command::Eval:
        break;
    case Command::Benchmark:
        config.benchmark.bench.gcnn.seed = seed;
        config.benchmark.bench.mlp.seed = seed;
        break;
    case Command::Analyze:
        config.analyze.seed = seed;
        break;
    }
}

void apply_out_dir(RunConfig& config, Command command, const std::string& dir) {
    const auto rebase = [&](std::string& path) {
        path = (std::filesystem::path(dir) / std::filesystem::path(path).filename()).string();
    };
    switch (command) {
    case Command::Generate:
        rebase(config.generate.out);
        break;
    case Command::Train:
        rebase(config.train.checkpoint_out);
        rebase(config.train.history_out);
        break;
    case Command::Eval:
        rebase(config.eval.metrics_out);
        rebase(config.eval.scatter_out);
        break;
    case Command::Benchmark:
        rebase(config.benchmark.table_out);
        rebase(config.benchmark.scatter_prefix);
        break;
    case Command::Analyze:
        rebase(config.analyze.geometry_out);
        rebase(config.analyze.embedding_out);
        break;
    }
}

} // namespace flowgnn
