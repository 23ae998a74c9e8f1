#include "flowgnn/serialize.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace flowgnn {

static_assert(std::endian::native == std::endian::little,
              "serialization assumes a little-endian host");

std::uint32_t crc32(const void* data, std::size_t len, std::uint32_t crc) {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k)
                c = (c & 1u) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    const auto* bytes = static_cast<const unsigned char*>(data);
    crc = ~crc;
    for (std::size_t i = 0; i < len; ++i)
        crc = table[(crc ^ bytes[i]) & 0xFFu] ^ (crc >> 8);
    return ~crc;
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct ByteBuffer {
    std::string bytes;

    template <typename T>
    void put(T v) {
        static_assert(std::is_trivially_copyable_v<T>);
        bytes.append(reinterpret_cast<const char*>(&v), sizeof(T));
    }
    void put_doubles(const double* data, std::size_t count) {
        bytes.append(reinterpret_cast<const char*>(data), count * sizeof(double));
    }
};

struct ByteReader {
    const char* cur;
    const char* end;

    explicit ByteReader(const std::string& s) : cur(s.data()), end(s.data() + s.size()) {}
    ByteReader(const char* c, const char* e) : cur(c), end(e) {}

    template <typename T>
    T get() {
        static_assert(std::is_trivially_copyable_v<T>);
        if (cur + sizeof(T) > end)
            throw std::runtime_error("unexpected end of file");
        T v;
        std::memcpy(&v, cur, sizeof(T));
        cur += sizeof(T);
        return v;
    }
    void get_doubles(double* out, std::size_t count) {
        if (cur + count * sizeof(double) > end)
            throw std::runtime_error("unexpected end of file");
        std::memcpy(out, cur, count * sizeof(double));
        cur += count * sizeof(double);
    }
};

void rename_into_place(const std::string& tmp, const std::string& path) {
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("failed to move " + tmp + " to " + path + ": " + ec.message());
    }
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open " + tmp + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw std::runtime_error("short write to " + tmp);
    }
    rename_into_place(tmp, path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Splits "header...\nbinary\n<payload>" and parses key=value header lines.
struct ParsedHeader {
    std::string magic;
    std::map<std::string, std::string> kv;
    std::size_t binary_offset = 0;
};

ParsedHeader parse_header(const std::string& content, const std::string& expect_magic) {
    ParsedHeader h;
    std::size_t pos = 0;
    bool first = true;
    while (pos < content.size()) {
        const std::size_t nl = content.find('\n', pos);
        if (nl == std::string::npos)
            throw std::runtime_error("missing binary marker in file header");
        const std::string line = content.substr(pos, nl - pos);
        pos = nl + 1;
        if (first) {
            h.magic = line;
            if (line != expect_magic)
                throw std::runtime_error("unrecognized file format: expected '" + expect_magic +
                                         "'");
            first = false;
            continue;
        }
        if (line == "binary") {
            h.binary_offset = pos;
            return h;
        }
        const std::size_t eq = line.find('=');
        if (eq != std::string::npos)
            h.kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    throw std::runtime_error("missing binary marker in file header");
}

double kv_double(const ParsedHeader& h, const std::string& key) {
    const auto it = h.kv.find(key);
    if (it == h.kv.end())
        throw std::runtime_error("missing header field: " + key);
    return std::stod(it->second);
}

std::uint64_t kv_u64(const ParsedHeader& h, const std::string& key) {
    const auto it = h.kv.find(key);
    if (it == h.kv.end())
        throw std::runtime_error("missing header field: " + key);
    return std::stoull(it->second);
}

} // namespace

void write_text_atomic(const std::string& path, const std::string& text) {
    write_file_atomic(path, text);
}

void save_dataset(const Dataset& dataset, const std::string& path) {
    std::string out;
    out += "flowgnn-dataset 1\n";
    out += "count=" + std::to_string(dataset.samples.size()) + "\n";
    out += "feature_width=2\n";
    const GenConfig& c = dataset.config;
    out += "seed=" + std::to_string(c.seed) + "\n";
    out += "gen.count=" + std::to_string(c.count) + "\n";
    out += "gen.mu_x_lo=" + fmt_double(c.ranges.mu_x_lo) + "\n";
    out += "gen.mu_x_hi=" + fmt_double(c.ranges.mu_x_hi) + "\n";
    out += "gen.mu_y_lo=" + fmt_double(c.ranges.mu_y_lo) + "\n";
    out += "gen.mu_y_hi=" + fmt_double(c.ranges.mu_y_hi) + "\n";
    out += "gen.alpha_lo=" + fmt_double(c.ranges.alpha_lo) + "\n";
    out += "gen.alpha_hi=" + fmt_double(c.ranges.alpha_hi) + "\n";
    out += "gen.u_inf=" + fmt_double(c.ranges.u_inf) + "\n";
    out += "gen.rho=" + fmt_double(c.ranges.rho) + "\n";
    out += "gen.min_nodes=" + std::to_string(c.mesh.min_nodes) + "\n";
    out += "gen.max_nodes=" + std::to_string(c.mesh.max_nodes) + "\n";
    out += "gen.d0=" + fmt_double(c.mesh.d0) + "\n";
    out += "gen.clearance=" + fmt_double(c.mesh.clearance) + "\n";
    out += "gen.x_lo=" + fmt_double(c.mesh.x_lo) + "\n";
    out += "gen.x_hi=" + fmt_double(c.mesh.x_hi) + "\n";
    out += "gen.y_lo=" + fmt_double(c.mesh.y_lo) + "\n";
    out += "gen.y_hi=" + fmt_double(c.mesh.y_hi) + "\n";
    out += "gen.attempts_per_node=" + std::to_string(c.mesh.attempts_per_node) + "\n";
    out += "gen.boundary_resolution=" + std::to_string(c.mesh.boundary_resolution) + "\n";
    out += "binary\n";

    for (std::size_t id = 0; id < dataset.samples.size(); ++id) {
        const FlowSample& s = dataset.samples[id];
        const Graph& g = s.graph;
        ByteBuffer rec;
        rec.put<std::uint32_t>(static_cast<std::uint32_t>(id));
        rec.put<std::uint32_t>(static_cast<std::uint32_t>(g.num_nodes()));
        rec.put<std::uint32_t>(static_cast<std::uint32_t>(g.num_undirected_edges()));
        rec.put<std::uint8_t>(g.has_positions() ? 1 : 0);
        rec.put<double>(s.target);
        rec.put<double>(s.spec.mu_x);
        rec.put<double>(s.spec.mu_y);
        rec.put<double>(s.spec.alpha_deg);
        rec.put<double>(s.spec.u_inf);
        rec.put<double>(s.spec.rho);
        rec.put<std::uint64_t>(s.seed);
        rec.put_doubles(g.features().values().data(), g.features().numel());
        if (g.has_positions())
            rec.put_doubles(g.positions().data(), g.positions().size());
        for (const auto [u, v] : g.directed_edges())
            if (u < v) {
                rec.put<std::uint32_t>(u);
                rec.put<std::uint32_t>(v);
            }

        const std::uint32_t len = static_cast<std::uint32_t>(rec.bytes.size());
        const std::uint32_t crc = crc32(rec.bytes.data(), rec.bytes.size());
        out.append(reinterpret_cast<const char*>(&len), sizeof(len));
        out += rec.bytes;
        out.append(reinterpret_cast<const char*>(&crc), sizeof(crc));
    }
    write_file_atomic(path, out);
}

Dataset load_dataset(const std::string& path) {
    const std::string content = read_file(path);
    const ParsedHeader h = parse_header(content, "flowgnn-dataset 1");

    Dataset ds;
    ds.config.seed = kv_u64(h, "seed");
    ds.config.count = static_cast<std::size_t>(kv_u64(h, "gen.count"));
    ds.config.ranges.mu_x_lo = kv_double(h, "gen.mu_x_lo");
    ds.config.ranges.mu_x_hi = kv_double(h, "gen.mu_x_hi");
    ds.config.ranges.mu_y_lo = kv_double(h, "gen.mu_y_lo");
    ds.config.ranges.mu_y_hi = kv_double(h, "gen.mu_y_hi");
    ds.config.ranges.alpha_lo = kv_double(h, "gen.alpha_lo");
    ds.config.ranges.alpha_hi = kv_double(h, "gen.alpha_hi");
    ds.config.ranges.u_inf = kv_double(h, "gen.u_inf");
    ds.config.ranges.rho = kv_double(h, "gen.rho");
    ds.config.mesh.min_nodes = static_cast<std::size_t>(kv_u64(h, "gen.min_nodes"));
    ds.config.mesh.max_nodes = static_cast<std::size_t>(kv_u64(h, "gen.max_nodes"));
    ds.config.mesh.d0 = kv_double(h, "gen.d0");
    ds.config.mesh.clearance = kv_double(h, "gen.clearance");
    ds.config.mesh.x_lo = kv_double(h, "gen.x_lo");
    ds.config.mesh.x_hi = kv_double(h, "gen.x_hi");
    ds.config.mesh.y_lo = kv_double(h, "gen.y_lo");
    ds.config.mesh.y_hi = kv_double(h, "gen.y_hi");
    ds.config.mesh.attempts_per_node = static_cast<std::size_t>(kv_u64(h, "gen.attempts_per_node"));
    ds.config.mesh.boundary_resolution =
        static_cast<std::size_t>(kv_u64(h, "gen.boundary_resolution"));

    const std::size_t count = static_cast<std::size_t>(kv_u64(h, "count"));
    ByteReader reader(content.data() + h.binary_offset, content.data() + content.size());
    for (std::size_t r = 0; r < count; ++r) {
        const std::uint32_t len = reader.get<std::uint32_t>();
        if (reader.cur + len + sizeof(std::uint32_t) > reader.end)
            throw std::runtime_error("dataset record " + std::to_string(r) +
                                     ": unexpected end of file");
        const char* payload = reader.cur;
        reader.cur += len;
        const std::uint32_t stored_crc = reader.get<std::uint32_t>();
        if (crc32(payload, len) != stored_crc)
            throw std::runtime_error("dataset record " + std::to_string(r) +
                                     ": checksum mismatch");

        ByteReader rec(payload, payload + len);
        const std::uint32_t id = rec.get<std::uint32_t>();
        (void)id;
        const std::uint32_t n = rec.get<std::uint32_t>();
        const std::uint32_t e = rec.get<std::uint32_t>();
        const std::uint8_t has_pos = rec.get<std::uint8_t>();

        FlowSample s;
        s.target = rec.get<double>();
        s.spec.mu_x = rec.get<double>();
        s.spec.mu_y = rec.get<double>();
        s.spec.alpha_deg = rec.get<double>();
        s.spec.u_inf = rec.get<double>();
        s.spec.rho = rec.get<double>();
        s.seed = rec.get<std::uint64_t>();

        std::vector<double> features(2 * static_cast<std::size_t>(n));
        rec.get_doubles(features.data(), features.size());
        std::vector<double> positions;
        if (has_pos) {
            positions.resize(2 * static_cast<std::size_t>(n));
            rec.get_doubles(positions.data(), positions.size());
        }
        std::vector<std::pair<std::uint32_t, std::uint32_t>> edges(e);
        for (auto& [u, v] : edges) {
            u = rec.get<std::uint32_t>();
            v = rec.get<std::uint32_t>();
        }
        s.graph = build_graph(Tensor::from_values({n, 2}, features, false), edges, positions);
        ds.samples.push_back(std::move(s));
    }
    return ds;
}

std::string format_train_config(const TrainConfig& config) {
    std::string out;
    out += "train.lr=" + fmt_double(config.lr) + "\n";
    out += "train.epochs=" + std::to_string(config.epochs) + "\n";
    out += "train.batch_size=" + std::to_string(config.batch_size) + "\n";
    out += "train.train_fraction=" + fmt_double(config.train_fraction) + "\n";
    out += "train.seed=" + std::to_string(config.seed) + "\n";
    out += std::string("train.standardize_targets=") +
           (config.standardize_targets ? "1" : "0") + "\n";
    out += "train.early_stop_r2=" + fmt_double(config.early_stop_r2) + "\n";
    out += "model.in_width=" + std::to_string(config.model.in_width) + "\n";
    out += "model.conv_width=" + std::to_string(config.model.conv_width) + "\n";
    out += "model.rings=" + std::to_string(config.model.rings) + "\n";
    out += "model.pool_ratio=" + fmt_double(config.model.pool_ratio) + "\n";
    std::string widths;
    for (const auto w : config.model.fc_widths)
        widths += (widths.empty() ? "" : ",") + std::to_string(w);
    out += "model.fc_widths=" + widths + "\n";
    out += std::string("model.sage_normalize=") + (config.model.sage_normalize ? "1" : "0") + "\n";
    out += std::string("model.skip_connection=") + (config.model.skip_connection ? "1" : "0") +
           "\n";
    return out;
}

namespace {

TrainConfig parse_train_config(const ParsedHeader& h) {
    TrainConfig c;
    c.lr = kv_double(h, "train.lr");
    c.epochs = static_cast<std::size_t>(kv_u64(h, "train.epochs"));
    c.batch_size = static_cast<std::size_t>(kv_u64(h, "train.batch_size"));
    c.train_fraction = kv_double(h, "train.train_fraction");
    c.seed = kv_u64(h, "train.seed");
    c.standardize_targets = kv_u64(h, "train.standardize_targets") != 0;
    c.early_stop_r2 = kv_double(h, "train.early_stop_r2");
    c.model.in_width = static_cast<std::size_t>(kv_u64(h, "model.in_width"));
    c.model.conv_width = static_cast<std::size_t>(kv_u64(h, "model.conv_width"));
    c.model.rings = static_cast<std::size_t>(kv_u64(h, "model.rings"));
    c.model.pool_ratio = kv_double(h, "model.pool_ratio");
    c.model.fc_widths.clear();
    std::string widths = h.kv.at("model.fc_widths");
    std::size_t pos = 0;
    while (pos < widths.size()) {
        std::size_t comma = widths.find(',', pos);
        if (comma == std::string::npos)
            comma = widths.size();
        c.model.fc_widths.push_back(std::stoul(widths.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    c.model.sage_normalize = kv_u64(h, "model.sage_normalize") != 0;
    c.model.skip_connection = kv_u64(h, "model.skip_connection") != 0;
    return c;
}

} // namespace

void save_checkpoint(ModelParams& params, const TrainConfig& config, const std::string& path) {
    std::string out;
    out += "flowgnn-checkpoint 1\n";
    out += format_train_config(config);
    out += "binary\n";

    ByteBuffer buf;
    const std::vector<Tensor> tensors = params.parameters();
    buf.put<std::uint32_t>(static_cast<std::uint32_t>(tensors.size()));
    for (const Tensor& t : tensors) {
        buf.put<std::uint32_t>(static_cast<std::uint32_t>(t.rank()));
        for (const auto d : t.shape())
            buf.put<std::uint64_t>(d);
        buf.put_doubles(t.values().data(), t.numel());
    }
    buf.put<double>(params.scaler.mean);
    buf.put<double>(params.scaler.stddev);

    const std::uint32_t crc = crc32(buf.bytes.data(), buf.bytes.size());
    out += buf.bytes;
    out.append(reinterpret_cast<const char*>(&crc), sizeof(crc));
    write_file_atomic(path, out);
}

Checkpoint load_checkpoint(const std::string& path) {
    const std::string content = read_file(path);
    const ParsedHeader h = parse_header(content, "flowgnn-checkpoint 1");

    Checkpoint ck;
    ck.config = parse_train_config(h);
    ck.params = init_model(ck.config.model, ck.config.seed);

    if (content.size() < h.binary_offset + sizeof(std::uint32_t))
        throw std::runtime_error("checkpoint: unexpected end of file");
    const std::size_t body_len = content.size() - h.binary_offset - sizeof(std::uint32_t);
    const char* body = content.data() + h.binary_offset;
    std::uint32_t stored_crc;
    std::memcpy(&stored_crc, body + body_len, sizeof(stored_crc));
    if (crc32(body, body_len) != stored_crc)
        throw std::runtime_error("checkpoint: checksum mismatch");

    ByteReader reader(body, body + body_len);
    const std::uint32_t count = reader.get<std::uint32_t>();
    std::vector<Tensor> tensors = ck.params.parameters();
    if (count != tensors.size())
        throw std::runtime_error("checkpoint: tensor count does not match model config");
    for (Tensor& t : tensors) {
        const std::uint32_t rank = reader.get<std::uint32_t>();
        if (rank != t.rank())
            throw std::runtime_error("checkpoint: tensor rank mismatch");
        for (const auto expect : t.shape())
            if (reader.get<std::uint64_t>() != expect)
                throw std::runtime_error("checkpoint: tensor shape mismatch");
        reader.get_doubles(t.data(), t.numel());
    }
    ck.params.scaler.mean = reader.get<double>();
    ck.params.scaler.stddev = reader.get<double>();
    return ck;
}

void save_history(const TrainHistory& history, const TrainConfig& config,
                  const std::string& path) {
    std::string out;
    out += "# flowgnn-history 1\n";
    std::istringstream cfg(format_train_config(config));
    std::string line;
    while (std::getline(cfg, line))
        out += "# " + line + "\n";
    out += "# epoch\ttrain_nmse\tval_nmse\n";
    for (std::size_t i = 0; i < history.size(); ++i)
        out += std::to_string(i + 1) + "\t" + fmt_double(history[i].train_nmse) + "\t" +
               fmt_double(history[i].val_nmse) + "\n";
    write_file_atomic(path, out);
}

} // namespace flowgnn
