#include "flowgnn/dataset.hpp"
#include "flowgnn/rng.hpp"

#include <atomic>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace flowgnn {

std::vector<double> Dataset::targets() const {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples)
        out.push_back(s.target);
    return out;
}

namespace {

FlowSample make_sample(const GenConfig& config, std::size_t index) {
    Rng spec_rng(Rng::derive_seed(config.seed, 2 * index));
    const std::uint64_t mesh_seed = Rng::derive_seed(config.seed, 2 * index + 1);

    const auto& r = config.ranges;
    AirfoilSpec spec;
    spec.mu_x = spec_rng.uniform(r.mu_x_lo, r.mu_x_hi);
    spec.mu_y = spec_rng.uniform(r.mu_y_lo, r.mu_y_hi);
    spec.alpha_deg = spec_rng.uniform(r.alpha_lo, r.alpha_hi);
    spec.u_inf = r.u_inf;
    spec.rho = r.rho;

    const JoukowskiFlow flow(spec);
    MeshSample mesh = sample_mesh(spec, config.mesh, mesh_seed);

    const std::size_t n = mesh.points.size();
    std::vector<double> features(2 * n);
    std::vector<double> positions(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto vel = flow.velocity(mesh.points[i][0], mesh.points[i][1]);
        features[2 * i] = vel[0];
        features[2 * i + 1] = vel[1];
        positions[2 * i] = mesh.points[i][0];
        positions[2 * i + 1] = mesh.points[i][1];
    }

    FlowSample sample;
    sample.graph = build_graph(Tensor::from_values({n, 2}, features, false), mesh.edges, positions);
    sample.target = flow.lift();
    sample.spec = spec;
    sample.seed = mesh_seed;
    return sample;
}

} // namespace

Dataset generate_dataset(const GenConfig& config) {
    if (config.count == 0)
        throw std::invalid_argument("generate_dataset: sample count must be positive");

    Dataset ds;
    ds.config = config;
    ds.samples.resize(config.count);

    const std::size_t workers = std::max<std::size_t>(1, config.threads);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string error;
    std::mutex error_mutex;

    auto run = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= config.count || failed.load())
                return;
            try {
                ds.samples[i] = make_sample(config, i);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true))
                    error = "generate_dataset: sample " + std::to_string(i) + ": " + e.what();
                return;
            }
        }
    };

    if (workers == 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(run);
        for (auto& t : pool)
            t.join();
    }
    if (failed.load())
        throw std::runtime_error(error);
    return ds;
}

} // namespace flowgnn
