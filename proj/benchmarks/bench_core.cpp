// Microbenchmarks for the hot paths: the dense kernels behind the network,
// one convolution ring, pooling, triangulation, full-mesh generation and a
// complete forward/backward pass at training scale.

#include "flowgnn/autodiff.hpp"
#include "flowgnn/delaunay.hpp"
#include "flowgnn/meshgen.hpp"
#include "flowgnn/network.hpp"
#include "flowgnn/pooling.hpp"
#include "flowgnn/rng.hpp"
#include "flowgnn/sage.hpp"

#include <benchmark/benchmark.h>

#include <utility>
#include <vector>

using namespace flowgnn;

namespace {

Tensor random_tensor(std::vector<std::size_t> shape, Rng& rng, bool requires_grad = false) {
    std::size_t n = 1;
    for (auto d : shape)
        n *= d;
    std::vector<double> values(n);
    for (auto& v : values)
        v = rng.normal();
    return Tensor::from_values(std::move(shape), std::move(values), requires_grad);
}

Graph mesh_graph(std::uint64_t seed) {
    AirfoilSpec spec;
    spec.alpha_deg = 4.0;
    MeshSample mesh = sample_mesh(spec, MeshConfig{}, seed);
    JoukowskiFlow flow(spec);
    const std::size_t n = mesh.points.size();
    std::vector<double> uv(2 * n), positions(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto [u, v] = flow.velocity(mesh.points[i][0], mesh.points[i][1]);
        uv[2 * i] = u;
        uv[2 * i + 1] = v;
        positions[2 * i] = mesh.points[i][0];
        positions[2 * i + 1] = mesh.points[i][1];
    }
    return build_graph(Tensor::from_values({n, 2}, std::move(uv)), mesh.edges, positions);
}

void bench_linear(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(1);
    Tensor x = random_tensor({n, 128}, rng);
    Tensor w = random_tensor({128, 64}, rng);
    Tensor b = random_tensor({64}, rng);
    for (auto _ : state) {
        Tensor y = linear(x, w, b);
        benchmark::DoNotOptimize(y.values().data());
    }
    state.SetItemsProcessed(state.iterations() * n * 128 * 64);
}

void bench_sage_ring(benchmark::State& state) {
    const auto nodes = static_cast<std::size_t>(state.range(0));
    Rng rng(2);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t v = 0; v + 1 < nodes; ++v)
        edges.push_back({v, v + 1});
    for (std::size_t i = 0; i < nodes * 2; ++i) {
        auto a = static_cast<std::uint32_t>(rng.uniform_index(0, nodes - 1));
        auto b = static_cast<std::uint32_t>(rng.uniform_index(0, nodes - 1));
        if (a == b)
            continue;
        if (a > b)
            std::swap(a, b);
        edges.push_back({a, b});
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    Graph g = build_graph(random_tensor({nodes, 64}, rng), edges);
    Tensor w = random_tensor({128, 64}, rng);
    Tensor b = random_tensor({64}, rng);
    for (auto _ : state) {
        Tensor h = sage_ring(g, g.features(), w, b, {});
        benchmark::DoNotOptimize(h.values().data());
    }
    state.SetItemsProcessed(state.iterations() * nodes);
}

void bench_topk_pool(benchmark::State& state) {
    const auto nodes = static_cast<std::size_t>(state.range(0));
    Rng rng(3);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t v = 0; v + 1 < nodes; ++v)
        edges.push_back({v, v + 1});
    Graph g = build_graph(random_tensor({nodes, 64}, rng), edges);
    TopKParams params;
    params.p = random_tensor({64}, rng);
    params.ratio = 0.5;
    for (auto _ : state) {
        TopKResult r = topk_pool(g, g.features(), params);
        benchmark::DoNotOptimize(r.features.values().data());
    }
    state.SetItemsProcessed(state.iterations() * nodes);
}

void bench_delaunay(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(4);
    std::vector<std::array<double, 2>> points(n);
    for (auto& p : points)
        p = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    for (auto _ : state) {
        auto tris = delaunay_triangulate(points);
        benchmark::DoNotOptimize(tris.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}

void bench_generate_mesh(benchmark::State& state) {
    std::size_t seed = 100;
    for (auto _ : state) {
        Graph g = mesh_graph(seed++);
        benchmark::DoNotOptimize(g.num_nodes());
    }
}

void bench_forward(benchmark::State& state) {
    Graph g = mesh_graph(7);
    ModelParams params = init_model(ModelConfig{}, 1);
    for (auto _ : state) {
        Tensor out = forward(g, params);
        benchmark::DoNotOptimize(out.scalar_value());
    }
}

void bench_forward_backward(benchmark::State& state) {
    Graph g = mesh_graph(8);
    ModelParams params = init_model(ModelConfig{}, 1);
    std::vector<Tensor> leaves = params.parameters();
    for (auto _ : state) {
        Tape tape;
        TapeScope scope(tape);
        Tensor loss = mse(forward(g, params), Tensor::vector_of({0.3}));
        backward(loss);
        for (Tensor& t : leaves)
            t.zero_grad();
        benchmark::DoNotOptimize(loss.scalar_value());
    }
}

BENCHMARK(bench_linear)->Arg(256)->Arg(1024);
BENCHMARK(bench_sage_ring)->Arg(1000)->Arg(4000);
BENCHMARK(bench_topk_pool)->Arg(1000)->Arg(4000);
BENCHMARK(bench_delaunay)->Arg(1000)->Arg(4000);
BENCHMARK(bench_generate_mesh)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_forward)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_forward_backward)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
