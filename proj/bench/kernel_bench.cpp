// Serial reference vs OpenMP kernels on representative sizes.
// Run with e.g. OMP_NUM_THREADS=8 ./kernel_bench --benchmark_counters_tabular=true

#include "conceptid/kernels.hpp"
#include "conceptid/rng.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace conceptid;
namespace k = conceptid::kernels;

namespace {

Matrix points(std::int64_t n, Eigen::Index d, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(n, d);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.uniform();
    return m;
}

std::vector<int> labels(std::size_t n, int k) {
    std::vector<int> l(n);
    for (std::size_t i = 0; i < n; ++i) l[i] = static_cast<int>(i % static_cast<std::size_t>(k));
    return l;
}

template <bool Parallel>
void BM_membership(benchmark::State& state) {
    const Matrix p = points(state.range(0), 2, 1);
    const Vector c = Vector::Constant(2, 0.5);
    const Eigen::MatrixXd t = Eigen::MatrixXd::Identity(2, 2) * 4.0;
    Mask out;
    for (auto _ : state) {
        if constexpr (Parallel) k::omp::membership(p, c, t, out);
        else k::serial::membership(p, c, t, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_ksg_counts(benchmark::State& state) {
    const Matrix x = points(state.range(0), 2, 2), y = points(state.range(0), 2, 3);
    for (auto _ : state) {
        auto r = Parallel ? k::omp::ksg_counts(x, y, 4) : k::serial::ksg_counts(x, y, 4);
        benchmark::DoNotOptimize(r.nx.data());
    }
}

template <bool Parallel>
void BM_silhouette(benchmark::State& state) {
    const Matrix p = points(state.range(0), 2, 4);
    const auto l = labels(static_cast<std::size_t>(state.range(0)), 3);
    for (auto _ : state) {
        auto r = Parallel ? k::omp::silhouette_values(p, l, 3) : k::serial::silhouette_values(p, l, 3);
        benchmark::DoNotOptimize(r.data());
    }
}

template <bool Parallel>
void BM_nearest_neighbors(benchmark::State& state) {
    const Matrix p = points(state.range(0), 2, 5);
    for (auto _ : state) {
        auto r = Parallel ? k::omp::nearest_neighbors(p) : k::serial::nearest_neighbors(p);
        benchmark::DoNotOptimize(r.data());
    }
}

template <bool Parallel>
void BM_assign_nearest(benchmark::State& state) {
    const Matrix p = points(state.range(0), 4, 6), c = points(3, 4, 7);
    std::vector<int> l(static_cast<std::size_t>(state.range(0)));
    std::vector<double> d(l.size());
    for (auto _ : state) {
        if constexpr (Parallel) k::omp::assign_nearest(p, c, l, d);
        else k::serial::assign_nearest(p, c, l, d);
        benchmark::DoNotOptimize(d.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_log_densities(benchmark::State& state) {
    const Matrix p = points(state.range(0), 4, 8);
    std::vector<k::GaussianComponent> comps(3);
    for (std::size_t j = 0; j < 3; ++j) {
        comps[j].log_weight = std::log(1.0 / 3.0);
        comps[j].mean = Vector::Constant(4, 0.25 * static_cast<double>(j + 1));
        comps[j].chol_lower = Eigen::MatrixXd::Identity(4, 4) * 0.2;
        comps[j].log_det = 4 * 2 * std::log(0.2);
    }
    for (auto _ : state) {
        Matrix r = Parallel ? k::omp::log_weighted_densities(p, comps) : k::serial::log_weighted_densities(p, comps);
        benchmark::DoNotOptimize(r.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

} // namespace

BENCHMARK(BM_membership<false>)->Arg(34000)->Name("membership/serial");
BENCHMARK(BM_membership<true>)->Arg(34000)->Name("membership/omp");
BENCHMARK(BM_assign_nearest<false>)->Arg(30000)->Name("assign_nearest/serial");
BENCHMARK(BM_assign_nearest<true>)->Arg(30000)->Name("assign_nearest/omp");
BENCHMARK(BM_log_densities<false>)->Arg(30000)->Name("log_weighted_densities/serial");
BENCHMARK(BM_log_densities<true>)->Arg(30000)->Name("log_weighted_densities/omp");
// The serial search kernels are brute force, so keep n moderate.
BENCHMARK(BM_ksg_counts<false>)->Arg(3000)->Name("ksg_counts/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ksg_counts<true>)->Arg(3000)->Name("ksg_counts/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_nearest_neighbors<false>)->Arg(3000)->Name("nearest_neighbors/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_nearest_neighbors<true>)->Arg(3000)->Name("nearest_neighbors/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_silhouette<false>)->Arg(3000)->Name("silhouette_values/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_silhouette<true>)->Arg(3000)->Name("silhouette_values/omp")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
