#include "bls/rng.hpp"
#include "bls/solvers.hpp"
#include "bls/triangular.hpp"

#include <benchmark/benchmark.h>

using namespace bls;

namespace {

struct Problem {
    Matrix a, h, y;
    double lambda = 1e-4;
};

Problem make_problem(Index l, Index k, Index q, Index c = 10) {
    UniformRng rng(99);
    Problem p;
    p.a = rng.uniform_matrix(l, k);
    p.h = rng.uniform_matrix(l, q);
    p.y = rng.uniform_matrix(l, c);
    return p;
}

}  // namespace

static void BM_UpdateCholPlain(benchmark::State& state) {
    Problem p = make_problem(state.range(0), state.range(1), state.range(2));
    CholSolverState st = init_chol(p.a, p.y, p.lambda);
    for (auto _ : state) {
        CholSolverState next = update_chol_plain(st, p.h, p.y);
        benchmark::DoNotOptimize(next.W.data());
    }
}
BENCHMARK(BM_UpdateCholPlain)->Args({2000, 256, 128})->Args({8000, 1024, 256})
    ->Unit(benchmark::kMillisecond);

static void BM_UpdateCholStable(benchmark::State& state) {
    Problem p = make_problem(state.range(0), state.range(1), state.range(2));
    CholSolverState st = init_chol(p.a, p.y, p.lambda);
    for (auto _ : state) {
        CholSolverState next = update_chol_stable(st, p.h, p.y);
        benchmark::DoNotOptimize(next.W.data());
    }
}
BENCHMARK(BM_UpdateCholStable)->Args({2000, 256, 128})->Args({8000, 1024, 256})
    ->Unit(benchmark::kMillisecond);

static void BM_UpdateRidgeInverse(benchmark::State& state) {
    Problem p = make_problem(state.range(0), state.range(1), state.range(2));
    RidgeInvSolverState st = init_ridge_inverse(p.a, p.y, p.lambda);
    for (auto _ : state) {
        RidgeInvSolverState next = update_ridge_inverse(st, p.h, p.y);
        benchmark::DoNotOptimize(next.W.data());
    }
}
BENCHMARK(BM_UpdateRidgeInverse)->Args({2000, 256, 128})->Args({8000, 1024, 256})
    ->Unit(benchmark::kMillisecond);

static void BM_UpdateGenChol(benchmark::State& state) {
    Problem p = make_problem(state.range(0), state.range(1), state.range(2));
    GenInvSolverState st = init_genchol(p.a, p.y, 1e-8);
    for (auto _ : state) {
        GenInvSolverState next = update_genchol(st, p.h, p.y);
        benchmark::DoNotOptimize(next.W.data());
    }
}
BENCHMARK(BM_UpdateGenChol)->Args({2000, 256, 128})->Args({8000, 1024, 256})
    ->Unit(benchmark::kMillisecond);

static void BM_InverseCholesky(benchmark::State& state) {
    const Index k = state.range(0);
    UniformRng rng(7);
    Matrix a = rng.uniform_matrix(2 * k, k);
    Matrix r = gram_plus_lambda(a, 1e-3);
    for (auto _ : state) {
        TriangularMatrix f = inverse_cholesky(r);
        benchmark::DoNotOptimize(f.dense().data());
    }
}
BENCHMARK(BM_InverseCholesky)->Arg(128)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

static void BM_Cholesky(benchmark::State& state) {
    const Index k = state.range(0);
    UniformRng rng(8);
    Matrix a = rng.uniform_matrix(2 * k, k);
    Matrix r = gram_plus_lambda(a, 1e-3);
    for (auto _ : state) {
        TriangularMatrix l = cholesky(r);
        benchmark::DoNotOptimize(l.dense().data());
    }
}
BENCHMARK(BM_Cholesky)->Arg(128)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

static void BM_SolveTriangular(benchmark::State& state) {
    const Index k = state.range(0);
    UniformRng rng(9);
    Matrix a = rng.uniform_matrix(2 * k, k);
    TriangularMatrix l = cholesky(gram_plus_lambda(a, 1e-3));
    Matrix b = rng.uniform_matrix(k, 64);
    for (auto _ : state) {
        Matrix x = solve_triangular(l, b);
        benchmark::DoNotOptimize(x.data());
    }
}
BENCHMARK(BM_SolveTriangular)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
