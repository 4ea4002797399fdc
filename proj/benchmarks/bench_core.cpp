// Timings for the operations that dominate the documented workflows:
// exact row reduction, subspace enumeration, the Desargues scan,
// coordinatization, the orthogonality exhaustion and form reconstruction.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "plg/coordinatize.hpp"
#include "plg/corpus.hpp"
#include "plg/field.hpp"
#include "plg/geometry.hpp"
#include "plg/hermitian.hpp"
#include "plg/lattice.hpp"
#include "plg/matrix.hpp"
#include "plg/ortho.hpp"

namespace {

plg::Matrix random_rational(int n, std::uint64_t seed) {
  const plg::FieldSpec q = plg::FieldSpec::rationals();
  std::mt19937_64 rng(seed);
  plg::Matrix m(n, n, q);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      m.at(r, c) = plg::Scalar::rational(static_cast<std::int64_t>(rng() % 19) - 9,
                                         1 + static_cast<std::int64_t>(rng() % 7));
  return m;
}

void BM_rref_rational(benchmark::State& state) {
  plg::Matrix m = random_rational(static_cast<int>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(plg::rref(m));
}
BENCHMARK(BM_rref_rational)->Arg(8)->Arg(16)->Arg(32);

void BM_kernel_gf3(benchmark::State& state) {
  const plg::FieldSpec f = plg::FieldSpec::prime(3);
  std::mt19937_64 rng(11);
  const int n = static_cast<int>(state.range(0));
  plg::Matrix m(n / 2, n, f);
  for (int r = 0; r < n / 2; ++r)
    for (int c = 0; c < n; ++c)
      m.at(r, c) = plg::Scalar::of(f, static_cast<std::int64_t>(rng() % 3));
  for (auto _ : state) benchmark::DoNotOptimize(plg::kernel_basis(m));
}
BENCHMARK(BM_kernel_gf3)->Arg(16)->Arg(64);

void BM_closure_pg32(benchmark::State& state) {
  plg::Geometry g = plg::pg(3, 2);
  std::mt19937_64 rng(3);
  for (auto _ : state) {
    plg::Bits s(g.n_points());
    s.set(static_cast<int>(rng() % g.n_points()));
    s.set(static_cast<int>(rng() % g.n_points()));
    s.set(static_cast<int>(rng() % g.n_points()));
    benchmark::DoNotOptimize(plg::closure(g, s));
  }
}
BENCHMARK(BM_closure_pg32);

void BM_subspace_lattice(benchmark::State& state) {
  plg::Geometry g = plg::pg(3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(plg::from_geometry(g));
}
BENCHMARK(BM_subspace_lattice);

void BM_lattice_predicates(benchmark::State& state) {
  plg::SubspaceLattice sl = plg::from_geometry(plg::pg(3, 2));
  for (auto _ : state) benchmark::DoNotOptimize(plg::predicates(sl.lat));
}
BENCHMARK(BM_lattice_predicates);

void BM_desargues_scan(benchmark::State& state) {
  plg::Geometry g = plg::pg(2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(plg::desargues_holds(g));
}
BENCHMARK(BM_desargues_scan);

void BM_hall9_witness(benchmark::State& state) {
  plg::Geometry g = plg::hall9();
  for (auto _ : state) benchmark::DoNotOptimize(plg::desargues_holds(g));
}
BENCHMARK(BM_hall9_witness);

void BM_coordinatize(benchmark::State& state) {
  plg::Geometry g = plg::pg(2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(plg::coordinatize(g));
}
BENCHMARK(BM_coordinatize);

void BM_triple_round_trip(benchmark::State& state) {
  plg::OrthoGeometry og = plg::mo(3);
  for (auto _ : state) benchmark::DoNotOptimize(plg::triple_round_trip(og));
}
BENCHMARK(BM_triple_round_trip);

void BM_hilbert_exhaustion_fano(benchmark::State& state) {
  plg::Geometry g = plg::fano();
  for (auto _ : state)
    benchmark::DoNotOptimize(plg::count_hilbert_relations(g));
}
BENCHMARK(BM_hilbert_exhaustion_fano);

void BM_piron_reconstruct(benchmark::State& state) {
  const plg::FieldSpec q = plg::FieldSpec::rationals();
  plg::Matrix g(3, 3, q);
  g.at(0, 0) = plg::Scalar::of(q, 1);
  g.at(1, 1) = plg::Scalar::of(q, 2);
  g.at(2, 2) = plg::Scalar::of(q, 3);
  auto oracle = [&g, &q](const std::vector<plg::Scalar>& x,
                         const std::vector<plg::Scalar>& y) {
    std::vector<plg::Scalar> gy = plg::mat_vec(g, y);
    plg::Scalar acc = plg::Scalar::zero(q);
    for (std::size_t i = 0; i < x.size(); ++i) acc = acc + x[i] * gy[i];
    return acc.is_zero();
  };
  for (auto _ : state)
    benchmark::DoNotOptimize(plg::piron_reconstruct(3, oracle));
}
BENCHMARK(BM_piron_reconstruct);

}  // namespace

BENCHMARK_MAIN();
