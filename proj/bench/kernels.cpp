#include <benchmark/benchmark.h>

#include <map>

#include "frontier/estimator.hpp"

using namespace frontier;

namespace
{

// Reaction-diffusion state on the initial grid with truncation L.
struct State
{
  Problem problem;
  ScalarField u;
  Equilibration eq;
};

const State& state(int L, int p)
{
  static std::map<std::pair<int, int>, State> cache;
  auto it = cache.find({L, p});
  if (it == cache.end())
  {
    Problem pr = Problem::reaction_diffusion(DomainSpec::full_plane(), [](Point) { return 1.0; },
                                             indicator_source({-1, 1, -1, 1}));
    const auto space = std::make_shared<LagrangeSpace>(
        std::make_shared<Mesh>(build_initial_mesh(pr.domain(), L)), p);
    ScalarField u = solve_problem(pr, space);
    Equilibration eq = equilibrate(pr, u);
    it = cache.emplace(std::pair{L, p}, State{pr, std::move(u), std::move(eq)}).first;
  }
  return it->second;
}

Execution mode(const benchmark::State& s)
{
  return s.range(2) == 0 ? Execution::Serial : Execution::Parallel;
}

void assemble_system(benchmark::State& s)
{
  const State& st = state(static_cast<int>(s.range(0)), static_cast<int>(s.range(1)));
  AssemblyOptions opt;
  opt.execution = mode(s);
  for (auto _ : s)
    benchmark::DoNotOptimize(assemble(st.problem, st.u.space(), opt));
  s.counters["elements"] = static_cast<double>(st.u.mesh().num_elements());
}

void equilibrate_flux(benchmark::State& s)
{
  const State& st = state(static_cast<int>(s.range(0)), static_cast<int>(s.range(1)));
  for (auto _ : s)
    benchmark::DoNotOptimize(equilibrate(st.problem, st.u, mode(s)));
  s.counters["elements"] = static_cast<double>(st.u.mesh().num_elements());
}

void estimate_error(benchmark::State& s)
{
  const State& st = state(static_cast<int>(s.range(0)), static_cast<int>(s.range(1)));
  for (auto _ : s)
    benchmark::DoNotOptimize(estimate(st.problem, st.u, st.eq, mode(s)));
  s.counters["elements"] = static_cast<double>(st.u.mesh().num_elements());
}

// {L, p, parallel}
void grid(benchmark::internal::Benchmark* b)
{
  b->ArgNames({"L", "p", "parallel"})->Unit(benchmark::kMillisecond);
  for (int L : {4, 8})
    for (int p : {1, 3})
      for (int par : {0, 1})
        b->Args({L, p, par});
}

}  // namespace

BENCHMARK(assemble_system)->Apply(grid);
BENCHMARK(equilibrate_flux)->Apply(grid);
BENCHMARK(estimate_error)->Apply(grid);

BENCHMARK_MAIN();
