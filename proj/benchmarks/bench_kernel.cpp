#include <benchmark/benchmark.h>

#include "dfire/calibration.hpp"
#include "dfire/loss.hpp"
#include "dfire/propagation.hpp"
#include "dfire/synthetic.hpp"
#include "dfire/tape.hpp"

using namespace dfire;

namespace {

const ModelParams kParams{0.1, 0.1, 0.1, 0.5, 0.5};

Landscape bench_landscape(std::size_t size) {
  SyntheticOptions opts;
  opts.wind_speed = 5.0;
  opts.wind_direction = 30.0;
  return make_synthetic({SyntheticKind::kHill, 0}, size, size, opts);
}

// One step on a fire grown to cover most of the map.
void BM_StepForward(benchmark::State& state) {
  const auto size = static_cast<std::size_t>(state.range(0));
  const Landscape land = bench_landscape(size);
  SimulationRequest req;
  req.steps = static_cast<int>(size / 3);
  req.seed = 1;
  const FireState grown = run_simulation(land, kParams, centered_ignition(size, size), req).final_state;
  KernelOptions opts;
  opts.threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    state.PauseTiming();
    FireState s = grown;
    state.ResumeTiming();
    benchmark::DoNotOptimize(step_forward(s, land, kParams, 1, nullptr, opts));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(size * size));
}
BENCHMARK(BM_StepForward)->ArgsProduct({{200, 500, 1000}, {1, 2}})->Unit(benchmark::kMillisecond);

void BM_RunSimulation300(benchmark::State& state) {
  const auto size = static_cast<std::size_t>(state.range(0));
  const Landscape land = bench_landscape(size);
  const MaskGrid init = centered_ignition(size, size);
  SimulationRequest req;
  req.steps = 300;
  req.seed = 2;
  for (auto _ : state) benchmark::DoNotOptimize(run_simulation(land, kParams, init, req));
}
BENCHMARK(BM_RunSimulation300)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ForwardBackward(benchmark::State& state) {
  const auto size = static_cast<std::size_t>(state.range(0));
  const Landscape land = bench_landscape(size);
  const MaskGrid init = centered_ignition(size, size);
  ObservationSchedule sched;
  sched.steps_update_interval = 40;
  SimulationRequest req;
  req.steps = 40;
  req.seed = 3;
  sched.observations.push_back({run_simulation(land, kParams, init, req).final_state.affected(), {}});
  for (auto _ : state) {
    const auto fwd = calibration_forward(land, init, sched, kParams, 40, 4, {40, 0, 0});
    const auto loss = combined_loss(fwd.state.accumulator, sched.observations[0].target);
    benchmark::DoNotOptimize(backward_params(fwd.tape, loss.gradient, kParams));
  }
}
BENCHMARK(BM_ForwardBackward)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
