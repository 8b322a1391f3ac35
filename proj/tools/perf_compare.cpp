// Times the OpenMP kernels against their serial references and checks
// that both produce identical results (work is keyed by index, so the
// outputs must match bit for bit).
#include <chrono>
#include <cstdio>
#include <vector>

#include "bilicover/lift.hpp"
#include "bilicover/model.hpp"
#include "bilicover/oracle.hpp"
#include "bilicover/parallel.hpp"
#include "bilicover/relax.hpp"
#include "bilicover/separate.hpp"

using namespace bilicover;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void report(const char* name, double serial_ms, double omp_ms, bool equal) {
  std::printf("%-24s %10.1f ms %10.1f ms   x%.2f   %s\n", name, serial_ms,
              omp_ms, serial_ms / (omp_ms > 0 ? omp_ms : 1e-9),
              equal ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("threads available: %d\n", max_threads());
  std::printf("%-24s %13s %13s\n", "kernel", "serial", "openmp");

  BilinearInstance inst = generate_instance(80, 100, 0.08, SignMode::NonNegative, 7);

  // 1. feasible-point sampling
  {
    auto t0 = Clock::now();
    SampleResult serial = sample_feasible(inst, 20000, 11, Exec::Serial);
    double ts = ms_since(t0);
    t0 = Clock::now();
    SampleResult omp = sample_feasible(inst, 20000, 11, Exec::OpenMP);
    double tp = ms_since(t0);
    report("sample_feasible", ts, tp, serial.points == omp.points);
  }

  // point + cuts shared by the next two kernels
  RelaxationState state(inst);
  RelaxationSolution sol = state.solve();
  SeparationConfig cfg;
  cfg.rng_seed = 3;

  // 2. row separation
  std::vector<LiftedCut> cuts;
  {
    auto t0 = Clock::now();
    std::vector<LiftedCut> serial;
    for (int rep = 0; rep < 200; ++rep)
      serial = separate_all(inst, sol.point, cfg, 1, no_deadline());
    double ts = ms_since(t0);
    t0 = Clock::now();
    std::vector<LiftedCut> omp;
    for (int rep = 0; rep < 200; ++rep)
      omp = separate_all_parallel(inst, sol.point, cfg, 1, no_deadline());
    double tp = ms_since(t0);
    bool equal = serial.size() == omp.size();
    for (std::size_t k = 0; equal && k < serial.size(); ++k)
      equal = serial[k].cut_id == omp[k].cut_id;
    report("separate_all", ts, tp, equal);
    cuts = std::move(serial);
  }

  // 3. batch cut evaluation over sampled feasible points
  {
    SampleResult sample = sample_feasible(inst, 20000, 13, Exec::OpenMP);
    std::vector<double> lhs_serial(sample.points.size() * cuts.size());
    std::vector<double> lhs_omp(lhs_serial.size());
    auto run = [&](Exec exec, std::vector<double>& out_lhs) {
      parallel_for(static_cast<std::int64_t>(sample.points.size()), exec,
                   [&](std::int64_t p) {
                     for (std::size_t c = 0; c < cuts.size(); ++c)
                       out_lhs[p * cuts.size() + c] =
                           eval_cut_lhs(cuts[c], sample.points[p]);
                   });
    };
    auto t0 = Clock::now();
    run(Exec::Serial, lhs_serial);
    double ts = ms_since(t0);
    t0 = Clock::now();
    run(Exec::OpenMP, lhs_omp);
    double tp = ms_since(t0);
    report("eval_cut_lhs batch", ts, tp, lhs_serial == lhs_omp);
  }

  return 0;
}
