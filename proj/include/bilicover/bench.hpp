#ifndef BILICOVER_BENCH_HPP
#define BILICOVER_BENCH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "bilicover/parallel.hpp"
#include "bilicover/rootloop.hpp"

namespace bilicover {

struct BenchSetting {
  int m = 0, n = 0;
  double p = 0.0;
};

// Experimental protocol: settings x sign modes x instances, each run
// through gen -> root loop -> oracle (full or incumbent-only) ->
// metrics. Expansion is deterministic from the master seed.
struct BenchPlan {
  std::vector<BenchSetting> settings;
  int instances_per_setting = 10;
  bool run_nonneg = true;
  bool run_mixed = true;
  std::uint64_t master_seed = 1;
  LoopConfig loop;            // t_heu_seconds defaults to 60 in the CLI
  int oracle_cap_n = 12;      // full oracle when n <= cap
  long oracle_nodes = 100000;
  long incumbent_nodes = 2000;  // budget of incumbent-only runs
  bool with_mt = false;         // also compute the single-cut-per-row root
  bool timing = true;           // false drops the timing columns (golden runs)
};

// default desk-scale settings (n*p in [5,20], minutes not hours)
std::vector<BenchSetting> desk_settings();
// the 15-setting grid m,n in {100,250,500}, p in {0.01,0.02,0.05}
std::vector<BenchSetting> paper_settings();

// every setting must satisfy n*p in [5, 20]
void validate_plan(const BenchPlan& plan);

struct BenchOutput {
  std::string runs_csv;
  std::string summary_csv;
};

BenchOutput run_bench(const BenchPlan& plan, Exec exec = Exec::OpenMP);

}  // namespace bilicover

#endif  // BILICOVER_BENCH_HPP
