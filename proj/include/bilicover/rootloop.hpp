#ifndef BILICOVER_ROOTLOOP_HPP
#define BILICOVER_ROOTLOOP_HPP

#include <cmath>
#include <optional>
#include <vector>

#include "bilicover/relax.hpp"
#include "bilicover/separate.hpp"

namespace bilicover {

struct LoopConfig {
  double eps_z = 5e-3;       // minimum relative bound improvement
  int iteration_cap = 0;     // 0: ceil(10 * mean row support)
  double t_heu_seconds = 1800.0;
  SeparationConfig separation;
  double refine_tol = 1e-6;
  int refine_max_pass = 50;
  bool parallel_separation = false;  // serial keeps per-row deadline checks
};

enum class RunStatus { Ok, Infeasible };

struct RunReport {
  RunStatus status = RunStatus::Ok;
  double z_mc = std::nan("");
  double z_root = std::nan("");
  int cuts_added = 0;
  int iterations = 0;
  double heuristic_time_s = 0.0;
  std::vector<std::pair<int, double>> bound_history;
  std::vector<int> per_iteration_cuts;

  // metrics (filled by compute_metrics)
  std::optional<double> z_opt;
  bool incumbent_only = false;
  bool degenerate_gap = false;
  std::optional<double> rho_heu;   // percent
  std::optional<double> rho;       // percent
  std::optional<double> delta_rho; // percent
};

// Effective iteration cap: explicit value, or ceil(10 * mean support)
// (instances do not carry the generator density, so the mean support
// stands in for n*p).
int default_iteration_cap(const BilinearInstance& inst);

// Cutting loop over the McCormick relaxation: solve, separate at the
// optimum, linearize-and-resolve, stop on no cuts, small improvement,
// the iteration cap, or the time budget. When `state_out` is given the
// final relaxation (LP + cut pool) is moved there for further use.
RunReport run_root(const BilinearInstance& inst, const LoopConfig& cfg,
                   RelaxationState* state_out = nullptr);

// rho = 100 (z* - z_mc)/(z_opt - z_mc) with z* = z_root (the root bound
// is this pipeline's final bound); delta_rho subtracts the gap closed by
// the baseline bound z_grb_like when one is supplied. A gap below 1e-12
// flags the report DegenerateGap and leaves the percentages NaN.
void compute_metrics(RunReport& report, double z_opt,
                     std::optional<double> z_grb_like = std::nullopt,
                     bool incumbent_only = false);

}  // namespace bilicover

#endif  // BILICOVER_ROOTLOOP_HPP
