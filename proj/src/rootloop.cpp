#include "bilicover/rootloop.hpp"

#include <chrono>
#include <cmath>

namespace bilicover {

int default_iteration_cap(const BilinearInstance& inst) {
  long nnz = 0;
  for (const BilinearRow& row : inst.rows) nnz += row.support_size();
  double mean_support = static_cast<double>(nnz) / inst.m;
  int cap = static_cast<int>(std::ceil(10.0 * mean_support));
  return cap < 1 ? 1 : cap;
}

RunReport run_root(const BilinearInstance& inst, const LoopConfig& cfg,
                   RelaxationState* state_out) {
  validate_config(cfg.separation);
  RunReport report;
  RelaxationState state(inst);

  RelaxationSolution sol = state.solve();
  if (sol.status != LpStatus::Optimal) {
    report.status = RunStatus::Infeasible;
    if (state_out) *state_out = std::move(state);
    return report;
  }
  report.z_mc = sol.z;

  const int cap = cfg.iteration_cap > 0 ? cfg.iteration_cap
                                        : default_iteration_cap(inst);
  const auto loop_start = SepClock::now();
  const auto deadline =
      loop_start + std::chrono::duration_cast<SepClock::duration>(
                       std::chrono::duration<double>(cfg.t_heu_seconds));

  double z_prev = sol.z;
  for (std::uint64_t t = 1; SepClock::now() < deadline; ++t) {
    auto cuts = cfg.parallel_separation
                    ? separate_all_parallel(inst, sol.point, cfg.separation, t,
                                            deadline, &state.pool_ids())
                    : separate_all(inst, sol.point, cfg.separation, t, deadline,
                                   &state.pool_ids());
    report.per_iteration_cuts.push_back(static_cast<int>(cuts.size()));
    if (cuts.empty()) break;
    for (LiftedCut& cut : cuts) state.add_cut(std::move(cut));

    state.refine_until_cut_feasible(cfg.refine_tol, cfg.refine_max_pass);
    sol = state.last_solution();
    if (sol.status != LpStatus::Optimal)
      throw SolverError("relaxation lost feasibility after valid cuts");
    report.iterations = static_cast<int>(t);

    double z_t = sol.z;
    bool small = std::abs(z_prev) < 1e-12
                     ? std::abs(z_t - z_prev) < cfg.eps_z
                     : std::abs(z_t - z_prev) / std::abs(z_prev) < cfg.eps_z;
    z_prev = z_t;
    if (small) break;
    if (static_cast<int>(t) + 1 > cap) break;
  }

  report.heuristic_time_s =
      std::chrono::duration<double>(SepClock::now() - loop_start).count();
  report.z_root = z_prev;
  report.cuts_added = state.pool_size();
  report.bound_history = state.bound_history();
  if (state_out) *state_out = std::move(state);
  return report;
}

void compute_metrics(RunReport& report, double z_opt,
                     std::optional<double> z_grb_like, bool incumbent_only) {
  report.z_opt = z_opt;
  report.incumbent_only = incumbent_only;
  double denom = z_opt - report.z_mc;
  if (!(denom > 1e-12)) {
    report.degenerate_gap = true;
    report.rho_heu = std::nan("");
    report.rho = std::nan("");
    report.delta_rho = std::nan("");
    return;
  }
  report.rho_heu = 100.0 * (report.z_root - report.z_mc) / denom;
  report.rho = report.rho_heu;  // the root bound is the pipeline's final bound
  if (z_grb_like) {
    double rho_baseline = 100.0 * (*z_grb_like - report.z_mc) / denom;
    report.delta_rho = *report.rho - rho_baseline;
  }
}

}  // namespace bilicover
