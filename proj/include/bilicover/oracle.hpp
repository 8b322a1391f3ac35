#ifndef BILICOVER_ORACLE_HPP
#define BILICOVER_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "bilicover/model.hpp"
#include "bilicover/parallel.hpp"

namespace bilicover {

struct SampleResult {
  std::vector<PointXY> points;
  bool complete = false;       // count points delivered
  long rejection_trials = 0;   // box samples drawn in the rejection stage
  int rejection_accepted = 0;
};

// Feasible points of the full set S. Plain rejection from the box runs
// first (chunked, one substream per trial index, so the OpenMP and the
// serial driver return bit-identical lists); when its acceptance rate
// cannot fill the request, the remainder is drawn on feasible segments
// from the all-ones anchor: p(t) = (1-t) 1 + t u stays feasible for
// t in [0, t_max(u)] where t_max comes from the per-row quadratics.
// Deterministic feasible corners (all-ones, all-zeros) always lead the
// list. `complete` is false only when no anchor exists and rejection
// starves (the give-up path).
SampleResult sample_feasible(const BilinearInstance& inst, int count,
                             std::uint64_t seed, Exec exec = Exec::OpenMP);

struct PolishResult {
  bool feasible = false;
  double z = 0.0;
  PointXY point;
};

// Alternating-LP local search: fixing x makes the problem an LP in y
// and vice versa; `rounds` full alternations starting from `start`.
// Every half-step that solves yields a feasible candidate; the best one
// is returned.
PolishResult alternating_lp_polish(const BilinearInstance& inst,
                                   const PointXY& start, int rounds = 2);

struct BnbOptions {
  double gap_tol = 1e-6;
  long node_cap = 100000;
  int polish_stride = 16;  // polish every k-th solved node
  int polish_depth = 8;    // and every node at most this deep
  bool record_trace = false;
};

struct TraceEntry {
  long node_id = 0;
  double node_lb = 0.0;
  double global_lb = 0.0;
  double ub = 0.0;
  bool has_ub = false;
};

enum class GlobalStatus { Optimal, Bounds, Infeasible };

struct GlobalResult {
  GlobalStatus status = GlobalStatus::Infeasible;
  double lb = 0.0;
  double ub = 0.0;  // z_opt when Optimal
  PointXY best_point;
  long nodes = 0;
  std::vector<TraceEntry> trace;
};

// Best-first spatial branch and bound, single worker (deterministic).
// Node bounds come from box-adapted McCormick envelopes; branching
// picks the pair maximizing |w_i - x_i y_i| at the node optimum and
// splits the wider of x_i, y_i at the LP value clamped to the middle
// 60% of its interval. Incumbents come from exact-feasible node optima
// and from alternating-LP polish.
GlobalResult solve_global(const BilinearInstance& inst,
                          const BnbOptions& opts = {});

}  // namespace bilicover

#endif  // BILICOVER_ORACLE_HPP
