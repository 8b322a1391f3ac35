#include "bilicover/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "bilicover/lp.hpp"
#include "bilicover/rng.hpp"

namespace bilicover {

namespace {

constexpr std::uint64_t kRejectTag = 0x72656aULL;
constexpr std::uint64_t kSegmentTag = 0x736567ULL;
constexpr double kFeasInstTol = 1e-12;

PointXY constant_point(int n, double v) {
  return PointXY{std::vector<double>(n, v), std::vector<double>(n, v)};
}

void draw_box_point_into(int n, Rng& rng, PointXY& p) {
  p.x.resize(n);
  p.y.resize(n);
  for (int i = 0; i < n; ++i) {
    p.x[i] = rng.uniform01();
    p.y[i] = rng.uniform01();
  }
}

PointXY draw_box_point(int n, Rng& rng) {
  PointXY p;
  draw_box_point_into(n, rng, p);
  return p;
}

// Largest T in [0,1] with  A t^2 + B t + C >= 0  on [0,T], given C >= 0.
double quad_front(double a, double b, double c) {
  if (std::abs(a) < 1e-15) {
    if (b >= -1e-15) return 1.0;
    double t = c / (-b);
    return t > 1.0 ? 1.0 : (t < 0.0 ? 0.0 : t);
  }
  double disc = b * b - 4.0 * a * c;
  if (a > 0.0) {
    double tv = -b / (2.0 * a);
    if (tv <= 0.0 || disc <= 0.0) return 1.0;
    double q = -(b - std::sqrt(disc)) / 2.0;  // b <= 0 here since tv > 0
    double r1 = c != 0.0 ? c / (q == 0.0 ? 1e-300 : q) : 0.0;
    // r1 is the smaller nonnegative root
    if (r1 < 0.0) r1 = 0.0;
    return r1 > 1.0 ? 1.0 : r1;
  }
  // concave with q(0) >= 0: feasible interval reaches the larger root
  if (disc <= 0.0) return 1.0;  // numerically no crossing
  double sq = std::sqrt(disc);
  double q = -(b + (b >= 0.0 ? sq : -sq)) / 2.0;
  double ra = q / a, rb = (q != 0.0 ? c / q : 0.0);
  double hi = std::max(ra, rb);
  if (hi < 0.0) return 0.0;
  return hi > 1.0 ? 1.0 : hi;
}

double segment_tmax(const BilinearInstance& inst, const PointXY& u) {
  double tmax = 1.0;
  for (const BilinearRow& row : inst.rows) {
    double a = 0.0, b = 0.0, c = -row.rhs;
    for (int p = 0; p < row.support_size(); ++p) {
      int i = row.var_index[p];
      double alpha = 1.0 - u.x[i];
      double beta = 1.0 - u.y[i];
      c += row.coeff[p];
      b -= row.coeff[p] * (alpha + beta);
      a += row.coeff[p] * alpha * beta;
    }
    tmax = std::min(tmax, quad_front(a, b, c));
    if (tmax <= 0.0) return 0.0;
  }
  return tmax;
}

void segment_point_into(const PointXY& u, double t, int n, PointXY& p) {
  p.x.resize(n);
  p.y.resize(n);
  for (int i = 0; i < n; ++i) {
    p.x[i] = 1.0 - t * (1.0 - u.x[i]);
    p.y[i] = 1.0 - t * (1.0 - u.y[i]);
  }
}

}  // namespace

SampleResult sample_feasible(const BilinearInstance& inst, int count,
                             std::uint64_t seed, Exec exec) {
  if (count < 0) throw std::invalid_argument("count must be >= 0");
  const int n = inst.n;
  SampleResult out;
  if (count == 0) {
    out.complete = true;
    return out;
  }

  PointXY ones = constant_point(n, 1.0);
  bool ones_ok = min_row_residual(inst, ones) >= -kFeasInstTol;
  if (ones_ok && static_cast<int>(out.points.size()) < count)
    out.points.push_back(ones);
  PointXY zeros = constant_point(n, 0.0);
  if (min_row_residual(inst, zeros) >= -kFeasInstTol &&
      static_cast<int>(out.points.size()) < count)
    out.points.push_back(zeros);

  // stage 1: chunked rejection, one substream per trial index
  long trial_base = 0;
  long chunk = 2048;
  const long trial_budget = 1000000;
  while (static_cast<int>(out.points.size()) < count && trial_base < trial_budget) {
    long hi = std::min(trial_budget, trial_base + chunk);
    std::vector<unsigned char> ok(hi - trial_base, 0);
    parallel_for_scratch(
        hi - trial_base, exec, [] { return PointXY{}; },
        [&](std::int64_t k, PointXY& p) {
          Rng rng(substream_seed(seed, kRejectTag, trial_base + k));
          draw_box_point_into(n, rng, p);
          ok[k] = min_row_residual(inst, p) >= 0.0 ? 1 : 0;
        });
    for (long k = 0; k < hi - trial_base; ++k) {
      if (!ok[k]) continue;
      ++out.rejection_accepted;
      if (static_cast<int>(out.points.size()) < count) {
        Rng rng(substream_seed(seed, kRejectTag, trial_base + k));
        out.points.push_back(draw_box_point(n, rng));
      }
    }
    out.rejection_trials = hi;
    trial_base = hi;
    chunk *= 8;
    // starving and an anchor exists: switch to segment sampling early
    if (ones_ok && out.rejection_accepted < (trial_base >> 12)) break;
    // no anchor: honor the 1e-4-over-1e6 give-up contract
    if (!ones_ok && trial_base >= 32768 &&
        out.rejection_accepted * 10000L < trial_base)
      continue;  // keep scanning to the budget, then give up
  }

  // stage 2: segments toward the all-ones anchor
  if (ones_ok && static_cast<int>(out.points.size()) < count) {
    const long need = count - static_cast<long>(out.points.size());
    // storage allocated up front so the parallel fill never touches the heap
    std::vector<PointXY> slots(
        need, PointXY{std::vector<double>(n), std::vector<double>(n)});
    parallel_for_scratch(
        need, exec, [] { return std::pair<PointXY, PointXY>{}; },
        [&](std::int64_t k, std::pair<PointXY, PointXY>& scratch) {
          auto& [u, p] = scratch;
          Rng rng(substream_seed(seed, kSegmentTag, k));
          draw_box_point_into(n, rng, u);
          double tmax = segment_tmax(inst, u);
          double t = rng.uniform01() * tmax;
          segment_point_into(u, t, n, p);
          int guard = 0;
          while (min_row_residual(inst, p) < 0.0 && guard++ < 300) {
            t *= 0.999;
            if (t < 1e-14) t = 0.0;
            segment_point_into(u, t, n, p);
            if (t == 0.0) break;
          }
          if (min_row_residual(inst, p) < 0.0) p = ones;
          std::copy(p.x.begin(), p.x.end(), slots[k].x.begin());
          std::copy(p.y.begin(), p.y.end(), slots[k].y.begin());
        });
    for (PointXY& p : slots) out.points.push_back(std::move(p));
  }

  out.complete = static_cast<int>(out.points.size()) == count;
  return out;
}

PolishResult alternating_lp_polish(const BilinearInstance& inst,
                                   const PointXY& start, int rounds) {
  const int n = inst.n;
  PolishResult best;

  auto consider = [&](const PointXY& p) {
    if (min_row_residual(inst, p) < -1e-9) return;
    double z = evaluate_objective(inst, p);
    if (!best.feasible || z < best.z - 1e-12) {
      best.feasible = true;
      best.z = z;
      best.point = p;
    }
  };

  // minimize over `solve_for` (0: y given x, 1: x given y)
  auto half_step = [&](PointXY& p, int solve_for) -> bool {
    LpSolver lp;
    const std::vector<double>& fixed = solve_for == 0 ? p.x : p.y;
    const std::vector<double>& cost = solve_for == 0 ? inst.cy : inst.cx;
    for (int i = 0; i < n; ++i) lp.add_variable(0.0, 1.0, cost[i]);
    for (const BilinearRow& row : inst.rows) {
      std::vector<int> idx;
      std::vector<double> val;
      for (int k = 0; k < row.support_size(); ++k) {
        int i = row.var_index[k];
        double c = row.coeff[k] * fixed[i];
        if (c != 0.0) {
          idx.push_back(i);
          val.push_back(c);
        }
      }
      lp.add_row(idx, val, 'G', row.rhs);
    }
    if (lp.solve().status != LpStatus::Optimal) return false;
    std::vector<double>& free_side = solve_for == 0 ? p.y : p.x;
    for (int i = 0; i < n; ++i)
      free_side[i] = std::min(1.0, std::max(0.0, lp.value(i)));
    return true;
  };

  PointXY p = start;
  for (int i = 0; i < n; ++i) {
    p.x[i] = std::min(1.0, std::max(0.0, p.x[i]));
    p.y[i] = std::min(1.0, std::max(0.0, p.y[i]));
  }
  consider(p);
  for (int r = 0; r < rounds; ++r) {
    if (!half_step(p, 0)) break;
    consider(p);
    if (!half_step(p, 1)) break;
    consider(p);
  }
  return best;
}

// ---------------------------------------------------------------------------
// spatial branch and bound
// ---------------------------------------------------------------------------

namespace {

struct Box {
  double lx, ux, ly, uy;
  bool operator==(const Box&) const = default;
};

// Node LP with box-adapted McCormick envelopes; boxes are edited in
// place so consecutive nodes restart the simplex warm.
class BoxLp {
 public:
  explicit BoxLp(const BilinearInstance& inst) : inst_(inst), n_(inst.n) {
    for (int i = 0; i < n_; ++i) lp_.add_variable(0, 1, inst.cx[i]);
    for (int i = 0; i < n_; ++i) lp_.add_variable(0, 1, inst.cy[i]);
    for (int i = 0; i < n_; ++i) lp_.add_variable(0, 1, 0.0);
    active_.assign(n_, false);
    for (const BilinearRow& row : inst.rows) {
      std::vector<int> idx;
      std::vector<double> val;
      for (int p = 0; p < row.support_size(); ++p) {
        idx.push_back(2 * n_ + row.var_index[p]);
        val.push_back(row.coeff[p]);
        active_[row.var_index[p]] = true;
      }
      lp_.add_row(idx, val, 'G', row.rhs);
    }
    env_base_.assign(n_, -1);
    box_.assign(n_, Box{0, 1, 0, 1});
    for (int i = 0; i < n_; ++i) {
      if (!active_[i]) continue;
      int x = i, y = n_ + i, w = 2 * n_ + i;
      env_base_[i] = lp_.add_row({w, x, y}, {1.0, 0.0, 0.0}, 'G', 0.0);
      lp_.add_row({w, x, y}, {1.0, -1.0, -1.0}, 'G', -1.0);
      lp_.add_row({w, x, y}, {1.0, -1.0, 0.0}, 'L', 0.0);
      lp_.add_row({w, x, y}, {1.0, 0.0, -1.0}, 'L', 0.0);
    }
  }

  const Box& box(int i) const { return box_[i]; }

  void set_box(int i, const Box& b) {
    if (box_[i] == b) return;
    box_[i] = b;
    int x = i, y = n_ + i, w = 2 * n_ + i;
    lp_.set_var_bounds(x, b.lx, b.ux);
    lp_.set_var_bounds(y, b.ly, b.uy);
    if (!active_[i]) return;
    lp_.set_var_bounds(w, b.lx * b.ly, b.ux * b.uy);
    int r = env_base_[i];
    // w >= ly x + lx y - lx ly
    lp_.set_row_coeff(r, x, -b.ly);
    lp_.set_row_coeff(r, y, -b.lx);
    lp_.set_row_rhs(r, -b.lx * b.ly);
    // w >= uy x + ux y - ux uy
    lp_.set_row_coeff(r + 1, x, -b.uy);
    lp_.set_row_coeff(r + 1, y, -b.ux);
    lp_.set_row_rhs(r + 1, -b.ux * b.uy);
    // w <= uy x + lx y - lx uy
    lp_.set_row_coeff(r + 2, x, -b.uy);
    lp_.set_row_coeff(r + 2, y, -b.lx);
    lp_.set_row_rhs(r + 2, -b.lx * b.uy);
    // w <= ly x + ux y - ux ly
    lp_.set_row_coeff(r + 3, x, -b.ly);
    lp_.set_row_coeff(r + 3, y, -b.ux);
    lp_.set_row_rhs(r + 3, -b.ux * b.ly);
  }

  struct NodeSolution {
    bool feasible = false;
    double z = 0.0;
    PointXY point;
    std::vector<double> w;
  };

  NodeSolution solve() {
    NodeSolution sol;
    LpResult res = lp_.solve();
    if (res.status != LpStatus::Optimal) return sol;
    sol.feasible = true;
    sol.z = res.objective;
    sol.point.x.resize(n_);
    sol.point.y.resize(n_);
    sol.w.resize(n_);
    for (int i = 0; i < n_; ++i) {
      const Box& b = box_[i];
      sol.point.x[i] = std::min(b.ux, std::max(b.lx, lp_.value(i)));
      sol.point.y[i] = std::min(b.uy, std::max(b.ly, lp_.value(n_ + i)));
      sol.w[i] = lp_.value(2 * n_ + i);
    }
    return sol;
  }

  bool active(int i) const { return active_[i]; }

 private:
  const BilinearInstance& inst_;
  int n_;
  LpSolver lp_;
  std::vector<bool> active_;
  std::vector<int> env_base_;
  std::vector<Box> box_;
};

struct BnbNode {
  int parent = -1;
  int depth = 0;
  // the box edit this node applies on top of its parent
  int edit_var = -1;
  bool edit_x = true;
  double edit_lo = 0.0, edit_hi = 1.0;
  // bound and own branching decision (filled at solve time)
  double lb = 0.0;
  int branch_var = -1;
  bool branch_x = true;
  double branch_point = 0.5;
};

struct Branching {
  int var = -1;
  bool on_x = true;
  double point = 0.5;
  double score = 0.0;
};

Branching pick_branching(const BoxLp& engine, const BoxLp::NodeSolution& sol,
                         int n) {
  Branching out;
  for (int i = 0; i < n; ++i) {
    if (!engine.active(i)) continue;
    double score = std::abs(sol.w[i] - sol.point.x[i] * sol.point.y[i]);
    if (score > out.score + 1e-15) {
      const Box& b = engine.box(i);
      out.score = score;
      out.var = i;
      out.on_x = (b.ux - b.lx) >= (b.uy - b.ly);
      double lo = out.on_x ? b.lx : b.ly;
      double hi = out.on_x ? b.ux : b.uy;
      double v = out.on_x ? sol.point.x[i] : sol.point.y[i];
      double width = hi - lo;
      // clamp to the middle 60% so neither child collapses
      double pt = std::min(lo + 0.8 * width, std::max(lo + 0.2 * width, v));
      out.point = pt;
    }
  }
  return out;
}

}  // namespace

GlobalResult solve_global(const BilinearInstance& inst, const BnbOptions& opts) {
  validate_instance(inst);
  const int n = inst.n;
  GlobalResult out;
  BoxLp engine(inst);

  std::vector<BnbNode> arena;
  arena.reserve(1024);

  bool has_ub = false;
  double ub = std::numeric_limits<double>::infinity();
  PointXY best_point;
  long nodes = 0;

  auto offer_incumbent = [&](const PointXY& p, double z) {
    if (min_row_residual(inst, p) < -1e-8) return;
    if (!has_ub || z < ub - 1e-12) {
      has_ub = true;
      ub = z;
      best_point = p;
    }
  };

  auto maybe_polish = [&](const PointXY& p, int depth) {
    if (depth > opts.polish_depth && nodes % opts.polish_stride != 0) return;
    PolishResult pol = alternating_lp_polish(inst, p);
    if (pol.feasible) offer_incumbent(pol.point, pol.z);
  };

  // reconstruct the box of a node by walking its ancestors; the deepest
  // edit of each coordinate wins
  std::vector<int> seen_x(n, -1), seen_y(n, -1);
  int generation = 0;
  std::vector<Box> target(n);
  auto retarget = [&](int node_id) {
    ++generation;
    for (int i = 0; i < n; ++i) target[i] = Box{0, 1, 0, 1};
    for (int cur = node_id; cur >= 0; cur = arena[cur].parent) {
      const BnbNode& nd = arena[cur];
      if (nd.edit_var < 0) continue;
      std::vector<int>& seen = nd.edit_x ? seen_x : seen_y;
      if (seen[nd.edit_var] == generation) continue;  // deeper edit wins
      seen[nd.edit_var] = generation;
      Box& b = target[nd.edit_var];
      if (nd.edit_x) {
        b.lx = nd.edit_lo;
        b.ux = nd.edit_hi;
      } else {
        b.ly = nd.edit_lo;
        b.uy = nd.edit_hi;
      }
    }
    for (int i = 0; i < n; ++i) engine.set_box(i, target[i]);
  };

  // (lb, id) min-heap; smallest id wins ties for determinism
  using Key = std::pair<double, long>;
  std::priority_queue<Key, std::vector<Key>, std::greater<Key>> heap;

  auto record_trace = [&](long id, double node_lb, double global_lb) {
    if (!opts.record_trace) return;
    out.trace.push_back({id, node_lb, global_lb, has_ub ? ub : 0.0, has_ub});
  };

  auto solve_node = [&](int id) -> bool {
    // solves arena[id]'s LP, fills lb/branching, updates incumbents;
    // returns true if the node should be enqueued
    retarget(id);
    BoxLp::NodeSolution sol = engine.solve();
    ++nodes;
    if (!sol.feasible) return false;
    BnbNode& nd = arena[id];
    nd.lb = sol.z;
    if (nd.parent >= 0) {
      if (nd.lb < arena[nd.parent].lb - 1e-6)
        throw SolverError("child bound dropped below its parent's");
      if (nd.lb < arena[nd.parent].lb) nd.lb = arena[nd.parent].lb;
    }
    if (min_row_residual(inst, sol.point) >= -1e-8) {
      offer_incumbent(sol.point, sol.z);
      return false;  // node solved exactly; nothing below can improve it
    }
    Branching br = pick_branching(engine, sol, n);
    if (br.var < 0) return false;  // all products matched: cannot happen here
    nd.branch_var = br.var;
    nd.branch_x = br.on_x;
    nd.branch_point = br.point;
    maybe_polish(sol.point, nd.depth);
    return true;
  };

  arena.push_back(BnbNode{});
  if (solve_node(0)) heap.push({arena[0].lb, 0});

  double final_lb = has_ub ? ub : 0.0;
  while (!heap.empty()) {
    auto [lb, id] = heap.top();
    final_lb = lb;
    record_trace(id, lb, lb);
    double slack = opts.gap_tol * std::max(1.0, std::abs(ub));
    if (has_ub && lb >= ub - slack) break;  // heap is lb-sorted: all pruned
    if (nodes >= opts.node_cap) {
      out.status = GlobalStatus::Bounds;
      out.lb = final_lb;
      out.ub = has_ub ? ub : std::numeric_limits<double>::infinity();
      out.best_point = best_point;
      out.nodes = nodes;
      return out;
    }
    heap.pop();

    const BnbNode parent_copy = arena[id];
    retarget(static_cast<int>(id));
    Box pb = engine.box(parent_copy.branch_var);
    double lo = parent_copy.branch_x ? pb.lx : pb.ly;
    double hi = parent_copy.branch_x ? pb.ux : pb.uy;
    double mid = parent_copy.branch_point;

    for (int side = 0; side < 2; ++side) {
      BnbNode child;
      child.parent = static_cast<int>(id);
      child.depth = parent_copy.depth + 1;
      child.edit_var = parent_copy.branch_var;
      child.edit_x = parent_copy.branch_x;
      child.edit_lo = side == 0 ? lo : mid;
      child.edit_hi = side == 0 ? mid : hi;
      arena.push_back(child);
      int child_id = static_cast<int>(arena.size()) - 1;
      if (solve_node(child_id)) {
        double child_lb = arena[child_id].lb;
        if (!(has_ub && child_lb >= ub - opts.gap_tol * std::max(1.0, std::abs(ub))))
          heap.push({child_lb, child_id});
      }
    }
  }
  if (heap.empty() && has_ub) final_lb = ub;  // tree fully explored

  if (has_ub) {
    out.status = GlobalStatus::Optimal;
    out.lb = final_lb;
    out.ub = ub;
    out.best_point = best_point;
  } else {
    out.status = GlobalStatus::Infeasible;
  }
  out.nodes = nodes;
  return out;
}

}  // namespace bilicover
