#include "bilicover/relax.hpp"

#include <cmath>

namespace bilicover {

namespace {
// grid used to fingerprint expansion points for duplicate detection
std::uint64_t point_key(std::uint64_t cut_id, const CutLinearization& lin,
                        const PointXY& at) {
  std::uint64_t h = cut_id * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL;
  auto mix = [&h](std::int64_t v) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xd6e8feb86659fd93ULL;
  };
  for (int i : lin.var_index) {
    mix(static_cast<std::int64_t>(std::llround(at.x[i] * 1e9)));
    mix(static_cast<std::int64_t>(std::llround(at.y[i] * 1e9)));
  }
  return h;
}
}  // namespace

std::uint64_t PooledCut::id() const {
  if (std::holds_alternative<LiftedCut>(cut)) return std::get<LiftedCut>(cut).cut_id;
  return std::get<MtCut>(cut).cut_id;
}

RelaxationState::RelaxationState(const BilinearInstance& inst) : inst_(inst) {
  validate_instance(inst_);
  const int n = inst_.n;
  for (int i = 0; i < n; ++i) lp_.add_variable(0.0, 1.0, inst_.cx[i]);
  for (int i = 0; i < n; ++i) lp_.add_variable(0.0, 1.0, inst_.cy[i]);
  for (int i = 0; i < n; ++i) lp_.add_variable(0.0, 1.0, 0.0);

  for (const BilinearRow& row : inst_.rows) {
    std::vector<int> idx;
    std::vector<double> val;
    idx.reserve(row.support_size());
    for (int p = 0; p < row.support_size(); ++p) {
      idx.push_back(2 * n + row.var_index[p]);
      val.push_back(row.coeff[p]);
    }
    lp_.add_row(idx, val, 'G', row.rhs);
  }
  for (int i = 0; i < n; ++i) {
    int x = i, y = n + i, w = 2 * n + i;
    lp_.add_row({w}, {1.0}, 'G', 0.0);
    lp_.add_row({w, x, y}, {1.0, -1.0, -1.0}, 'G', -1.0);
    lp_.add_row({w, x}, {1.0, -1.0}, 'L', 0.0);
    lp_.add_row({w, y}, {1.0, -1.0}, 'L', 0.0);
  }
}

RelaxationSolution RelaxationState::solve() {
  LpResult res = lp_.solve();
  RelaxationSolution sol;
  sol.status = res.status;
  if (res.status == LpStatus::Optimal) {
    const int n = inst_.n;
    sol.z = res.objective;
    sol.point.x.resize(n);
    sol.point.y.resize(n);
    sol.w.resize(n);
    for (int i = 0; i < n; ++i) {
      sol.point.x[i] = std::min(1.0, std::max(0.0, lp_.value(i)));
      sol.point.y[i] = std::min(1.0, std::max(0.0, lp_.value(n + i)));
      sol.w[i] = lp_.value(2 * n + i);
    }
    bound_history_.emplace_back(solve_count_, sol.z);
  }
  ++solve_count_;
  last_ = sol;
  return last_;
}

bool RelaxationState::add_cut(LiftedCut cut) {
  if (!pool_ids_.insert(cut.cut_id).second) return false;
  pool_.push_back(PooledCut{std::move(cut), 0});
  return true;
}

bool RelaxationState::add_cut(MtCut cut) {
  if (!pool_ids_.insert(cut.cut_id).second) return false;
  pool_.push_back(PooledCut{std::move(cut), 0});
  return true;
}

double RelaxationState::pooled_violation(int k, const PointXY& pt) const {
  const PooledCut& pc = pool_[k];
  if (std::holds_alternative<LiftedCut>(pc.cut))
    return cut_violation(std::get<LiftedCut>(pc.cut), pt);
  return mt_violation(std::get<MtCut>(pc.cut), pt);
}

CutLinearization RelaxationState::linearize(int k, const PointXY& at) const {
  const PooledCut& pc = pool_[k];
  if (std::holds_alternative<LiftedCut>(pc.cut))
    return supergradient(std::get<LiftedCut>(pc.cut), at);
  return mt_supergradient(std::get<MtCut>(pc.cut), at);
}

int RelaxationState::add_cut_linearization(int k, const PointXY& at) {
  PooledCut& pc = pool_[k];
  CutLinearization lin = linearize(k, at);

  bool degenerate = true;
  for (std::size_t p = 0; p < lin.gx.size(); ++p)
    if (lin.gx[p] != 0.0 || lin.gy[p] != 0.0) degenerate = false;
  if (degenerate) return -1;  // nothing to cut with; leave the LP as is

  std::uint64_t key = point_key(pc.id(), lin, at);
  if (!linearization_keys_.insert(key).second) return -1;

  // plane(p) = value + g.(p - at) must stay >= rhs0 where the cut says
  // LHS >= rhs0 (-1 for lifted cuts, 0 for mt cuts)
  double rhs0 = std::holds_alternative<LiftedCut>(pc.cut) ? -1.0 : 0.0;
  const int n = inst_.n;
  std::vector<int> idx;
  std::vector<double> val;
  double gdota = 0.0;
  for (std::size_t p = 0; p < lin.var_index.size(); ++p) {
    int i = lin.var_index[p];
    if (lin.gx[p] != 0.0) {
      idx.push_back(i);
      val.push_back(lin.gx[p]);
      gdota += lin.gx[p] * at.x[i];
    }
    if (lin.gy[p] != 0.0) {
      idx.push_back(n + i);
      val.push_back(lin.gy[p]);
      gdota += lin.gy[p] * at.y[i];
    }
  }
  int row = lp_.add_row(idx, val, 'G', rhs0 - lin.value + gdota);
  ++pc.linearizations;
  return row;
}

int RelaxationState::refine_until_cut_feasible(double tol, int max_pass) {
  if (pool_.empty()) return 0;
  int passes = 0;
  while (true) {
    RelaxationSolution sol = solve();
    if (sol.status != LpStatus::Optimal)
      throw SolverError("relaxation became infeasible during refinement");
    int violated = 0, added = 0;
    for (int k = 0; k < pool_size(); ++k) {
      if (pooled_violation(k, sol.point) <= tol) continue;
      ++violated;
      if (add_cut_linearization(k, sol.point) >= 0) ++added;
    }
    if (violated == 0) break;
    if (added == 0) return max_pass;  // stalled: budget considered spent
    if (++passes >= max_pass) {
      solve();
      return max_pass;
    }
  }
  return passes;
}

}  // namespace bilicover
