#include "bilicover/lp.hpp"

#include <algorithm>
#include <cmath>

namespace bilicover {

namespace {
constexpr double kFeasTol = 1e-9;   // bound violation treated as feasible
constexpr double kDualTol = 1e-9;   // reduced-cost threshold
constexpr double kPivTol = 1e-10;   // |w_i| below this never blocks
constexpr double kPivotMin = 1e-8;  // reinvert instead of pivoting on this
constexpr double kDegenStep = 1e-12;
constexpr int kBlandAfter = 60;     // consecutive degenerate pivots
constexpr int kReinvertEvery = 120;
constexpr long kMaxIterFactor = 200;
}  // namespace

int LpSolver::add_variable(double lower, double upper, double objective) {
  if (lower > upper) throw std::invalid_argument("variable bounds crossed");
  int v = nstruct_++;
  cols_.emplace_back();
  lower_.insert(lower_.begin() + v, lower);
  upper_.insert(upper_.begin() + v, upper);
  obj_.push_back(objective);
  double start = 0.0;
  VarStatus st = VarStatus::FreeNonbasic;
  if (lower > -kInf && (std::abs(lower) <= std::abs(upper) || upper >= kInf)) {
    st = VarStatus::AtLower;
    start = lower;
  } else if (upper < kInf) {
    st = VarStatus::AtUpper;
    start = upper;
  }
  values_.insert(values_.begin() + v, start);
  status_.insert(status_.begin() + v, st);
  pos_of_col_.insert(pos_of_col_.begin() + v, -1);
  // Slack column indices all shifted by one; rather than patch the basis
  // in place, rebuild it on the next solve (variables are only added
  // while a model is being assembled).
  if (nrows_ > 0) basis_valid_ = false;
  return v;
}

int LpSolver::add_row(const std::vector<int>& idx, const std::vector<double>& val,
                      char sense, double rhs) {
  if (idx.size() != val.size()) throw std::invalid_argument("row idx/val mismatch");
  int r = nrows_++;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= nstruct_)
      throw std::invalid_argument("row references unknown variable");
    cols_[idx[k]].push_back({r, val[k]});
  }
  double slo, shi;
  switch (sense) {
    case 'G': slo = rhs, shi = kInf; break;
    case 'L': slo = -kInf, shi = rhs; break;
    case 'E': slo = rhs, shi = rhs; break;
    default: throw std::invalid_argument("row sense must be G, L or E");
  }
  lower_.push_back(slo);
  upper_.push_back(shi);
  int slack = nstruct_ + r;
  // activity of the new row at the current point
  double act = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) act += val[k] * values_[idx[k]];
  values_.push_back(act);
  status_.push_back(VarStatus::Basic);
  pos_of_col_.push_back(r);
  basic_.push_back(slack);

  if (basis_valid_ && !need_reinvert_) {
    // Block extension: with the new slack basic, the enlarged inverse is
    // [[Binv, 0], [N.Binv, -1]] where N holds the new row's coefficients
    // on the previously basic columns.
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(nrows_, nrows_);
    next.topLeftCorner(r, r) = binv_;
    Eigen::RowVectorXd nrow = Eigen::RowVectorXd::Zero(r);
    bool any = false;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      int pos = pos_of_col_[idx[k]];
      if (pos >= 0 && pos < r) {
        nrow(pos) += val[k];
        any = true;
      }
    }
    if (any)
      next.row(r).head(r) = nrow * binv_;
    next(r, r) = -1.0;
    binv_.swap(next);
  } else {
    need_reinvert_ = true;
  }
  return r;
}

void LpSolver::set_var_bounds(int v, double lower, double upper) {
  if (lower > upper) throw std::invalid_argument("variable bounds crossed");
  lower_[v] = lower;
  upper_[v] = upper;
  if (status_[v] == VarStatus::AtLower) {
    if (lower <= -kInf) status_[v] = upper < kInf ? VarStatus::AtUpper : VarStatus::FreeNonbasic;
  } else if (status_[v] == VarStatus::AtUpper) {
    if (upper >= kInf) status_[v] = lower > -kInf ? VarStatus::AtLower : VarStatus::FreeNonbasic;
  }
  snap_nonbasic_values();
}

void LpSolver::set_objective_coeff(int v, double c) { obj_[v] = c; }

void LpSolver::set_row_rhs(int r, double rhs) {
  int slack = nstruct_ + r;
  if (lower_[slack] > -kInf) lower_[slack] = rhs;
  if (upper_[slack] < kInf) upper_[slack] = rhs;
  snap_nonbasic_values();
}

void LpSolver::set_row_coeff(int r, int v, double value) {
  for (Entry& e : cols_[v]) {
    if (e.row != r) continue;
    double delta = value - e.val;
    e.val = value;
    if (delta == 0.0) return;
    int pos = pos_of_col_[v];
    if (pos >= 0 && basis_valid_ && !need_reinvert_) {
      // B += delta * e_r * e_pos^T; Sherman-Morrison on the inverse.
      double denom = 1.0 + delta * binv_(pos, r);
      if (std::abs(denom) < 1e-10) {
        need_reinvert_ = true;
      } else {
        Eigen::VectorXd u = binv_.col(r);
        Eigen::RowVectorXd w = binv_.row(pos);
        binv_.noalias() -= (delta / denom) * (u * w);
      }
    }
    return;
  }
  throw std::invalid_argument("set_row_coeff: entry not present structurally");
}

void LpSolver::reset_to_slack_basis() {
  basic_.resize(nrows_);
  std::fill(pos_of_col_.begin(), pos_of_col_.end(), -1);
  for (int v = 0; v < nstruct_; ++v) {
    if (lower_[v] > -kInf) {
      status_[v] = VarStatus::AtLower;
      values_[v] = lower_[v];
    } else if (upper_[v] < kInf) {
      status_[v] = VarStatus::AtUpper;
      values_[v] = upper_[v];
    } else {
      status_[v] = VarStatus::FreeNonbasic;
      values_[v] = 0.0;
    }
  }
  for (int r = 0; r < nrows_; ++r) {
    int slack = nstruct_ + r;
    basic_[r] = slack;
    status_[slack] = VarStatus::Basic;
    pos_of_col_[slack] = r;
  }
  binv_ = Eigen::MatrixXd::Zero(nrows_, nrows_);
  for (int r = 0; r < nrows_; ++r) binv_(r, r) = -1.0;  // slack columns are -e_r
  basis_valid_ = true;
  need_reinvert_ = false;
  pivots_since_reinvert_ = 0;
  compute_basic_values();
}

void LpSolver::load_basis(const std::vector<VarStatus>& status) {
  if (static_cast<int>(status.size()) != ncols())
    throw std::invalid_argument("basis status size mismatch");
  status_ = status;
  basic_.clear();
  std::fill(pos_of_col_.begin(), pos_of_col_.end(), -1);
  for (int c = 0; c < ncols(); ++c)
    if (status_[c] == VarStatus::Basic) basic_.push_back(c);
  if (static_cast<int>(basic_.size()) != nrows_) {
    reset_to_slack_basis();
    return;
  }
  for (int p = 0; p < nrows_; ++p) pos_of_col_[basic_[p]] = p;
  snap_nonbasic_values();
  basis_valid_ = true;
  need_reinvert_ = true;
}

void LpSolver::snap_nonbasic_values() {
  for (int c = 0; c < ncols(); ++c) {
    switch (status_[c]) {
      case VarStatus::AtLower: values_[c] = lower_[c]; break;
      case VarStatus::AtUpper: values_[c] = upper_[c]; break;
      case VarStatus::FreeNonbasic: break;
      case VarStatus::Basic: break;
    }
  }
}

// Gauss-Jordan inversion of the basis with singular-column repair: any
// dependent basic column is swapped for the slack of a row that still
// lacks a pivot, which always completes (slack columns are -e_r).
void LpSolver::reinvert() {
  const int nr = nrows_;
  if (nr == 0) {
    binv_.resize(0, 0);
    basis_valid_ = true;
    need_reinvert_ = false;
    compute_basic_values();
    return;
  }
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(nr, nr);
  for (int p = 0; p < nr; ++p) {
    int col = basic_[p];
    if (is_slack(col)) {
      b(col - nstruct_, p) = -1.0;
    } else {
      for (const Entry& e : cols_[col]) b(e.row, p) += e.val;
    }
  }

  Eigen::MatrixXd m(nr, 2 * nr);
  m << b, Eigen::MatrixXd::Identity(nr, nr);
  std::vector<int> pivot_row_of_pos(nr, -1);
  std::vector<bool> row_used(nr, false);
  std::vector<int> dependent;
  for (int p = 0; p < nr; ++p) {
    int best = -1;
    double best_abs = 1e-9;
    for (int r = 0; r < nr; ++r) {
      if (row_used[r]) continue;
      double a = std::abs(m(r, p));
      if (a > best_abs) {
        best_abs = a;
        best = r;
      }
    }
    if (best < 0) {
      dependent.push_back(p);
      continue;
    }
    row_used[best] = true;
    pivot_row_of_pos[p] = best;
    m.row(best) /= m(best, p);
    for (int r = 0; r < nr; ++r) {
      if (r == best) continue;
      double f = m(r, p);
      if (f != 0.0) m.row(r) -= f * m.row(best);
    }
  }

  if (!dependent.empty()) {
    // pair each dependent position with an unpivoted row's slack
    std::vector<int> free_rows;
    for (int r = 0; r < nr; ++r)
      if (!row_used[r]) free_rows.push_back(r);
    for (std::size_t k = 0; k < dependent.size(); ++k) {
      int pos = dependent[k];
      int old_col = basic_[pos];
      int row = free_rows[k];
      int slack = nstruct_ + row;
      // old column leaves the basis at a finite bound
      pos_of_col_[old_col] = -1;
      if (lower_[old_col] > -kInf) {
        status_[old_col] = VarStatus::AtLower;
        values_[old_col] = lower_[old_col];
      } else if (upper_[old_col] < kInf) {
        status_[old_col] = VarStatus::AtUpper;
        values_[old_col] = upper_[old_col];
      } else {
        status_[old_col] = VarStatus::FreeNonbasic;
        values_[old_col] = 0.0;
      }
      // displaced slack must have been nonbasic; make it basic here
      basic_[pos] = slack;
      status_[slack] = VarStatus::Basic;
      pos_of_col_[slack] = pos;
    }
    reinvert();  // repaired set is nonsingular
    return;
  }

  // unscramble: inverse rows follow pivot order
  binv_.resize(nr, nr);
  for (int p = 0; p < nr; ++p) binv_.row(p) = m.row(pivot_row_of_pos[p]).tail(nr);
  basis_valid_ = true;
  need_reinvert_ = false;
  pivots_since_reinvert_ = 0;
  compute_basic_values();
}

void LpSolver::compute_basic_values() {
  if (nrows_ == 0) return;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(nrows_);
  for (int v = 0; v < nstruct_; ++v) {
    if (status_[v] == VarStatus::Basic) continue;
    double xv = values_[v];
    if (xv == 0.0) continue;
    for (const Entry& e : cols_[v]) acc(e.row) += e.val * xv;
  }
  for (int r = 0; r < nrows_; ++r) {
    int slack = nstruct_ + r;
    if (status_[slack] == VarStatus::Basic) continue;
    acc(r) -= values_[slack];
  }
  Eigen::VectorXd xb = binv_ * (-acc);
  for (int p = 0; p < nrows_; ++p) values_[basic_[p]] = xb(p);
}

Eigen::VectorXd LpSolver::ftran_column(int col) const {
  if (is_slack(col)) return -binv_.col(col - nstruct_);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(nrows_);
  for (const Entry& e : cols_[col]) w.noalias() += e.val * binv_.col(e.row);
  return w;
}

double LpSolver::column_dot(int col, const Eigen::VectorXd& y) const {
  if (is_slack(col)) return -y(col - nstruct_);
  double acc = 0.0;
  for (const Entry& e : cols_[col]) acc += e.val * y(e.row);
  return acc;
}

double LpSolver::infeasibility_sum() const {
  double total = 0.0;
  for (int p = 0; p < nrows_; ++p) {
    int c = basic_[p];
    if (values_[c] < lower_[c]) total += lower_[c] - values_[c];
    if (values_[c] > upper_[c]) total += values_[c] - upper_[c];
  }
  return total;
}

Eigen::VectorXd LpSolver::btran_costs(const std::vector<double>& cost) const {
  Eigen::VectorXd cb(nrows_);
  for (int p = 0; p < nrows_; ++p) cb(p) = cost[basic_[p]];
  return binv_.transpose() * cb;
}

LpSolver::Pricing LpSolver::price(const Eigen::VectorXd& y,
                                  const std::vector<double>& cost,
                                  bool bland) const {
  Pricing best;
  for (int c = 0; c < ncols(); ++c) {
    if (status_[c] == VarStatus::Basic) continue;
    double d = cost[c] - column_dot(c, y);
    int dir = 0;
    double score = 0.0;
    switch (status_[c]) {
      case VarStatus::AtLower:
        if (d < -kDualTol) dir = +1, score = -d;
        break;
      case VarStatus::AtUpper:
        if (d > kDualTol) dir = -1, score = d;
        break;
      case VarStatus::FreeNonbasic:
        if (std::abs(d) > kDualTol) dir = d < 0 ? +1 : -1, score = std::abs(d);
        break;
      case VarStatus::Basic:
        break;
    }
    if (dir == 0) continue;
    if (bland) return {c, dir, score};
    if (score > best.score) best = {c, dir, score};
  }
  return best;
}

LpSolver::RatioHit LpSolver::ratio_test(int entering, int direction,
                                        const Eigen::VectorXd& w, bool phase1,
                                        bool bland) const {
  RatioHit best;
  double best_weight = 0.0;
  // entering variable's own range
  double range = upper_[entering] - lower_[entering];
  if (range < kInf) best.step = range;

  for (int p = 0; p < nrows_; ++p) {
    double wv = w(p);
    if (std::abs(wv) <= kPivTol) continue;
    int c = basic_[p];
    double rate = -direction * wv;  // d x_c / d t
    double xv = values_[c];
    double cap = kInf;
    bool to_upper = false;
    if (phase1 && xv < lower_[c] - kFeasTol) {
      if (rate > 0.0) cap = (lower_[c] - xv) / rate, to_upper = false;
    } else if (phase1 && xv > upper_[c] + kFeasTol) {
      if (rate < 0.0) cap = (upper_[c] - xv) / rate, to_upper = true;
    } else {
      if (rate < 0.0 && lower_[c] > -kInf) cap = (lower_[c] - xv) / rate, to_upper = false;
      if (rate > 0.0 && upper_[c] < kInf) cap = (upper_[c] - xv) / rate, to_upper = true;
    }
    if (cap >= best.step + 1e-12) continue;
    if (cap < 0.0) cap = 0.0;
    double weight = std::abs(wv);
    bool take;
    if (cap < best.step - 1e-12) {
      take = true;
    } else if (bland) {
      take = best.leaving_pos < 0 || c < basic_[best.leaving_pos];
    } else {
      take = best.leaving_pos < 0 || weight > best_weight;
    }
    if (take) {
      best.step = std::min(cap, best.step);
      best.leaving_pos = p;
      best.to_upper = to_upper;
      best_weight = weight;
    }
  }
  return best;
}

void LpSolver::pivot(int entering, int direction, const RatioHit& hit,
                     const Eigen::VectorXd& w) {
  double t = hit.step;
  // move the basics
  for (int p = 0; p < nrows_; ++p) {
    double wv = w(p);
    if (wv == 0.0) continue;
    values_[basic_[p]] -= direction * t * wv;
  }
  double enter_val = values_[entering] + direction * t;

  if (hit.leaving_pos < 0) {
    // bound flip, basis unchanged
    values_[entering] = direction > 0 ? upper_[entering] : lower_[entering];
    status_[entering] = direction > 0 ? VarStatus::AtUpper : VarStatus::AtLower;
    return;
  }

  int leave_pos = hit.leaving_pos;
  int leaving = basic_[leave_pos];
  values_[leaving] = hit.to_upper ? upper_[leaving] : lower_[leaving];
  status_[leaving] = hit.to_upper ? VarStatus::AtUpper : VarStatus::AtLower;
  if (lower_[leaving] <= -kInf && upper_[leaving] >= kInf)
    status_[leaving] = VarStatus::FreeNonbasic;
  pos_of_col_[leaving] = -1;

  basic_[leave_pos] = entering;
  pos_of_col_[entering] = leave_pos;
  status_[entering] = VarStatus::Basic;
  values_[entering] = enter_val;

  // binv update: row ops sending the entering column to e_{leave_pos}
  double piv = w(leave_pos);
  binv_.row(leave_pos) /= piv;
  for (int p = 0; p < nrows_; ++p) {
    if (p == leave_pos) continue;
    double f = w(p);
    if (f != 0.0) binv_.row(p).noalias() -= f * binv_.row(leave_pos);
  }
  ++pivots_since_reinvert_;
}

bool LpSolver::run_phase(int phase, LpResult& result) {
  std::vector<double> cost(ncols(), 0.0);
  const long max_iters =
      kMaxIterFactor * static_cast<long>(ncols() + nrows_) + 10000;
  int degenerate_run = 0;
  bool bland = false;

  for (long iter = 0;; ++iter) {
    if (iter > max_iters)
      throw SolverError("simplex iteration limit exceeded; numerical trouble");
    if (pivots_since_reinvert_ >= kReinvertEvery) {
      reinvert();
    }
    if (phase == 1) {
      double infeas = infeasibility_sum();
      if (infeas <= kFeasTol * (1.0 + 0.01 * nrows_)) return true;
      for (int c = 0; c < ncols(); ++c) cost[c] = 0.0;
      for (int p = 0; p < nrows_; ++p) {
        int c = basic_[p];
        if (values_[c] < lower_[c] - kFeasTol) cost[c] = -1.0;
        else if (values_[c] > upper_[c] + kFeasTol) cost[c] = +1.0;
      }
    } else {
      for (int c = 0; c < ncols(); ++c) cost[c] = is_slack(c) ? 0.0 : obj_[c];
    }

    Eigen::VectorXd y = btran_costs(cost);
    Pricing enter = price(y, cost, bland);
    if (enter.col < 0) {
      if (phase == 1) {
        double infeas = infeasibility_sum();
        if (infeas <= 1e-7) return true;  // numerically feasible leftover
        result.status = LpStatus::Infeasible;
        result.farkas = true;
        result.infeasibility = infeas;
        return false;
      }
      return true;  // phase 2 optimal
    }

    Eigen::VectorXd w = ftran_column(enter.col);
    RatioHit hit = ratio_test(enter.col, enter.direction, w, phase == 1, bland);
    if (hit.step >= kInf) {
      if (phase == 1)
        throw SolverError("phase-1 ray; inconsistent internal state");
      throw SolverError("LP is unbounded");
    }
    if (hit.leaving_pos >= 0 && std::abs(w(hit.leaving_pos)) < kPivotMin &&
        pivots_since_reinvert_ > 0) {
      reinvert();  // retry the iteration on fresh numbers
      continue;
    }
    ++total_iterations_;
    ++result.iterations;
    pivot(enter.col, enter.direction, hit, w);

    if (hit.step <= kDegenStep) {
      if (++degenerate_run >= kBlandAfter) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }
  }
}

LpResult LpSolver::solve() {
  LpResult result;
  ensure_basis();

  if (nrows_ == 0) {
    // pure box problem
    for (int v = 0; v < nstruct_; ++v) {
      if (obj_[v] > 0.0 && lower_[v] > -kInf) {
        values_[v] = lower_[v];
        status_[v] = VarStatus::AtLower;
      } else if (obj_[v] < 0.0 && upper_[v] < kInf) {
        values_[v] = upper_[v];
        status_[v] = VarStatus::AtUpper;
      }
      if ((obj_[v] > 0.0 && lower_[v] <= -kInf) ||
          (obj_[v] < 0.0 && upper_[v] >= kInf))
        throw SolverError("LP is unbounded");
    }
    objective_ = 0.0;
    for (int v = 0; v < nstruct_; ++v) objective_ += obj_[v] * values_[v];
    result.status = LpStatus::Optimal;
    result.objective = objective_;
    return result;
  }

  if (!run_phase(1, result)) {
    return result;  // infeasible with certificate flag
  }
  run_phase(2, result);

  // defensive residual check; drift triggers one clean re-solve
  for (int attempt = 0; attempt < 3; ++attempt) {
    reinvert();
    double infeas = infeasibility_sum();
    if (infeas <= kFeasTol * (1.0 + 0.01 * nrows_)) break;
    if (!run_phase(1, result)) return result;
    run_phase(2, result);
  }

  objective_ = 0.0;
  for (int v = 0; v < nstruct_; ++v) objective_ += obj_[v] * values_[v];
  result.status = LpStatus::Optimal;
  result.objective = objective_;
  return result;
}

void LpSolver::ensure_basis() {
  if (!basis_valid_ || static_cast<int>(basic_.size()) != nrows_) {
    reset_to_slack_basis();
    return;
  }
  if (need_reinvert_) {
    reinvert();
  } else {
    compute_basic_values();
  }
}

bool LpSolver::verify_optimal_basis(double tol) const {
  // primal: bounds and row activities
  for (int c = 0; c < ncols(); ++c) {
    if (values_[c] < lower_[c] - tol || values_[c] > upper_[c] + tol) return false;
  }
  std::vector<double> act(nrows_, 0.0);
  for (int v = 0; v < nstruct_; ++v)
    for (const Entry& e : cols_[v]) act[e.row] += e.val * values_[v];
  for (int r = 0; r < nrows_; ++r)
    if (std::abs(act[r] - values_[nstruct_ + r]) > tol * (1.0 + std::abs(act[r])))
      return false;
  // dual: reduced-cost signs for a minimization
  std::vector<double> cost(ncols(), 0.0);
  for (int v = 0; v < nstruct_; ++v) cost[v] = obj_[v];
  Eigen::VectorXd y = btran_costs(cost);
  for (int c = 0; c < ncols(); ++c) {
    if (status_[c] == VarStatus::Basic) continue;
    double d = cost[c] - column_dot(c, y);
    switch (status_[c]) {
      case VarStatus::AtLower:
        if (d < -tol) return false;
        break;
      case VarStatus::AtUpper:
        if (d > tol) return false;
        break;
      case VarStatus::FreeNonbasic:
        if (std::abs(d) > tol) return false;
        break;
      case VarStatus::Basic:
        break;
    }
  }
  return true;
}

void LpSolver::write_lp_format(std::ostream& out) const {
  out << "Minimize\n obj:";
  bool first = true;
  for (int v = 0; v < nstruct_; ++v) {
    if (obj_[v] == 0.0) continue;
    out << (obj_[v] < 0 ? " - " : (first ? " " : " + "))
        << std::abs(obj_[v]) << " x" << v;
    first = false;
  }
  if (first) out << " 0 x0";
  out << "\nSubject To\n";
  std::vector<std::vector<std::pair<int, double>>> rows(nrows_);
  for (int v = 0; v < nstruct_; ++v)
    for (const Entry& e : cols_[v]) rows[e.row].push_back({v, e.val});
  for (int r = 0; r < nrows_; ++r) {
    out << " r" << r << ":";
    bool f = true;
    for (auto& [v, a] : rows[r]) {
      out << (a < 0 ? " - " : (f ? " " : " + ")) << std::abs(a) << " x" << v;
      f = false;
    }
    int slack = nstruct_ + r;
    if (lower_[slack] > -kInf && upper_[slack] < kInf &&
        lower_[slack] == upper_[slack])
      out << " = " << lower_[slack];
    else if (lower_[slack] > -kInf)
      out << " >= " << lower_[slack];
    else
      out << " <= " << upper_[slack];
    out << "\n";
  }
  out << "Bounds\n";
  for (int v = 0; v < nstruct_; ++v) {
    if (lower_[v] <= -kInf && upper_[v] >= kInf)
      out << " x" << v << " free\n";
    else
      out << " " << lower_[v] << " <= x" << v << " <= " << upper_[v] << "\n";
  }
  out << "End\n";
}

}  // namespace bilicover
