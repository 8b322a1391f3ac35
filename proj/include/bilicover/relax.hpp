#ifndef BILICOVER_RELAX_HPP
#define BILICOVER_RELAX_HPP

#include <cstdint>
#include <ostream>
#include <unordered_set>
#include <variant>
#include <vector>

#include "bilicover/lift.hpp"
#include "bilicover/lp.hpp"
#include "bilicover/model.hpp"

namespace bilicover {

struct RelaxationSolution {
  LpStatus status = LpStatus::Optimal;
  double z = 0.0;
  PointXY point;
  std::vector<double> w;
};

struct PooledCut {
  std::variant<LiftedCut, MtCut> cut;
  int linearizations = 0;

  std::uint64_t id() const;
};

// McCormick relaxation of an instance on an LP core, plus the pool of
// nonlinear cuts handled by outer approximation. Variable layout in the
// LP: x_i -> i, y_i -> n+i, w_i -> 2n+i; rows are the m bilinear rows
// followed by four McCormick rows per pair, then accumulated cut
// linearizations.
class RelaxationState {
 public:
  RelaxationState() = default;  // empty shell, assign from a built state
  explicit RelaxationState(const BilinearInstance& inst);

  const BilinearInstance& instance() const { return inst_; }

  // Solves the current LP; appends to the bound history on success.
  RelaxationSolution solve();

  const RelaxationSolution& last_solution() const { return last_; }
  const std::vector<std::pair<int, double>>& bound_history() const {
    return bound_history_;
  }

  // Pool management; duplicates (by cut id) are rejected.
  bool add_cut(LiftedCut cut);
  bool add_cut(MtCut cut);
  bool pool_contains(std::uint64_t id) const { return pool_ids_.count(id) > 0; }
  const std::vector<PooledCut>& pool() const { return pool_; }
  int pool_size() const { return static_cast<int>(pool_.size()); }
  const std::unordered_set<std::uint64_t>& pool_ids() const { return pool_ids_; }

  // violation of pooled cut k at pt (0 when satisfied)
  double pooled_violation(int k, const PointXY& pt) const;

  // Appends the supporting hyperplane of pooled cut k at `at`. Returns
  // the new LP row id, or -1 when the linearization was a duplicate or
  // its gradient degenerate (no-op).
  int add_cut_linearization(int k, const PointXY& at);

  // Kelley loop: solve, linearize all pooled cuts violated by more than
  // tol at the optimum, repeat. Returns the number of passes that added
  // rows; max_pass is returned when the budget is exhausted or no
  // further linearization can be added while violations remain.
  int refine_until_cut_feasible(double tol, int max_pass);

  int lp_rows() const { return lp_.num_rows(); }
  void write_lp(std::ostream& out) const { lp_.write_lp_format(out); }

 private:
  CutLinearization linearize(int k, const PointXY& at) const;

  BilinearInstance inst_;
  LpSolver lp_;
  std::vector<PooledCut> pool_;
  std::unordered_set<std::uint64_t> pool_ids_;
  std::unordered_set<std::uint64_t> linearization_keys_;
  std::vector<std::pair<int, double>> bound_history_;
  RelaxationSolution last_;
  int solve_count_ = 0;
};

// Convenience free functions mirroring the operation names.
inline RelaxationState build_mccormick(const BilinearInstance& inst) {
  return RelaxationState(inst);
}

}  // namespace bilicover

#endif  // BILICOVER_RELAX_HPP
