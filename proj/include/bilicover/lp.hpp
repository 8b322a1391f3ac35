#ifndef BILICOVER_LP_HPP
#define BILICOVER_LP_HPP

#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace bilicover {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class LpStatus { Optimal, Infeasible };

enum class VarStatus : unsigned char { Basic, AtLower, AtUpper, FreeNonbasic };

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LpResult {
  LpStatus status = LpStatus::Optimal;
  double objective = 0.0;
  bool farkas = false;         // infeasibility certified by phase-1 pricing
  double infeasibility = 0.0;  // residual left when infeasible
  long iterations = 0;
};

// Bounded-variable primal simplex over rows  a.x  (sense)  rhs  with box
// bounds on the variables. Rows are turned into  a.x - s = 0  with the
// sense folded into the slack bounds, so the initial slack basis is
// always available. Phase 1 minimizes the total bound violation of the
// basic variables (composite objective), phase 2 the real objective.
//
// The basis inverse is kept explicitly and updated by elementary row
// operations; bound, right-hand-side, coefficient and row additions are
// applied in place (Sherman-Morrison / block extension) so branch-and-
// bound nodes and cutting-plane rounds restart warm. Pivot rules are
// deterministic: Dantzig pricing with smallest-index ties, switching to
// Bland's rule after a run of degenerate steps.
class LpSolver {
 public:
  int add_variable(double lower, double upper, double objective = 0.0);
  // sense: 'G' (>=), 'L' (<=), 'E' (=)
  int add_row(const std::vector<int>& idx, const std::vector<double>& val,
              char sense, double rhs);

  void set_var_bounds(int v, double lower, double upper);
  void set_objective_coeff(int v, double c);
  void set_row_rhs(int r, double rhs);
  // Replace the coefficient of structural variable v in row r (the entry
  // must already exist structurally; value may be 0).
  void set_row_coeff(int r, int v, double value);

  LpResult solve();

  double objective_value() const { return objective_; }
  double value(int v) const { return values_[v]; }
  int num_vars() const { return nstruct_; }
  int num_rows() const { return nrows_; }

  // Basis snapshot over structural+slack columns, loadable later.
  std::vector<VarStatus> basis_status() const { return status_; }
  void load_basis(const std::vector<VarStatus>& status);
  void reset_to_slack_basis();

  // Simplex optimality certificate for the last solve: primal residuals
  // within `tol` and reduced-cost signs consistent with every nonbasic
  // status. Only meaningful after an Optimal result.
  bool verify_optimal_basis(double tol = 1e-7) const;

  // Debug dump in LP text format (generic x#/r# names).
  void write_lp_format(std::ostream& out) const;

 private:
  struct Entry {
    int row;
    double val;
  };

  int ncols() const { return nstruct_ + nrows_; }
  bool is_slack(int col) const { return col >= nstruct_; }
  double col_lower(int col) const { return lower_[col]; }
  double col_upper(int col) const { return upper_[col]; }

  void ensure_basis();
  void reinvert();
  void compute_basic_values();
  Eigen::VectorXd ftran_column(int col) const;
  double column_dot(int col, const Eigen::VectorXd& y) const;
  double infeasibility_sum() const;
  void snap_nonbasic_values();

  struct Pricing {
    int col = -1;
    int direction = 0;  // +1 increase, -1 decrease
    double score = 0.0;
  };
  Pricing price(const Eigen::VectorXd& y, const std::vector<double>& cost,
                bool bland) const;
  Eigen::VectorXd btran_costs(const std::vector<double>& cost) const;

  struct RatioHit {
    double step = kInf;
    int leaving_pos = -1;    // -1: entering hits its opposite bound
    bool to_upper = false;   // bound the leaving variable ends on
  };
  RatioHit ratio_test(int entering, int direction, const Eigen::VectorXd& w,
                      bool phase1, bool bland) const;

  void pivot(int entering, int direction, const RatioHit& hit,
             const Eigen::VectorXd& w);

  // phase: 1 or 2. Returns false when phase 1 stalls infeasible.
  bool run_phase(int phase, LpResult& result);

  int nstruct_ = 0;
  int nrows_ = 0;
  std::vector<std::vector<Entry>> cols_;  // structural columns
  std::vector<double> lower_, upper_;     // structural then slack
  std::vector<double> obj_;            // structural only
  std::vector<double> values_;         // all columns
  std::vector<VarStatus> status_;      // all columns
  std::vector<int> basic_;             // column basic at each row position
  std::vector<int> pos_of_col_;        // inverse of basic_, -1 if nonbasic
  Eigen::MatrixXd binv_;
  bool basis_valid_ = false;
  bool need_reinvert_ = false;
  int pivots_since_reinvert_ = 0;
  double objective_ = 0.0;
  long total_iterations_ = 0;
};

}  // namespace bilicover

#endif  // BILICOVER_LP_HPP
