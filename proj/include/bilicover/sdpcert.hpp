#ifndef BILICOVER_SDPCERT_HPP
#define BILICOVER_SDPCERT_HPP

#include <vector>

#include <Eigen/Dense>

#include "bilicover/model.hpp"

namespace bilicover {

// Moment matrix W* assembled from a McCormick-feasible point: border
// and diagonal carry u = (x, y), the matched off-diagonal pairs carry
// the product variables w, everything else u_i u_k.
struct MomentMatrix {
  Eigen::MatrixXd w;  // (2n+1) x (2n+1), symmetric
  std::vector<double> x, y, wdiag;

  int pairs() const { return static_cast<int>(x.size()); }
};

// Contract: max{0, x_i + y_i - 1} <= w_i <= min{x_i, y_i} within 1e-7
// (throws std::invalid_argument otherwise).
MomentMatrix build_wstar(const std::vector<double>& x,
                         const std::vector<double>& y,
                         const std::vector<double>& w);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, driven
// to an off-diagonal residual of `tol` relative to the Frobenius norm.
// Returned ascending.
std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a, double tol = 1e-10);

struct CertifyResult {
  bool certified = false;             // eigenvalue route
  double min_eigenvalue = 0.0;
  bool gershgorin_certified = false;  // decomposition route on W* - G
  double worst_row_margin = 0.0;      // min_i (u_i - u_i^2 - |w_i - x_i y_i|)

  bool routes_agree() const { return certified == gershgorin_certified; }
};

// Both certification routes: the smallest eigenvalue of W* and the
// per-row Gershgorin condition on W* - (1,u)(1,u)^T. Certified means
// min eigenvalue >= -tol.
CertifyResult certify_psd(const MomentMatrix& wm, double tol = 1e-8);

enum class SdpCertStatus { Verified, Infeasible };

struct SdpCertificate {
  SdpCertStatus status = SdpCertStatus::Infeasible;
  double z_mc = 0.0;
  CertifyResult cert;
};

// Solves the McCormick LP, extends its optimum to a moment matrix and
// certifies semidefiniteness, which pins the SDP-strengthened bound to
// z_mc. An infeasible LP makes both relaxations infeasible.
SdpCertificate verify_sdp_equals_mccormick(const BilinearInstance& inst);

}  // namespace bilicover

#endif  // BILICOVER_SDPCERT_HPP
