#include "bilicover/sdpcert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bilicover/relax.hpp"

namespace bilicover {

MomentMatrix build_wstar(const std::vector<double>& x,
                         const std::vector<double>& y,
                         const std::vector<double>& w) {
  const int n = static_cast<int>(x.size());
  if (static_cast<int>(y.size()) != n || static_cast<int>(w.size()) != n)
    throw std::invalid_argument("x, y, w must have equal length");
  for (int i = 0; i < n; ++i) {
    double lo = std::max(0.0, x[i] + y[i] - 1.0);
    double hi = std::min(x[i], y[i]);
    if (w[i] < lo - 1e-7 || w[i] > hi + 1e-7)
      throw std::invalid_argument("point is not McCormick-feasible");
  }

  MomentMatrix wm;
  wm.x = x;
  wm.y = y;
  wm.wdiag = w;
  const int dim = 2 * n + 1;
  wm.w.resize(dim, dim);
  std::vector<double> u(2 * n);
  for (int i = 0; i < n; ++i) {
    u[i] = x[i];
    u[n + i] = y[i];
  }
  wm.w(0, 0) = 1.0;
  for (int i = 1; i < dim; ++i) {
    wm.w(0, i) = u[i - 1];
    wm.w(i, 0) = u[i - 1];
    wm.w(i, i) = u[i - 1];
    for (int k = i + 1; k < dim; ++k) {
      double v = (k - i == n) ? w[i - 1] : u[i - 1] * u[k - 1];
      wm.w(i, k) = v;
      wm.w(k, i) = v;
    }
  }
  return wm;
}

std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a, double tol) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw std::invalid_argument("matrix must be square");
  if (n == 0) return {};
  double fro = a.norm();
  double target = tol * (1.0 + fro);

  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += 2.0 * a(p, q) * a(p, q);
    if (std::sqrt(off) <= target) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (std::abs(apq) <= 0.01 * target / n) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        // A <- J^T A J on rows/cols p, q
        for (int k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

CertifyResult certify_psd(const MomentMatrix& wm, double tol) {
  CertifyResult out;
  std::vector<double> eig = jacobi_eigenvalues(wm.w);
  out.min_eigenvalue = eig.front();
  out.certified = out.min_eigenvalue >= -tol;

  // Decomposition route: W* - (1,u)(1,u)^T is block diagonal with one
  // nonzero off-diagonal entry per row; Gershgorin reduces PSD to the
  // per-row margins below (both the x-row and the y-row of each pair).
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < wm.pairs(); ++i) {
    double dev = std::abs(wm.wdiag[i] - wm.x[i] * wm.y[i]);
    double mx = wm.x[i] - wm.x[i] * wm.x[i] - dev;
    double my = wm.y[i] - wm.y[i] * wm.y[i] - dev;
    worst = std::min(worst, std::min(mx, my));
  }
  out.worst_row_margin = worst;
  out.gershgorin_certified = worst >= -tol;
  return out;
}

SdpCertificate verify_sdp_equals_mccormick(const BilinearInstance& inst) {
  RelaxationState state(inst);
  RelaxationSolution sol = state.solve();
  SdpCertificate cert;
  if (sol.status != LpStatus::Optimal) {
    cert.status = SdpCertStatus::Infeasible;
    return cert;
  }
  // squeeze LP tolerance dust back inside the envelopes before building
  std::vector<double> w = sol.w;
  for (int i = 0; i < inst.n; ++i) {
    double lo = std::max(0.0, sol.point.x[i] + sol.point.y[i] - 1.0);
    double hi = std::min(sol.point.x[i], sol.point.y[i]);
    w[i] = std::min(std::max(w[i], lo), hi);
  }
  MomentMatrix wm = build_wstar(sol.point.x, sol.point.y, w);
  cert.cert = certify_psd(wm);
  if (!cert.cert.certified || !cert.cert.routes_agree())
    throw SolverError("moment matrix certification failed unexpectedly");
  cert.status = SdpCertStatus::Verified;
  cert.z_mc = sol.z;
  return cert;
}

}  // namespace bilicover
