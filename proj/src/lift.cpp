#include "bilicover/lift.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace bilicover {

namespace {

constexpr double kSqrtClamp = 1e-6;  // floor inside sqrt for gradients

double clamped(double v) { return v < kSqrtClamp ? kSqrtClamp : v; }

double sqrt_prod(double x, double y) {
  double p = x * y;
  return p <= 0.0 ? 0.0 : std::sqrt(p);
}

// Tangent of c*sqrt(x y) taken at the clamped point; returns the plane
// evaluated at (x, y) and accumulates its gradient. The plane majorizes
// c*sqrt(x y) on the whole box (tangent of a concave function at an
// interior point), which is what keeps linearization rows valid even
// when the expansion point sits on the boundary.
double sqrt_tangent(double c, double x, double y, double& gx, double& gy) {
  double cx = clamped(x), cy = clamped(y);
  double s = std::sqrt(cx * cy);
  double dx = c * 0.5 * std::sqrt(cy / cx);
  double dy = c * 0.5 * std::sqrt(cx / cy);
  gx += dx;
  gy += dy;
  return c * s + dx * (x - cx) + dy * (y - cy);
}

struct TermContext {
  double a, l_plus, l_minus, delta, seed_coef;
};

double gamma_value(GammaCase gcase, const TermContext& t, double x, double y) {
  double mn = x < y ? x : y;
  switch (gcase) {
    case GammaCase::SeedI:
      return t.seed_coef * (sqrt_prod(x, y) - 1.0);
    case GammaCase::J0plus:
      return t.l_plus * t.a * mn;
    case GammaCase::J1minus: {
      double m = 2.0 - x - y;
      if (m > 1.0) m = 1.0;
      return -t.l_plus * t.a * m;
    }
    case GammaCase::J0minus: {
      double p1 = t.l_minus * t.a * (x + y - 1.0);
      double p2 = t.l_plus * t.a * (x + y - 1.0) + t.l_plus * t.delta - 1.0;
      double best = p1 < p2 ? p1 : p2;
      return best < 0.0 ? best : 0.0;
    }
    case GammaCase::J1plusFull:
    case GammaCase::J1plusReduced: {
      double gt = t.l_plus * t.a * (mn - 1.0) + t.l_plus * t.delta - 1.0;
      double ht = t.l_minus * t.a * (mn - 1.0);
      double best = gt < ht ? gt : ht;
      if (gcase == GammaCase::J1plusFull) {
        double d = t.a - t.delta;
        double g = std::sqrt(d) * std::sqrt(t.a) * t.l_plus * sqrt_prod(x, y) -
                   t.l_plus * d - 1.0;
        double h = std::sqrt(t.a) / (std::sqrt(t.a) - std::sqrt(d)) *
                   (sqrt_prod(x, y) - 1.0);
        if (g < best) best = g;
        if (h < best) best = h;
      }
      return best;
    }
  }
  return 0.0;
}

// Linearization of one term at (x, y); appends gradient, returns the
// supporting plane's value there. Min terms pick the minimizing piece
// by exact value with a fixed piece order on ties.
double gamma_tangent(GammaCase gcase, const TermContext& t, double x, double y,
                     double& gx, double& gy) {
  switch (gcase) {
    case GammaCase::SeedI: {
      double v = sqrt_tangent(t.seed_coef, x, y, gx, gy);
      return v - t.seed_coef;
    }
    case GammaCase::J0plus: {
      // min{x, y}: x-piece on ties
      if (x <= y) {
        gx += t.l_plus * t.a;
        return t.l_plus * t.a * x;
      }
      gy += t.l_plus * t.a;
      return t.l_plus * t.a * y;
    }
    case GammaCase::J1minus: {
      double q = -t.l_plus * t.a;  // positive (a < 0)
      if (2.0 - x - y <= 1.0) {
        gx -= q;
        gy -= q;
        return q * (2.0 - x - y);
      }
      return q;
    }
    case GammaCase::J0minus: {
      double p1 = t.l_minus * t.a * (x + y - 1.0);
      double p2 = t.l_plus * t.a * (x + y - 1.0) + t.l_plus * t.delta - 1.0;
      if (p1 <= p2 && p1 <= 0.0) {
        gx += t.l_minus * t.a;
        gy += t.l_minus * t.a;
        return p1;
      }
      if (p2 <= 0.0) {
        gx += t.l_plus * t.a;
        gy += t.l_plus * t.a;
        return p2;
      }
      return 0.0;
    }
    case GammaCase::J1plusFull:
    case GammaCase::J1plusReduced: {
      double mn = x < y ? x : y;
      double gt = t.l_plus * t.a * (mn - 1.0) + t.l_plus * t.delta - 1.0;
      double ht = t.l_minus * t.a * (mn - 1.0);
      int which = gt <= ht ? 0 : 1;
      double best = which == 0 ? gt : ht;
      double g = 0.0, h = 0.0, coef_g = 0.0, coef_h = 0.0;
      if (gcase == GammaCase::J1plusFull) {
        double d = t.a - t.delta;
        coef_g = std::sqrt(d) * std::sqrt(t.a) * t.l_plus;
        g = coef_g * sqrt_prod(x, y) - t.l_plus * d - 1.0;
        coef_h = std::sqrt(t.a) / (std::sqrt(t.a) - std::sqrt(d));
        h = coef_h * (sqrt_prod(x, y) - 1.0);
        if (g < best) {
          which = 2;
          best = g;
        }
        if (h < best) {
          which = 3;
          best = h;
        }
      }
      switch (which) {
        case 0:
          if (x <= y) gx += t.l_plus * t.a;
          else gy += t.l_plus * t.a;
          return gt;
        case 1:
          if (x <= y) gx += t.l_minus * t.a;
          else gy += t.l_minus * t.a;
          return ht;
        case 2: {
          double d = t.a - t.delta;
          return sqrt_tangent(coef_g, x, y, gx, gy) - t.l_plus * d - 1.0;
        }
        default:
          return sqrt_tangent(coef_h, x, y, gx, gy) - coef_h;
      }
    }
  }
  return 0.0;
}

TermContext term_context(const LiftedCut& cut, int pos) {
  const CoverPartition& part = cut.partition;
  return {part.row.coeff[pos], part.l_plus, part.l_minus, part.delta,
          cut.seed_coef[pos]};
}

}  // namespace

LiftedCut build_cut(const CoverPartition& part) {
  if (part.labels.size() != part.row.var_index.size() || part.delta <= 0.0 ||
      part.d_lambda <= 0.0)
    throw std::invalid_argument("build_cut needs a validated partition");

  LiftedCut cut;
  cut.partition = part;
  cut.cut_id = partition_hash(part.row.row_index, part.labels);
  const int k = part.row.support_size();
  cut.term_case.resize(k);
  cut.seed_coef.assign(k, 0.0);
  double a_i0 = part.i0_pos >= 0 ? part.row.coeff[part.i0_pos] : 0.0;

  for (int p = 0; p < k; ++p) {
    double a = part.row.coeff[p];
    switch (part.labels[p]) {
      case PartitionLabel::I:
        cut.term_case[p] = GammaCase::SeedI;
        cut.seed_coef[p] = seed_coefficient(part, p);
        break;
      case PartitionLabel::J0:
        cut.term_case[p] = a > 0.0 ? GammaCase::J0plus : GammaCase::J0minus;
        break;
      case PartitionLabel::J1:
        if (a < 0.0) {
          cut.term_case[p] = GammaCase::J1minus;
        } else {
          bool full = part.i0_pos >= 0 && a >= a_i0;
          cut.term_case[p] = full ? GammaCase::J1plusFull : GammaCase::J1plusReduced;
        }
        break;
    }
  }
  return cut;
}

double eval_cut_lhs(const LiftedCut& cut, const PointXY& pt) {
  double acc = 0.0;
  const BilinearRow& row = cut.partition.row;
  for (int p = 0; p < row.support_size(); ++p) {
    int i = row.var_index[p];
    acc += gamma_value(cut.term_case[p], term_context(cut, p), pt.x[i], pt.y[i]);
  }
  return acc;
}

double cut_violation(const LiftedCut& cut, const PointXY& pt) {
  double v = -1.0 - eval_cut_lhs(cut, pt);
  return v > 0.0 ? v : 0.0;
}

CutLinearization supergradient(const LiftedCut& cut, const PointXY& at) {
  CutLinearization lin;
  const BilinearRow& row = cut.partition.row;
  const int k = row.support_size();
  lin.var_index = row.var_index;
  lin.gx.assign(k, 0.0);
  lin.gy.assign(k, 0.0);
  for (int p = 0; p < k; ++p) {
    int i = row.var_index[p];
    lin.value += gamma_tangent(cut.term_case[p], term_context(cut, p), at.x[i],
                               at.y[i], lin.gx[p], lin.gy[p]);
  }
  return lin;
}

MtCut build_mt_cut(const BilinearRow& row) {
  if (!(row.rhs > 0.0))
    throw std::invalid_argument("mt cut requires d > 0");
  for (double a : row.coeff)
    if (a < 0.0)
      throw std::domain_error("mt cut is unsupported for mixed-sign rows");
  MtCut cut;
  cut.row = row;
  // distinct id space from partition hashes: mt has no labels
  cut.cut_id = partition_hash(row.row_index, {}) ^ 0x4d54ULL;
  return cut;
}

double eval_mt_lhs(const MtCut& cut, const PointXY& pt) {
  return mt_cut_lhs(cut.row, pt);
}

double mt_violation(const MtCut& cut, const PointXY& pt) {
  double v = -eval_mt_lhs(cut, pt);
  return v > 0.0 ? v : 0.0;
}

CutLinearization mt_supergradient(const MtCut& cut, const PointXY& at) {
  CutLinearization lin;
  const BilinearRow& row = cut.row;
  const int k = row.support_size();
  lin.var_index = row.var_index;
  lin.gx.assign(k, 0.0);
  lin.gy.assign(k, 0.0);
  lin.value = -std::sqrt(row.rhs);
  for (int p = 0; p < k; ++p) {
    int i = row.var_index[p];
    lin.value += sqrt_tangent(std::sqrt(row.coeff[p]), at.x[i], at.y[i],
                              lin.gx[p], lin.gy[p]);
  }
  return lin;
}

std::string cut_dump_line(const LiftedCut& cut) {
  const CoverPartition& part = cut.partition;
  auto list_of = [&](PartitionLabel which) {
    std::string out;
    for (int p = 0; p < part.row.support_size(); ++p) {
      if (part.labels[p] != which) continue;
      if (!out.empty()) out += ',';
      out += std::to_string(part.row.var_index[p]);
    }
    return out;
  };
  char tail[64];
  std::snprintf(tail, sizeof(tail), " lplus:%.12g lminus:%.12g", part.l_plus,
                part.l_minus);
  return "cut " + std::to_string(part.row.row_index) + " I:" +
         list_of(PartitionLabel::I) + " J0:" + list_of(PartitionLabel::J0) +
         " J1:" + list_of(PartitionLabel::J1) + tail;
}

}  // namespace bilicover
