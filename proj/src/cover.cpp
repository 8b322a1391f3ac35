#include "bilicover/cover.hpp"

#include <cmath>
#include <stdexcept>

namespace bilicover {

namespace {
constexpr double kZeroTol = 1e-12;  // cascaded subtractions on U[0,1) data
}

const char* to_string(InvalidReason reason) {
  switch (reason) {
    case InvalidReason::RhsNotPositive: return "RhsNotPositive";
    case InvalidReason::NotACover: return "NotACover";
    case InvalidReason::NotMinimal: return "NotMinimal";
    case InvalidReason::EmptyI: return "EmptyI";
    case InvalidReason::NonPositiveCoeffInI: return "NonPositiveCoeffInI";
  }
  return "?";
}

PartitionValidation validate_partition(const BilinearRow& row,
                                       const std::vector<PartitionLabel>& labels) {
  if (labels.size() != row.var_index.size())
    throw std::invalid_argument("labels must cover the row support exactly");

  PartitionValidation out;
  const int k = row.support_size();

  for (int p = 0; p < k; ++p) {
    if (labels[p] != PartitionLabel::I) continue;
    if (row.coeff[p] <= kZeroTol) {
      out.reason = InvalidReason::NonPositiveCoeffInI;
      return out;
    }
  }

  double d_lambda = row.rhs;
  for (int p = 0; p < k; ++p)
    if (labels[p] == PartitionLabel::J1) d_lambda -= row.coeff[p];
  if (d_lambda <= kZeroTol) {
    out.reason = InvalidReason::RhsNotPositive;
    return out;
  }

  double cover_sum = 0.0;
  for (int p = 0; p < k; ++p)
    if (labels[p] == PartitionLabel::I) cover_sum += row.coeff[p];
  double delta = cover_sum - d_lambda;
  if (delta <= kZeroTol) {
    // An empty I always lands in this branch or the one above
    // (delta = -d_lambda), so the reported reason follows the repair
    // dispatch and EmptyI stays a caller-side signal.
    out.reason = InvalidReason::NotACover;
    return out;
  }

  for (int p = 0; p < k; ++p) {
    if (labels[p] == PartitionLabel::I && row.coeff[p] - delta < -kZeroTol) {
      out.reason = InvalidReason::NotMinimal;
      return out;
    }
  }

  CoverPartition part;
  part.row = row;
  part.labels = labels;
  part.d_lambda = d_lambda;
  part.delta = delta;
  part.residual.resize(k);
  for (int p = 0; p < k; ++p) {
    double r = row.coeff[p] - delta;
    if (labels[p] == PartitionLabel::I && r < 0.0) r = 0.0;  // tolerance dust
    part.residual[p] = r;
  }
  // i0: smallest-index minimizer of a_i over I^> = {i in I : a_i > delta}
  part.i0_pos = -1;
  for (int p = 0; p < k; ++p) {
    if (labels[p] != PartitionLabel::I || part.residual[p] <= kZeroTol) continue;
    if (part.i0_pos < 0 || row.coeff[p] < row.coeff[part.i0_pos]) part.i0_pos = p;
  }
  part.l_minus = 1.0 / delta;
  if (part.i0_pos >= 0) {
    double a0 = row.coeff[part.i0_pos];
    double d0 = part.residual[part.i0_pos];
    part.l_plus = (std::sqrt(a0) + std::sqrt(d0)) / (delta * std::sqrt(d0));
  } else {
    part.l_plus = part.l_minus;
  }

  out.valid = true;
  out.partition = std::move(part);
  return out;
}

double seed_coefficient(const CoverPartition& part, int support_pos) {
  double a = part.row.coeff[support_pos];
  double d = part.residual[support_pos];
  return std::sqrt(a) / (std::sqrt(a) - std::sqrt(d));
}

double eval_seed_lhs(const CoverPartition& part, const PointXY& pt) {
  double acc = 0.0;
  for (int p = 0; p < part.row.support_size(); ++p) {
    if (!part.in_I(p)) continue;
    int i = part.row.var_index[p];
    double prod = pt.x[i] * pt.y[i];
    if (prod < 0.0) prod = 0.0;
    acc += seed_coefficient(part, p) * (std::sqrt(prod) - 1.0);
  }
  return acc;
}

double mt_cut_lhs(const BilinearRow& row, const PointXY& pt) {
  if (!(row.rhs > 0.0))
    throw std::invalid_argument("mt_cut_lhs requires d > 0");
  double acc = -std::sqrt(row.rhs);
  for (int p = 0; p < row.support_size(); ++p) {
    if (row.coeff[p] < 0.0)
      throw std::domain_error("mt cut is unsupported for mixed-sign rows");
    int i = row.var_index[p];
    double prod = row.coeff[p] * pt.x[i] * pt.y[i];
    if (prod < 0.0) prod = 0.0;
    acc += std::sqrt(prod);
  }
  return acc;
}

std::uint64_t partition_hash(int row_index,
                             const std::vector<PartitionLabel>& labels) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ (static_cast<std::uint64_t>(row_index) << 17);
  for (PartitionLabel l : labels) {
    h ^= static_cast<std::uint64_t>(l) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0x94d049bb133111ebULL;
  }
  return h;
}

}  // namespace bilicover
