#ifndef BILICOVER_COVER_HPP
#define BILICOVER_COVER_HPP

#include <cstdint>
#include <vector>

#include "bilicover/model.hpp"

namespace bilicover {

enum class PartitionLabel : unsigned char { I, J0, J1 };

// Reported in the priority the separation loop repairs them: a
// non-positive reduced right-hand side first, then a deficient cover,
// then a non-minimal one. An empty I always fails one of the first two
// numeric checks, so EmptyI is never produced by validate_partition; it
// stays in the enum for callers that pre-screen labelings themselves.
// NonPositiveCoeffInI guards hand-built labelings only.
enum class InvalidReason {
  RhsNotPositive,
  NotACover,
  NotMinimal,
  EmptyI,
  NonPositiveCoeffInI,
};

const char* to_string(InvalidReason reason);

// Labeling of a row's support plus the derived cover quantities. Labels
// are positional: labels[k] belongs to row.var_index[k].
struct CoverPartition {
  BilinearRow row;
  std::vector<PartitionLabel> labels;
  double d_lambda = 0.0;  // d - sum_{J1} a_i
  double delta = 0.0;     // sum_I a_i - d_lambda
  std::vector<double> residual;  // a_k - delta per position (>= 0 on I)
  int i0_pos = -1;               // support position of i0, -1 when I^> empty
  double l_plus = 0.0, l_minus = 0.0;

  bool in_I(int k) const { return labels[k] == PartitionLabel::I; }
};

struct PartitionValidation {
  bool valid = false;
  InvalidReason reason = InvalidReason::NotACover;
  CoverPartition partition;  // populated only when valid
};

// Checks that {a_i : i in I} forms a minimal cover of d_lambda and
// derives the cover quantities. `labels` must match the row support
// positionally (contract error otherwise). Comparisons against zero use
// a 1e-12 absolute tolerance.
PartitionValidation validate_partition(const BilinearRow& row,
                                       const std::vector<PartitionLabel>& labels);

// sqrt(a_i) / (sqrt(a_i) - sqrt(d_i)) for a support position labeled I;
// >= 1 and finite for any valid partition.
double seed_coefficient(const CoverPartition& part, int support_pos);

// sum_{i in I} seed_coefficient * (sqrt(x_i y_i) - 1); the seed
// inequality states LHS >= -1 on the cover restriction.
double eval_seed_lhs(const CoverPartition& part, const PointXY& pt);

// sum_i sqrt(a_i x_i y_i) - sqrt(d) for a nonnegative row with d > 0;
// the inequality states LHS >= 0. Throws std::domain_error when a
// negative coefficient is present (the cut has no mixed-signs form) and
// std::invalid_argument when d <= 0.
double mt_cut_lhs(const BilinearRow& row, const PointXY& pt);

// Stable 64-bit hash of (row_index, labels); identifies a partition.
std::uint64_t partition_hash(int row_index,
                             const std::vector<PartitionLabel>& labels);

}  // namespace bilicover

#endif  // BILICOVER_COVER_HPP
