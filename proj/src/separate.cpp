#include "bilicover/separate.hpp"

#include <stdexcept>

#include "bilicover/parallel.hpp"

namespace bilicover {

namespace {
constexpr std::uint64_t kSeparateTag = 0x736570ULL;
}

void validate_config(const SeparationConfig& cfg) {
  if (!(cfg.epsilon > 0.0) || !(cfg.epsilon < 0.5))
    throw std::invalid_argument("epsilon must lie in (0, 0.5)");
  if (!(cfg.violation_tol > 0.0))
    throw std::invalid_argument("violation_tol must be positive");
  if (cfg.sj_multiplier < 1)
    throw std::invalid_argument("S_j multiplier must be >= 1");
}

Rng row_rng(const SeparationConfig& cfg, std::uint64_t iteration, int row_index) {
  return Rng(substream_seed(cfg.rng_seed, kSeparateTag ^ (iteration << 20),
                            static_cast<std::uint64_t>(row_index)));
}

std::vector<PartitionLabel> initial_labels(const BilinearRow& row,
                                           const PointXY& pt,
                                           const SeparationConfig& cfg, Rng& rng) {
  std::vector<PartitionLabel> labels(row.support_size());
  for (int p = 0; p < row.support_size(); ++p) {
    int i = row.var_index[p];
    double prod = pt.x[i] * pt.y[i];
    if (prod < cfg.epsilon) {
      labels[p] = PartitionLabel::J0;
    } else if (prod > 1.0 - cfg.epsilon) {
      labels[p] = PartitionLabel::J1;
    } else if (row.coeff[p] > 0.0) {
      labels[p] = PartitionLabel::I;
    } else {
      labels[p] = rng.uniform01() < prod ? PartitionLabel::J1 : PartitionLabel::J0;
    }
  }
  return labels;
}

RepairOutcome repair(const BilinearRow& row, std::vector<PartitionLabel>& labels,
                     InvalidReason reason, Rng& rng) {
  const int k = row.support_size();
  switch (reason) {
    case InvalidReason::RhsNotPositive: {
      // flip a positive J1 into the cover, or push a negative J0 to J1;
      // both raise d_lambda
      std::vector<int> eligible;
      for (int p = 0; p < k; ++p) {
        bool pos_j1 = row.coeff[p] > 0.0 && labels[p] == PartitionLabel::J1;
        bool neg_j0 = row.coeff[p] < 0.0 && labels[p] == PartitionLabel::J0;
        if (pos_j1 || neg_j0) eligible.push_back(p);
      }
      if (eligible.empty()) return RepairOutcome::Exhausted;
      int p = eligible[rng.uniform_index(eligible.size())];
      labels[p] = row.coeff[p] > 0.0 ? PartitionLabel::I : PartitionLabel::J1;
      return RepairOutcome::Adjusted;
    }
    case InvalidReason::EmptyI:  // same numeric branch as NotACover
    case InvalidReason::NotACover: {
      // grow delta: positive J0 -> J1 or negative J1 -> J0
      std::vector<int> eligible;
      for (int p = 0; p < k; ++p) {
        bool pos_j0 = row.coeff[p] > 0.0 && labels[p] == PartitionLabel::J0;
        bool neg_j1 = row.coeff[p] < 0.0 && labels[p] == PartitionLabel::J1;
        if (pos_j0 || neg_j1) eligible.push_back(p);
      }
      if (eligible.empty()) return RepairOutcome::Exhausted;
      int p = eligible[rng.uniform_index(eligible.size())];
      labels[p] = row.coeff[p] > 0.0 ? PartitionLabel::J1 : PartitionLabel::J0;
      return RepairOutcome::Adjusted;
    }
    case InvalidReason::NotMinimal: {
      // deterministic: drop the smallest cover coefficient to J1
      int best = -1;
      for (int p = 0; p < k; ++p) {
        if (labels[p] != PartitionLabel::I) continue;
        if (best < 0 || row.coeff[p] < row.coeff[best]) best = p;
      }
      if (best < 0) return RepairOutcome::Exhausted;
      labels[best] = PartitionLabel::J1;
      return RepairOutcome::Adjusted;
    }
    case InvalidReason::NonPositiveCoeffInI:
      return RepairOutcome::Exhausted;  // unreachable from Algorithm-2 labelings
  }
  return RepairOutcome::Exhausted;
}

std::optional<LiftedCut> separate_row(const BilinearRow& row, const PointXY& pt,
                                      const SeparationConfig& cfg, Rng& rng) {
  if (evaluate_row(row, pt) >= 0.0) return std::nullopt;  // zero draws used

  std::vector<PartitionLabel> labels = initial_labels(row, pt, cfg, rng);
  PartitionValidation validation = validate_partition(row, labels);
  if (!validation.valid) {
    const int budget = cfg.sj_multiplier * row.support_size();
    for (int s = 0; s < budget && !validation.valid; ++s) {
      if (repair(row, labels, validation.reason, rng) == RepairOutcome::Exhausted)
        return std::nullopt;
      validation = validate_partition(row, labels);
    }
    if (!validation.valid) return std::nullopt;
  }

  LiftedCut cut = build_cut(validation.partition);
  if (eval_cut_lhs(cut, pt) < -1.0 - cfg.violation_tol) return cut;
  return std::nullopt;  // valid partition but no violation; not retried here
}

std::vector<LiftedCut> separate_all(
    const BilinearInstance& inst, const PointXY& pt, const SeparationConfig& cfg,
    std::uint64_t iteration, SepClock::time_point deadline,
    const std::unordered_set<std::uint64_t>* pool_ids) {
  validate_config(cfg);
  std::vector<LiftedCut> cuts;
  for (const BilinearRow& row : inst.rows) {
    if (SepClock::now() >= deadline) break;
    Rng rng = row_rng(cfg, iteration, row.row_index);
    std::optional<LiftedCut> cut = separate_row(row, pt, cfg, rng);
    if (!cut) continue;
    if (pool_ids && pool_ids->count(cut->cut_id)) continue;
    cuts.push_back(std::move(*cut));
  }
  return cuts;
}

std::vector<LiftedCut> separate_all_parallel(
    const BilinearInstance& inst, const PointXY& pt, const SeparationConfig& cfg,
    std::uint64_t iteration, SepClock::time_point deadline,
    const std::unordered_set<std::uint64_t>* pool_ids) {
  validate_config(cfg);
  if (SepClock::now() >= deadline) return {};
  std::vector<std::optional<LiftedCut>> slots(inst.rows.size());
  parallel_for(static_cast<std::int64_t>(inst.rows.size()), Exec::OpenMP,
               [&](std::int64_t j) {
                 Rng rng = row_rng(cfg, iteration, inst.rows[j].row_index);
                 slots[j] = separate_row(inst.rows[j], pt, cfg, rng);
               });
  std::vector<LiftedCut> cuts;
  for (auto& slot : slots) {
    if (!slot) continue;
    if (pool_ids && pool_ids->count(slot->cut_id)) continue;
    cuts.push_back(std::move(*slot));
  }
  return cuts;
}

}  // namespace bilicover
