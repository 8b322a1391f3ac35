#ifndef BILICOVER_SEPARATE_HPP
#define BILICOVER_SEPARATE_HPP

#include <chrono>
#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "bilicover/cover.hpp"
#include "bilicover/lift.hpp"
#include "bilicover/model.hpp"
#include "bilicover/rng.hpp"

namespace bilicover {

struct SeparationConfig {
  double epsilon = 1e-2;       // label threshold on the products x_i y_i
  int sj_multiplier = 10;      // repair budget = multiplier * row support
  std::uint64_t rng_seed = 0;  // master seed for the per-row substreams
  double violation_tol = 1e-6;
};

void validate_config(const SeparationConfig& cfg);

using SepClock = std::chrono::steady_clock;
inline SepClock::time_point no_deadline() { return SepClock::time_point::max(); }

// Initial guess: products close to 0 go to J0, close to 1 to J1, the
// rest to I when the coefficient is positive and randomly to J1 (with
// probability x_i y_i) or J0 otherwise. One uniform draw per negative
// undecided index, consumed in increasing index order.
std::vector<PartitionLabel> initial_labels(const BilinearRow& row,
                                           const PointXY& pt,
                                           const SeparationConfig& cfg, Rng& rng);

enum class RepairOutcome { Adjusted, Exhausted };

// One label flip addressing the stated failure. Random flips draw one
// uniform index over the eligible set (positions in increasing order);
// the NotMinimal branch is deterministic.
RepairOutcome repair(const BilinearRow& row, std::vector<PartitionLabel>& labels,
                     InvalidReason reason, Rng& rng);

// Full per-row heuristic: skip satisfied rows, guess labels, repair up
// to S_j times, build the cut, return it only when violated at pt by
// more than violation_tol.
std::optional<LiftedCut> separate_row(const BilinearRow& row, const PointXY& pt,
                                      const SeparationConfig& cfg, Rng& rng);

// Row loop with one rng substream per (iteration, row). Honors the
// deadline between rows; cuts whose partition hash is already pooled
// are dropped. Returns cuts ordered by row index.
std::vector<LiftedCut> separate_all(
    const BilinearInstance& inst, const PointXY& pt, const SeparationConfig& cfg,
    std::uint64_t iteration, SepClock::time_point deadline,
    const std::unordered_set<std::uint64_t>* pool_ids = nullptr);

// OpenMP twin of separate_all. Work is keyed by row index so the output
// is bit-identical to the serial version; the deadline is only checked
// on entry (row granularity is given up inside the parallel region).
std::vector<LiftedCut> separate_all_parallel(
    const BilinearInstance& inst, const PointXY& pt, const SeparationConfig& cfg,
    std::uint64_t iteration, SepClock::time_point deadline,
    const std::unordered_set<std::uint64_t>* pool_ids = nullptr);

// substream for (iteration, row) used by both drivers
Rng row_rng(const SeparationConfig& cfg, std::uint64_t iteration, int row_index);

}  // namespace bilicover

#endif  // BILICOVER_SEPARATE_HPP
