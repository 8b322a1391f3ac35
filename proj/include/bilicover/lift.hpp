#ifndef BILICOVER_LIFT_HPP
#define BILICOVER_LIFT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "bilicover/cover.hpp"
#include "bilicover/model.hpp"

namespace bilicover {

// Term family of one support position inside a lifted cut.
enum class GammaCase : unsigned char {
  SeedI,           // i in I: seed coefficient * (sqrt(x y) - 1)
  J0plus,          // l+ a min{x,y}
  J1minus,         // -l+ a min{2-x-y, 1}
  J0minus,         // min{l- a (x+y-1), l+ a (x+y-1) + l+ D - 1, 0}
  J1plusFull,      // min{g~, h~, g, h}; needs a_i >= a_{i0}
  J1plusReduced,   // min{g~, h~}
};

// One lifted bilinear cover inequality: seed terms over I plus concave
// lifting terms gamma_i for the indices outside I. The inequality reads
// LHS >= -1 and is valid for the full bilinear set.
struct LiftedCut {
  CoverPartition partition;
  std::uint64_t cut_id = 0;
  std::vector<GammaCase> term_case;  // per support position
  std::vector<double> seed_coef;     // per support position, 0 outside I
};

LiftedCut build_cut(const CoverPartition& part);

double eval_cut_lhs(const LiftedCut& cut, const PointXY& pt);

// max(0, -1 - LHS); positive means pt violates the cut.
double cut_violation(const LiftedCut& cut, const PointXY& pt);

// Supporting hyperplane of the concave LHS. `value` is the hyperplane's
// height at `at`; it equals the exact LHS whenever `at` keeps every
// sqrt argument above the 1e-6 clamp floor and only overestimates it
// otherwise, so the plane  value + g.(p - at)  majorizes the LHS on the
// whole box in both cases. Gradients are sparse over the row support.
struct CutLinearization {
  double value = 0.0;
  std::vector<int> var_index;
  std::vector<double> gx, gy;
};

CutLinearization supergradient(const LiftedCut& cut, const PointXY& at);

// Single-row concave cut  sum sqrt(a_i x_i y_i) >= sqrt(d)  for
// nonnegative rows; shares the linearization machinery above.
struct MtCut {
  BilinearRow row;
  std::uint64_t cut_id = 0;
};

MtCut build_mt_cut(const BilinearRow& row);
double eval_mt_lhs(const MtCut& cut, const PointXY& pt);
double mt_violation(const MtCut& cut, const PointXY& pt);
CutLinearization mt_supergradient(const MtCut& cut, const PointXY& at);

// One-line audit format:
// cut <row> I:<idx,..> J0:<idx,..> J1:<idx,..> lplus:<v> lminus:<v>
std::string cut_dump_line(const LiftedCut& cut);

}  // namespace bilicover

#endif  // BILICOVER_LIFT_HPP
