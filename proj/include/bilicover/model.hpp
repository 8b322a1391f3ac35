#ifndef BILICOVER_MODEL_HPP
#define BILICOVER_MODEL_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bilicover {

enum class SignMode { NonNegative, MixedSigns };

std::string to_string(SignMode mode);
SignMode sign_mode_from_string(const std::string& token);

// One sparse bilinear constraint  sum_i a_i * x_i * y_i >= d.
// Terms are kept sorted by variable index; zero coefficients are never
// stored.
struct BilinearRow {
  int row_index = 0;
  std::vector<int> var_index;    // strictly increasing
  std::vector<double> coeff;     // same length, all nonzero
  double rhs = 0.0;

  int support_size() const { return static_cast<int>(var_index.size()); }
  bool operator==(const BilinearRow&) const = default;
};

struct BilinearInstance {
  int n = 0;  // number of (x_i, y_i) pairs
  int m = 0;  // number of bilinear rows
  std::vector<double> cx, cy;
  std::vector<BilinearRow> rows;
  SignMode sign_mode = SignMode::NonNegative;
  std::uint64_t seed = 0;

  bool operator==(const BilinearInstance&) const = default;
};

// A point of the [0,1]^{2n} box.
struct PointXY {
  std::vector<double> x, y;

  std::size_t size() const { return x.size(); }
};

bool operator==(const PointXY& a, const PointXY& b);

// Validates the structural invariants (sorted unique indices in range,
// nonzero coefficients, sign mode consistency). Throws
// std::invalid_argument on violation.
void validate_instance(const BilinearInstance& inst);

// Random sparse instance of the separable bilinear model. Coefficients
// cx, cy ~ U[0,1); each a_i^j is nonzero with probability p, drawn from
// U[0,1) (NonNegative) or U[-1,1) (MixedSigns); with s_j the row sum,
// d_j = r_j*s_j where r_j ~ U[0,1) if s_j > 0 and r_j ~ U[1,2)
// otherwise. Rows that draw an empty support are redrawn from the same
// per-row substream until nonempty. Identical arguments give a
// bit-identical instance: the generator consumes one substream per row
// and one for the objectives.
BilinearInstance generate_instance(int m, int n, double p, SignMode mode,
                                   std::uint64_t seed);

// sum_i a_i x_i y_i - d  (>= 0 means the row is satisfied at pt).
double evaluate_row(const BilinearRow& row, const PointXY& pt);

// True bilinear objective c_x.x + c_y.y.
double evaluate_objective(const BilinearInstance& inst, const PointXY& pt);

// Smallest row residual min_j evaluate_row(j, pt); >= -tol means feasible.
double min_row_residual(const BilinearInstance& inst, const PointXY& pt);

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ")"),
        line_number(line) {}
  int line_number;
};

// Text round-trip. Reals are serialized with 17 significant digits so
// read(write(inst)) == inst holds bit-exactly.
void write_instance(const BilinearInstance& inst, const std::string& path);
BilinearInstance read_instance(const std::string& path);

std::string instance_to_string(const BilinearInstance& inst);
BilinearInstance instance_from_string(const std::string& text);

}  // namespace bilicover

#endif  // BILICOVER_MODEL_HPP
