#include "bilicover/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "bilicover/rng.hpp"

namespace bilicover {

namespace {
constexpr std::uint64_t kObjectiveTag = 0x6f626a65637469ULL;  // stream for cx, cy
constexpr std::uint64_t kRowTag = 0x726f77ULL;                // one stream per row

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

std::string to_string(SignMode mode) {
  return mode == SignMode::NonNegative ? "NonNegative" : "MixedSigns";
}

SignMode sign_mode_from_string(const std::string& token) {
  if (token == "NonNegative") return SignMode::NonNegative;
  if (token == "MixedSigns") return SignMode::MixedSigns;
  throw std::invalid_argument("unknown sign mode: " + token);
}

bool operator==(const PointXY& a, const PointXY& b) {
  return a.x == b.x && a.y == b.y;
}

void validate_instance(const BilinearInstance& inst) {
  if (inst.n < 1 || inst.m < 1) throw std::invalid_argument("m, n must be >= 1");
  if (static_cast<int>(inst.cx.size()) != inst.n ||
      static_cast<int>(inst.cy.size()) != inst.n)
    throw std::invalid_argument("objective vectors must have length n");
  if (static_cast<int>(inst.rows.size()) != inst.m)
    throw std::invalid_argument("row count mismatch");
  for (const BilinearRow& row : inst.rows) {
    if (row.var_index.size() != row.coeff.size())
      throw std::invalid_argument("row index/coeff length mismatch");
    if (row.var_index.empty())
      throw std::invalid_argument("empty row support");
    int prev = -1;
    for (std::size_t k = 0; k < row.var_index.size(); ++k) {
      int idx = row.var_index[k];
      if (idx <= prev)
        throw std::invalid_argument("row indices must be strictly increasing");
      if (idx < 0 || idx >= inst.n)
        throw std::invalid_argument("var_index out of range");
      if (row.coeff[k] == 0.0)
        throw std::invalid_argument("zero coefficients are not stored");
      if (inst.sign_mode == SignMode::NonNegative && row.coeff[k] < 0.0)
        throw std::invalid_argument("negative coefficient in NonNegative instance");
      prev = idx;
    }
  }
}

BilinearInstance generate_instance(int m, int n, double p, SignMode mode,
                                   std::uint64_t seed) {
  if (!(p > 0.0) || p > 1.0)
    throw std::invalid_argument("density p must lie in (0, 1]");
  if (m < 1 || n < 1) throw std::invalid_argument("m, n must be >= 1");

  BilinearInstance inst;
  inst.m = m;
  inst.n = n;
  inst.sign_mode = mode;
  inst.seed = seed;
  inst.cx.resize(n);
  inst.cy.resize(n);

  Rng obj_rng(substream_seed(seed, kObjectiveTag));
  for (int i = 0; i < n; ++i) inst.cx[i] = obj_rng.uniform01();
  for (int i = 0; i < n; ++i) inst.cy[i] = obj_rng.uniform01();

  inst.rows.resize(m);
  for (int j = 0; j < m; ++j) {
    Rng row_rng(substream_seed(seed, kRowTag, static_cast<std::uint64_t>(j)));
    BilinearRow& row = inst.rows[j];
    row.row_index = j;
    do {  // empty supports are redrawn entirely
      row.var_index.clear();
      row.coeff.clear();
      for (int i = 0; i < n; ++i) {
        if (row_rng.uniform01() >= p) continue;
        double a = mode == SignMode::NonNegative ? row_rng.uniform01()
                                                 : row_rng.uniform(-1.0, 1.0);
        if (a == 0.0) continue;  // measure-zero draw; treat as structural zero
        row.var_index.push_back(i);
        row.coeff.push_back(a);
      }
    } while (row.var_index.empty());
    double s = 0.0;
    for (double a : row.coeff) s += a;
    double r = s > 0.0 ? row_rng.uniform01() : row_rng.uniform(1.0, 2.0);
    row.rhs = r * s;
  }
  return inst;
}

double evaluate_row(const BilinearRow& row, const PointXY& pt) {
  double acc = -row.rhs;
  for (std::size_t k = 0; k < row.var_index.size(); ++k) {
    int i = row.var_index[k];
    acc += row.coeff[k] * pt.x[i] * pt.y[i];
  }
  return acc;
}

double evaluate_objective(const BilinearInstance& inst, const PointXY& pt) {
  double acc = 0.0;
  for (int i = 0; i < inst.n; ++i) acc += inst.cx[i] * pt.x[i] + inst.cy[i] * pt.y[i];
  return acc;
}

double min_row_residual(const BilinearInstance& inst, const PointXY& pt) {
  double worst = std::numeric_limits<double>::infinity();
  for (const BilinearRow& row : inst.rows) {
    double r = evaluate_row(row, pt);
    if (r < worst) worst = r;
  }
  return worst;
}

std::string instance_to_string(const BilinearInstance& inst) {
  std::ostringstream out;
  out << "bilinear " << inst.m << ' ' << inst.n << ' ' << to_string(inst.sign_mode)
      << ' ' << inst.seed << '\n';
  out << "cx";
  for (double v : inst.cx) out << ' ' << format_real(v);
  out << "\ncy";
  for (double v : inst.cy) out << ' ' << format_real(v);
  out << '\n';
  for (const BilinearRow& row : inst.rows) {
    out << "row " << row.row_index << ' ' << format_real(row.rhs) << ' '
        << row.support_size();
    for (int k = 0; k < row.support_size(); ++k)
      out << ' ' << row.var_index[k] << ' ' << format_real(row.coeff[k]);
    out << '\n';
  }
  return out.str();
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::istringstream& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      if (line.empty() || line[0] == '#') continue;
      fields = std::istringstream(line);
      return true;
    }
    return false;
  }

  int line() const { return line_; }

 private:
  std::istream& in_;
  int line_ = 0;
};

}  // namespace

BilinearInstance instance_from_string(const std::string& text) {
  std::istringstream in(text);
  LineReader reader(in);
  std::istringstream fields;

  if (!reader.next(fields)) throw ParseError("missing header", reader.line());
  std::string word, mode_token;
  BilinearInstance inst;
  if (!(fields >> word >> inst.m >> inst.n >> mode_token >> inst.seed) ||
      word != "bilinear")
    throw ParseError("malformed header, expected 'bilinear m n mode seed'",
                     reader.line());
  try {
    inst.sign_mode = sign_mode_from_string(mode_token);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), reader.line());
  }
  if (inst.m < 1 || inst.n < 1) throw ParseError("m, n must be >= 1", reader.line());

  auto read_vector = [&](const char* tag, std::vector<double>& out_vec) {
    if (!reader.next(fields)) throw ParseError("missing objective line", reader.line());
    if (!(fields >> word) || word != tag)
      throw ParseError(std::string("expected '") + tag + "' line", reader.line());
    out_vec.resize(inst.n);
    for (int i = 0; i < inst.n; ++i)
      if (!(fields >> out_vec[i]))
        throw ParseError("objective line too short", reader.line());
  };
  read_vector("cx", inst.cx);
  read_vector("cy", inst.cy);

  inst.rows.resize(inst.m);
  for (int j = 0; j < inst.m; ++j) {
    if (!reader.next(fields)) throw ParseError("missing row line", reader.line());
    BilinearRow& row = inst.rows[j];
    int count = 0;
    if (!(fields >> word >> row.row_index >> row.rhs >> count) || word != "row")
      throw ParseError("malformed row line", reader.line());
    if (row.row_index != j)
      throw ParseError("rows must appear in index order", reader.line());
    if (count < 1) throw ParseError("row must have nonempty support", reader.line());
    row.var_index.resize(count);
    row.coeff.resize(count);
    for (int k = 0; k < count; ++k)
      if (!(fields >> row.var_index[k] >> row.coeff[k]))
        throw ParseError("row line too short", reader.line());
    int prev = -1;
    for (int k = 0; k < count; ++k) {
      if (row.var_index[k] <= prev)
        throw ParseError("row indices must be strictly increasing (duplicate?)",
                         reader.line());
      if (row.var_index[k] < 0 || row.var_index[k] >= inst.n)
        throw ParseError("var_index out of range", reader.line());
      if (row.coeff[k] == 0.0)
        throw ParseError("zero coefficient stored in row", reader.line());
      prev = row.var_index[k];
    }
  }
  validate_instance(inst);
  return inst;
}

void write_instance(const BilinearInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << instance_to_string(inst);
  if (!out) throw std::runtime_error("write failed: " + path);
}

BilinearInstance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_string(buf.str());
}

}  // namespace bilicover
