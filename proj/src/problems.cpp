#include "proxdist/problems.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "proxdist/rng.hpp"

namespace proxdist::problems {

using json = nlohmann::ordered_json;

Eigen::Index MatrixData::rows() const {
  return is_sparse() ? sparse().rows() : dense().rows();
}

Eigen::Index MatrixData::cols() const {
  return is_sparse() ? sparse().cols() : dense().cols();
}

const MatrixXd& MatrixData::dense() const {
  if (is_sparse()) throw std::logic_error("MatrixData: storage is sparse");
  return std::get<MatrixXd>(data_);
}

const SparseMatrixXd& MatrixData::sparse() const {
  if (!is_sparse()) throw std::logic_error("MatrixData: storage is dense");
  return std::get<SparseMatrixXd>(data_);
}

MatrixXd MatrixData::to_dense() const {
  return is_sparse() ? MatrixXd(sparse()) : dense();
}

VectorXd MatrixData::apply(const VectorXd& x) const {
  return is_sparse() ? VectorXd(sparse() * x) : VectorXd(dense() * x);
}

VectorXd MatrixData::apply_t(const VectorXd& x) const {
  return is_sparse() ? VectorXd(sparse().transpose() * x)
                     : VectorXd(dense().transpose() * x);
}

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

void require_symmetric(const MatrixXd& a, const std::string& who) {
  require(a.rows() == a.cols(), who + ": matrix must be square");
  require(linalg::asymmetry(a) <= 1e-10, who + ": matrix must be symmetric");
}

}  // namespace

void LpProblem::validate() const {
  const auto m = A.rows();
  const auto n = A.cols();
  require(m >= 1 && n >= 1, "lp: A must be nonempty");
  require(m <= n, "lp: need m <= n");
  require(b.size() == m, "lp: b must have one entry per row of A");
  require(v.size() == n, "lp: v must have one entry per column of A");
}

void NqpProblem::validate() const {
  const auto n = A.rows();
  require(n >= 1, "nqp: A must be nonempty");
  require(A.cols() == n, "nqp: A must be square");
  require(b.size() == n, "nqp: b must match the order of A");
  if (!A.is_sparse()) {
    require_symmetric(A.dense(), "nqp");
  } else {
    const SparseMatrixXd diff = SparseMatrixXd(A.sparse().transpose()) - A.sparse();
    require(diff.norm() <= 1e-10 * (1.0 + A.sparse().norm()),
            "nqp: A must be symmetric");
  }
}

void KinshipProblem::validate() const { require_symmetric(Y, "kinship"); }

void SocProblem::validate() const {
  const auto m = A.rows();
  const auto n = A.cols();
  require(m >= 1 && n >= 1, "soc: A must be nonempty");
  require(x.size() == n, "soc: x must match the columns of A");
  require(b.size() == m, "soc: b must match the rows of A");
  require(c.size() == n, "soc: c must match the columns of A");
  require(std::isfinite(d), "soc: d must be finite");
}

void CopositivityProblem::validate() const {
  require_symmetric(M, "copositivity");
}

void LcpProblem::validate() const {
  const auto n = A.rows();
  require(n >= 1, "lcp: A must be nonempty");
  require(A.cols() == n, "lcp: A must be square");
  require(b.size() == n, "lcp: b must match the order of A");
}

int SpcaProblem::dim_p() const {
  if (S) return static_cast<int>(S->rows());
  if (X) return static_cast<int>(X->cols());
  return 0;
}

MatrixXd SpcaProblem::covariance() const {
  if (S) return *S;
  if (X) {
    return (X->transpose() * *X) / static_cast<double>(X->rows());
  }
  throw std::invalid_argument("spca: neither data nor covariance stored");
}

void SpcaProblem::validate() const {
  require(bool(X) || bool(S), "spca: need a data matrix or a covariance");
  if (S) require_symmetric(*S, "spca");
  const int p = dim_p();
  require(p >= 1, "spca: dimension must be positive");
  require(q >= 1 && q <= p, "spca: q must lie in [1, p]");
  if (mode == SparsityMode::Column) {
    require(r >= 1 && r <= p, "spca: column-mode r must lie in [1, p]");
  } else {
    require(r >= 1 && r <= p * q, "spca: matrix-mode r must lie in [1, p*q]");
  }
}

std::string kind_of(const ProblemInstance& inst) {
  static const char* names[] = {"lp",           "nqp", "kinship", "soc",
                                "copositivity", "lcp", "spca"};
  return names[inst.index()];
}

void validate(const ProblemInstance& inst) {
  std::visit([](const auto& p) { p.validate(); }, inst);
}

namespace {

json dense_to_json(const MatrixXd& a) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json matrix_to_json(const MatrixData& a) {
  json out;
  out["rows"] = a.rows();
  out["cols"] = a.cols();
  if (a.is_sparse()) {
    json triples = json::array();
    const SparseMatrixXd& s = a.sparse();
    for (int k = 0; k < s.outerSize(); ++k) {
      for (SparseMatrixXd::InnerIterator it(s, k); it; ++it) {
        triples.push_back(json::array({it.row() + 1, it.col() + 1, it.value()}));
      }
    }
    out["triples"] = std::move(triples);
  } else {
    out["dense"] = dense_to_json(a.dense());
  }
  return out;
}

json vector_to_json(const VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

const json& field(const json& obj, const std::string& kind,
                  const std::string& name) {
  auto it = obj.find(name);
  if (it == obj.end()) {
    throw std::invalid_argument(kind + " instance missing field '" + name + "'");
  }
  return *it;
}

double to_finite(const json& v, const std::string& where) {
  if (!v.is_number()) {
    throw std::invalid_argument(where + ": expected a number");
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw std::invalid_argument(where + ": non-finite value");
  return x;
}

MatrixXd dense_from_json(const json& rows, const std::string& where) {
  if (!rows.is_array() || rows.empty()) {
    throw std::invalid_argument(where + ": expected a nonempty array of rows");
  }
  const std::size_t ncols = rows[0].is_array() ? rows[0].size() : 0;
  if (ncols == 0) {
    throw std::invalid_argument(where + ": rows must be nonempty arrays");
  }
  MatrixXd a(rows.size(), ncols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != ncols) {
      throw std::invalid_argument(where + ": ragged rows");
    }
    for (std::size_t j = 0; j < ncols; ++j) {
      a(i, j) = to_finite(rows[i][j], where);
    }
  }
  return a;
}

MatrixData matrix_from_json(const json& obj, const std::string& where) {
  if (!obj.is_object()) {
    throw std::invalid_argument(where + ": expected a matrix object");
  }
  const auto rows = field(obj, where, "rows").get<Eigen::Index>();
  const auto cols = field(obj, where, "cols").get<Eigen::Index>();
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument(where + ": dimensions must be positive");
  }
  if (obj.contains("dense")) {
    MatrixXd a = dense_from_json(obj["dense"], where);
    if (a.rows() != rows || a.cols() != cols) {
      throw std::invalid_argument(where + ": declared dimensions disagree with data");
    }
    return MatrixData(std::move(a));
  }
  if (!obj.contains("triples")) {
    throw std::invalid_argument(where + ": need 'dense' or 'triples'");
  }
  const json& triples = obj["triples"];
  if (!triples.is_array()) {
    throw std::invalid_argument(where + ": triples must be an array");
  }
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(triples.size());
  std::set<std::pair<Eigen::Index, Eigen::Index>> seen;
  for (const json& t : triples) {
    if (!t.is_array() || t.size() != 3) {
      throw std::invalid_argument(where + ": each triple must be [i, j, v]");
    }
    const auto i = t[0].get<Eigen::Index>();
    const auto j = t[1].get<Eigen::Index>();
    const double v = to_finite(t[2], where);
    if (i < 1 || i > rows || j < 1 || j > cols) {
      throw std::invalid_argument(where + ": triple index out of range");
    }
    if (!seen.insert({i, j}).second) {
      throw std::invalid_argument(where + ": duplicate triple index");
    }
    entries.emplace_back(i - 1, j - 1, v);
  }
  SparseMatrixXd s(rows, cols);
  s.setFromTriplets(entries.begin(), entries.end());
  return MatrixData(std::move(s));
}

VectorXd vector_from_json(const json& arr, const std::string& where) {
  if (!arr.is_array() || arr.empty()) {
    throw std::invalid_argument(where + ": expected a nonempty array");
  }
  VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    v(i) = to_finite(arr[i], where);
  }
  return v;
}

}  // namespace

std::string to_json_string(const ProblemInstance& inst,
                           std::optional<std::uint64_t> seed) {
  json out;
  out["kind"] = kind_of(inst);
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, LpProblem>) {
          out["dims"] = {{"m", p.A.rows()}, {"n", p.A.cols()}};
          if (seed) out["seed"] = *seed;
          out["A"] = matrix_to_json(p.A);
          out["b"] = vector_to_json(p.b);
          out["v"] = vector_to_json(p.v);
        } else if constexpr (std::is_same_v<T, NqpProblem>) {
          out["dims"] = {{"n", p.A.rows()}};
          if (seed) out["seed"] = *seed;
          out["A"] = matrix_to_json(p.A);
          out["b"] = vector_to_json(p.b);
        } else if constexpr (std::is_same_v<T, KinshipProblem>) {
          out["dims"] = {{"n", p.Y.rows()}};
          if (seed) out["seed"] = *seed;
          out["Y"] = matrix_to_json(MatrixData(p.Y));
        } else if constexpr (std::is_same_v<T, SocProblem>) {
          out["dims"] = {{"m", p.A.rows()}, {"n", p.A.cols()}};
          if (seed) out["seed"] = *seed;
          out["x"] = vector_to_json(p.x);
          out["A"] = matrix_to_json(p.A);
          out["b"] = vector_to_json(p.b);
          out["c"] = vector_to_json(p.c);
          out["d"] = p.d;
        } else if constexpr (std::is_same_v<T, CopositivityProblem>) {
          out["dims"] = {{"n", p.M.rows()}};
          if (seed) out["seed"] = *seed;
          out["M"] = matrix_to_json(MatrixData(p.M));
        } else if constexpr (std::is_same_v<T, LcpProblem>) {
          out["dims"] = {{"n", p.A.rows()}};
          if (seed) out["seed"] = *seed;
          out["A"] = matrix_to_json(MatrixData(p.A));
          out["b"] = vector_to_json(p.b);
        } else {
          static_assert(std::is_same_v<T, SpcaProblem>);
          json dims;
          if (p.X) dims["n"] = p.X->rows();
          dims["p"] = p.dim_p();
          dims["q"] = p.q;
          dims["r"] = p.r;
          out["dims"] = std::move(dims);
          if (seed) out["seed"] = *seed;
          out["mode"] = p.mode == SparsityMode::Column ? "column" : "matrix";
          if (p.X) out["X"] = matrix_to_json(MatrixData(*p.X));
          if (p.S) out["S"] = matrix_to_json(MatrixData(*p.S));
        }
      },
      inst);
  return out.dump(2) + "\n";
}

ProblemInstance from_json_string(const std::string& text,
                                 std::optional<std::uint64_t>* seed_out) {
  const json obj = json::parse(text);  // json::parse_error escapes to caller
  if (!obj.is_object()) {
    throw std::invalid_argument("instance: top level must be a JSON object");
  }
  const std::string kind = field(obj, "instance", "kind").get<std::string>();
  if (seed_out) {
    *seed_out = obj.contains("seed")
                    ? std::optional<std::uint64_t>(obj["seed"].get<std::uint64_t>())
                    : std::nullopt;
  }

  ProblemInstance inst;
  if (kind == "lp") {
    LpProblem p;
    p.A = matrix_from_json(field(obj, kind, "A"), "lp A");
    p.b = vector_from_json(field(obj, kind, "b"), "lp b");
    p.v = vector_from_json(field(obj, kind, "v"), "lp v");
    inst = std::move(p);
  } else if (kind == "nqp") {
    NqpProblem p;
    p.A = matrix_from_json(field(obj, kind, "A"), "nqp A");
    p.b = vector_from_json(field(obj, kind, "b"), "nqp b");
    inst = std::move(p);
  } else if (kind == "kinship") {
    KinshipProblem p;
    p.Y = matrix_from_json(field(obj, kind, "Y"), "kinship Y").to_dense();
    inst = std::move(p);
  } else if (kind == "soc") {
    SocProblem p;
    p.x = vector_from_json(field(obj, kind, "x"), "soc x");
    p.A = matrix_from_json(field(obj, kind, "A"), "soc A");
    p.b = vector_from_json(field(obj, kind, "b"), "soc b");
    p.c = vector_from_json(field(obj, kind, "c"), "soc c");
    p.d = to_finite(field(obj, kind, "d"), "soc d");
    inst = std::move(p);
  } else if (kind == "copositivity") {
    CopositivityProblem p;
    p.M = matrix_from_json(field(obj, kind, "M"), "copositivity M").to_dense();
    inst = std::move(p);
  } else if (kind == "lcp") {
    LcpProblem p;
    p.A = matrix_from_json(field(obj, kind, "A"), "lcp A").to_dense();
    p.b = vector_from_json(field(obj, kind, "b"), "lcp b");
    inst = std::move(p);
  } else if (kind == "spca") {
    SpcaProblem p;
    if (obj.contains("X")) {
      p.X = matrix_from_json(obj["X"], "spca X").to_dense();
    }
    if (obj.contains("S")) {
      p.S = matrix_from_json(obj["S"], "spca S").to_dense();
    }
    const json& dims = field(obj, kind, "dims");
    p.q = field(dims, kind, "q").get<int>();
    p.r = field(dims, kind, "r").get<int>();
    const std::string mode = field(obj, kind, "mode").get<std::string>();
    if (mode == "column") {
      p.mode = SparsityMode::Column;
    } else if (mode == "matrix") {
      p.mode = SparsityMode::Matrix;
    } else {
      throw std::invalid_argument("spca: mode must be 'column' or 'matrix'");
    }
    inst = std::move(p);
  } else {
    throw std::invalid_argument("instance: unknown kind '" + kind + "'");
  }
  validate(inst);
  return inst;
}

void save_instance(const std::string& path, const ProblemInstance& inst,
                   std::optional<std::uint64_t> seed) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << to_json_string(inst, seed);
  if (!out) throw std::runtime_error("write failed for " + path);
}

namespace {

// Line number of a byte offset, for parse errors.
int line_of_offset(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

}  // namespace

ProblemInstance load_instance(const std::string& path,
                              std::optional<std::uint64_t>* seed_out) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    return from_json_string(text, seed_out);
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is 1-based; point at the preceding character.
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    throw std::runtime_error(path + ":" + std::to_string(line_of_offset(text, byte)) +
                             ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

namespace {

MatrixXd normal_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  MatrixXd a(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) a(i, j) = rng.normal();
  }
  return a;
}

VectorXd normal_vector(Rng& rng, Eigen::Index n) {
  VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.normal();
  return v;
}

VectorXd uniform_vector(Rng& rng, Eigen::Index n) {
  VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.uniform();
  return v;
}

/// Column-major Bernoulli(density) fill with standard normal values.
SparseMatrixXd sparse_normal(Rng& rng, Eigen::Index rows, Eigen::Index cols,
                             double density) {
  std::vector<Eigen::Triplet<double>> entries;
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (rng.uniform() < density) entries.emplace_back(i, j, rng.normal());
    }
  }
  SparseMatrixXd s(rows, cols);
  s.setFromTriplets(entries.begin(), entries.end());
  return s;
}

}  // namespace

LpProblem make_lp(int m, int n, std::uint64_t seed, bool sparse,
                  double density) {
  if (m < 1 || n < m) throw std::invalid_argument("make_lp: need 1 <= m <= n");
  Rng rng(seed);
  LpProblem p;
  if (sparse) {
    SparseMatrixXd a = sparse_normal(rng, m, n, density);
    // An empty row would make A A^T singular; give each one an entry.
    std::vector<bool> filled(m, false);
    for (int k = 0; k < a.outerSize(); ++k) {
      for (SparseMatrixXd::InnerIterator it(a, k); it; ++it) {
        filled[it.row()] = true;
      }
    }
    std::vector<Eigen::Triplet<double>> extra;
    for (int i = 0; i < m; ++i) {
      if (!filled[i]) {
        extra.emplace_back(i, static_cast<Eigen::Index>(rng.below(n)),
                           rng.normal());
      }
    }
    if (!extra.empty()) {
      SparseMatrixXd patch(m, n);
      patch.setFromTriplets(extra.begin(), extra.end());
      a += patch;
    }
    p.A = MatrixData(std::move(a));
  } else {
    p.A = MatrixData(normal_matrix(rng, m, n));
  }
  const VectorXd xhat = uniform_vector(rng, n);
  p.b = p.A.apply(xhat);
  const VectorXd u = normal_vector(rng, m);
  VectorXd w = uniform_vector(rng, n);
  w.array() += 1e-3;  // keep the dual slack strictly positive
  p.v = p.A.apply_t(u) + w;
  return p;
}

NqpProblem make_nqp(int n, std::uint64_t seed, bool sparse) {
  if (n < 1) throw std::invalid_argument("make_nqp: need n >= 1");
  Rng rng(seed);
  NqpProblem p;
  if (sparse) {
    const double density = std::log10(static_cast<double>(std::max(n, 2))) / n;
    SparseMatrixXd m = sparse_normal(rng, n, n, density);
    SparseMatrixXd a = SparseMatrixXd(m.transpose() * m).pruned();
    SparseMatrixXd id(n, n);
    id.setIdentity();
    a += 0.001 * id;
    p.A = MatrixData(std::move(a));
  } else {
    const MatrixXd m = normal_matrix(rng, n, n);
    MatrixXd a = m.transpose() * m;
    a.diagonal().array() += 0.001;
    p.A = MatrixData(std::move(a));
  }
  p.b = normal_vector(rng, n);
  return p;
}

KinshipProblem make_kinship(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("make_kinship: need n >= 1");
  Rng rng(seed);
  const MatrixXd m = normal_matrix(rng, n, n);
  KinshipProblem p;
  p.Y = 0.5 * (m + m.transpose());
  return p;
}

SocProblem make_soc(int m, int n, std::uint64_t seed, bool sparse,
                    double density) {
  if (m < 1 || n < 1) throw std::invalid_argument("make_soc: need m, n >= 1");
  Rng rng(seed);
  SocProblem p;
  p.A = sparse ? MatrixData(sparse_normal(rng, m, n, density))
               : MatrixData(normal_matrix(rng, m, n));
  p.b = normal_vector(rng, m);
  p.c = normal_vector(rng, n);
  p.x = normal_vector(rng, n);
  // Anchor d at a point that lands strictly inside the constraint set.
  const VectorXd u0 = normal_vector(rng, n);
  const double slack = rng.uniform(0.1, 1.0);
  p.d = (p.A.apply(u0) + p.b).norm() - p.c.dot(u0) + slack;
  return p;
}

CopositivityProblem make_copositivity(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("make_copositivity: need n >= 1");
  Rng rng(seed);
  const MatrixXd m = normal_matrix(rng, n, n);
  CopositivityProblem p;
  p.M = 0.5 * (m + m.transpose());
  return p;
}

CopositivityProblem make_horn(int n) {
  if (n < 3) throw std::invalid_argument("make_horn: need n >= 3");
  CopositivityProblem p;
  p.M = MatrixXd::Ones(n, n);
  for (int i = 0; i < n; ++i) {
    p.M(i, (i + 1) % n) = -1.0;
    p.M((i + 1) % n, i) = -1.0;
  }
  return p;
}

LcpProblem make_lcp(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("make_lcp: need n >= 1");
  Rng rng(seed);
  LcpProblem p;
  p.A = normal_matrix(rng, n, n);
  VectorXd xstar = VectorXd::Zero(n);
  VectorXd ystar = VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (rng.coin()) {
      xstar(i) = rng.uniform(0.1, 1.1);
    } else {
      ystar(i) = rng.uniform(0.1, 1.1);
    }
  }
  p.b = ystar - p.A * xstar;
  return p;
}

SpcaProblem make_spca(int n_samples, int p, int q, int r, SparsityMode mode,
                      std::uint64_t seed) {
  if (n_samples < 2 || p < 1) {
    throw std::invalid_argument("make_spca: need n >= 2 samples and p >= 1");
  }
  Rng rng(seed);
  MatrixXd x = normal_matrix(rng, n_samples, p);
  x.rowwise() -= x.colwise().mean();
  SpcaProblem inst;
  inst.X = std::move(x);
  inst.q = q;
  inst.r = r;
  inst.mode = mode;
  inst.validate();
  return inst;
}

}  // namespace proxdist::problems
