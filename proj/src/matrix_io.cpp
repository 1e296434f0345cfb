#include "proxdist/matrix_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace proxdist::linalg {

namespace {

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + ": non-finite entry");
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

}  // namespace

void write_dense(std::ostream& out, const MatrixXd& a) {
  out.precision(17);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      check_finite(a(i, j), "write_dense");
      if (j > 0) out << ' ';
      out << a(i, j);
    }
    out << '\n';
  }
}

MatrixXd read_dense(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::vector<double> row;
    double v;
    while (fields >> v) {
      check_finite(v, "read_dense");
      row.push_back(v);
    }
    if (!fields.eof()) {
      throw std::invalid_argument("read_dense: malformed numeric field");
    }
    if (row.empty()) continue;  // skip blank lines
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::invalid_argument("read_dense: ragged rows");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw std::invalid_argument("read_dense: empty input");
  }
  MatrixXd a(static_cast<Eigen::Index>(rows.size()),
             static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      a(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return a;
}

void write_sparse(std::ostream& out, const SparseMatrixXd& a) {
  out.precision(17);
  out << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << '\n';
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrixXd::InnerIterator it(a, k); it; ++it) {
      check_finite(it.value(), "write_sparse");
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
    }
  }
}

SparseMatrixXd read_sparse(std::istream& in) {
  Eigen::Index rows = 0, cols = 0;
  long long nnz = 0;
  if (!(in >> rows >> cols >> nnz) || rows <= 0 || cols <= 0 || nnz < 0) {
    throw std::invalid_argument("read_sparse: bad header");
  }
  std::vector<Eigen::Triplet<double>> triples;
  triples.reserve(static_cast<std::size_t>(nnz));
  std::set<std::pair<Eigen::Index, Eigen::Index>> seen;
  for (long long k = 0; k < nnz; ++k) {
    Eigen::Index i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v)) {
      throw std::invalid_argument("read_sparse: truncated entry list");
    }
    if (i < 1 || i > rows || j < 1 || j > cols) {
      std::ostringstream msg;
      msg << "read_sparse: index (" << i << ", " << j << ") out of bounds";
      throw std::invalid_argument(msg.str());
    }
    check_finite(v, "read_sparse");
    if (!seen.emplace(i, j).second) {
      std::ostringstream msg;
      msg << "read_sparse: duplicate entry (" << i << ", " << j << ")";
      throw std::invalid_argument(msg.str());
    }
    triples.emplace_back(i - 1, j - 1, v);
  }
  SparseMatrixXd a(rows, cols);
  a.setFromTriplets(triples.begin(), triples.end());
  a.makeCompressed();
  return a;
}

void write_dense_file(const std::string& path, const MatrixXd& a) {
  auto out = open_out(path);
  write_dense(out, a);
}

MatrixXd read_dense_file(const std::string& path) {
  auto in = open_in(path);
  return read_dense(in);
}

void write_sparse_file(const std::string& path, const SparseMatrixXd& a) {
  auto out = open_out(path);
  write_sparse(out, a);
}

SparseMatrixXd read_sparse_file(const std::string& path) {
  auto in = open_in(path);
  return read_sparse(in);
}

}  // namespace proxdist::linalg
