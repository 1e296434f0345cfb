#pragma once

#include <iosfwd>
#include <string>

#include "proxdist/linalg.hpp"

namespace proxdist::linalg {

/// Dense text format: whitespace-delimited entries, one matrix row per line.
/// Values are written with 17 significant digits so a round trip preserves
/// every double exactly.
void write_dense(std::ostream& out, const MatrixXd& a);
MatrixXd read_dense(std::istream& in);
void write_dense_file(const std::string& path, const MatrixXd& a);
MatrixXd read_dense_file(const std::string& path);

/// Sparse coordinate text format: header "rows cols nnz", then one
/// "i j v" line per stored entry with 1-based indices. Duplicate (i, j)
/// pairs and out-of-bounds indices are rejected on read.
void write_sparse(std::ostream& out, const SparseMatrixXd& a);
SparseMatrixXd read_sparse(std::istream& in);
void write_sparse_file(const std::string& path, const SparseMatrixXd& a);
SparseMatrixXd read_sparse_file(const std::string& path);

}  // namespace proxdist::linalg
