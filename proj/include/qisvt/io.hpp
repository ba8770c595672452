#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qisvt/chebyshev.hpp"
#include "qisvt/dense.hpp"

namespace qisvt {

// File/parse problems. The CLI maps this to exit code 3.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Triple {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Triple> entries;
};

// Matrix Market coordinate format, real/integer field, general symmetry.
// Indices are 1-based on disk, 0-based in memory. Parse failures carry
// "path:line: message".
SparseMatrix load_matrix_market(const std::string& path);
void save_matrix_market(const std::string& path, const SparseMatrix& A);

// Dense CSV: one row per line, comma-separated.
DenseMatrix load_dense_csv(const std::string& path);
void save_dense_csv(const std::string& path, const DenseMatrix& A);

// Dispatch by extension: .mtx -> Matrix Market, .csv -> dense CSV.
SparseMatrix load_matrix_any(const std::string& path);

// Vector file: one value per line, or a single CSV row (autodetected).
DenseVector load_vector(const std::string& path);
void save_vector(const std::string& path, const DenseVector& v);

// {"coefficients": [...], "parity": "even"|"odd"|"general"}
ChebPoly load_chebpoly_json(const std::string& path);
void save_chebpoly_json(const std::string& path, const ChebPoly& p);

DenseMatrix to_dense(const SparseMatrix& A);
SparseMatrix to_sparse(const DenseMatrix& A, double drop_tol = 0.0);

}  // namespace qisvt
