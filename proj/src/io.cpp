#include "qisvt/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace qisvt {

namespace {

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
  throw IoError(path + ":" + std::to_string(line) + ": " + msg);
}

std::string lowercased(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool blank_or_comment(const std::string& line) {
  for (char c : line) {
    if (c == '%' || c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

double parse_double(const std::string& tok, const std::string& path, int line) {
  try {
    size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) fail(path, line, "trailing characters in number '" + tok + "'");
    return v;
  } catch (const IoError&) {
    throw;
  } catch (const std::exception&) {
    fail(path, line, "cannot parse number '" + tok + "'");
  }
}

long parse_long(const std::string& tok, const std::string& path, int line) {
  try {
    size_t pos = 0;
    long v = std::stol(tok, &pos);
    if (pos != tok.size()) fail(path, line, "trailing characters in integer '" + tok + "'");
    return v;
  } catch (const IoError&) {
    throw;
  } catch (const std::exception&) {
    fail(path, line, "cannot parse integer '" + tok + "'");
  }
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> toks;
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> toks;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      toks.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  toks.push_back(cur);
  for (auto& t : toks) {
    size_t b = t.find_first_not_of(" \t\r");
    size_t e = t.find_last_not_of(" \t\r");
    t = (b == std::string::npos) ? "" : t.substr(b, e - b + 1);
  }
  return toks;
}

std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open for reading");
  return in;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path + ": cannot open for writing");
  return out;
}

}  // namespace

SparseMatrix load_matrix_market(const std::string& path) {
  std::ifstream in = open_for_read(path);
  std::string line;
  int lineno = 0;

  if (!std::getline(in, line)) fail(path, 1, "empty file");
  ++lineno;
  {
    std::vector<std::string> toks = split_ws(lowercased(line));
    if (toks.size() < 5 || toks[0] != "%%matrixmarket")
      fail(path, lineno, "missing '%%MatrixMarket' banner");
    if (toks[1] != "matrix" || toks[2] != "coordinate")
      fail(path, lineno, "only 'matrix coordinate' is supported");
    if (toks[3] != "real" && toks[3] != "integer")
      fail(path, lineno, "only real/integer fields are supported");
    if (toks[4] != "general") fail(path, lineno, "only 'general' symmetry is supported");
  }

  SparseMatrix A;
  long declared_nnz = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line)) continue;
    std::vector<std::string> toks = split_ws(line);
    if (toks.size() != 3) fail(path, lineno, "expected 'rows cols nnz'");
    long m = parse_long(toks[0], path, lineno);
    long n = parse_long(toks[1], path, lineno);
    declared_nnz = parse_long(toks[2], path, lineno);
    if (m < 1 || n < 1) fail(path, lineno, "dimensions must be positive");
    if (declared_nnz < 0) fail(path, lineno, "negative entry count");
    A.rows = static_cast<int>(m);
    A.cols = static_cast<int>(n);
    break;
  }
  if (declared_nnz < 0) fail(path, lineno, "missing size line");

  A.entries.reserve(static_cast<size_t>(declared_nnz));
  while (std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line)) continue;
    std::vector<std::string> toks = split_ws(line);
    if (toks.size() != 3) fail(path, lineno, "expected 'i j value'");
    long i = parse_long(toks[0], path, lineno);
    long j = parse_long(toks[1], path, lineno);
    double v = parse_double(toks[2], path, lineno);
    if (i < 1 || i > A.rows) fail(path, lineno, "row index out of range");
    if (j < 1 || j > A.cols) fail(path, lineno, "column index out of range");
    A.entries.push_back({static_cast<int>(i) - 1, static_cast<int>(j) - 1, v});
  }
  if (static_cast<long>(A.entries.size()) != declared_nnz)
    fail(path, lineno, "entry count mismatch: declared " + std::to_string(declared_nnz) +
                           ", found " + std::to_string(A.entries.size()));
  return A;
}

void save_matrix_market(const std::string& path, const SparseMatrix& A) {
  std::ofstream out = open_for_write(path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.rows << " " << A.cols << " " << A.entries.size() << "\n";
  out << std::setprecision(17);
  for (const Triple& t : A.entries) out << (t.row + 1) << " " << (t.col + 1) << " " << t.value << "\n";
  if (!out) throw IoError(path + ": write failed");
}

DenseMatrix load_dense_csv(const std::string& path) {
  std::ifstream in = open_for_read(path);
  std::string line;
  int lineno = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line)) continue;
    std::vector<std::string> toks = split_csv(line);
    std::vector<double> row;
    row.reserve(toks.size());
    for (const std::string& t : toks) row.push_back(parse_double(t, path, lineno));
    if (!rows.empty() && row.size() != rows.front().size())
      fail(path, lineno, "ragged row: expected " + std::to_string(rows.front().size()) +
                             " values, found " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError(path + ": no data rows");
  DenseMatrix A(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) A(i, j) = rows[i][j];
  return A;
}

void save_dense_csv(const std::string& path, const DenseMatrix& A) {
  std::ofstream out = open_for_write(path);
  out << std::setprecision(17);
  for (int i = 0; i < A.rows; ++i) {
    for (int j = 0; j < A.cols; ++j) {
      if (j) out << ",";
      out << A(i, j);
    }
    out << "\n";
  }
  if (!out) throw IoError(path + ": write failed");
}

SparseMatrix load_matrix_any(const std::string& path) {
  const std::string lower = lowercased(path);
  auto ends_with = [&](const std::string& suf) {
    return lower.size() >= suf.size() && lower.compare(lower.size() - suf.size(), suf.size(), suf) == 0;
  };
  if (ends_with(".mtx")) return load_matrix_market(path);
  if (ends_with(".csv")) return to_sparse(load_dense_csv(path));
  throw IoError(path + ": unknown matrix extension (expected .mtx or .csv)");
}

DenseVector load_vector(const std::string& path) {
  std::ifstream in = open_for_read(path);
  std::string line;
  int lineno = 0;
  DenseVector v;
  int data_lines = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line)) continue;
    ++data_lines;
    if (line.find(',') != std::string::npos) {
      if (data_lines > 1 || !v.empty())
        fail(path, lineno, "CSV-row vector files must contain a single row");
      for (const std::string& t : split_csv(line)) v.push_back(parse_double(t, path, lineno));
    } else {
      std::vector<std::string> toks = split_ws(line);
      if (toks.size() != 1) fail(path, lineno, "expected one value per line");
      v.push_back(parse_double(toks[0], path, lineno));
    }
  }
  if (v.empty()) throw IoError(path + ": no vector entries");
  return v;
}

void save_vector(const std::string& path, const DenseVector& v) {
  std::ofstream out = open_for_write(path);
  out << std::setprecision(17);
  for (double x : v) out << x << "\n";
  if (!out) throw IoError(path + ": write failed");
}

ChebPoly load_chebpoly_json(const std::string& path) {
  std::ifstream in = open_for_read(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw IoError(path + ": invalid JSON: " + e.what());
  }
  if (!j.contains("coefficients") || !j["coefficients"].is_array())
    throw IoError(path + ": missing 'coefficients' array");
  ChebPoly p;
  for (const auto& c : j["coefficients"]) {
    if (!c.is_number()) throw IoError(path + ": non-numeric coefficient");
    p.coefficients.push_back(c.get<double>());
  }
  if (j.contains("parity")) {
    try {
      p.parity = parity_from_name(j["parity"].get<std::string>());
    } catch (const std::exception& e) {
      throw IoError(path + ": " + e.what());
    }
  }
  try {
    validate_parity(p);
  } catch (const std::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  return p;
}

void save_chebpoly_json(const std::string& path, const ChebPoly& p) {
  nlohmann::json j;
  j["coefficients"] = p.coefficients;
  j["parity"] = parity_name(p.parity);
  std::ofstream out = open_for_write(path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError(path + ": write failed");
}

DenseMatrix to_dense(const SparseMatrix& A) {
  DenseMatrix D(A.rows, A.cols);
  for (const Triple& t : A.entries) D(t.row, t.col) += t.value;
  return D;
}

SparseMatrix to_sparse(const DenseMatrix& A, double drop_tol) {
  SparseMatrix S;
  S.rows = A.rows;
  S.cols = A.cols;
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j)
      if (std::abs(A(i, j)) > drop_tol) S.entries.push_back({i, j, A(i, j)});
  return S;
}

}  // namespace qisvt
