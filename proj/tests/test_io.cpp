#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "qisvt/chebyshev.hpp"
#include "qisvt/io.hpp"

using namespace qisvt;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("io_test_tmp_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
  void fill(const std::string& text) {
    std::ofstream f(path);
    f << text;
  }
};

}  // namespace

TEST_CASE("matrix market round trip preserves triples and dimensions") {
  SparseMatrix A;
  A.rows = 3;
  A.cols = 4;
  A.entries = {{0, 0, 1.5}, {2, 3, -2.25}, {1, 1, 1e-12}};
  TempFile f("roundtrip.mtx");
  save_matrix_market(f.path, A);
  const SparseMatrix B = load_matrix_market(f.path);
  CHECK(B.rows == 3);
  CHECK(B.cols == 4);
  REQUIRE(B.entries.size() == 3);
  for (size_t q = 0; q < 3; ++q) {
    CHECK(B.entries[q].row == A.entries[q].row);
    CHECK(B.entries[q].col == A.entries[q].col);
    CHECK(B.entries[q].value == A.entries[q].value);
  }
}

TEST_CASE("matrix market indices are 1-based on disk") {
  TempFile f("onebased.mtx");
  f.fill("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 2 5.0\n");
  const SparseMatrix A = load_matrix_market(f.path);
  REQUIRE(A.entries.size() == 1);
  CHECK(A.entries[0].row == 0);
  CHECK(A.entries[0].col == 1);
  CHECK(A.entries[0].value == 5.0);
}

TEST_CASE("matrix market parse errors carry the line number") {
  TempFile f("bad.mtx");
  f.fill("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 oops 5.0\n");
  try {
    load_matrix_market(f.path);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    const std::string msg = e.what();
    std::cout << "parse error message: " << msg << "\n";
    CHECK(msg.find(":3") != std::string::npos);
  }
}

TEST_CASE("matrix market rejects out-of-bounds indices") {
  TempFile f("oob.mtx");
  f.fill("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 5.0\n");
  CHECK_THROWS_AS(load_matrix_market(f.path), IoError);
}

TEST_CASE("missing files raise io errors") {
  CHECK_THROWS_AS(load_matrix_market("definitely_not_here.mtx"), IoError);
  CHECK_THROWS_AS(load_vector("definitely_not_here.txt"), IoError);
}

TEST_CASE("dense csv round trip") {
  DenseMatrix A(2, 3);
  A(0, 0) = 1.0;
  A(0, 2) = -0.5;
  A(1, 1) = 2.5e-7;
  TempFile f("roundtrip.csv");
  save_dense_csv(f.path, A);
  const DenseMatrix B = load_dense_csv(f.path);
  REQUIRE(B.rows == 2);
  REQUIRE(B.cols == 3);
  for (size_t q = 0; q < A.data.size(); ++q) CHECK(B.data[q] == A.data[q]);
}

TEST_CASE("ragged csv rows are rejected with the line number") {
  TempFile f("ragged.csv");
  f.fill("1.0,2.0\n3.0\n");
  try {
    load_dense_csv(f.path);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
}

TEST_CASE("extension dispatch picks the right parser") {
  TempFile m("dispatch.mtx");
  m.fill("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 2.0\n");
  const SparseMatrix A = load_matrix_any(m.path);
  CHECK(A.entries.size() == 1);

  TempFile c("dispatch.csv");
  c.fill("1.0,0.0\n0.0,3.0\n");
  const SparseMatrix B = load_matrix_any(c.path);
  CHECK(B.rows == 2);
  CHECK(B.entries.size() == 2);  // zeros dropped by to_sparse

  CHECK_THROWS_AS(load_matrix_any("mystery.dat"), IoError);
}

TEST_CASE("vector files: one per line and single-row csv both load") {
  TempFile lines("vec_lines.txt");
  lines.fill("1.0\n-2.0\n3.5\n");
  const DenseVector a = load_vector(lines.path);
  REQUIRE(a.size() == 3);
  CHECK(a[1] == -2.0);

  TempFile row("vec_row.txt");
  row.fill("1.0, -2.0, 3.5\n");
  const DenseVector b = load_vector(row.path);
  REQUIRE(b.size() == 3);
  CHECK(b[2] == 3.5);

  TempFile out("vec_out.txt");
  save_vector(out.path, a);
  const DenseVector c = load_vector(out.path);
  REQUIRE(c.size() == 3);
  for (size_t q = 0; q < 3; ++q) CHECK(c[q] == a[q]);
}

TEST_CASE("polynomial json round trip keeps coefficients bit-exact") {
  ChebPoly p({0.0, 0.25, 0.0, -1.0 / 3.0}, Parity::odd);
  TempFile f("poly.json");
  save_chebpoly_json(f.path, p);
  const ChebPoly q = load_chebpoly_json(f.path);
  CHECK(q.parity == Parity::odd);
  REQUIRE(q.coefficients.size() == p.coefficients.size());
  for (size_t k = 0; k < p.coefficients.size(); ++k)
    CHECK(q.coefficients[k] == p.coefficients[k]);
}

TEST_CASE("polynomial json validates its fields") {
  TempFile f("badpoly.json");
  f.fill("{\"coefficients\": [0.0, 1.0], \"parity\": \"sideways\"}");
  CHECK_THROWS_AS(load_chebpoly_json(f.path), IoError);
  TempFile g("badpoly2.json");
  g.fill("{\"parity\": \"odd\"}");
  CHECK_THROWS_AS(load_chebpoly_json(g.path), IoError);
}

TEST_CASE("dense/sparse conversions agree") {
  SparseMatrix A;
  A.rows = 2;
  A.cols = 2;
  A.entries = {{0, 1, 4.0}, {1, 0, -1.0}};
  const DenseMatrix D = to_dense(A);
  CHECK(D(0, 1) == 4.0);
  CHECK(D(1, 0) == -1.0);
  CHECK(D(0, 0) == 0.0);
  const SparseMatrix B = to_sparse(D);
  CHECK(B.entries.size() == 2);
}
