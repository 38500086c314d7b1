#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qgraph/linalg.hpp"

using namespace qgraph;

namespace {

Matrix random_matrix(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Cplx(dist(rng), dist(rng));
  return m;
}

}  // namespace

TEST_CASE("determinant of hand-checked matrices") {
  Matrix a(2, 2);
  a(0, 0) = 1.0; a(0, 1) = Cplx(0, 1);
  a(1, 0) = Cplx(0, 1); a(1, 1) = 1.0;
  // det = 1 - i*i = 2
  CHECK(std::abs(determinant(a) - Cplx(2.0)) < 1e-14);

  Matrix b(3, 3);
  b(0, 0) = 2; b(0, 1) = 0; b(0, 2) = 1;
  b(1, 0) = 0; b(1, 1) = 3; b(1, 2) = 0;
  b(2, 0) = 1; b(2, 1) = 0; b(2, 2) = 2;
  CHECK(std::abs(determinant(b) - Cplx(9.0)) < 1e-14);

  CHECK(std::abs(determinant(Matrix::identity(5)) - Cplx(1.0)) < 1e-15);

  Matrix s(2, 2);  // singular
  s(0, 0) = 1; s(0, 1) = 2; s(1, 0) = 2; s(1, 1) = 4;
  CHECK(std::abs(determinant(s)) < 1e-14);
}

TEST_CASE("determinant is multiplicative on random matrices") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix a = random_matrix(6, rng);
    Matrix b = random_matrix(6, rng);
    Cplx lhs = determinant(a * b);
    Cplx rhs = determinant(a) * determinant(b);
    CHECK(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("solve and inverse") {
  std::mt19937_64 rng(11);
  Matrix a = random_matrix(7, rng);
  Matrix x = random_matrix(7, rng);
  Matrix b = a * x;
  Matrix got = solve(a, b);
  CHECK((got - x).max_abs() < 1e-10);

  Matrix inv = inverse(a);
  CHECK((a * inv - Matrix::identity(7)).max_abs() < 1e-10);

  Matrix s(2, 2);
  s(0, 0) = 1; s(0, 1) = 1; s(1, 0) = 1; s(1, 1) = 1;
  CHECK_THROWS(solve(s, Matrix::identity(2)));
}

TEST_CASE("svd reconstructs and is unitary") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 4 + static_cast<int>(rng() % 5);
    Matrix a = random_matrix(n, rng);
    SvdResult s = svd_jacobi(a);

    // descending order
    for (std::size_t i = 1; i < s.singular_values.size(); ++i)
      CHECK(s.singular_values[i - 1] >= s.singular_values[i] - 1e-13);

    // a = u diag(s) v^H
    Matrix us(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) us(i, j) = s.u(i, j) * s.singular_values[j];
    Matrix recon = us * s.v.conjugate_transpose();
    CHECK((recon - a).max_abs() < 1e-12);

    // v unitary
    CHECK((s.v.conjugate_transpose() * s.v - Matrix::identity(n)).max_abs() < 1e-12);

    // |det| equals product of singular values (independent route)
    double prod = 1.0;
    for (double sv : s.singular_values) prod *= sv;
    CHECK(std::abs(std::abs(determinant(a)) - prod) < 1e-9 * (1.0 + prod));
  }
}

TEST_CASE("svd exposes null space of a rank-deficient matrix") {
  // rows 0 and 1 identical -> rank 2 of 3
  Matrix a(3, 3);
  a(0, 0) = 1; a(0, 1) = 2; a(0, 2) = Cplx(0, 1);
  a(1, 0) = 1; a(1, 1) = 2; a(1, 2) = Cplx(0, 1);
  a(2, 0) = 0; a(2, 1) = 1; a(2, 2) = 1;
  SvdResult s = svd_jacobi(a);
  CHECK(s.singular_values[2] < 1e-13 * s.singular_values[0]);
  std::vector<Cplx> null_vec(3);
  for (int i = 0; i < 3; ++i) null_vec[i] = s.v(i, 2);
  auto image = a.apply(null_vec);
  double res = 0.0;
  for (auto c : image) res = std::max(res, std::abs(c));
  CHECK(res < 1e-12);
}

TEST_CASE("symmetric eigenvalues for small matrices") {
  std::vector<std::vector<double>> d = {{3, 0, 0}, {0, -1, 0}, {0, 0, 2}};
  auto ev = symmetric_eigenvalues(d);
  CHECK(ev[0] == doctest::Approx(-1));
  CHECK(ev[1] == doctest::Approx(2));
  CHECK(ev[2] == doctest::Approx(3));

  // 2x2 with known spectrum: [[2,1],[1,2]] -> {1,3}
  std::vector<std::vector<double>> m = {{2, 1}, {1, 2}};
  auto ev2 = symmetric_eigenvalues(m);
  CHECK(ev2[0] == doctest::Approx(1));
  CHECK(ev2[1] == doctest::Approx(3));
}
