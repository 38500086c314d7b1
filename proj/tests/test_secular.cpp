#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "qgraph/secular.hpp"

using namespace qgraph;

static const double kPi = 3.14159265358979323846;

namespace {

// independent closed forms from expanding the 2x2 determinants by hand
Cplx interval_dd_secular(double len, Cplx k) {
  return 1.0 - std::exp(Cplx(0, 2) * k * len);
}
Cplx circle_secular(double len, Cplx k) {
  Cplx e = std::exp(Cplx(0, 1) * k * len);
  return -(e - 1.0) * (e - 1.0);
}

}  // namespace

TEST_CASE("secular_eval: dirichlet interval against hand determinant") {
  MetricGraph g = fixtures::interval(kPi, VertexCondition::Dirichlet, VertexCondition::Dirichlet);
  CHECK(std::abs(secular_eval(g, 1.0)) < 1e-12);
  CHECK(std::abs(secular_eval(g, 0.5) - Cplx(2.0)) < 1e-12);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> kd(0.0, 20.0);
  for (int i = 0; i < 100; ++i) {
    double k = kd(rng);
    CHECK(std::abs(secular_eval(g, k) - interval_dd_secular(kPi, k)) < 1e-11);
  }
}

TEST_CASE("secular_eval: circle against hand determinant") {
  MetricGraph g = fixtures::circle(2 * kPi);
  for (int n = 1; n <= 4; ++n) CHECK(std::abs(secular_eval(g, Cplx(n, 0))) < 1e-10);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> kd(0.0, 10.0);
  for (int i = 0; i < 100; ++i) {
    double k = kd(rng);
    CHECK(std::abs(secular_eval(g, k) - circle_secular(2 * kPi, k)) < 1e-10);
  }
}

TEST_CASE("secular_eval obeys the Hadamard bound and |p(k)| = |p(-k)|") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> kd(0.0, 25.0);
  for (const auto& [name, g] : fixtures::corpus()) {
    INFO(name);
    double bound = std::pow(2.0, 2 * g.num_edges());
    for (int i = 0; i < 25; ++i) {
      double k = kd(rng);
      Cplx p = secular_eval(g, k);
      CHECK(std::abs(p) <= bound + 1e-9);
      CHECK(std::abs(std::abs(p) - std::abs(secular_eval(g, -k))) < 1e-10 * (1.0 + std::abs(p)));
    }
  }
}

TEST_CASE("secular polynomial: circle is -(z-1)^2") {
  SecularPolynomial p = secular_polynomial(fixtures::circle(2 * kPi));
  REQUIRE(p.num_vars == 1);
  CHECK(p.coefficient({0}) == Rational(-1));
  CHECK(p.coefficient({1}) == Rational(2));
  CHECK(p.coefficient({2}) == Rational(-1));
  CHECK(p.terms.size() == 3);
}

TEST_CASE("secular polynomial: dirichlet interval is 1 - z^2") {
  SecularPolynomial p = secular_polynomial(
      fixtures::interval(kPi, VertexCondition::Dirichlet, VertexCondition::Dirichlet));
  CHECK(p.coefficient({0}) == Rational(1));
  CHECK(p.coefficient({1}) == Rational(0));
  CHECK(p.coefficient({2}) == Rational(-1));
}

TEST_CASE("secular polynomial: standard interval vanishes at z=1 and matches p(k)") {
  MetricGraph g = fixtures::interval(kPi, VertexCondition::Standard, VertexCondition::Standard);
  SecularPolynomial p = secular_polynomial(g);
  CHECK(poly_eval(p, std::vector<Rational>{Rational(1)}) == Rational(0));
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> kd(0.0, 20.0);
  for (int i = 0; i < 100; ++i) {
    double k = kd(rng);
    Cplx via_poly = poly_eval(p, edge_phases(g, k));
    Cplx direct = secular_eval(g, k);
    CHECK(std::abs(via_poly - direct) <= 1e-9 * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("identity p(k) = P(e^{ik l}) across the corpus (property)") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> kd(0.0, 20.0);
  for (const auto& [name, g] : fixtures::corpus()) {
    INFO(name);
    SecularPolynomial p = secular_polynomial(g);
    for (int i = 0; i < 100; ++i) {
      double k = kd(rng);
      Cplx via_poly = poly_eval(p, edge_phases(g, k));
      Cplx direct = secular_eval(g, k);
      CHECK(std::abs(via_poly - direct) <= 1e-9 * (1.0 + std::abs(direct)));
    }
  }
}

TEST_CASE("degree in each variable is at most two (property)") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 25; ++trial) {
    MetricGraph g = fixtures::random_graph(rng);
    SecularPolynomial p = secular_polynomial(g);
    for (const auto& [key, coef] : p.terms) {
      CHECK_FALSE(coef.is_zero());
      for (int v = 0; v < p.num_vars; ++v) CHECK(p.exponent(key, v) <= 2);
    }
  }
}

TEST_CASE("size limit") {
  std::vector<double> lens(13, 1.0);
  MetricGraph big = fixtures::star(lens);
  CHECK_THROWS_AS(secular_polynomial(big), SizeError);
  CHECK_NOTHROW(secular_polynomial(big, 15));
}

TEST_CASE("poly_eval basics") {
  SecularPolynomial p = secular_polynomial(fixtures::circle(2 * kPi));
  CHECK(poly_eval(p, std::vector<Rational>{Rational(1)}) == Rational(0));
  // value at z = 0 is the constant term
  CHECK(std::abs(poly_eval(p, std::vector<Cplx>{Cplx(0.0)}) - Cplx(-1.0)) < 1e-15);
  CHECK_THROWS(poly_eval(p, std::vector<Cplx>{Cplx(1.0), Cplx(1.0)}));
}

TEST_CASE("poly_gradient: exact values") {
  SecularPolynomial circle = secular_polynomial(fixtures::circle(2 * kPi));
  auto grad = poly_gradient(circle, std::vector<Rational>{Rational(1)});
  CHECK(grad[0] == Rational(0));  // the degenerate point

  SecularPolynomial dd = secular_polynomial(
      fixtures::interval(kPi, VertexCondition::Dirichlet, VertexCondition::Dirichlet));
  auto gdd = poly_gradient(dd, std::vector<Rational>{Rational(1)});
  CHECK(gdd[0] == Rational(-2));

  SecularPolynomial constant;  // empty polynomial: gradient is zero
  constant.num_vars = 2;
  auto gc = poly_gradient(constant, std::vector<Rational>{Rational(3), Rational(5)});
  CHECK(gc[0] == Rational(0));
  CHECK(gc[1] == Rational(0));
}

TEST_CASE("poly_gradient matches central finite differences (property)") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> comp(-1.0, 1.0);
  for (const auto& [name, g] : fixtures::corpus()) {
    INFO(name);
    SecularPolynomial p = secular_polynomial(g);
    const double h = 1e-6;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Cplx> z(p.num_vars);
      for (auto& c : z) c = Cplx(comp(rng), comp(rng));
      auto grad = poly_gradient(p, z);
      for (int v = 0; v < p.num_vars; ++v) {
        std::vector<Cplx> zp = z, zm = z;
        zp[v] += h;
        zm[v] -= h;
        Cplx fd = (poly_eval(p, zp) - poly_eval(p, zm)) / (2.0 * h);
        CHECK(std::abs(grad[v] - fd) <= 1e-5 * (1.0 + std::abs(grad[v])));
      }
    }
  }
}

TEST_CASE("torus slice of the circle polynomial") {
  SecularPolynomial p = secular_polynomial(fixtures::circle(2 * kPi));
  auto pts = sample_zero_slice(p, 1024);
  REQUIRE(!pts.empty());
  const double tau = 2 * kPi;
  for (const auto& tp : pts) {
    double d = std::min(tp.phi[0], tau - tp.phi[0]);
    CHECK(d < 0.05);
    CHECK(std::abs(tp.gradient[0]) < 0.1);  // gradient magnitude near 0 at the double point
  }
}

TEST_CASE("torus slice of the dirichlet interval polynomial") {
  SecularPolynomial p = secular_polynomial(
      fixtures::interval(kPi, VertexCondition::Dirichlet, VertexCondition::Dirichlet));
  auto pts = sample_zero_slice(p, 1024);
  REQUIRE(pts.size() >= 2);
  bool near_zero = false, near_pi = false;
  for (const auto& tp : pts) {
    double phi = tp.phi[0];
    if (std::min(phi, 2 * kPi - phi) < 0.05) near_zero = true;
    if (std::abs(phi - kPi) < 0.05) {
      near_pi = true;
      CHECK(std::abs(tp.gradient[0]) == doctest::Approx(2.0).epsilon(0.02));
    }
  }
  CHECK(near_zero);
  CHECK(near_pi);
  CHECK_THROWS_AS(sample_zero_slice(p, 0), UsageError);
}

TEST_CASE("slice rejects too many variables") {
  SecularPolynomial p4 = secular_polynomial(fixtures::star({1, 1, 1, 1}));
  CHECK(p4.num_vars == 4);
  CHECK_THROWS_AS(sample_zero_slice(p4, 8), SizeError);
}

TEST_CASE("canonical polynomial export") {
  SecularPolynomial p = secular_polynomial(fixtures::circle(2 * kPi));
  CHECK(polynomial_to_json(p) ==
        "[\n"
        "{\"exponents\":[0],\"coefficient\":{\"num\":-1,\"den\":1}},\n"
        "{\"exponents\":[1],\"coefficient\":{\"num\":2,\"den\":1}},\n"
        "{\"exponents\":[2],\"coefficient\":{\"num\":-1,\"den\":1}}\n"
        "]\n");

  // keys iterate in lexicographic exponent order for any graph
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    SecularPolynomial q = secular_polynomial(fixtures::random_graph(rng));
    std::vector<int> prev;
    for (const auto& [key, coef] : q.terms) {
      std::vector<int> cur = q.exponents(key);
      if (!prev.empty()) CHECK(std::lexicographical_compare(prev.begin(), prev.end(),
                                                            cur.begin(), cur.end()));
      prev = cur;
    }
  }
}
