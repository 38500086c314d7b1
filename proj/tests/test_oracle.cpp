#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "qgraph/oracle.hpp"

using namespace qgraph;

static const double kPi = 3.14159265358979323846;

namespace {

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

// expand (k, mult) pairs to a lambda list
std::vector<double> expand(const std::vector<std::pair<double, int>>& ks, int count) {
  std::vector<double> out;
  for (const auto& [k, m] : ks)
    for (int i = 0; i < m && static_cast<int>(out.size()) < count; ++i)
      out.push_back(k * k);
  return out;
}

}  // namespace

TEST_CASE("analytic families") {
  auto dd = analytic_spectrum(AnalyticFamily::IntervalDD, kPi, 3);
  CHECK(dd[0].first == doctest::Approx(1.0));
  CHECK(dd[1].first == doctest::Approx(2.0));
  CHECK(dd[2].first == doctest::Approx(3.0));
  for (auto& [k, m] : dd) CHECK(m == 1);

  auto ds = analytic_spectrum(AnalyticFamily::IntervalDS, kPi, 2);
  CHECK(ds[0].first == doctest::Approx(0.5));
  CHECK(ds[1].first == doctest::Approx(1.5));

  auto ss = analytic_spectrum(AnalyticFamily::IntervalSS, kPi, 3);
  CHECK(ss[0].first == 0.0);
  CHECK(ss[1].first == doctest::Approx(1.0));

  auto ci = analytic_spectrum(AnalyticFamily::Circle, 2 * kPi, 3);
  CHECK(ci[0].first == 0.0);
  CHECK(ci[1].first == doctest::Approx(1.0));
  CHECK(ci[1].second == 2);
  CHECK(ci[2].first == doctest::Approx(2.0));
  CHECK(ci[2].second == 2);
}

TEST_CASE("fd spectrum: dirichlet interval") {
  MetricGraph g = fixtures::interval(kPi, VertexCondition::Dirichlet, VertexCondition::Dirichlet);
  auto got = fd_spectrum(g, 1e-3, 3);
  auto want = expand(analytic_spectrum(AnalyticFamily::IntervalDD, kPi, 3), 3);
  for (int i = 0; i < 3; ++i) CHECK(rel_err(got[i], want[i]) < 5e-3);
}

TEST_CASE("fd spectrum: circle resolves doubles as near pairs") {
  MetricGraph g = fixtures::circle(2 * kPi);
  auto got = fd_spectrum(g, 1e-3, 5);
  auto want = expand(analytic_spectrum(AnalyticFamily::Circle, 2 * kPi, 3), 5);
  REQUIRE(got.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(rel_err(got[i], want[i]) < 5e-3);
  CHECK(std::abs(got[1] - got[2]) < 1e-8);  // the discrete double is exact
}

TEST_CASE("fd spectrum: mixed and standard intervals") {
  MetricGraph ds = fixtures::interval(kPi, VertexCondition::Dirichlet, VertexCondition::Standard);
  auto got = fd_spectrum(ds, 1e-3, 3);
  auto want = expand(analytic_spectrum(AnalyticFamily::IntervalDS, kPi, 3), 3);
  for (int i = 0; i < 3; ++i) CHECK(rel_err(got[i], want[i]) < 5e-3);

  MetricGraph ss = fixtures::interval(kPi, VertexCondition::Standard, VertexCondition::Standard);
  auto got2 = fd_spectrum(ss, 1e-3, 3);
  auto want2 = expand(analytic_spectrum(AnalyticFamily::IntervalSS, kPi, 3), 3);
  CHECK(std::abs(got2[0]) < 1e-9);  // exact zero mode
  for (int i = 1; i < 3; ++i) CHECK(rel_err(got2[i], want2[i]) < 5e-3);
}

TEST_CASE("fd spectrum: second-order convergence") {
  MetricGraph g = fixtures::interval(kPi, VertexCondition::Dirichlet, VertexCondition::Dirichlet);
  auto want = expand(analytic_spectrum(AnalyticFamily::IntervalDD, kPi, 3), 3);
  double err_h = 0.0, err_h2 = 0.0;
  auto at_h = fd_spectrum(g, 1e-3, 3);
  auto at_h2 = fd_spectrum(g, 5e-4, 3);
  for (int i = 0; i < 3; ++i) {
    err_h = std::max(err_h, rel_err(at_h[i], want[i]));
    err_h2 = std::max(err_h2, rel_err(at_h2[i], want[i]));
  }
  double ratio = err_h / err_h2;
  CHECK(ratio > 2.5);
  CHECK(ratio < 6.0);
}

TEST_CASE("fd spectrum: star with kirchhoff center converges at second order") {
  MetricGraph g = fixtures::star({1.0, std::sqrt(2.0), kPi / 3.0},
                                 {VertexCondition::Dirichlet, VertexCondition::Standard,
                                  VertexCondition::Standard});
  // Richardson self-reference: with second order, lambda(h) ~ lambda + c h^2,
  // so |l(h) - l(h/2)| should shrink ~4x against |l(h/2) - l(h/4)|.
  auto a = fd_spectrum(g, 2e-3, 4);
  auto b = fd_spectrum(g, 1e-3, 4);
  auto c = fd_spectrum(g, 5e-4, 4);
  for (int i = 0; i < 4; ++i) {
    double d1 = std::abs(a[i] - b[i]);
    double d2 = std::abs(b[i] - c[i]);
    if (d2 > 1e-12) {
      double ratio = d1 / d2;
      CHECK(ratio > 2.5);
      CHECK(ratio < 6.0);
    }
  }
}

TEST_CASE("fd spectrum is orientation invariant") {
  // same DS interval with the edge endpoints playing swapped roles
  MetricGraph a = fixtures::interval(kPi, VertexCondition::Dirichlet, VertexCondition::Standard);
  MetricGraph b = fixtures::interval(kPi, VertexCondition::Standard, VertexCondition::Dirichlet);
  auto la = fd_spectrum(a, 1e-3, 5);
  auto lb = fd_spectrum(b, 1e-3, 5);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(la[i] - lb[i]) <= 1e-12 * std::max(1.0, la[i]));

  // a star with one edge's endpoints swapped
  MetricGraph s1 = fixtures::star({1.0, 1.3, 0.9});
  MetricGraph s2 = s1;
  // swap endpoints 0 and 1 of edge 0: center currently holds 1; make it hold 0
  s2.vertices[0].endpoints[0] = 0;
  s2.vertices[1].endpoints[0] = 1;
  auto t1 = fd_spectrum(s1, 1e-3, 5);
  auto t2 = fd_spectrum(s2, 1e-3, 5);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(t1[i] - t2[i]) <= 1e-12 * std::max(1.0, t1[i]));
}

TEST_CASE("fd spectrum: loops and disconnected graphs") {
  auto got = fd_spectrum(fixtures::figure_eight(1.0, std::sqrt(2.0)), 1e-3, 4);
  // one zero mode (connected, no Dirichlet), positive rest
  CHECK(std::abs(got[0]) < 1e-9);
  CHECK(got[1] > 1.0);

  auto two = fd_spectrum(fixtures::two_circles(1.0, 2.0), 1e-3, 3);
  CHECK(std::abs(two[0]) < 1e-9);
  CHECK(std::abs(two[1]) < 1e-9);  // two components, two constants
  CHECK(two[2] > 1.0);
}

TEST_CASE("fd spectrum: error paths") {
  MetricGraph g = fixtures::interval(1.0, VertexCondition::Dirichlet, VertexCondition::Dirichlet);
  CHECK_THROWS_AS(fd_spectrum(g, 0.5, 2), SolverError);  // fewer than 8 cells
  CHECK_THROWS(fd_spectrum(g, -1.0, 2));
  CHECK_THROWS(fd_spectrum(g, 1e-3, 0));
}
