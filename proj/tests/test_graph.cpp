#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "qgraph/graph.hpp"

using namespace qgraph;

static const double kPi = 3.14159265358979323846;

TEST_CASE("parse: dirichlet interval") {
  const char* doc = R"({
    "edges": [ { "length": 3.141592653589793 } ],
    "vertices": [
      { "endpoints": [1], "condition": "dirichlet" },
      { "endpoints": [2], "condition": "dirichlet" }
    ]
  })";
  MetricGraph g = parse_graph(doc);
  CHECK(g.num_edges() == 1);
  CHECK(g.num_vertices() == 2);
  CHECK(g.edges[0].length == doctest::Approx(kPi));
  CHECK(g.vertices[0].condition == VertexCondition::Dirichlet);
  CHECK(g.vertices[0].endpoints == std::vector<int>{0});
  CHECK(g.vertices[1].endpoints == std::vector<int>{1});
}

TEST_CASE("parse: circle graph") {
  const char* doc = R"({
    "edges": [ { "length": 6.283185307179586 } ],
    "vertices": [ { "endpoints": [1, 2], "condition": "standard" } ]
  })";
  MetricGraph g = parse_graph(doc);
  CHECK(g.num_edges() == 1);
  CHECK(g.num_vertices() == 1);
  CHECK(g.vertices[0].endpoints.size() == 2);
  CHECK(validate(g).ok);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_graph("{ not json"), SyntaxError);
  CHECK_THROWS_AS(parse_graph("{}"), SyntaxError);
  // endpoint 3 in two vertices
  const char* dup = R"({
    "edges": [ { "length": 1 }, { "length": 1 } ],
    "vertices": [
      { "endpoints": [1, 3], "condition": "standard" },
      { "endpoints": [2, 3, 4], "condition": "standard" }
    ]
  })";
  CHECK_THROWS_WITH_AS(parse_graph(dup), doctest::Contains("duplicate endpoint"), SyntaxError);
  const char* badcond = R"({
    "edges": [ { "length": 1 } ],
    "vertices": [ { "endpoints": [1, 2], "condition": "neumann" } ]
  })";
  CHECK_THROWS_WITH_AS(parse_graph(badcond), doctest::Contains("condition"), SyntaxError);
}

TEST_CASE("validate: clean and broken graphs") {
  MetricGraph good = fixtures::interval(kPi, VertexCondition::Dirichlet, VertexCondition::Dirichlet);
  ValidationReport rep = validate(good);
  CHECK(rep.ok);
  CHECK(rep.connected);
  CHECK(rep.components == 1);

  // Dirichlet vertex of degree 2 is rejected, not auto-split
  MetricGraph bad = fixtures::path({1.0, 1.0});
  bad.vertices[1].condition = VertexCondition::Dirichlet;
  rep = validate(bad);
  CHECK_FALSE(rep.ok);
  bool found = false;
  for (const auto& iss : rep.issues)
    if (iss.code == IssueCode::DirichletDegree) found = true;
  CHECK(found);

  MetricGraph disjoint = fixtures::two_circles(1.0, 2.0);
  rep = validate(disjoint);
  CHECK(rep.ok);
  CHECK_FALSE(rep.connected);
  CHECK(rep.components == 2);

  MetricGraph neg = fixtures::circle(1.0);
  neg.edges[0].length = -2.0;
  CHECK_FALSE(validate(neg).ok);

  MetricGraph unassigned = fixtures::interval(1.0, VertexCondition::Standard, VertexCondition::Standard);
  unassigned.vertices.pop_back();
  rep = validate(unassigned);
  CHECK_FALSE(rep.ok);
  CHECK(rep.issues[0].code == IssueCode::Partition);
}

TEST_CASE("euler characteristic and betti number") {
  CHECK(euler_characteristic(fixtures::interval(kPi, VertexCondition::Dirichlet,
                                                VertexCondition::Dirichlet)) == 1);
  CHECK(euler_characteristic(fixtures::circle(1.0)) == 0);
  CHECK(euler_characteristic(fixtures::star({1, 1, 1})) == 1);

  CHECK(betti_number(fixtures::path({1, 2, 3})) == 0);
  CHECK(betti_number(fixtures::star({1, 1, 1})) == 0);
  CHECK(betti_number(fixtures::circle(1.0)) == 1);
  CHECK(betti_number(fixtures::figure_eight(1.0, 2.0)) == 2);
  CHECK(betti_number(fixtures::two_circles(1.0, 2.0)) == 2);
}

TEST_CASE("euler + betti = components (property)") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    MetricGraph g = fixtures::random_graph(rng);
    REQUIRE(validate(g).ok);
    int b = betti_number(g);
    CHECK(b >= 0);
    CHECK(euler_characteristic(g) + b == validate(g).components);
  }
}

TEST_CASE("subdivide_edge") {
  MetricGraph g = fixtures::interval(kPi, VertexCondition::Dirichlet, VertexCondition::Dirichlet);
  MetricGraph s = subdivide_edge(g, 0, kPi / 2);
  CHECK(s.num_edges() == 2);
  CHECK(s.num_vertices() == 3);
  CHECK(s.edges[0].length == doctest::Approx(kPi / 2));
  CHECK(s.edges[1].length == doctest::Approx(kPi / 2));
  CHECK(validate(s).ok);
  CHECK(s.vertices.back().condition == VertexCondition::Standard);
  CHECK(s.vertices.back().endpoints.size() == 2);

  CHECK_THROWS(subdivide_edge(g, 0, 0.0));
  CHECK_THROWS(subdivide_edge(g, 0, kPi));
  CHECK_THROWS(subdivide_edge(g, 5, 0.5));

  MetricGraph c = subdivide_edge(fixtures::circle(2 * kPi), 0, kPi);
  CHECK(validate(c).ok);
  CHECK(c.num_edges() == 2);
  CHECK(c.num_vertices() == 2);
}

TEST_CASE("subdivision preserves total length and chi (property)") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    MetricGraph g = fixtures::random_graph(rng);
    int e = static_cast<int>(rng() % static_cast<unsigned>(g.num_edges()));
    std::uniform_real_distribution<double> pos(0.05, 0.95);
    MetricGraph s = subdivide_edge(g, e, pos(rng) * g.edges[e].length);
    CHECK(validate(s).ok);
    CHECK(s.num_edges() == g.num_edges() + 1);
    CHECK(s.num_vertices() == g.num_vertices() + 1);
    CHECK(s.total_length() == doctest::Approx(g.total_length()).epsilon(1e-14));
    CHECK(euler_characteristic(s) == euler_characteristic(g));
    CHECK(betti_number(s) == betti_number(g));
  }
}

TEST_CASE("perturb_length") {
  MetricGraph g = fixtures::interval(kPi, VertexCondition::Standard, VertexCondition::Standard);
  MetricGraph p = perturb_length(g, 0, 0.1);
  CHECK(p.edges[0].length == doctest::Approx(kPi + 0.1));
  CHECK(perturb_length(g, 0, 0.0) == g);
  CHECK_THROWS(perturb_length(g, 0, -kPi));
  CHECK_THROWS(perturb_length(g, 4, 0.1));
}

TEST_CASE("parse / serialize round trip (property)") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    MetricGraph g = fixtures::random_graph(rng);
    MetricGraph back = parse_graph(serialize_graph(g));
    CHECK(back == g);
  }
}

TEST_CASE("lambda0 multiplicity bookkeeping") {
  CHECK(lambda0_multiplicity(fixtures::circle(1.0)) == 1);
  CHECK(lambda0_multiplicity(fixtures::two_circles(1.0, 2.0)) == 2);
  CHECK(lambda0_multiplicity(fixtures::interval(1.0, VertexCondition::Dirichlet,
                                                VertexCondition::Standard)) == 0);
  CHECK(lambda0_multiplicity(fixtures::path({1, 2})) == 1);
}
