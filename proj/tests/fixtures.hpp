#pragma once

// Shared graph builders for the test suites.

#include <random>
#include <string>
#include <vector>

#include "qgraph/graph.hpp"

namespace fixtures {

using qgraph::MetricGraph;
using qgraph::VertexCondition;

inline MetricGraph interval(double len, VertexCondition left, VertexCondition right) {
  MetricGraph g;
  g.edges = {{len}};
  g.vertices = {{{0}, left}, {{1}, right}};
  return g;
}

inline MetricGraph circle(double len) {
  MetricGraph g;
  g.edges = {{len}};
  g.vertices = {{{0, 1}, VertexCondition::Standard}};
  return g;
}

// path of consecutive edges; interior vertices standard
inline MetricGraph path(const std::vector<double>& lens,
                        VertexCondition first = VertexCondition::Standard,
                        VertexCondition last = VertexCondition::Standard) {
  MetricGraph g;
  for (double l : lens) g.edges.push_back({l});
  const int n = static_cast<int>(lens.size());
  g.vertices.push_back({{0}, first});
  for (int i = 0; i + 1 < n; ++i)
    g.vertices.push_back({{2 * i + 1, 2 * i + 2}, VertexCondition::Standard});
  g.vertices.push_back({{2 * n - 1}, last});
  return g;
}

// star with a standard center; leaf i carries its own condition
inline MetricGraph star(const std::vector<double>& lens,
                        const std::vector<VertexCondition>& leaves) {
  MetricGraph g;
  const int n = static_cast<int>(lens.size());
  for (double l : lens) g.edges.push_back({l});
  std::vector<int> center;
  for (int i = 0; i < n; ++i) center.push_back(2 * i + 1);
  g.vertices.push_back({center, VertexCondition::Standard});
  for (int i = 0; i < n; ++i) g.vertices.push_back({{2 * i}, leaves[i]});
  return g;
}

inline MetricGraph star(const std::vector<double>& lens) {
  return star(lens, std::vector<VertexCondition>(lens.size(), VertexCondition::Standard));
}

// two loop edges sharing one standard vertex
inline MetricGraph figure_eight(double l1, double l2) {
  MetricGraph g;
  g.edges = {{l1}, {l2}};
  g.vertices = {{{0, 1, 2, 3}, VertexCondition::Standard}};
  return g;
}

inline MetricGraph two_circles(double l1, double l2) {
  MetricGraph g;
  g.edges = {{l1}, {l2}};
  g.vertices = {{{0, 1}, VertexCondition::Standard}, {{2, 3}, VertexCondition::Standard}};
  return g;
}

struct NamedGraph {
  std::string name;
  MetricGraph graph;
};

// The standing corpus used by the cross-cutting properties: interval, path,
// circle, 3-star with and without a Dirichlet leaf, figure-eight.
inline std::vector<NamedGraph> corpus() {
  const double pi = 3.14159265358979323846;
  std::vector<NamedGraph> out;
  out.push_back({"interval_dd", interval(pi, VertexCondition::Dirichlet, VertexCondition::Dirichlet)});
  out.push_back({"path3", path({1.0, std::sqrt(2.0), std::sqrt(3.0)})});
  out.push_back({"circle", circle(2.0 * pi)});
  out.push_back({"star3_dirichlet",
                 star({1.0, std::sqrt(2.0), pi / 3.0},
                      {VertexCondition::Dirichlet, VertexCondition::Standard,
                       VertexCondition::Standard})});
  out.push_back({"star3_equilateral", star({1.0, 1.0, 1.0})});
  out.push_back({"figure_eight", figure_eight(1.0, std::sqrt(2.0))});
  return out;
}

// Random connected graph for property tests: a random tree plus optionally a
// loop or an extra parallel edge, random Dirichlet leaves.
inline MetricGraph random_graph(std::mt19937_64& rng, int max_edges = 5) {
  std::uniform_real_distribution<double> len_dist(0.5, 2.5);
  int n_edges = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_edges));

  // grow a tree on vertex slots; vertex i of the tree collects endpoint ids
  std::vector<std::vector<int>> members(1);
  std::vector<double> lens;
  for (int e = 0; e < n_edges; ++e) {
    lens.push_back(len_dist(rng));
    int attach = static_cast<int>(rng() % members.size());
    members[attach].push_back(2 * e);
    members.push_back({2 * e + 1});
  }
  // occasionally close a cycle: move the last leaf endpoint into an earlier vertex
  if (n_edges >= 2 && rng() % 3 == 0) {
    int ep = members.back()[0];
    members.pop_back();
    members[rng() % members.size()].push_back(ep);
  }

  MetricGraph g;
  for (double l : lens) g.edges.push_back({l});
  for (const auto& m : members) {
    VertexCondition c = VertexCondition::Standard;
    if (m.size() == 1 && rng() % 3 == 0) c = VertexCondition::Dirichlet;
    g.vertices.push_back({m, c});
  }
  return g;
}

}  // namespace fixtures
