#pragma once

#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgraph/errors.hpp"

namespace qgraph {

enum class VertexCondition { Standard, Dirichlet };

struct GraphEdge {
  double length = 0.0;
};

struct GraphVertex {
  std::vector<int> endpoints;  // 0-based endpoint indices, as given
  VertexCondition condition = VertexCondition::Standard;
};

// Compact metric graph. Edge n owns endpoints 2n and 2n+1 (0-based); the
// vertex list partitions the endpoint set. The struct itself is a plain
// value; validate() reports every invariant violation instead of this type
// enforcing them, so that broken documents can be inspected.
struct MetricGraph {
  std::vector<GraphEdge> edges;
  std::vector<GraphVertex> vertices;

  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_endpoints() const { return 2 * num_edges(); }

  static int edge_of_endpoint(int ep) { return ep / 2; }
  static int partner(int ep) { return ep ^ 1; }
  // endpoint 2n sits at t=0 on edge n, endpoint 2n+1 at t=length
  static bool is_left_endpoint(int ep) { return (ep & 1) == 0; }

  double total_length() const {
    double acc = 0.0;
    for (const auto& e : edges) acc += e.length;
    return acc;
  }

  // -1 where an endpoint is not assigned to any vertex (invalid graphs)
  std::vector<int> endpoint_to_vertex() const {
    std::vector<int> map(num_endpoints(), -1);
    for (int v = 0; v < num_vertices(); ++v) {
      for (int ep : vertices[v].endpoints) {
        if (ep >= 0 && ep < num_endpoints() && map[ep] == -1) map[ep] = v;
      }
    }
    return map;
  }

  int vertex_degree(int v) const { return static_cast<int>(vertices[v].endpoints.size()); }

  bool has_dirichlet_vertex() const {
    for (const auto& v : vertices)
      if (v.condition == VertexCondition::Dirichlet) return true;
    return false;
  }

  friend bool operator==(const MetricGraph& a, const MetricGraph& b) {
    if (a.num_edges() != b.num_edges() || a.num_vertices() != b.num_vertices()) return false;
    for (int n = 0; n < a.num_edges(); ++n)
      if (a.edges[n].length != b.edges[n].length) return false;
    for (int v = 0; v < a.num_vertices(); ++v) {
      if (a.vertices[v].condition != b.vertices[v].condition) return false;
      if (a.vertices[v].endpoints != b.vertices[v].endpoints) return false;
    }
    return true;
  }
};

enum class IssueCode {
  NonPositiveLength,
  Partition,        // endpoint missing, duplicated, or out of range
  DirichletDegree,  // Dirichlet vertex of degree != 1
  EmptyVertex,
  EmptyGraph,
};

inline const char* issue_code_name(IssueCode c) {
  switch (c) {
    case IssueCode::NonPositiveLength: return "length";
    case IssueCode::Partition: return "partition";
    case IssueCode::DirichletDegree: return "dirichlet-degree";
    case IssueCode::EmptyVertex: return "empty-vertex";
    case IssueCode::EmptyGraph: return "empty-graph";
  }
  return "unknown";
}

struct ValidationIssue {
  IssueCode code;
  std::string message;
};

struct ValidationReport {
  bool ok = false;
  std::vector<ValidationIssue> issues;
  bool connected = false;
  int components = 0;
};

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace detail

inline ValidationReport validate(const MetricGraph& g) {
  ValidationReport rep;
  const int n_ep = g.num_endpoints();

  if (g.num_edges() == 0 || g.num_vertices() == 0) {
    rep.issues.push_back({IssueCode::EmptyGraph, "graph has no edges or no vertices"});
  }

  for (int n = 0; n < g.num_edges(); ++n) {
    if (!(g.edges[n].length > 0.0) || !std::isfinite(g.edges[n].length)) {
      rep.issues.push_back({IssueCode::NonPositiveLength,
                            "edge " + std::to_string(n + 1) + " has non-positive length"});
    }
  }

  std::vector<int> seen(n_ep, 0);
  for (int v = 0; v < g.num_vertices(); ++v) {
    const auto& vert = g.vertices[v];
    if (vert.endpoints.empty()) {
      rep.issues.push_back({IssueCode::EmptyVertex,
                            "vertex " + std::to_string(v + 1) + " has no endpoints"});
    }
    for (int ep : vert.endpoints) {
      if (ep < 0 || ep >= n_ep) {
        rep.issues.push_back({IssueCode::Partition,
                              "vertex " + std::to_string(v + 1) + " references endpoint " +
                                  std::to_string(ep + 1) + " beyond the edge list"});
      } else {
        ++seen[ep];
      }
    }
    if (vert.condition == VertexCondition::Dirichlet && vert.endpoints.size() != 1) {
      rep.issues.push_back({IssueCode::DirichletDegree,
                            "dirichlet-degree: vertex " + std::to_string(v + 1) +
                                " has degree " + std::to_string(vert.endpoints.size())});
    }
  }
  for (int ep = 0; ep < n_ep; ++ep) {
    if (seen[ep] == 0) {
      rep.issues.push_back({IssueCode::Partition,
                            "endpoint " + std::to_string(ep + 1) + " belongs to no vertex"});
    } else if (seen[ep] > 1) {
      rep.issues.push_back({IssueCode::Partition,
                            "endpoint " + std::to_string(ep + 1) + " belongs to several vertices"});
    }
  }

  // connectivity over the vertex set via endpoint incidence
  if (g.num_vertices() > 0) {
    detail::UnionFind uf(g.num_vertices());
    std::vector<int> ep2v = g.endpoint_to_vertex();
    for (int n = 0; n < g.num_edges(); ++n) {
      int a = ep2v[2 * n], b = ep2v[2 * n + 1];
      if (a >= 0 && b >= 0) uf.unite(a, b);
    }
    std::set<int> roots;
    for (int v = 0; v < g.num_vertices(); ++v) roots.insert(uf.find(v));
    rep.components = static_cast<int>(roots.size());
    rep.connected = rep.components == 1;
  }

  rep.ok = rep.issues.empty();
  return rep;
}

inline void require_valid(const MetricGraph& g) {
  ValidationReport rep = validate(g);
  if (!rep.ok) {
    std::string msg = "invalid graph:";
    for (const auto& iss : rep.issues) msg += " [" + std::string(issue_code_name(iss.code)) + "] " + iss.message + ";";
    throw ValidationError(msg);
  }
}

inline int euler_characteristic(const MetricGraph& g) {
  return g.num_vertices() - g.num_edges();
}

inline int betti_number(const MetricGraph& g) {
  ValidationReport rep = validate(g);
  return g.num_edges() - g.num_vertices() + rep.components;
}

// Splits edge `edge` at interior position `position`, inserting a standard
// degree-2 vertex. Degree-2 standard vertices are spectrally invisible, so
// this is the natural mutation for invariance tests.
inline MetricGraph subdivide_edge(const MetricGraph& g, int edge, double position) {
  if (edge < 0 || edge >= g.num_edges()) throw UsageError("subdivide_edge: edge index out of range");
  const double len = g.edges[edge].length;
  if (!(position > 0.0) || !(position < len))
    throw UsageError("subdivide_edge: position must lie strictly inside the edge");

  MetricGraph out;
  out.edges.reserve(g.edges.size() + 1);
  for (int n = 0; n < g.num_edges(); ++n) {
    if (n == edge) {
      out.edges.push_back({position});
      out.edges.push_back({len - position});
    } else {
      out.edges.push_back(g.edges[n]);
    }
  }

  // old endpoint -> new endpoint: endpoints of later edges shift by 2; the
  // right endpoint of the split edge moves to the second half-edge
  auto remap = [&](int ep) {
    if (ep < 2 * edge) return ep;
    if (ep == 2 * edge) return ep;            // left end of first half
    if (ep == 2 * edge + 1) return ep + 2;    // right end of second half
    return ep + 2;
  };
  out.vertices.reserve(g.vertices.size() + 1);
  for (const auto& v : g.vertices) {
    GraphVertex nv;
    nv.condition = v.condition;
    for (int ep : v.endpoints) nv.endpoints.push_back(remap(ep));
    out.vertices.push_back(std::move(nv));
  }
  out.vertices.push_back({{2 * edge + 1, 2 * edge + 2}, VertexCondition::Standard});
  return out;
}

inline MetricGraph perturb_length(const MetricGraph& g, int edge, double delta) {
  if (edge < 0 || edge >= g.num_edges()) throw UsageError("perturb_length: edge index out of range");
  if (!(g.edges[edge].length + delta > 0.0))
    throw UsageError("perturb_length: resulting length must stay positive");
  MetricGraph out = g;
  out.edges[edge].length += delta;
  return out;
}

// --- document format -------------------------------------------------------
//
// { "edges":    [ { "length": <float> }, ... ],
//   "vertices": [ { "endpoints": [<int>, ...], "condition": "standard"|"dirichlet" }, ... ] }
//
// Endpoints are 1-based in documents; edge n (1-based) owns 2n-1 and 2n.

inline MetricGraph parse_graph(const std::string& document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw SyntaxError(std::string("graph document: ") + e.what());
  }

  MetricGraph g;
  try {
    if (!doc.is_object() || !doc.contains("edges") || !doc.contains("vertices"))
      throw SyntaxError("graph document: expected object with \"edges\" and \"vertices\"");

    for (const auto& e : doc.at("edges")) {
      g.edges.push_back({e.at("length").get<double>()});
    }

    std::set<int> assigned;
    for (const auto& v : doc.at("vertices")) {
      GraphVertex vert;
      const std::string cond = v.at("condition").get<std::string>();
      if (cond == "standard") vert.condition = VertexCondition::Standard;
      else if (cond == "dirichlet") vert.condition = VertexCondition::Dirichlet;
      else throw SyntaxError("graph document: unknown condition keyword \"" + cond + "\"");
      for (const auto& epj : v.at("endpoints")) {
        int ep1 = epj.get<int>();
        if (!assigned.insert(ep1).second)
          throw SyntaxError("graph document: duplicate endpoint " + std::to_string(ep1));
        vert.endpoints.push_back(ep1 - 1);
      }
      g.vertices.push_back(std::move(vert));
    }
  } catch (const SyntaxError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw SyntaxError(std::string("graph document: ") + e.what());
  }
  return g;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline std::string serialize_graph(const MetricGraph& g) {
  std::string out = "{\n  \"edges\": [\n";
  for (int n = 0; n < g.num_edges(); ++n) {
    out += "    { \"length\": " + detail::format_double(g.edges[n].length) + " }";
    out += n + 1 < g.num_edges() ? ",\n" : "\n";
  }
  out += "  ],\n  \"vertices\": [\n";
  for (int v = 0; v < g.num_vertices(); ++v) {
    out += "    { \"endpoints\": [";
    for (std::size_t i = 0; i < g.vertices[v].endpoints.size(); ++i) {
      out += std::to_string(g.vertices[v].endpoints[i] + 1);
      if (i + 1 < g.vertices[v].endpoints.size()) out += ", ";
    }
    out += "], \"condition\": \"";
    out += g.vertices[v].condition == VertexCondition::Standard ? "standard" : "dirichlet";
    out += "\" }";
    out += v + 1 < g.num_vertices() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

// Components of the vertex set, plus whether each touches a Dirichlet vertex;
// the lambda = 0 eigenspace is spanned by the indicator constants of the
// Dirichlet-free components.
struct ComponentInfo {
  std::vector<int> vertex_component;   // vertex -> component id (0-based)
  std::vector<bool> has_dirichlet;     // per component
  std::vector<double> length;          // per component
  int count = 0;
};

inline ComponentInfo component_info(const MetricGraph& g) {
  ComponentInfo info;
  detail::UnionFind uf(g.num_vertices());
  std::vector<int> ep2v = g.endpoint_to_vertex();
  for (int n = 0; n < g.num_edges(); ++n) {
    int a = ep2v[2 * n], b = ep2v[2 * n + 1];
    if (a >= 0 && b >= 0) uf.unite(a, b);
  }
  std::vector<int> root_id(g.num_vertices(), -1);
  info.vertex_component.assign(g.num_vertices(), -1);
  for (int v = 0; v < g.num_vertices(); ++v) {
    int r = uf.find(v);
    if (root_id[r] == -1) {
      root_id[r] = info.count++;
      info.has_dirichlet.push_back(false);
      info.length.push_back(0.0);
    }
    info.vertex_component[v] = root_id[r];
    if (g.vertices[v].condition == VertexCondition::Dirichlet)
      info.has_dirichlet[root_id[r]] = true;
  }
  for (int n = 0; n < g.num_edges(); ++n) {
    int a = ep2v[2 * n];
    if (a >= 0) info.length[info.vertex_component[a]] += g.edges[n].length;
  }
  return info;
}

inline int lambda0_multiplicity(const MetricGraph& g) {
  ComponentInfo info = component_info(g);
  int m = 0;
  for (int c = 0; c < info.count; ++c)
    if (!info.has_dirichlet[c]) ++m;
  return m;
}

}  // namespace qgraph
