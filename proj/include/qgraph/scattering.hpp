#pragma once

#include <complex>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/linalg.hpp"
#include "qgraph/rational.hpp"

namespace qgraph {

// Scattering block of a standard vertex of degree d: -I + (2/d) * ones.
// The 2/d coefficient is the one forced by unitarity / involutivity; it
// reproduces Neumann reflection at d=1 and perfect transmission at d=2.
inline Matrix standard_vertex_block(int d) {
  if (d < 1) throw UsageError("standard_vertex_block: degree must be positive");
  Matrix m(d, d);
  const double off = 2.0 / d;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = (i == j ? off - 1.0 : off);
  return m;
}

inline Matrix dirichlet_vertex_block() {
  Matrix m(1, 1);
  m(0, 0) = -1.0;
  return m;
}

// Exact entry of the vertex scattering matrix in endpoint order.
inline Rational vertex_scattering_entry(const MetricGraph& g,
                                        const std::vector<int>& ep2v,
                                        int i, int j) {
  int vi = ep2v[i];
  if (vi < 0 || vi != ep2v[j]) return Rational(0);
  const GraphVertex& v = g.vertices[vi];
  if (v.condition == VertexCondition::Dirichlet) return Rational(-1);
  const int d = static_cast<int>(v.endpoints.size());
  if (i == j) return Rational(2 - d, d);
  return Rational(2, d);
}

// Full 2N x 2N vertex scattering matrix, native endpoint order (block
// structure appears only after permuting endpoints by vertex).
inline Matrix vertex_scattering(const MetricGraph& g) {
  require_valid(g);
  const int dim = g.num_endpoints();
  Matrix s(dim, dim);
  std::vector<int> ep2v = g.endpoint_to_vertex();
  for (int v = 0; v < g.num_vertices(); ++v) {
    const auto& verts = g.vertices[v].endpoints;
    if (g.vertices[v].condition == VertexCondition::Dirichlet) {
      s(verts[0], verts[0]) = -1.0;
      continue;
    }
    const int d = static_cast<int>(verts.size());
    const double off = 2.0 / d;
    for (int a : verts)
      for (int b : verts) s(a, b) = (a == b ? off - 1.0 : off);
  }
  return s;
}

// E(z): block-diagonal over edges with antidiagonal blocks [[0, z_n], [z_n, 0]].
inline Matrix generalized_edge_matrix(const std::vector<Cplx>& z) {
  const int n = static_cast<int>(z.size());
  Matrix m(2 * n, 2 * n);
  for (int e = 0; e < n; ++e) {
    m(2 * e, 2 * e + 1) = z[e];
    m(2 * e + 1, 2 * e) = z[e];
  }
  return m;
}

inline std::vector<Cplx> edge_phases(const MetricGraph& g, Cplx k) {
  std::vector<Cplx> z(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e)
    z[e] = std::exp(Cplx(0.0, 1.0) * k * g.edges[e].length);
  return z;
}

// S_e(k) = E(e^{ik l}); shares the computation path with the generalized
// matrix so the two agree exactly.
inline Matrix edge_matrix(const MetricGraph& g, Cplx k) {
  return generalized_edge_matrix(edge_phases(g, k));
}

}  // namespace qgraph
