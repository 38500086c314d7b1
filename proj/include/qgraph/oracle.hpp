#pragma once

#include <cmath>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/linalg.hpp"

namespace qgraph {

// Brute-force reference: second-order finite differences on each edge with
// vertex coupling, assembled as the generalized pencil K u = lambda M u with
// a lumped diagonal mass. The vertex row is the ghost-point elimination of
// the central-difference Kirchhoff condition, which keeps K symmetric while
// retaining O(h^2) eigenvalue accuracy (equivalent to a second-order one-
// sided derivative closure). Eigenvalues are extracted by Sturm-sequence
// inertia counts and bisection, exploiting the chains-plus-vertices sparsity.
enum class AnalyticFamily { IntervalDD, IntervalSS, IntervalDS, Circle };

namespace detail {

struct FdChain {
  int points = 0;        // interior unknowns on this edge
  double h = 0.0;        // mesh width used for this edge
  int left_vertex = -1;  // index into the standard-vertex unknowns, -1 if Dirichlet
  int right_vertex = -1;
};

struct FdAssembly {
  std::vector<FdChain> chains;
  int n_vertex_unknowns = 0;
  std::vector<double> vertex_kdiag;  // sum of 1/h over incident ends
  std::vector<double> vertex_mdiag;  // sum of h/2 over incident ends
};

inline FdAssembly fd_assemble(const MetricGraph& g, double h) {
  require_valid(g);
  FdAssembly as;
  std::vector<int> ep2v = g.endpoint_to_vertex();

  std::vector<int> vertex_unknown(g.num_vertices(), -1);
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (g.vertices[v].condition == VertexCondition::Standard)
      vertex_unknown[v] = as.n_vertex_unknowns++;
  }
  as.vertex_kdiag.assign(as.n_vertex_unknowns, 0.0);
  as.vertex_mdiag.assign(as.n_vertex_unknowns, 0.0);

  for (int e = 0; e < g.num_edges(); ++e) {
    const double len = g.edges[e].length;
    const int cells = static_cast<int>(std::lround(len / h));
    if (cells < 8)
      throw SolverError("fd_spectrum: mesh step too coarse for edge " + std::to_string(e + 1));
    FdChain ch;
    ch.points = cells - 1;
    ch.h = len / cells;
    ch.left_vertex = vertex_unknown[ep2v[2 * e]];
    ch.right_vertex = vertex_unknown[ep2v[2 * e + 1]];
    for (int side = 0; side < 2; ++side) {
      int vu = side == 0 ? ch.left_vertex : ch.right_vertex;
      if (vu >= 0) {
        as.vertex_kdiag[vu] += 1.0 / ch.h;
        as.vertex_mdiag[vu] += ch.h / 2.0;
      }
    }
    as.chains.push_back(ch);
  }
  return as;
}

// Number of eigenvalues of the pencil (K, M) strictly below sigma, by block
// LDL^T: Sturm counts on the per-edge tridiagonal chains plus the inertia of
// the Schur complement on the vertex unknowns.
inline int fd_inertia(const FdAssembly& as, double sigma) {
  const int nv = as.n_vertex_unknowns;
  std::vector<std::vector<double>> schur(nv, std::vector<double>(nv, 0.0));
  for (int v = 0; v < nv; ++v)
    schur[v][v] = as.vertex_kdiag[v] - sigma * as.vertex_mdiag[v];

  int negatives = 0;
  std::vector<double> d, sol_a, sol_b;
  for (const auto& ch : as.chains) {
    const int m = ch.points;
    const double a = 2.0 / ch.h - sigma * ch.h;
    const double b = -1.0 / ch.h;
    const double pivmin = 1e-14 * (std::abs(a) + std::abs(b) + 1.0);

    d.assign(m, 0.0);
    double prev = a;
    if (std::abs(prev) < pivmin) prev = -pivmin;
    d[0] = prev;
    if (prev < 0) ++negatives;
    for (int i = 1; i < m; ++i) {
      double cur = a - (b * b) / prev;
      if (std::abs(cur) < pivmin) cur = -pivmin;
      d[i] = cur;
      if (cur < 0) ++negatives;
      prev = cur;
    }

    if (ch.left_vertex < 0 && ch.right_vertex < 0) continue;

    // coupling columns: weight -1/h at chain position 0 (left) / m-1 (right);
    // a loop contributes both positions to the same vertex column
    auto solve_chain = [&](const std::vector<std::pair<int, double>>& rhs,
                           std::vector<double>& u) {
      u.assign(m, 0.0);
      for (const auto& [pos, w] : rhs) u[pos] += w;
      for (int i = 1; i < m; ++i) u[i] -= (b / d[i - 1]) * u[i - 1];
      for (int i = 0; i < m; ++i) u[i] /= d[i];
      for (int i = m - 2; i >= 0; --i) u[i] -= (b / d[i]) * u[i + 1];
    };

    const double w = b;  // -1/h
    if (ch.left_vertex == ch.right_vertex) {
      std::vector<std::pair<int, double>> col = {{0, w}, {m - 1, w}};
      solve_chain(col, sol_a);
      double corr = w * sol_a[0] + w * sol_a[m - 1];
      schur[ch.left_vertex][ch.left_vertex] -= corr;
      continue;
    }
    if (ch.left_vertex >= 0) {
      solve_chain({{0, w}}, sol_a);
      schur[ch.left_vertex][ch.left_vertex] -= w * sol_a[0];
    }
    if (ch.right_vertex >= 0) {
      solve_chain({{m - 1, w}}, sol_b);
      schur[ch.right_vertex][ch.right_vertex] -= w * sol_b[m - 1];
    }
    if (ch.left_vertex >= 0 && ch.right_vertex >= 0) {
      double cross = w * sol_b[0];  // c_left^T T^{-1} c_right
      schur[ch.left_vertex][ch.right_vertex] -= cross;
      schur[ch.right_vertex][ch.left_vertex] -= cross;
    }
  }

  if (nv > 0) {
    for (double ev : symmetric_eigenvalues(schur))
      if (ev < 0) ++negatives;
  }
  return negatives;
}

}  // namespace detail

// Lowest `count` eigenvalues lambda of the discretized graph Laplacian.
inline std::vector<double> fd_spectrum(const MetricGraph& g, double h, int count) {
  if (count <= 0) throw UsageError("fd_spectrum: count must be positive");
  if (!(h > 0)) throw UsageError("fd_spectrum: step must be positive");
  detail::FdAssembly as = detail::fd_assemble(g, h);

  double gersh = 1.0;
  for (const auto& ch : as.chains) gersh = std::max(gersh, 4.0 / (ch.h * ch.h));
  const double lo0 = -1e-9;

  double hi = 1.0;
  while (detail::fd_inertia(as, hi) < count) {
    hi *= 8.0;
    if (hi > 64.0 * gersh)
      throw SolverError("fd_spectrum: not enough discrete eigenvalues for requested count");
  }

  std::vector<double> out;
  out.reserve(count);
  for (int j = 1; j <= count; ++j) {
    double lo = out.empty() ? lo0 : out.back() - 1e-9;
    double up = hi;
    while (up - lo > 1e-13 * std::max(1.0, std::abs(up))) {
      double mid = 0.5 * (lo + up);
      if (detail::fd_inertia(as, mid) >= j) up = mid;
      else lo = mid;
    }
    out.push_back(0.5 * (lo + up));
  }
  return out;
}

// Closed-form spectra of the canonical families: the first `count` distinct
// eigenvalues as (k, multiplicity) pairs in increasing order.
inline std::vector<std::pair<double, int>> analytic_spectrum(AnalyticFamily family,
                                                             double length, int count) {
  const double pi = 3.14159265358979323846;
  std::vector<std::pair<double, int>> out;
  int n = 1;
  switch (family) {
    case AnalyticFamily::IntervalDD:
      for (; static_cast<int>(out.size()) < count; ++n) out.push_back({n * pi / length, 1});
      break;
    case AnalyticFamily::IntervalSS:
      out.push_back({0.0, 1});
      for (; static_cast<int>(out.size()) < count; ++n) out.push_back({n * pi / length, 1});
      break;
    case AnalyticFamily::IntervalDS:
      for (; static_cast<int>(out.size()) < count; ++n)
        out.push_back({(n - 0.5) * pi / length, 1});
      break;
    case AnalyticFamily::Circle:
      out.push_back({0.0, 1});
      for (; static_cast<int>(out.size()) < count; ++n)
        out.push_back({2.0 * pi * n / length, 2});
      break;
  }
  out.resize(count);
  return out;
}

}  // namespace qgraph
