#pragma once

#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qgraph/eigenfunction.hpp"
#include "qgraph/spectral.hpp"

namespace qgraph {

struct GenericityReport {
  double k = 0.0;
  bool simple = false;
  double min_vertex_value = 0.0;  // relative to sup norm; +inf over an empty set
  bool generic = false;
  std::vector<int> failing_vertices;
};

// Definition check: simple eigenvalue whose eigenfunction avoids zero at all
// non-Dirichlet vertices. For multiplicity > 1 vertex values are basis
// dependent, so the check short-circuits to false without evaluating them.
inline GenericityReport genericity(const MetricGraph& g, const Eigenpair& pair,
                                   double threshold = 1e-6) {
  GenericityReport rep;
  rep.k = pair.k;
  rep.simple = pair.multiplicity == 1;
  if (!rep.simple) return rep;

  Eigenfunction f = eigenfunction(g, pair, 0);
  auto vals = vertex_values(f);
  const double sup = f.sup_norm();
  double min_rel = std::numeric_limits<double>::infinity();
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (g.vertices[v].condition == VertexCondition::Dirichlet) continue;
    double rel = std::abs(vals.at(v)) / sup;
    if (rel <= threshold) rep.failing_vertices.push_back(v);
    min_rel = std::min(min_rel, rel);
  }
  rep.min_vertex_value = min_rel;
  rep.generic = rep.failing_vertices.empty();
  return rep;
}

inline bool is_tree(const MetricGraph& g) {
  ValidationReport rep = validate(g);
  return rep.ok && rep.connected && betti_number(g) == 0;
}

// The graphs guaranteed to carry an infinite generic sequence: trees, and
// graphs with at least one Dirichlet vertex.
inline bool admits_generic_sequence(const MetricGraph& g) {
  return is_tree(g) || g.has_dirichlet_vertex();
}

struct GenericSequence {
  std::vector<Eigenpair> pairs;            // generic pairs, increasing k
  std::vector<GenericityReport> reports;   // aligned with pairs
  bool insufficient = false;               // fewer than requested below k_max
  bool hypotheses_met = false;
};

// First `count` generic eigenpairs below k_max; the lambda = 0 constant
// participates as a candidate when it is simple.
inline GenericSequence generic_sequence(const MetricGraph& g, int count, double k_max,
                                        double threshold = 1e-6,
                                        const SpectralOptions& opt = {}) {
  if (count <= 0) throw UsageError("generic_sequence: count must be positive");
  GenericSequence seq;
  seq.hypotheses_met = admits_generic_sequence(g);

  std::vector<Eigenpair> candidates;
  if (auto zero = lambda0_eigenpair(g)) candidates.push_back(std::move(*zero));
  SpectrumSlice slice = find_spectrum(g, k_max, opt);
  for (auto& z : slice.zeros) candidates.push_back(std::move(z));

  for (const auto& pair : candidates) {
    if (static_cast<int>(seq.pairs.size()) >= count) break;
    GenericityReport rep = genericity(g, pair, threshold);
    if (!rep.generic) continue;
    seq.pairs.push_back(pair);
    seq.reports.push_back(std::move(rep));
  }
  seq.insufficient = static_cast<int>(seq.pairs.size()) < count;
  return seq;
}

// d lambda / d l_n = -(psi'(x)^2 + lambda psi(x)^2) on edge n, evaluated at
// the edge midpoint after asserting the Prufer amplitude really is constant.
inline double hadamard_derivative(const MetricGraph& g, const Eigenpair& pair, int edge) {
  if (pair.multiplicity != 1)
    throw UsageError("hadamard_derivative: eigenvalue is not simple");
  if (edge < 0 || edge >= g.num_edges())
    throw UsageError("hadamard_derivative: edge index out of range");
  Eigenfunction f = eigenfunction(g, pair, 0);
  const double l = g.edges[edge].length;
  const double want = f.prufer_amplitude(edge);
  double lo = want, hi = want;
  for (int j = 0; j <= 10; ++j) {
    double t = l * j / 10.0;
    double psi = f.evaluate(edge, t), dpsi = f.derivative(edge, t);
    double v = dpsi * dpsi + f.k() * f.k() * psi * psi;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double scale = std::max({hi, f.k() * f.k() * f.sup_norm() * f.sup_norm(), 1e-300});
  if ((hi - lo) / scale > 1e-6)
    throw InconsistentEigenfunctionError("hadamard_derivative: Prufer amplitude varies along edge");
  const double tm = 0.5 * l;
  double psi = f.evaluate(edge, tm), dpsi = f.derivative(edge, tm);
  return -(dpsi * dpsi + f.lambda() * psi * psi);
}

struct NodalDecomposition {
  std::map<int, std::vector<double>> interior_zeros;           // edge -> sorted t
  std::vector<int> vertex_zeros;                               // |psi(V)| under threshold
  int domain_count = 0;
  std::map<std::pair<int, int>, int> domain_assignment;        // (edge, segment) -> id
  bool generic = true;  // false when a non-Dirichlet vertex (or whole edge) vanishes
};

// Nodal decomposition from the exact trigonometric zeros of the realified
// eigenfunction; segments are glued across vertices where psi does not
// vanish.
inline NodalDecomposition nodal_domains(const MetricGraph& g, const Eigenpair& pair,
                                        double threshold = 1e-6) {
  if (pair.multiplicity != 1) throw UsageError("nodal_domains: eigenvalue is not simple");
  Eigenfunction f = eigenfunction(g, pair, 0);
  const double sup = f.sup_norm();
  if (!(sup > 0)) throw Error("nodal_domains: zero eigenfunction");
  const double k = f.k();
  const double pi = 3.14159265358979323846;

  NodalDecomposition out;
  auto vals = vertex_values(f);
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (std::abs(vals.at(v)) <= threshold * sup) {
      out.vertex_zeros.push_back(v);
      if (g.vertices[v].condition != VertexCondition::Dirichlet) out.generic = false;
    }
  }

  // interior zeros and signed segments per edge
  std::vector<std::vector<double>> zeros(g.num_edges());
  std::vector<bool> silent(g.num_edges(), false);
  for (int e = 0; e < g.num_edges(); ++e) {
    const double l = g.edges[e].length;
    if (f.edge_is_silent(e, threshold)) {
      silent[e] = true;
      out.generic = false;
      continue;
    }
    if (k > 0.0) {
      const double phi = std::arg(f.edge_wave(e));
      const double guard = 1e-9 * std::max(1.0, l);
      // cos(k t + phi) = 0 at k t + phi = pi/2 + m pi
      long m_lo = static_cast<long>(std::ceil((k * guard + phi - pi / 2) / pi));
      for (long m = m_lo;; ++m) {
        double t = (pi / 2 + m * pi - phi) / k;
        if (t >= l - guard) break;
        if (t > guard) zeros[e].push_back(t);
      }
    }
    if (!zeros[e].empty()) out.interior_zeros[e] = zeros[e];
  }

  // union-find across segments
  std::vector<int> seg_offset(g.num_edges() + 1, 0);
  for (int e = 0; e < g.num_edges(); ++e)
    seg_offset[e + 1] = seg_offset[e] + (silent[e] ? 0 : static_cast<int>(zeros[e].size()) + 1);
  const int n_segments = seg_offset[g.num_edges()];
  detail::UnionFind uf(n_segments);

  auto end_segment = [&](int ep) -> int {
    int e = MetricGraph::edge_of_endpoint(ep);
    if (silent[e]) return -1;
    if (MetricGraph::is_left_endpoint(ep)) return seg_offset[e];
    return seg_offset[e + 1] - 1;
  };

  for (int v = 0; v < g.num_vertices(); ++v) {
    if (std::abs(vals.at(v)) <= threshold * sup) continue;  // zero vertices do not glue
    int first = -1;
    for (int ep : g.vertices[v].endpoints) {
      int seg = end_segment(ep);
      if (seg < 0) continue;
      if (first < 0) first = seg;
      else uf.unite(first, seg);
    }
  }

  std::map<int, int> root_to_id;
  for (int e = 0; e < g.num_edges(); ++e) {
    if (silent[e]) continue;
    const int segs = static_cast<int>(zeros[e].size()) + 1;
    for (int j = 0; j < segs; ++j) {
      int root = uf.find(seg_offset[e] + j);
      auto [it, inserted] = root_to_id.emplace(root, static_cast<int>(root_to_id.size()));
      out.domain_assignment[{e, j}] = it->second;
    }
  }
  out.domain_count = static_cast<int>(root_to_id.size());
  return out;
}

struct ParityRow {
  int index = 0;  // position in the full spectrum, multiplicity counted, lambda=0 included
  double k = 0.0;
  int multiplicity = 1;
  double min_vertex_value = 0.0;
  bool generic = true;
  int nodal_count = 0;
  bool parity_match = false;
};

struct ParityReport {
  bool hypotheses_met = false;
  int chi = 0;
  std::vector<ParityRow> rows;
  int matches = 0;
  bool insufficient = false;
};

// Nodal-domain parity of the first `count` generic eigenfunctions against the
// parity of the Euler characteristic. Reports the observed counts; the
// underlying statement concerns an infinite sequence and is not decidable
// at finite depth.
inline ParityReport parity_scan(const MetricGraph& g, int count, double k_max,
                                double threshold = 1e-6, const SpectralOptions& opt = {}) {
  ParityReport rep;
  rep.hypotheses_met = admits_generic_sequence(g);
  rep.chi = euler_characteristic(g);
  const int chi_parity = ((rep.chi % 2) + 2) % 2;

  GenericSequence seq = generic_sequence(g, count, k_max, threshold, opt);
  rep.insufficient = seq.insufficient;

  // full-spectrum indices for the generic pairs
  SpectrumSlice slice = find_spectrum(g, k_max, opt);
  auto index_of = [&](double k) {
    int idx = lambda0_multiplicity(g);
    if (k == 0.0) return 1;  // the constant is the ground state when present
    for (const auto& z : slice.zeros) {
      if (z.k < k - 1e-9) idx += z.multiplicity;
      else break;
    }
    return idx + 1;
  };

  for (std::size_t i = 0; i < seq.pairs.size(); ++i) {
    const Eigenpair& pair = seq.pairs[i];
    NodalDecomposition nd = nodal_domains(g, pair, threshold);
    ParityRow row;
    row.index = index_of(pair.k);
    row.k = pair.k;
    row.multiplicity = pair.multiplicity;
    row.min_vertex_value = seq.reports[i].min_vertex_value;
    row.generic = true;
    row.nodal_count = nd.domain_count;
    row.parity_match = (nd.domain_count % 2) == chi_parity;
    if (row.parity_match) ++rep.matches;
    rep.rows.push_back(row);
  }
  return rep;
}

struct EquilateralReport {
  double edge_length = 0.0;
  double k_special = 0.0;          // 2 pi / l
  int multiplicity = 0;
  int expected_multiplicity = 0;   // 1 + beta_1
  bool multiplicity_ok = false;
  double vertex_value_spread = 0.0;  // of the equal-value eigenspace member, rel. sup
  bool equal_vertex_values_ok = false;
  bool periodicity_ok = false;
};

// Checks the special eigenvalue (2 pi / l)^2 of an all-standard equilateral
// graph: multiplicity 1 + beta_1, an eigenspace member with one common
// nonzero value at every vertex, and spectral periodicity with period
// 2 pi / l.
inline EquilateralReport equilateral_check(const MetricGraph& g,
                                           const SpectralOptions& opt = {}) {
  require_valid(g);
  const double pi = 3.14159265358979323846;
  const double l = g.edges[0].length;
  for (const auto& e : g.edges)
    if (std::abs(e.length - l) > 1e-12 * l)
      throw UsageError("equilateral_check: edge lengths differ");
  for (const auto& v : g.vertices)
    if (v.condition != VertexCondition::Standard)
      throw UsageError("equilateral_check: standard conditions required");

  EquilateralReport rep;
  rep.edge_length = l;
  rep.k_special = 2 * pi / l;
  rep.expected_multiplicity = 1 + betti_number(g);

  const double period = rep.k_special;
  SpectrumSlice slice = find_spectrum(g, 2 * period, opt);

  const Eigenpair* special = nullptr;
  for (const auto& z : slice.zeros)
    if (std::abs(z.k - rep.k_special) < 1e-6) special = &z;
  if (special != nullptr) {
    rep.multiplicity = special->multiplicity;
    rep.multiplicity_ok = rep.multiplicity == rep.expected_multiplicity;

    // least-squares combination with vertex values all equal to one
    std::vector<Eigenfunction> basis = real_eigenbasis(g, *special);
    const int m = static_cast<int>(basis.size());
    const int nv = g.num_vertices();
    Matrix vmat(nv, m), ones(nv, 1);
    for (int j = 0; j < m; ++j) {
      auto vals = vertex_values(basis[j]);
      for (int v = 0; v < nv; ++v) vmat(v, j) = vals.at(v);
    }
    for (int v = 0; v < nv; ++v) ones(v, 0) = 1.0;
    Matrix normal = vmat.conjugate_transpose() * vmat;
    Matrix rhs = vmat.conjugate_transpose() * ones;
    try {
      Matrix coef = solve(normal, rhs);
      std::vector<Cplx> combo(g.num_endpoints(), Cplx(0.0));
      for (int j = 0; j < m; ++j)
        for (int i = 0; i < g.num_endpoints(); ++i)
          combo[i] += coef(j, 0) * basis[j].amplitudes()[i];
      Eigenfunction fc = Eigenfunction::build(g, special->k, combo, Realify::Strict);
      auto vals = vertex_values(fc);
      double vmin = vals.at(0), vmax = vals.at(0);
      for (const auto& [v, val] : vals) {
        vmin = std::min(vmin, val);
        vmax = std::max(vmax, val);
      }
      rep.vertex_value_spread = (vmax - vmin) / fc.sup_norm();
      const double floor_rel = std::min(std::abs(vmin), std::abs(vmax)) / fc.sup_norm();
      rep.equal_vertex_values_ok = rep.vertex_value_spread <= 1e-8 && floor_rel > 1e-6;
    } catch (const Error&) {
      rep.equal_vertex_values_ok = false;
    }
  }

  // spectrum periodicity: zeros in (0, P] shifted by P match those in (P, 2P]
  std::vector<const Eigenpair*> first, second;
  for (const auto& z : slice.zeros) {
    if (z.k <= period + 1e-9) first.push_back(&z);
    else second.push_back(&z);
  }
  rep.periodicity_ok = first.size() == second.size();
  if (rep.periodicity_ok) {
    for (std::size_t i = 0; i < first.size(); ++i) {
      if (std::abs(second[i]->k - first[i]->k - period) > 1e-6 ||
          second[i]->multiplicity != first[i]->multiplicity) {
        rep.periodicity_ok = false;
        break;
      }
    }
  }
  return rep;
}

struct MFunctionSample {
  int vertex = 0;
  double lambda = 0.0;
  int n_max = 0;
  double value = 0.0;
};

// Truncated Titchmarsh-Weyl M-function at a vertex:
//   M(lambda) = -( sum_{n<=n_max} |psi_n(V0)|^2 / (lambda_n - lambda) )^{-1},
// summing over an orthonormal basis inside each eigenspace so degenerate
// eigenvalues contribute basis-independently.
inline MFunctionSample m_function_truncated(const MetricGraph& g, int vertex, double lambda,
                                            int n_max, const SpectralOptions& opt = {}) {
  require_valid(g);
  if (vertex < 0 || vertex >= g.num_vertices())
    throw UsageError("m_function_truncated: vertex index out of range");
  if (g.vertices[vertex].condition == VertexCondition::Dirichlet)
    throw UsageError("m_function_truncated: vertex must be non-Dirichlet");
  if (n_max <= 0) throw UsageError("m_function_truncated: empty sum is not invertible");

  // enough eigenpairs, counted with multiplicity
  std::vector<Eigenpair> pairs;
  int zero_mult = 0;
  if (auto zero = lambda0_eigenpair(g)) {
    zero_mult = zero->multiplicity;
    pairs.push_back(std::move(*zero));
  }
  double k_max = (n_max + 4) * 3.14159265358979323846 / g.total_length();
  for (int attempt = 0; attempt < 24; ++attempt) {
    SpectrumSlice slice = find_spectrum(g, k_max, opt);
    if (zero_mult + zero_count_with_multiplicity(slice) >= n_max) {
      for (auto& z : slice.zeros) pairs.push_back(std::move(z));
      break;
    }
    k_max *= 1.5;
  }

  const int ep0 = g.vertices[vertex].endpoints[0];
  double acc = 0.0;
  int used = 0;
  for (const auto& pair : pairs) {
    if (used >= n_max) break;
    if (std::abs(pair.lambda - lambda) < 1e-6)
      throw SolverError("m_function_truncated: lambda too close to an included eigenvalue");
    std::vector<Eigenfunction> basis = real_eigenbasis(g, pair);
    for (const auto& f : basis) {
      if (used >= n_max) break;
      double v = f.value_at_endpoint(ep0);
      acc += v * v / (pair.lambda - lambda);
      ++used;
    }
  }
  if (used < n_max)
    throw SolverError("m_function_truncated: could not collect enough eigenpairs");

  MFunctionSample out;
  out.vertex = vertex;
  out.lambda = lambda;
  out.n_max = n_max;
  out.value = -1.0 / acc;
  return out;
}

inline std::string parity_report_to_csv(const ParityReport& rep) {
  std::string out;
  out += "# hypotheses_met," + std::string(rep.hypotheses_met ? "1" : "0") + "\n";
  out += "# chi," + std::to_string(rep.chi) + "\n";
  out += "# insufficient," + std::string(rep.insufficient ? "1" : "0") + "\n";
  out += "index,k,multiplicity,min_vertex_value,generic,nodal_count,parity_match\n";
  for (const auto& r : rep.rows) {
    out += std::to_string(r.index) + "," + detail::fmt17(r.k) + "," +
           std::to_string(r.multiplicity) + "," + detail::fmt17(r.min_vertex_value) + "," +
           (r.generic ? "1" : "0") + "," + std::to_string(r.nodal_count) + "," +
           (r.parity_match ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace qgraph
