#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "qgraph/spectral.hpp"

namespace qgraph {

namespace detail {

// integral of e^{2ikt} over [0, l]
inline Cplx osc_integral(double k, double l) {
  if (k == 0.0) return Cplx(l, 0.0);
  const Cplx two_ik(0.0, 2.0 * k);
  return (std::exp(two_ik * l) - 1.0) / two_ik;
}

}  // namespace detail

// Hermitian L2(Gamma) inner product of the eigenfunction representations
// carried by two amplitude vectors at the same wavenumber.
inline Cplx amplitude_l2_inner(const MetricGraph& g, double k, const std::vector<Cplx>& a1,
                               const std::vector<Cplx>& a2) {
  Cplx acc = 0.0;
  for (int e = 0; e < g.num_edges(); ++e) {
    const double l = g.edges[e].length;
    const Cplx phase = std::exp(Cplx(0, 1) * k * l);
    const Cplx p1 = a1[2 * e], q1 = a1[2 * e + 1] * phase;
    const Cplx p2 = a2[2 * e], q2 = a2[2 * e + 1] * phase;
    const Cplx ip = detail::osc_integral(k, l);
    acc += (p1 * std::conj(p2) + q1 * std::conj(q2)) * l;
    acc += p1 * std::conj(q2) * ip + q1 * std::conj(p2) * std::conj(ip);
  }
  return acc;
}

// Amplitude vector of the complex conjugate function.
inline std::vector<Cplx> conjugate_amplitudes(const MetricGraph& g, double k,
                                              const std::vector<Cplx>& a) {
  std::vector<Cplx> out(a.size());
  for (int e = 0; e < g.num_edges(); ++e) {
    const Cplx phase = std::exp(Cplx(0, -1) * k * g.edges[e].length);
    out[2 * e] = std::conj(a[2 * e + 1]) * phase;
    out[2 * e + 1] = std::conj(a[2 * e]) * phase;
  }
  return out;
}

enum class Realify { Strict, Best };

// A realified, L2-normalized eigenfunction. Edge n carries
//   psi(t) = Re( a_{2n} e^{ikt} + a_{2n+1} e^{ik(l-t)} ) = Re( R_n e^{ikt} ),
// with R_n = a_{2n} + conj(a_{2n+1} e^{ikl}) after the global phase rotation
// that maximizes the real part's L2 norm. All evaluations and integrals are
// closed-form in the stored amplitudes.
class Eigenfunction {
 public:
  static Eigenfunction build(const MetricGraph& g, double k, const std::vector<Cplx>& raw,
                             Realify mode = Realify::Strict, double degenerate_tol = 1e-6) {
    require_valid(g);
    if (static_cast<int>(raw.size()) != g.num_endpoints())
      throw UsageError("Eigenfunction: amplitude vector has the wrong dimension");
    Eigenfunction f;
    f.graph_ = g;
    f.k_ = k;

    // global phase: maximize || Re(e^{i theta} f) ||_{L2}
    Cplx c = 0.0;
    double herm = 0.0;
    for (int e = 0; e < g.num_edges(); ++e) {
      const double l = g.edges[e].length;
      const Cplx phase = std::exp(Cplx(0, 1) * k * l);
      const Cplx p = raw[2 * e], q = raw[2 * e + 1] * phase;
      const Cplx ip = detail::osc_integral(k, l);
      c += p * p * ip + 2.0 * p * q * l + q * q * std::conj(ip);
      herm += std::real((std::norm(p) + std::norm(q)) * l + 2.0 * std::real(p * std::conj(q) * ip));
    }
    if (herm <= 0.0) throw Error("Eigenfunction: zero amplitude vector");
    const Cplx rot = std::abs(c) > 1e-300 * herm
                         ? std::exp(Cplx(0, -0.5) * std::arg(c))
                         : Cplx(1.0);

    f.amp_.resize(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) f.amp_[i] = rot * raw[i];

    const double real_norm2 = 0.5 * (std::real(c * rot * rot) + herm);
    if (!(real_norm2 > 0.0))
      throw Error("Eigenfunction: realified function vanishes identically");
    const double inv = 1.0 / std::sqrt(real_norm2);
    for (auto& a : f.amp_) a *= inv;

    f.refresh_derived();
    if (mode == Realify::Strict && f.realification_residual_ > degenerate_tol)
      throw DegeneratePairError(
          "Eigenfunction: basis vector spans a genuinely complex mode (residual " +
          std::to_string(f.realification_residual_) + "); combine basis vectors");
    return f;
  }

  double k() const { return k_; }
  double lambda() const { return k_ * k_; }
  const MetricGraph& graph() const { return graph_; }
  const std::vector<Cplx>& amplitudes() const { return amp_; }
  double sup_norm() const { return sup_; }
  double realification_residual() const { return realification_residual_; }
  Cplx edge_wave(int edge) const { return r_[edge]; }

  bool edge_is_silent(int edge, double rel_tol = 1e-9) const {
    return std::abs(r_[edge]) <= rel_tol * sup_;
  }

  double evaluate(int edge, double t) const {
    check_edge_t(edge, t);
    return std::real(r_[edge] * std::exp(Cplx(0, 1) * k_ * t));
  }

  double derivative(int edge, double t) const {
    check_edge_t(edge, t);
    return std::real(Cplx(0, 1) * k_ * r_[edge] * std::exp(Cplx(0, 1) * k_ * t));
  }

  // psi'(t)^2 + k^2 psi(t)^2, constant along each edge for a solution of
  // -psi'' = k^2 psi
  double prufer_amplitude(int edge) const { return k_ * k_ * std::norm(r_[edge]); }

  double value_at_endpoint(int ep) const {
    const int e = MetricGraph::edge_of_endpoint(ep);
    return evaluate(e, MetricGraph::is_left_endpoint(ep) ? 0.0 : graph_.edges[e].length);
  }

  double derivative_into_edge(int ep) const {
    const int e = MetricGraph::edge_of_endpoint(ep);
    // direction pointing inside the edge
    if (MetricGraph::is_left_endpoint(ep)) return derivative(e, 0.0);
    return -derivative(e, graph_.edges[e].length);
  }

  // closed form of the stored (complex) amplitude data; realification cannot
  // hide an inconsistency from these
  Cplx complex_value_at_endpoint(int ep) const {
    const int e = MetricGraph::edge_of_endpoint(ep);
    const Cplx ph = std::exp(Cplx(0, 1) * k_ * graph_.edges[e].length);
    if (MetricGraph::is_left_endpoint(ep)) return amp_[2 * e] + amp_[2 * e + 1] * ph;
    return amp_[2 * e] * ph + amp_[2 * e + 1];
  }

  Cplx complex_derivative_into_edge(int ep) const {
    const int e = MetricGraph::edge_of_endpoint(ep);
    const Cplx ik = Cplx(0, 1) * k_;
    const Cplx ph = std::exp(ik * graph_.edges[e].length);
    if (MetricGraph::is_left_endpoint(ep)) return ik * (amp_[2 * e] - amp_[2 * e + 1] * ph);
    return -ik * (amp_[2 * e] * ph - amp_[2 * e + 1]);
  }

 private:
  MetricGraph graph_;
  double k_ = 0.0;
  std::vector<Cplx> amp_;
  std::vector<Cplx> r_;  // cosine-form wave per edge
  double sup_ = 0.0;
  double realification_residual_ = 0.0;

  void refresh_derived() {
    const int n = graph_.num_edges();
    r_.resize(n);
    sup_ = 0.0;
    double imag_sup = 0.0;
    const double pi = 3.14159265358979323846;
    for (int e = 0; e < n; ++e) {
      const double l = graph_.edges[e].length;
      const Cplx phase = std::exp(Cplx(0, 1) * k_ * l);
      const Cplx p = amp_[2 * e], q = amp_[2 * e + 1] * phase;
      r_[e] = p + std::conj(q);
      imag_sup = std::max(imag_sup, std::abs(p - std::conj(q)));

      double edge_sup = std::max(std::abs(std::real(r_[e])),
                                 std::abs(std::real(r_[e] * phase)));
      if (k_ > 0.0) {
        const double phi = std::arg(r_[e]);
        const double lo = phi / pi, hi = (k_ * l + phi) / pi;
        if (std::floor(hi - 1e-12) >= std::ceil(lo + 1e-12)) edge_sup = std::abs(r_[e]);
      }
      sup_ = std::max(sup_, edge_sup);
    }
    realification_residual_ = sup_ > 0.0 ? imag_sup / sup_ : 1.0;
  }

  void check_edge_t(int edge, double t) const {
    if (edge < 0 || edge >= graph_.num_edges())
      throw UsageError("Eigenfunction: edge index out of range");
    const double l = graph_.edges[edge].length;
    if (t < -1e-12 * std::max(1.0, l) || t > l * (1.0 + 1e-12))
      throw UsageError("Eigenfunction: t out of range");
  }
};

inline Eigenfunction eigenfunction(const MetricGraph& g, const Eigenpair& pair, int which) {
  if (which < 0 || which >= static_cast<int>(pair.amplitudes_a.size()))
    throw UsageError("eigenfunction: basis index out of range");
  return Eigenfunction::build(g, pair.k, pair.amplitudes_a[which], Realify::Strict);
}

inline double evaluate_on_edge(const Eigenfunction& f, int edge, double t) {
  return f.evaluate(edge, t);
}

// Vertex values psi(V_m), cross-checked two ways: continuity across all the
// endpoints of a vertex, and agreement with a_i + b_i (b = S_v a).
inline std::map<int, double> vertex_values(const Eigenfunction& f, double tol = 1e-8) {
  const MetricGraph& g = f.graph();
  const double sup = f.sup_norm();
  std::vector<Cplx> b = vertex_scattering(g).apply(f.amplitudes());
  std::map<int, double> out;
  for (int v = 0; v < g.num_vertices(); ++v) {
    double first = 0.0;
    bool have = false;
    for (int ep : g.vertices[v].endpoints) {
      double val = f.value_at_endpoint(ep);
      double ab = std::real(f.amplitudes()[ep] + b[ep]);
      if (std::abs(val - ab) > tol * sup)
        throw InconsistentEigenfunctionError(
            "vertex_values: a_i + b_i disagrees with the edge form at endpoint " +
            std::to_string(ep + 1));
      if (!have) {
        first = val;
        have = true;
      } else if (std::abs(val - first) > tol * sup) {
        throw InconsistentEigenfunctionError("vertex_values: continuity violated at vertex " +
                                             std::to_string(v + 1));
      }
    }
    out[v] = first;
  }
  return out;
}

// max_{standard v} |sum of inward derivatives| (scaled by max(1,k) sup) plus
// the worst continuity / Dirichlet gap (scaled by sup), measured on the
// complex amplitude data. Diagnostic only.
inline double kirchhoff_residual(const Eigenfunction& f) {
  const MetricGraph& g = f.graph();
  const double sup = f.sup_norm();
  if (sup == 0.0) return 0.0;
  const double der_scale = std::max(1.0, f.k()) * sup;
  double worst_balance = 0.0, worst_gap = 0.0;
  for (int v = 0; v < g.num_vertices(); ++v) {
    const auto& eps = g.vertices[v].endpoints;
    if (g.vertices[v].condition == VertexCondition::Dirichlet) {
      worst_gap = std::max(worst_gap, std::abs(f.complex_value_at_endpoint(eps[0])));
      continue;
    }
    Cplx balance = 0.0;
    std::vector<Cplx> vals;
    for (int ep : eps) {
      balance += f.complex_derivative_into_edge(ep);
      vals.push_back(f.complex_value_at_endpoint(ep));
    }
    worst_balance = std::max(worst_balance, std::abs(balance));
    for (std::size_t i = 0; i < vals.size(); ++i)
      for (std::size_t j = i + 1; j < vals.size(); ++j)
        worst_gap = std::max(worst_gap, std::abs(vals[i] - vals[j]));
  }
  return worst_balance / der_scale + worst_gap / sup;
}

// Real orthonormal basis of the eigenspace spanned by the pair's amplitude
// vectors: real and imaginary parts are re-assembled as amplitude vectors,
// then Gram-Schmidt in L2(Gamma) keeps `multiplicity` of them. Works for the
// genuinely complex degenerate spaces where per-vector realification fails.
inline std::vector<Eigenfunction> real_eigenbasis(const MetricGraph& g, const Eigenpair& pair) {
  std::vector<std::vector<Cplx>> kept;
  std::vector<std::vector<Cplx>> candidates;
  for (const auto& a : pair.amplitudes_a) {
    std::vector<Cplx> ac = conjugate_amplitudes(g, pair.k, a);
    std::vector<Cplx> re(a.size()), im(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      re[i] = 0.5 * (a[i] + ac[i]);
      im[i] = Cplx(0, -0.5) * (a[i] - ac[i]);
    }
    candidates.push_back(std::move(re));
    candidates.push_back(std::move(im));
  }

  const int want = static_cast<int>(pair.amplitudes_a.size());
  for (auto& cand : candidates) {
    if (static_cast<int>(kept.size()) >= want) break;
    double norm0 = std::sqrt(std::abs(amplitude_l2_inner(g, pair.k, cand, cand)));
    if (norm0 <= 1e-12) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& kv : kept) {
        Cplx proj = amplitude_l2_inner(g, pair.k, cand, kv);
        for (std::size_t i = 0; i < cand.size(); ++i) cand[i] -= proj * kv[i];
      }
    }
    double norm = std::sqrt(std::abs(amplitude_l2_inner(g, pair.k, cand, cand)));
    if (norm <= 1e-6 * norm0) continue;
    for (auto& c : cand) c /= norm;
    kept.push_back(cand);
  }
  std::vector<Eigenfunction> out;
  for (const auto& v : kept) out.push_back(Eigenfunction::build(g, pair.k, v, Realify::Strict));
  return out;
}

inline std::string eigenfunction_to_csv(const Eigenfunction& f, int samples_per_edge) {
  if (samples_per_edge < 2) throw UsageError("eigenfunction export: need at least 2 samples");
  std::string out = "edge,t,psi\n";
  const MetricGraph& g = f.graph();
  for (int e = 0; e < g.num_edges(); ++e) {
    const double l = g.edges[e].length;
    for (int j = 0; j < samples_per_edge; ++j) {
      double t = l * j / (samples_per_edge - 1);
      out += std::to_string(e + 1) + "," + detail::fmt17(t) + "," +
             detail::fmt17(f.evaluate(e, t)) + "\n";
    }
  }
  return out;
}

}  // namespace qgraph
