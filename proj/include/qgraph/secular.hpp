#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "qgraph/linalg.hpp"
#include "qgraph/scattering.hpp"

namespace qgraph {

// Secular function p(k) = det(S_e(k) - S_v). Positive zeros give the
// spectrum lambda = k^2, with zero order equal to eigenvalue multiplicity.
inline Cplx secular_eval(const MetricGraph& g, Cplx k) {
  return determinant(edge_matrix(g, k) - vertex_scattering(g));
}

// Multivariate secular polynomial P(z) = det(E(z) - S_v) with exact rational
// coefficients. Each variable appears in exactly two matrix entries, so the
// degree in every z_n is at most 2; exponent tuples are packed two bits per
// variable with z_1 in the most significant position, which makes the natural
// integer order of keys the lexicographic order of exponent tuples.
struct SecularPolynomial {
  int num_vars = 0;
  std::map<std::uint32_t, Rational> terms;

  static constexpr int kMaxVars = 15;

  int exponent(std::uint32_t key, int var) const {
    return static_cast<int>((key >> (2 * (num_vars - 1 - var))) & 3u);
  }
  static std::uint32_t bump(std::uint32_t key, int var, int num_vars) {
    return key + (1u << (2 * (num_vars - 1 - var)));
  }

  std::vector<int> exponents(std::uint32_t key) const {
    std::vector<int> e(num_vars);
    for (int v = 0; v < num_vars; ++v) e[v] = exponent(key, v);
    return e;
  }

  Rational coefficient(const std::vector<int>& exps) const {
    std::uint32_t key = 0;
    for (int v = 0; v < num_vars; ++v)
      key |= static_cast<std::uint32_t>(exps[v]) << (2 * (num_vars - 1 - v));
    auto it = terms.find(key);
    return it == terms.end() ? Rational(0) : it->second;
  }
};

namespace detail {

// matrix entry c0 + c1 * z_var (var < 0 means pure constant)
struct SymEntry {
  int col = 0;
  Rational c0;
  Rational c1;
  int var = -1;
};

using Poly = std::map<std::uint32_t, Rational>;

inline void poly_add_scaled(Poly& into, const Poly& from, const Rational& scale,
                            int shift_var, int num_vars) {
  if (scale.is_zero()) return;
  for (const auto& [key, coef] : from) {
    std::uint32_t k = key;
    if (shift_var >= 0) k = SecularPolynomial::bump(k, shift_var, num_vars);
    Rational& slot = into[k];
    slot += coef * scale;
    if (slot.is_zero()) into.erase(k);
  }
}

struct SymbolicDet {
  int dim;
  int num_vars;
  std::vector<std::vector<SymEntry>> rows;
  std::unordered_map<std::uint32_t, Poly> memo;

  Poly expand(std::uint32_t colmask) {
    if (colmask == 0) return Poly{{0u, Rational(1)}};
    auto it = memo.find(colmask);
    if (it != memo.end()) return it->second;

    const int row = dim - std::popcount(colmask);
    Poly acc;
    for (const SymEntry& ent : rows[row]) {
      const std::uint32_t bit = 1u << ent.col;
      if (!(colmask & bit)) continue;
      const int colpos = std::popcount(colmask & (bit - 1));
      Poly sub = expand(colmask & ~bit);
      const Rational sgn = (colpos % 2 == 0) ? Rational(1) : Rational(-1);
      if (!ent.c0.is_zero()) poly_add_scaled(acc, sub, sgn * ent.c0, -1, num_vars);
      if (!ent.c1.is_zero()) poly_add_scaled(acc, sub, sgn * ent.c1, ent.var, num_vars);
    }
    memo.emplace(colmask, acc);
    return acc;
  }
};

}  // namespace detail

inline SecularPolynomial secular_polynomial(const MetricGraph& g, int max_vars = 12) {
  require_valid(g);
  const int n = g.num_edges();
  if (max_vars > SecularPolynomial::kMaxVars) max_vars = SecularPolynomial::kMaxVars;
  if (n > max_vars)
    throw SizeError("secular_polynomial: " + std::to_string(n) +
                    " edges exceeds the configured limit of " + std::to_string(max_vars));

  const int dim = 2 * n;
  std::vector<int> ep2v = g.endpoint_to_vertex();

  detail::SymbolicDet det;
  det.dim = dim;
  det.num_vars = n;
  det.rows.resize(dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      Rational c0 = -vertex_scattering_entry(g, ep2v, i, j);
      Rational c1 = (j == MetricGraph::partner(i)) ? Rational(1) : Rational(0);
      if (c0.is_zero() && c1.is_zero()) continue;
      det.rows[i].push_back({j, c0, c1, MetricGraph::edge_of_endpoint(i)});
    }
  }

  SecularPolynomial p;
  p.num_vars = n;
  p.terms = det.expand(dim >= 32 ? 0xffffffffu : (1u << dim) - 1u);
  return p;
}

inline Cplx poly_eval(const SecularPolynomial& p, const std::vector<Cplx>& z) {
  if (static_cast<int>(z.size()) != p.num_vars)
    throw UsageError("poly_eval: wrong number of variables");
  std::vector<std::array<Cplx, 3>> pw(p.num_vars);
  for (int v = 0; v < p.num_vars; ++v) pw[v] = {Cplx(1.0), z[v], z[v] * z[v]};
  Cplx acc = 0.0;
  for (const auto& [key, coef] : p.terms) {
    Cplx term = coef.to_double();
    for (int v = 0; v < p.num_vars; ++v) {
      int e = p.exponent(key, v);
      if (e) term *= pw[v][e];
    }
    acc += term;
  }
  return acc;
}

// Exact path for rational points of evaluation.
inline Rational poly_eval(const SecularPolynomial& p, const std::vector<Rational>& z) {
  if (static_cast<int>(z.size()) != p.num_vars)
    throw UsageError("poly_eval: wrong number of variables");
  std::vector<std::array<Rational, 3>> pw(p.num_vars);
  for (int v = 0; v < p.num_vars; ++v) pw[v] = {Rational(1), z[v], z[v] * z[v]};
  Rational acc(0);
  for (const auto& [key, coef] : p.terms) {
    Rational term = coef;
    for (int v = 0; v < p.num_vars; ++v) {
      int e = p.exponent(key, v);
      if (e) term *= pw[v][e];
    }
    acc += term;
  }
  return acc;
}

inline std::vector<Cplx> poly_gradient(const SecularPolynomial& p, const std::vector<Cplx>& z) {
  if (static_cast<int>(z.size()) != p.num_vars)
    throw UsageError("poly_gradient: wrong number of variables");
  std::vector<Cplx> grad(p.num_vars, Cplx(0.0));
  for (const auto& [key, coef] : p.terms) {
    for (int v = 0; v < p.num_vars; ++v) {
      int e = p.exponent(key, v);
      if (e == 0) continue;
      Cplx term = coef.to_double() * static_cast<double>(e);
      for (int w = 0; w < p.num_vars; ++w) {
        int ew = p.exponent(key, w) - (w == v ? 1 : 0);
        for (int rep = 0; rep < ew; ++rep) term *= z[w];
      }
      grad[v] += term;
    }
  }
  return grad;
}

inline std::vector<Rational> poly_gradient(const SecularPolynomial& p,
                                           const std::vector<Rational>& z) {
  if (static_cast<int>(z.size()) != p.num_vars)
    throw UsageError("poly_gradient: wrong number of variables");
  std::vector<Rational> grad(p.num_vars, Rational(0));
  for (const auto& [key, coef] : p.terms) {
    for (int v = 0; v < p.num_vars; ++v) {
      int e = p.exponent(key, v);
      if (e == 0) continue;
      Rational term = coef * Rational(e);
      for (int w = 0; w < p.num_vars; ++w) {
        int ew = p.exponent(key, w) - (w == v ? 1 : 0);
        for (int rep = 0; rep < ew; ++rep) term *= z[w];
      }
      grad[v] += term;
    }
  }
  return grad;
}

struct TorusPoint {
  std::vector<double> phi;
  Cplx value;
  std::vector<Cplx> gradient;
};

// Samples |P(e^{i phi})| on a uniform torus grid and returns grid-local
// minima below a resolution-adaptive threshold. Intended for plots; N <= 3.
inline std::vector<TorusPoint> sample_zero_slice(const SecularPolynomial& p, int resolution) {
  if (p.num_vars > 3)
    throw SizeError("sample_zero_slice: torus sampling is limited to 3 variables");
  if (resolution <= 0) throw UsageError("sample_zero_slice: resolution must be positive");
  double total = std::pow(static_cast<double>(resolution), p.num_vars);
  if (total > 4.0e6) throw SizeError("sample_zero_slice: grid too large");

  const double tau = 2.0 * 3.14159265358979323846;
  const int n = p.num_vars;
  const long grid = static_cast<long>(total + 0.5);

  auto phases = [&](long idx) {
    std::vector<double> phi(n);
    for (int v = n - 1; v >= 0; --v) {
      phi[v] = tau * static_cast<double>(idx % resolution) / resolution;
      idx /= resolution;
    }
    return phi;
  };
  auto point = [&](const std::vector<double>& phi) {
    std::vector<Cplx> z(n);
    for (int v = 0; v < n; ++v) z[v] = std::polar(1.0, phi[v]);
    return z;
  };

  std::vector<double> mag(grid);
  double max_grad = 0.0;
  for (long idx = 0; idx < grid; ++idx) {
    std::vector<Cplx> z = point(phases(idx));
    mag[idx] = std::abs(poly_eval(p, z));
    std::vector<Cplx> gr = poly_gradient(p, z);
    double gn = 0.0;
    for (const auto& c : gr) gn += std::norm(c);
    max_grad = std::max(max_grad, std::sqrt(gn));
  }

  const double threshold = 10.0 * (tau / resolution) * max_grad;
  std::vector<TorusPoint> out;
  for (long idx = 0; idx < grid; ++idx) {
    if (!(mag[idx] < threshold)) continue;
    // local minimum over the 2n wrap-around neighbors
    bool is_min = true;
    long rest = idx;
    std::vector<long> coords(n);
    for (int v = n - 1; v >= 0; --v) {
      coords[v] = rest % resolution;
      rest /= resolution;
    }
    for (int v = 0; v < n && is_min; ++v) {
      long stride = 1;
      for (int w = v + 1; w < n; ++w) stride *= resolution;
      for (int dir : {-1, 1}) {
        long c = (coords[v] + dir + resolution) % resolution;
        long nb = idx + (c - coords[v]) * stride;
        if (mag[nb] < mag[idx]) { is_min = false; break; }
      }
    }
    if (!is_min) continue;
    TorusPoint tp;
    tp.phi = phases(idx);
    std::vector<Cplx> z = point(tp.phi);
    tp.value = poly_eval(p, z);
    tp.gradient = poly_gradient(p, z);
    out.push_back(std::move(tp));
  }
  return out;
}

// Canonical polynomial export: a JSON list of {exponents, coefficient}
// records sorted lexicographically by exponents. Byte-exact by construction.
inline std::string polynomial_to_json(const SecularPolynomial& p) {
  if (p.terms.empty()) return "[]\n";
  std::string out = "[\n";
  bool first = true;
  for (const auto& [key, coef] : p.terms) {
    if (!first) out += ",\n";
    first = false;
    out += "{\"exponents\":[";
    for (int v = 0; v < p.num_vars; ++v) {
      out += std::to_string(p.exponent(key, v));
      if (v + 1 < p.num_vars) out += ",";
    }
    if (!coef.num().fits_int64() || !coef.den().fits_int64())
      throw SizeError("polynomial_to_json: coefficient exceeds 64-bit export range");
    out += "],\"coefficient\":{\"num\":" + coef.num().to_string() +
           ",\"den\":" + coef.den().to_string() + "}}";
  }
  out += "\n]\n";
  return out;
}

}  // namespace qgraph
