#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/linalg.hpp"
#include "qgraph/scattering.hpp"

namespace qgraph {

struct SpectralOptions {
  double rank_tol = 1e-8;        // null-space cutoff, relative to sigma_max
  double newton_tol = 1e-12;     // absolute tolerance in k for simple zeros
  double residual_tol = 1e-8;    // acceptance residual for eigen-identities
  double cluster_width = 1e-10;  // box bisection floor
  double boundary_floor = 1e-6;  // relative |p| floor when placing cell boundaries
  int max_winding_depth = 48;
  int max_retries = 8;
};

struct Eigenpair {
  double k = 0.0;
  double lambda = 0.0;
  int multiplicity = 0;
  bool cluster = false;       // winding count could not be split consistently
  bool from_secular = true;   // false for the synthesized lambda = 0 states
  bool normalized = false;    // amplitudes are raw unit null vectors
  std::vector<std::vector<Cplx>> amplitudes_a;
  std::vector<std::vector<Cplx>> amplitudes_b;  // S_v a
};

struct SpectrumSlice {
  double k_max = 0.0;
  std::vector<Eigenpair> zeros;  // strictly increasing in k
  int lambda0_multiplicity = 0;
};

namespace detail {

struct BoundaryVanish {};

inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  // nodes/weights on [-1, 1] by Newton iteration on the Legendre recurrence
  std::vector<double> x(n), w(n);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < n; ++i) {
    double t = std::cos(pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    double p0 = 1.0, p1 = t;
    for (int j = 2; j <= n; ++j) {
      double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (t * p1 - p0) / (t * t - 1.0);
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
  return {x, w};
}

// Secular system with the vertex matrix cached across the many evaluations a
// spectrum scan performs.
class SecularSystem {
 public:
  explicit SecularSystem(const MetricGraph& g) : g_(g), sv_(vertex_scattering(g)) {}

  const MetricGraph& graph() const { return g_; }
  int dim() const { return g_.num_endpoints(); }

  Matrix matrix_at(Cplx k) const { return edge_matrix(g_, k) - sv_; }
  const Matrix& vertex_matrix() const { return sv_; }

  Cplx det_at(Cplx k) const { return determinant(matrix_at(k)); }

  // p'(k)/p(k) = tr(M^{-1} M'), with M' supported on the edge blocks.
  Cplx dlog_at(Cplx k) const {
    Matrix minv = inverse(matrix_at(k));
    Cplx acc = 0.0;
    for (int e = 0; e < g_.num_edges(); ++e) {
      Cplx zprime = Cplx(0, 1) * g_.edges[e].length *
                    std::exp(Cplx(0, 1) * k * g_.edges[e].length);
      acc += zprime * (minv(2 * e + 1, 2 * e) + minv(2 * e, 2 * e + 1));
    }
    return acc;
  }

 private:
  MetricGraph g_;
  Matrix sv_;
};

// Winding-number machinery on rectangles [k0,k1] x [-ht,ht]. All zeros of the
// secular function are real (S_v S_e(k) is a strict contraction off the real
// axis), so a rectangle count equals the number of real zeros inside, with
// multiplicity.
class WindingCounter {
 public:
  WindingCounter(const SecularSystem& sys, const SpectralOptions& opt)
      : sys_(sys), opt_(opt) {}

  int rect_count(double k0, double k1, double ht) const {
    const Cplx corners[5] = {Cplx(k0, -ht), Cplx(k1, -ht), Cplx(k1, ht), Cplx(k0, ht),
                             Cplx(k0, -ht)};
    constexpr int pieces = 8;
    std::vector<Cplx> zs, ps;
    zs.reserve(4 * pieces + 1);
    ps.reserve(4 * pieces + 1);
    double scale = 0.0;
    for (int s = 0; s < 4; ++s) {
      for (int i = 0; i < pieces; ++i) {
        Cplx z = corners[s] + (corners[s + 1] - corners[s]) * (static_cast<double>(i) / pieces);
        zs.push_back(z);
        ps.push_back(sys_.det_at(z));
        scale = std::max(scale, std::abs(ps.back()));
      }
    }
    zs.push_back(corners[4]);
    ps.push_back(ps.front());
    if (scale == 0.0) throw BoundaryVanish{};
    // samples this far below the boundary maximum sit in the determinant's
    // round-off noise; their phase is meaningless
    const double floor = 1e-12 * scale;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < zs.size(); ++i)
      total += segment(zs[i], zs[i + 1], ps[i], ps[i + 1], 0, floor);
    double wnum = total / (2.0 * 3.14159265358979323846);
    long n = std::lround(wnum);
    if (std::abs(wnum - static_cast<double>(n)) > 0.2 || n < 0) throw BoundaryVanish{};
    return static_cast<int>(n);
  }

  // k_c + (1/(2 pi i m)) * contour integral of (k - k_c) p'/p: the mean of
  // the zeros enclosed. Exact for the constant part, so only the O(width)
  // moment is exposed to quadrature error.
  double centroid(double k0, double k1, double ht, int mult) const {
    static const auto gl = gauss_legendre(32);
    const double kc = 0.5 * (k0 + k1);
    const Cplx corners[5] = {Cplx(k0, -ht), Cplx(k1, -ht), Cplx(k1, ht), Cplx(k0, ht),
                             Cplx(k0, -ht)};
    Cplx acc = 0.0;
    for (int s = 0; s < 4; ++s) {
      Cplx a = corners[s], b = corners[s + 1];
      Cplx mid = 0.5 * (a + b), half = 0.5 * (b - a);
      for (int i = 0; i < 32; ++i) {
        Cplx z = mid + gl.first[i] * half;
        acc += gl.second[i] * half * (z - kc) * sys_.dlog_at(z);
      }
    }
    Cplx mean_offset = acc / Cplx(0, 2.0 * 3.14159265358979323846 * mult);
    return kc + std::real(mean_offset);
  }

 private:
  const SecularSystem& sys_;
  const SpectralOptions& opt_;

  double segment(Cplx a, Cplx b, Cplx pa, Cplx pb, int depth, double floor) const {
    if (std::abs(pa) < floor || std::abs(pb) < floor) throw BoundaryVanish{};
    double dphi = std::arg(pb / pa);
    if (std::abs(dphi) <= 1.5707963267948966) return dphi;
    if (depth >= opt_.max_winding_depth) throw BoundaryVanish{};
    Cplx mid = 0.5 * (a + b);
    Cplx pm = sys_.det_at(mid);
    return segment(a, mid, pa, pm, depth + 1, floor) +
           segment(mid, b, pm, pb, depth + 1, floor);
  }
};

inline int rect_count_height_retry(const WindingCounter& wc, double k0, double k1,
                                   double ht) {
  // varying the height never changes the enclosed (real) zeros
  static const double factors[] = {1.0, 0.73, 1.37, 0.51, 1.93, 0.29, 2.61};
  for (double f : factors) {
    try {
      return wc.rect_count(k0, k1, ht * f);
    } catch (const BoundaryVanish&) {
    }
  }
  throw SolverError("winding count failed: secular function vanishes near the box boundary");
}

}  // namespace detail

// Zeros of p inside [k_lo,k_hi] x [-height,height], counted with multiplicity
// by the argument principle. Retries with a dilated box when p nearly
// vanishes on the boundary (dilation can change which zeros are inside).
inline int count_zeros_in_box(const MetricGraph& g, double k_lo, double k_hi, double height,
                              const SpectralOptions& opt = {}) {
  if (!(0 < k_lo && k_lo < k_hi)) throw UsageError("count_zeros_in_box: need 0 < k_lo < k_hi");
  if (!(height > 0)) throw UsageError("count_zeros_in_box: height must be positive");
  require_valid(g);
  detail::SecularSystem sys(g);
  detail::WindingCounter wc(sys, opt);

  double lo = k_lo, hi = k_hi, ht = height;
  for (int retry = 0; retry <= opt.max_retries; ++retry) {
    // all zeros are real, so boundary vanishing is decided on the real axis
    double scale = 0.0;
    for (int i = 0; i <= 16; ++i)
      scale = std::max(scale, std::abs(sys.det_at(lo + (hi - lo) * i / 16.0)));
    bool vanishing = scale == 0.0 || std::abs(sys.det_at(lo)) < 1e-7 * scale ||
                     std::abs(sys.det_at(hi)) < 1e-7 * scale;
    if (!vanishing) {
      try {
        return detail::rect_count_height_retry(wc, lo, hi, ht);
      } catch (const SolverError&) {
      }
    }
    double c = 0.5 * (lo + hi), half = 0.5 * (hi - lo) * 1.31;
    lo = std::max(c - half, 0.25 * k_lo);
    hi = c + half;
    ht *= 1.31;
  }
  throw SolverError("count_zeros_in_box: localization failed after dilation retries");
}

namespace detail {

struct LocatedZero {
  double k;
  int multiplicity;
  bool cluster;
};

class SpectrumScanner {
 public:
  SpectrumScanner(const SecularSystem& sys, const SpectralOptions& opt)
      : sys_(sys), wc_(sys, opt), opt_(opt) {}

  std::vector<LocatedZero> scan(double k_max) {
    const double total_len = sys_.graph().total_length();
    const double delta = 3.14159265358979323846 / (4.0 * total_len);
    std::vector<LocatedZero> out;
    // No positive zero lies below pi/(2L) (the Dirichlet interval minimizes
    // the first eigenvalue at given total length), so starting the scan at
    // delta/2 = pi/(8L) loses nothing.
    if (k_max <= 0.75 * delta) return out;

    std::vector<double> bounds;
    bounds.push_back(0.5 * delta);
    while (bounds.back() + delta < k_max) bounds.push_back(bounds.back() + delta);
    bounds.push_back(k_max);
    if (bounds.size() >= 3 && bounds.back() - bounds[bounds.size() - 2] < 0.3 * delta)
      bounds.erase(bounds.end() - 2);

    // global scale for boundary-placement decisions
    double scale = 0.0;
    for (double b : bounds) scale = std::max(scale, std::abs(sys_.det_at(b)));
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i)
      scale = std::max(scale, std::abs(sys_.det_at(0.5 * (bounds[i] + bounds[i + 1]))));
    if (scale == 0.0) throw SolverError("find_spectrum: secular function is identically zero");
    scale_ = scale;

    nudge_boundaries(bounds, delta, k_max);

    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
      double lo = bounds[i], hi = bounds[i + 1];
      int count = rect_count_height_retry(wc_, lo, hi, hi - lo);
      if (count > 0) refine(lo, hi, count, 0, out);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.k < b.k; });
    return out;
  }

 private:
  const SecularSystem& sys_;
  WindingCounter wc_;
  SpectralOptions opt_;
  double scale_ = 1.0;

  void nudge_boundaries(std::vector<double>& bounds, double delta, double k_max) const {
    static const double offsets[] = {0.0, 0.137, -0.137, 0.257, -0.257, 0.379, -0.379, 0.443};
    for (std::size_t i = 0; i < bounds.size(); ++i) {
      const bool last = i + 1 == bounds.size();
      bool placed = false;
      for (double off : offsets) {
        if (last && off < 0.0) continue;  // keep k_max inside the scanned range
        double cand = bounds[i] + off * delta;
        if (cand <= 0.05 * delta) continue;
        if (std::abs(sys_.det_at(cand)) >= opt_.boundary_floor * scale_) {
          bounds[i] = cand;
          placed = true;
          break;
        }
      }
      if (!placed)
        throw SolverError("find_spectrum: could not place a boundary clear of zeros near k=" +
                          std::to_string(bounds[i]));
    }
    (void)k_max;
  }

  // midpoint with the healthiest |p| among a few candidates
  double pick_split(double lo, double hi) const {
    static const double offsets[] = {0.0, 0.07, -0.07, 0.131, -0.131, 0.193, -0.193};
    const double w = hi - lo, mid = 0.5 * (lo + hi);
    double best = mid, best_val = -1.0;
    for (double off : offsets) {
      double cand = mid + off * w;
      double val = std::abs(sys_.det_at(cand));
      if (val > best_val) {
        best_val = val;
        best = cand;
      }
    }
    return best;
  }

  void refine(double lo, double hi, int count, int depth, std::vector<LocatedZero>& out) {
    if (count == 1) {
      out.push_back({newton_refine(lo, hi), 1, false});
      return;
    }
    // Stop splitting while the boundary values still dominate the round-off
    // floor of the determinant: |p| ~ width^count near the zero group.
    const double w_stop =
        std::max(opt_.cluster_width, std::pow(1e-10, 1.0 / count));
    const double w = hi - lo;
    if (w <= w_stop || depth > 64) {
      emit_group(lo, hi, count, false, out);
      return;
    }
    double mid = pick_split(lo, hi);
    int c1 = 0, c2 = 0;
    try {
      c1 = rect_count_height_retry(wc_, lo, mid, std::max(mid - lo, 1e-12));
      c2 = rect_count_height_retry(wc_, mid, hi, std::max(hi - mid, 1e-12));
    } catch (const SolverError&) {
      emit_group(lo, hi, count, true, out);
      return;
    }
    if (c1 + c2 != count) {
      emit_group(lo, hi, count, true, out);
      return;
    }
    if (c1 > 0) refine(lo, mid, c1, depth + 1, out);
    if (c2 > 0) refine(mid, hi, c2, depth + 1, out);
  }

  void emit_group(double lo, double hi, int count, bool forced_cluster,
                  std::vector<LocatedZero>& out) {
    double k0 = wc_.centroid(lo, hi, 0.5 * (hi - lo), count);
    out.push_back({k0, count, forced_cluster});
  }

  double newton_refine(double lo, double hi) {
    double blo = lo, bhi = hi;
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      Cplx dlog = sys_.dlog_at(Cplx(x, 0.0));
      double dx = 0.0;
      bool ok = std::isfinite(std::real(dlog)) && std::isfinite(std::imag(dlog)) &&
                std::abs(dlog) > 0.0;
      if (ok) {
        dx = std::real(Cplx(1.0) / dlog);
        double xn = x - dx;
        if (std::abs(dx) <= 0.5 * opt_.newton_tol) {
          return std::clamp(xn, lo, hi);
        }
        if (xn > blo && xn < bhi) {
          x = xn;
          continue;
        }
      }
      // fall back to one winding bisection step, then resume Newton
      if (bhi - blo <= opt_.newton_tol) return 0.5 * (blo + bhi);
      double mid = pick_split(blo, bhi);
      int c1 = rect_count_height_retry(wc_, blo, mid, std::max(mid - blo, 1e-12));
      if (c1 >= 1) bhi = mid;
      else blo = mid;
      x = 0.5 * (blo + bhi);
    }
    throw SolverError("find_spectrum: Newton refinement failed to converge");
  }
};

}  // namespace detail

// Right-null-space basis of S_e(k) - S_v at the given rank tolerance. The
// basis vectors have unit norm and a deterministic phase (largest entry made
// real positive); empty result means k is not an eigenvalue at this
// tolerance.
inline std::vector<std::vector<Cplx>> null_space_at(const MetricGraph& g, double k,
                                                    double rank_tol = 1e-8) {
  if (!(k > 0)) throw UsageError("null_space_at: k must be positive");
  require_valid(g);
  Matrix m = edge_matrix(g, k) - vertex_scattering(g);
  SvdResult svd = svd_jacobi(m);
  const int dim = m.rows();
  // S_e and S_v are unitary, so sigma_max is O(1) except when the whole
  // matrix vanishes (the circle at its doubly degenerate points); flooring
  // the scale keeps the rank decision meaningful there.
  const double scale = std::max(svd.singular_values[0], 1.0);
  std::vector<std::vector<Cplx>> basis;
  for (int j = dim - 1; j >= 0; --j) {
    if (svd.singular_values[j] >= rank_tol * scale) break;
    std::vector<Cplx> v(dim);
    for (int i = 0; i < dim; ++i) v[i] = svd.v(i, j);
    int imax = 0;
    double vmax = -1.0;
    for (int i = 0; i < dim; ++i) {
      if (std::abs(v[i]) > vmax + 1e-15) {
        vmax = std::abs(v[i]);
        imax = i;
      }
    }
    if (vmax > 0) {
      Cplx rot = std::conj(v[imax]) / vmax;
      for (auto& c : v) c *= rot;
    }
    basis.push_back(std::move(v));
  }
  return basis;  // ascending singular value order (most null first)
}

// Indicator constants of the Dirichlet-free components: the lambda = 0
// eigenspace, synthesized combinatorially rather than from the secular
// function.
inline std::optional<Eigenpair> lambda0_eigenpair(const MetricGraph& g) {
  require_valid(g);
  ComponentInfo info = component_info(g);
  Eigenpair pair;
  pair.k = 0.0;
  pair.lambda = 0.0;
  pair.from_secular = false;
  std::vector<int> ep2v = g.endpoint_to_vertex();
  for (int c = 0; c < info.count; ++c) {
    if (info.has_dirichlet[c]) continue;
    std::vector<Cplx> amp(g.num_endpoints(), Cplx(0.0));
    double norm2 = 0.0;
    for (int e = 0; e < g.num_edges(); ++e) {
      if (info.vertex_component[ep2v[2 * e]] != c) continue;
      amp[2 * e] = amp[2 * e + 1] = 0.5;
      norm2 += 0.5;  // two entries of 1/4 each
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& a : amp) a *= inv;
    std::vector<Cplx> b = vertex_scattering(g).apply(amp);
    pair.amplitudes_a.push_back(std::move(amp));
    pair.amplitudes_b.push_back(std::move(b));
    ++pair.multiplicity;
  }
  if (pair.multiplicity == 0) return std::nullopt;
  return pair;
}

// Scans (0, k_max] for zeros of the secular function with multiplicities and
// null-space data; lambda = 0 is reported combinatorially on the side.
inline SpectrumSlice find_spectrum(const MetricGraph& g, double k_max,
                                   const SpectralOptions& opt = {}) {
  require_valid(g);
  if (!(k_max > 0)) throw UsageError("find_spectrum: k_max must be positive");
  detail::SecularSystem sys(g);
  detail::SpectrumScanner scanner(sys, opt);
  std::vector<detail::LocatedZero> located = scanner.scan(k_max);

  SpectrumSlice slice;
  slice.k_max = k_max;
  slice.lambda0_multiplicity = lambda0_multiplicity(g);
  const Matrix sv = vertex_scattering(g);
  for (const auto& z : located) {
    if (z.k > k_max + 1e-9 * std::max(1.0, k_max)) continue;
    Eigenpair pair;
    pair.k = z.k;
    pair.lambda = z.k * z.k;
    pair.multiplicity = z.multiplicity;
    pair.cluster = z.cluster;
    pair.from_secular = true;
    pair.amplitudes_a = null_space_at(g, z.k, opt.rank_tol);
    for (const auto& a : pair.amplitudes_a) pair.amplitudes_b.push_back(sv.apply(a));
    slice.zeros.push_back(std::move(pair));
  }
  return slice;
}

// Newton polish of a simple zero from a nearby seed; used to track an
// eigenvalue branch under small perturbations of the graph.
inline double refine_zero_near(const MetricGraph& g, double k0,
                               const SpectralOptions& opt = {}) {
  require_valid(g);
  detail::SecularSystem sys(g);
  double x = k0;
  for (int it = 0; it < 100; ++it) {
    Cplx dlog = sys.dlog_at(Cplx(x, 0.0));
    if (!(std::abs(dlog) > 0.0) || !std::isfinite(std::abs(dlog)))
      throw SolverError("refine_zero_near: derivative information unavailable");
    double dx = std::real(Cplx(1.0) / dlog);
    x -= dx;
    if (std::abs(dx) <= 0.5 * opt.newton_tol) {
      if (std::abs(x - k0) > 0.1 * std::max(1.0, k0))
        throw SolverError("refine_zero_near: left the seed's neighborhood");
      return x;
    }
  }
  throw SolverError("refine_zero_near: did not converge");
}

inline int zero_count_with_multiplicity(const SpectrumSlice& s) {
  int acc = 0;
  for (const auto& z : s.zeros) acc += z.multiplicity;
  return acc;
}

// Spectrum including lambda = 0, expanded by multiplicity, for oracle
// comparisons.
inline std::vector<double> lambda_list(const SpectrumSlice& s, int count) {
  std::vector<double> out;
  for (int i = 0; i < s.lambda0_multiplicity && static_cast<int>(out.size()) < count; ++i)
    out.push_back(0.0);
  for (const auto& z : s.zeros)
    for (int i = 0; i < z.multiplicity && static_cast<int>(out.size()) < count; ++i)
      out.push_back(z.lambda);
  return out;
}

namespace detail {

inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline std::string spectrum_to_csv(const SpectrumSlice& s) {
  std::string out = "# k_max," + detail::fmt17(s.k_max) + "\n";
  out += "# lambda0_multiplicity," + std::to_string(s.lambda0_multiplicity) + "\n";
  out += "index,k,lambda,multiplicity,cluster_flag\n";
  int idx = 1;
  for (const auto& z : s.zeros) {
    out += std::to_string(idx++) + "," + detail::fmt17(z.k) + "," + detail::fmt17(z.lambda) +
           "," + std::to_string(z.multiplicity) + "," + (z.cluster ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace qgraph
